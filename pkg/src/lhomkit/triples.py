"""The triple digraph H++, permutable triples and digraph asteroidal triples (DATs)."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .digraph import Digraph, Walk, avoids, congruent, pattern_string
from .errors import ContractError
from .pairs import PairGraph, Sign, lift_to_h_walks, pair_walk

Triple = tuple[int, int, int]


class TripleGraph:
    """H++ on V(H)^3. Arcs are never materialised; reachability is computed by
    the kernels in :mod:`lhomkit.kernels` from the adjacency matrix."""

    def __init__(self, H: Digraph, PG: PairGraph | None = None):
        self.base = H
        self.n = H.n
        self.adj = np.ascontiguousarray(H.adj)
        self._pair_graph = PG

    @property
    def pair_graph(self) -> PairGraph:
        if self._pair_graph is None:
            self._pair_graph = PairGraph(self.base)
        return self._pair_graph

    def index(self, t: Triple) -> int:
        return kernels.triple_index(self.n, *t)

    def triple(self, s: int) -> Triple:
        return tuple(int(x) for x in kernels.triple_unindex(self.n, s))

    def has_arc(self, a: Triple, b: Triple) -> list[Sign]:
        adj = self.adj
        (u, v, w), (u2, v2, w2) = a, b
        signs = []
        if adj[u, u2] and adj[v, v2] and adj[w, w2] and not adj[u, v2] and not adj[u, w2]:
            signs.append(Sign.PLUS)
        if adj[u2, u] and adj[v2, v] and adj[w2, w] and not adj[v2, u] and not adj[w2, u]:
            signs.append(Sign.MINUS)
        return signs

    def arcs_from(self, a: Triple) -> list[tuple[Triple, Sign]]:
        fwd, bwd = kernels._successor_masks(self.adj, self.index(a))
        out = [(self.triple(int(s)), Sign.PLUS) for s in np.flatnonzero(fwd)]
        out += [(self.triple(int(s)), Sign.MINUS) for s in np.flatnonzero(bwd)]
        return out

    # -- target sets ---------------------------------------------------------

    def _target_mask(self, pair_mask: np.ndarray) -> np.ndarray:
        n = self.n
        target = np.zeros((n, n, n), dtype=bool)
        s, b = np.nonzero(pair_mask)
        target[s, b, b] = True
        return target.reshape(-1)

    @cached_property
    def any_target(self) -> np.ndarray:
        """States (s, b, b) with s != b."""
        return self._target_mask(~np.eye(self.n, dtype=bool))

    @cached_property
    def invertible_target(self) -> np.ndarray:
        """States (s, b, b) with (s, b) invertible."""
        return self._target_mask(self.pair_graph.invertible_mask)

    @cached_property
    def reaches_any(self) -> np.ndarray:
        """(n, n, n) mask of states from which some (s, b, b), s != b, is reachable."""
        return kernels.triple_closure(self.adj, self.any_target).reshape(self.n, self.n, self.n)

    @cached_property
    def reaches_invertible(self) -> np.ndarray:
        """(n, n, n) mask of states from which some invertible (s, b, b) is reachable."""
        return kernels.triple_closure(self.adj, self.invertible_target).reshape(self.n, self.n, self.n)

    def bfs(self, start: Triple):
        return kernels.triple_bfs(self.adj, self.index(start))

    def query_reaches(self, start: Triple, target: np.ndarray) -> bool:
        """Lazy single-source check: forward BFS from ``start``."""
        parent, _ = self.bfs(start)
        return bool(((parent != -1) & target).any())

    def walk_from_bfs(self, parent, sign, goal: int) -> tuple[list[Triple], list[Sign]]:
        chain = [goal]
        while parent[chain[-1]] != chain[-1]:
            chain.append(int(parent[chain[-1]]))
        chain.reverse()
        signs = [Sign.PLUS if sign[s] > 0 else Sign.MINUS for s in chain[1:]]
        return [self.triple(s) for s in chain], signs


def build_triple_graph(H: Digraph, PG: PairGraph | None = None) -> TripleGraph:
    return TripleGraph(H, PG)


def _distinct(u, v, w):
    if len({u, v, w}) != 3:
        raise ContractError("a triple of pairwise distinct vertices is required")


def _leads(u, v, w):
    return ((u, v, w), (v, u, w), (w, u, v))


def is_permutable_triple(TG: TripleGraph, u: int, v: int, w: int) -> bool:
    _distinct(u, v, w)
    return all(TG.query_reaches(t, TG.any_target) for t in _leads(u, v, w))


def is_dat(PG: PairGraph, TG: TripleGraph, u: int, v: int, w: int) -> bool:
    _distinct(u, v, w)
    if TG._pair_graph is None:
        TG._pair_graph = PG
    return all(TG.query_reaches(t, TG.invertible_target) for t in _leads(u, v, w))


def permutable_mask(TG: TripleGraph) -> np.ndarray:
    """(n, n, n) mask of ordered permutable triples, from one backward closure."""
    r = TG.reaches_any
    return _all_leads(r, TG.n)


def dat_mask(TG: TripleGraph) -> np.ndarray:
    return _all_leads(TG.reaches_invertible, TG.n)


def _all_leads(r, n):
    # H++ is symmetric in its last two coordinates, so lead x with others (y, z)
    # is r[x, y, z]; all three leads of (u, v, w) are r[u,v,w], r[v,u,w], r[w,u,v].
    m = r & r.transpose(1, 0, 2) & r.transpose(1, 2, 0)
    idx = np.arange(n)
    m[idx, idx, :] = False
    m[idx, :, idx] = False
    m[:, idx, idx] = False
    return m


def first_triple(mask: np.ndarray) -> Triple | None:
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return tuple(int(x) for x in hits[0])


def find_permutable_triple(TG: TripleGraph) -> Triple | None:
    return first_triple(permutable_mask(TG))


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class LeadCertificate:
    lead: int
    others: tuple[int, int]
    s: int
    b: int
    triple_walk: tuple[Triple, ...]
    signs: tuple[Sign, ...]
    walks: tuple[Walk, Walk, Walk]  # from lead to s, from others[0] to b, from others[1] to b
    inv_forward: tuple[Walk, Walk]  # P from s to b avoiding Q from b to s
    inv_backward: tuple[Walk, Walk]  # P' from b to s avoiding Q' from s to b


@dataclass(frozen=True)
class DatWitness:
    triple: Triple
    leads: tuple[LeadCertificate, LeadCertificate, LeadCertificate]

    def serialize(self) -> str:
        u, v, w = self.triple
        lines = [f"dat {u} {v} {w}"]
        for cert in self.leads:
            lines.append(f"lead {cert.lead} target {cert.s} {cert.b}")
            names = ("lead", "other", "other")
            for name, walk in zip(names, cert.walks):
                lines.append(_walk_line(name, walk))
            lines.append(_walk_line("inv-p", cert.inv_forward[0]))
            lines.append(_walk_line("inv-q", cert.inv_forward[1]))
            lines.append(_walk_line("inv-p'", cert.inv_backward[0]))
            lines.append(_walk_line("inv-q'", cert.inv_backward[1]))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        def walk(w: Walk):
            return {"vertices": list(w.vertices), "pattern": pattern_string(w.pattern)}

        return {
            "triple": list(self.triple),
            "leads": [
                {
                    "lead": c.lead,
                    "others": list(c.others),
                    "target": [c.s, c.b],
                    "walks": [walk(x) for x in c.walks],
                    "invertible_forward": [walk(x) for x in c.inv_forward],
                    "invertible_backward": [walk(x) for x in c.inv_backward],
                }
                for c in self.leads
            ],
        }


def _walk_line(name: str, walk: Walk) -> str:
    pattern = pattern_string(walk.pattern) or "."
    return f"walk {name} {pattern} " + " ".join(map(str, walk.vertices))


def _lead_certificate(PG: PairGraph, TG: TripleGraph, x: int, y: int, z: int) -> LeadCertificate:
    parent, sign = TG.bfs((x, y, z))
    reached = (parent != -1) & TG.invertible_target
    hits = np.flatnonzero(reached)
    # smallest (s, b): state index (s*n + b)*n + b is monotone in (s, b)
    goal = int(hits[0])
    s, b, _ = TG.triple(goal)
    states, signs = TG.walk_from_bfs(parent, sign, goal)
    pattern = tuple(sg.direction() for sg in signs)
    walks = tuple(Walk(tuple(t[i] for t in states), pattern) for i in range(3))
    fwd = pair_walk(PG, (s, b), (b, s))
    bwd = pair_walk(PG, (b, s), (s, b))
    return LeadCertificate(
        lead=x,
        others=(y, z),
        s=s,
        b=b,
        triple_walk=tuple(states),
        signs=tuple(signs),
        walks=walks,
        inv_forward=lift_to_h_walks(PG, *fwd),
        inv_backward=lift_to_h_walks(PG, *bwd),
    )


def dat_witness(PG: PairGraph, TG: TripleGraph, triple: Triple) -> DatWitness:
    u, v, w = triple
    return DatWitness(triple, tuple(_lead_certificate(PG, TG, *t) for t in _leads(u, v, w)))


def find_dat(H: Digraph, PG: PairGraph | None = None, TG: TripleGraph | None = None) -> DatWitness | None:
    """Witness for the lexicographically first DAT of H, or None if H is DAT-free."""
    if H.n < 3:
        return None
    PG = PG or PairGraph(H)
    TG = TG or TripleGraph(H, PG)
    if not PG.invertible_mask.any():
        return None
    triple = first_triple(dat_mask(TG))
    if triple is None:
        return None
    return dat_witness(PG, TG, triple)


def verify_dat_witness(H: Digraph, W: DatWitness, PG: PairGraph | None = None) -> bool:
    """Check a witness from first principles: walk validity, congruence,
    avoidance and the invertibility walks. Then check that all twelve pairs
    lie in one strong component of H+."""
    u, v, w = W.triple
    if len({u, v, w}) != 3 or not all(0 <= t < H.n for t in W.triple):
        return False
    expected = {(u, (v, w)), (v, (u, w)), (w, (u, v))}
    if {(c.lead, tuple(c.others)) for c in W.leads} != expected or len(W.leads) != 3:
        return False
    for c in W.leads:
        if c.s == c.b:
            return False
        P, Y, Z = c.walks
        if not all(walk.is_valid_in(H) for walk in c.walks):
            return False
        if (P.start, Y.start, Z.start) != (c.lead, *c.others) or (P.end, Y.end, Z.end) != (c.s, c.b, c.b):
            return False
        if not (congruent(P, Y) and congruent(P, Z) and avoids(P, Y, H) and avoids(P, Z, H)):
            return False
        for (p, q), start, end in ((c.inv_forward, c.s, c.b), (c.inv_backward, c.b, c.s)):
            if not (p.is_valid_in(H) and q.is_valid_in(H)):
                return False
            if (p.start, p.end, q.start, q.end) != (start, end, end, start):
                return False
            if not (congruent(p, q) and avoids(p, q, H)) or len(p) == 0:
                return False
    PG = PG or PairGraph(H)
    pairs = [(u, v), (v, u), (u, w), (w, u), (v, w), (w, v)]
    for c in W.leads:
        pairs += [(c.s, c.b), (c.b, c.s)]
    return len({PG.component_of(p) for p in pairs}) == 1

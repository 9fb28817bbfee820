"""NP-hardness gadgets built from a DAT: choosers for a symmetric strong
component of H+, the inequality gadget Q otherwise, and the 3-colouring
reduction through Q.

Every gadget is a union of oriented paths. The list of a path vertex is the
set of vertices that the intended walk families visit at that position;
whether the endpoints then behave as claimed is checked with the exact solver
(:func:`endpoint_behavior`), never assumed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .digraph import Digraph, Direction, Walk, avoids, concat_walks, reverse_walk
from .errors import ContractError, RefusalError, VerificationError
from .pairs import PairGraph, component_symmetric, lift_to_h_walks, non_reversible_arcs, pair_walk
from .solver import LhomInstance, solve_backtracking
from .triples import DatWitness, find_dat


@dataclass(frozen=True)
class Gadget:
    X: Digraph
    lists: tuple[frozenset[int], ...]
    x: int
    y: int
    behavior: frozenset[tuple[int, int]]  # intended admissible (f(x), f(y)) pairs

    def to_instance(self, H: Digraph) -> LhomInstance:
        return LhomInstance(self.X, H, self.lists)

    def serialize(self, H: Digraph) -> str:
        from .solver import serialize_instance

        lines = [serialize_instance(self.to_instance(H)).rstrip("\n"), f"spec {self.x} {self.y}"]
        lines += [f"e {a} {b}" for a, b in sorted(self.behavior)]
        return "\n".join(lines) + "\n"


def parse_gadget(text: str) -> Gadget:
    from .solver import parse_instance

    inst_lines, spec_lines = [], []
    target = inst_lines
    for line in text.splitlines():
        if line.startswith("spec "):
            target = spec_lines
        target.append(line)
    if not spec_lines:
        raise ContractError("gadget text lacks a 'spec' block")
    inst = parse_instance("\n".join(inst_lines))
    _, x, y = spec_lines[0].split()
    pairs = frozenset(tuple(int(t) for t in line.split()[1:]) for line in spec_lines[1:] if line.strip())
    return Gadget(inst.G, inst.lists, int(x), int(y), pairs)


def endpoint_behavior(gadget: Gadget, H: Digraph) -> frozenset[tuple[int, int]]:
    """All (a, b) such that some list homomorphism maps x to a and y to b."""
    out = set()
    for a in sorted(gadget.lists[gadget.x]):
        for b in sorted(gadget.lists[gadget.y]):
            lists = list(gadget.lists)
            lists[gadget.x] = lists[gadget.x] & {a}
            lists[gadget.y] = lists[gadget.y] & {b}
            if any(not lst for lst in lists):
                continue
            if solve_backtracking(LhomInstance(gadget.X, H, tuple(lists))) is not None:
                out.add((a, b))
    return frozenset(out)


# ---------------------------------------------------------------------------
# context: the DAT and the walks the constructions need


@dataclass(frozen=True)
class DatContext:
    H: Digraph
    witness: DatWitness
    component: int
    symmetric: bool
    # lead -> (walk lead->s, walk other0->b, walk other1->b), others in increasing order
    lead_walks: dict
    # lead -> (P(s,b), P(b,s)) with P(s,b) avoiding P(b,s)
    inv_walks: dict
    targets: dict  # lead -> (s, b)

    @property
    def triple(self):
        return self.witness.triple

    def others(self, t: int) -> tuple[int, int]:
        return tuple(sorted(set(self.triple) - {t}))


def _mutual_lead_walks(H: Digraph, PG: PairGraph, x: int, y: int, z: int, component: int):
    """Shortest congruent walks x->s, y->b, z->b, (s, b) in ``component``,
    where the first avoids the other two and each of them avoids the first."""
    adj = H.adj
    n = H.n
    start = (x, y, z)
    parent = {start: None}
    queue = deque([start])
    goal = None
    while queue:
        t = queue.popleft()
        p, q, r = t
        if q == r and p != q and PG.component_of((p, q)) == component:
            goal = t
            break
        for p2 in range(n):
            for q2 in range(n):
                for r2 in range(n):
                    nxt = (p2, q2, r2)
                    if nxt in parent:
                        continue
                    fwd = (
                        adj[p, p2] and adj[q, q2] and adj[r, r2]
                        and not (adj[p, q2] or adj[p, r2] or adj[q, p2] or adj[r, p2])
                    )
                    bwd = (
                        adj[p2, p] and adj[q2, q] and adj[r2, r]
                        and not (adj[q2, p] or adj[r2, p] or adj[p2, q] or adj[p2, r])
                    )
                    if fwd or bwd:
                        parent[nxt] = (t, Direction.FORWARD if fwd else Direction.BACKWARD)
                        queue.append(nxt)
    if goal is None:
        return None
    chain, pattern = [goal], []
    while parent[chain[-1]] is not None:
        prev, d = parent[chain[-1]]
        chain.append(prev)
        pattern.append(d)
    chain.reverse()
    pattern.reverse()
    return tuple(Walk(tuple(t[i] for t in chain), tuple(pattern)) for i in range(3))


def _non_avoiding_inverse(PG: PairGraph, s: int, b: int, component: int):
    """P(s,b) avoiding P(b,s), routed through the first non-reversible arc of
    the component so that P(b,s) does not avoid P(s,b)."""
    arcs = non_reversible_arcs(PG, component)
    if not arcs:
        raise RefusalError("component is symmetric; use the choosers", component)
    a, c = arcs[0]
    head = pair_walk(PG, (s, b), a, within=component)
    tail = pair_walk(PG, c, (b, s), within=component)
    sign = PG.arc_signs(a, c)[0]
    pairs = head[0] + tail[0]
    signs = head[1] + [sign] + tail[1]
    return lift_to_h_walks(PG, pairs, signs)


def build_dat_context(H: Digraph, witness: DatWitness | None = None, PG: PairGraph | None = None) -> DatContext:
    PG = PG or PairGraph(H)
    witness = witness or find_dat(H, PG)
    if witness is None:
        raise RefusalError("H is DAT-free; no hardness gadget exists")
    u, v, w = witness.triple
    component = PG.component_of((u, v))
    symmetric = component_symmetric(PG, component)
    lead_walks, inv_walks, targets = {}, {}, {}
    for cert in witness.leads:
        t = cert.lead
        o1, o2 = sorted(cert.others)
        if symmetric:
            walks = _mutual_lead_walks(H, PG, t, o1, o2, component)
            if walks is None:
                raise RefusalError(f"no mutually avoiding walk system for lead {t}", t)
            s, b = walks[0].end, walks[1].end
            fwd = pair_walk(PG, (s, b), (b, s))
            inv = lift_to_h_walks(PG, *fwd)
        else:
            P, Y, Z = cert.walks
            walks = (P, Y, Z) if cert.others == (o1, o2) else (P, Z, Y)
            s, b = cert.s, cert.b
            inv = _non_avoiding_inverse(PG, s, b, component)
            if not avoids(inv[0], inv[1], H) or avoids(inv[1], inv[0], H):
                raise VerificationError("inverse walk pair does not have the required avoidance")
        lead_walks[t] = walks
        inv_walks[t] = inv
        targets[t] = (s, b)
    return DatContext(H, witness, component, symmetric, lead_walks, inv_walks, targets)


# ---------------------------------------------------------------------------
# assembling paths


class _Builder:
    def __init__(self):
        self.n = 0
        self.arcs: list[tuple[int, int]] = []
        self.lists: list[set[int]] = []

    def vertex(self, allowed) -> int:
        self.lists.append(set(allowed))
        self.n += 1
        return self.n - 1

    def path(self, families: list[Walk], start: int, end: int) -> None:
        """Oriented path from ``start`` to ``end`` congruent to every family;
        interior lists are the per-position unions of the families."""
        pattern = families[0].pattern
        if any(f.pattern != pattern for f in families):
            raise VerificationError("walk families are not congruent")
        length = len(pattern)
        if length == 0:
            raise VerificationError("cannot build a path from empty walks")
        ids = [start]
        for i in range(1, length):
            ids.append(self.vertex({f.vertices[i] for f in families}))
        ids.append(end)
        for (a, b), d in zip(zip(ids, ids[1:]), pattern):
            self.arcs.append((a, b) if d is Direction.FORWARD else (b, a))

    def gadget(self, x: int, y: int, behavior) -> Gadget:
        return Gadget(Digraph(self.n, self.arcs), tuple(frozenset(s) for s in self.lists), x, y, frozenset(behavior))


def _double_families(ctx: DatContext, t: int, full: bool, j: int | None = None, k: int | None = None):
    """Walk families congruent to P(t,s(t)) followed by its reversal."""
    P, Y1, Y2 = ctx.lead_walks[t]
    track = concat_walks(P, reverse_walk(P))
    o1, o2 = ctx.others(t)
    by_start = {o1: Y1, o2: Y2}
    if full:
        combos = [(a, c) for a in (o1, o2) for c in (o1, o2)]
    else:
        combos = [(j, k)]
    return [track] + [concat_walks(by_start[a], reverse_walk(by_start[c])) for a, c in combos]


def _require_symmetric(ctx: DatContext):
    if not ctx.symmetric:
        raise RefusalError("strong component is not symmetric; use build_q_gadget", ctx.component)


def build_chooser_single(ctx: DatContext, i: int, j: int, k: int) -> Gadget:
    """Chooser with f(x) = i forcing f(y) = i and f(x) = j forcing f(y) = k."""
    _require_symmetric(ctx)
    if {i, j, k} != set(ctx.triple):
        raise ContractError("i, j, k must be a permutation of the DAT triple")
    b = _Builder()
    x = b.vertex({i, j})
    y = b.vertex({i, k})
    b.path(_double_families(ctx, i, full=False, j=j, k=k), x, y)
    return b.gadget(x, y, {(i, i), (j, k)})


SQUARE_COPIES = ("ac", "bd", "cb", "da")


def build_chooser_square(ctx: DatContext, i: int, j: int, k: int, copies=SQUARE_COPIES) -> Gadget:
    """Chooser with f(x) = i forcing f(y) in {i, k} and f(x) = j forcing f(y) in {j, k}.

    Four vertices a, b, c, d; double walks led by i join a->c and b->d,
    double walks led by j join c->b and d->a; x = a, y = b. Each copy carries
    the full union of its walk families, so on its own it admits exactly
    (lead, lead) and every pair over the other two vertices.
    """
    _require_symmetric(ctx)
    if {i, j, k} != set(ctx.triple):
        raise ContractError("i, j, k must be a permutation of the DAT triple")
    b = _Builder()
    triple = set(ctx.triple)
    ids = {"a": b.vertex({i, j}), "b": b.vertex(triple), "c": b.vertex(triple), "d": b.vertex(triple)}
    lead = {"ac": i, "bd": i, "cb": j, "da": j}
    for name in copies:
        b.path(_double_families(ctx, lead[name], full=True), ids[name[0]], ids[name[1]])
    return b.gadget(ids["a"], ids["b"], {(i, i), (i, k), (j, j), (j, k)})


def _b_to_b_walk(ctx: DatContext, t: int) -> Walk:
    """Walk from b(t) to b(t) congruent to P(b,s): follow P(b,s) up to the
    first step where it fails to avoid P(s,b), then jump onto P(s,b)."""
    P_sb, P_bs = ctx.inv_walks[t]
    H = ctx.H
    for i, d in enumerate(P_bs.pattern):
        a, c = P_bs.vertices[i], P_sb.vertices[i + 1]
        if (d is Direction.FORWARD and H.adj[a, c]) or (d is Direction.BACKWARD and H.adj[c, a]):
            return Walk(P_bs.vertices[: i + 1] + P_sb.vertices[i + 1 :], P_bs.pattern)
    raise VerificationError("P(b,s) avoids P(s,b); the component is not being used as required")


def q_families(ctx: DatContext, t: int) -> list[Walk]:
    """Walk families for the path Q_t, congruent to
    P(other, b(t)) + P(b(t), s(t)) + reversal of P(t, s(t))."""
    P, Y1, Y2 = ctx.lead_walks[t]
    P_sb, P_bs = ctx.inv_walks[t]
    M = _b_to_b_walk(ctx, t)
    rP = reverse_walk(P)
    fams = []
    for Y in (Y1, Y2):
        fams.append(concat_walks(concat_walks(Y, P_bs), rP))  # other -> t
        fams.append(concat_walks(concat_walks(P, P_sb), reverse_walk(Y)))  # t -> other
    for Y in (Y1, Y2):
        for Y_end in (Y1, Y2):
            fams.append(concat_walks(concat_walks(Y, M), reverse_walk(Y_end)))  # other -> other
    return fams


def build_q_single(ctx: DatContext, t: int) -> Gadget:
    """The path Q_t: endpoints may take any values in the triple except both t."""
    _require_nonsymmetric(ctx)
    b = _Builder()
    triple = set(ctx.triple)
    x, y = b.vertex(triple), b.vertex(triple)
    b.path(q_families(ctx, t), x, y)
    return b.gadget(x, y, {(p, q) for p in triple for q in triple if not p == q == t})


def _require_nonsymmetric(ctx: DatContext):
    if ctx.symmetric:
        raise RefusalError("strong component is symmetric; use the choosers", ctx.component)


def build_q_gadget(ctx: DatContext) -> Gadget:
    """Q_u, Q_v, Q_w glued at their initial and at their terminal vertices:
    the endpoints must receive distinct vertices of the triple."""
    _require_nonsymmetric(ctx)
    b = _Builder()
    triple = set(ctx.triple)
    x, y = b.vertex(triple), b.vertex(triple)
    for t in ctx.triple:
        b.path(q_families(ctx, t), x, y)
    return b.gadget(x, y, {(p, q) for p in triple for q in triple if p != q})


def reduce_3col(G_und: Digraph, ctx: DatContext) -> LhomInstance:
    """Replace every edge of a loopless undirected graph by a copy of Q; the
    result has a list homomorphism to H iff the graph is 3-colourable."""
    if G_und.has_loops():
        raise RefusalError("graph has a loop; a loop can never be properly coloured", sorted(
            v for v in range(G_und.n) if G_und.is_arc(v, v)))
    if not G_und.is_symmetric():
        raise ContractError("graph must be undirected (symmetric arc set)")
    Q = build_q_gadget(ctx)
    triple = frozenset(ctx.triple)
    arcs: list[tuple[int, int]] = []
    lists: list[frozenset[int]] = [triple] * G_und.n
    size = G_und.n
    edges = sorted((a, b) for a, b in G_und.arcs if a < b)
    for a, b in edges:
        mapping = {}
        for q in range(Q.X.n):
            if q == Q.x:
                mapping[q] = a
            elif q == Q.y:
                mapping[q] = b
            else:
                mapping[q] = size
                size += 1
                lists.append(Q.lists[q])
        arcs += [(mapping[p], mapping[q]) for p, q in Q.X.sorted_arcs()]
    return LhomInstance(Digraph(size, arcs), ctx.H, tuple(lists))


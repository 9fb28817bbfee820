"""List homomorphism instances and solvers."""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field

import numpy as np

from .digraph import Digraph, parse_digraph, read_digraph, serialize_digraph
from .errors import ContractError, ParseError, RefusalError, VerificationError
from .polymorphisms import (
    BinaryTable,
    TernaryTable,
    build_majority_mu,
    find_min_ordering,
    is_majority,
    verify_min_ordering,
    verify_polymorphism,
)
from .triples import DatWitness, TripleGraph, find_dat, find_permutable_triple
from .pairs import PairGraph

Assignment = tuple[int, ...]


@dataclass(frozen=True)
class LhomInstance:
    G: Digraph
    H: Digraph
    lists: tuple[frozenset[int], ...]

    def __post_init__(self):
        lists = tuple(frozenset(int(h) for h in lst) for lst in self.lists)
        object.__setattr__(self, "lists", lists)
        if len(lists) != self.G.n:
            raise ContractError("one list per vertex of G is required")
        for v, lst in enumerate(lists):
            if not lst:
                raise ContractError(f"list of vertex {v} is empty")
            if not all(0 <= h < self.H.n for h in lst):
                raise ContractError(f"list of vertex {v} is not a subset of V(H)")

    @classmethod
    def full_lists(cls, G: Digraph, H: Digraph) -> LhomInstance:
        return cls(G, H, tuple(frozenset(range(H.n)) for _ in range(G.n)))

    def domains(self) -> np.ndarray:
        dom = np.zeros((self.G.n, self.H.n), dtype=bool)
        for v, lst in enumerate(self.lists):
            dom[v, sorted(lst)] = True
        return dom

    def with_lists(self, lists) -> LhomInstance:
        return LhomInstance(self.G, self.H, tuple(lists))


def is_list_homomorphism(inst: LhomInstance, assignment) -> bool:
    if assignment is None or len(assignment) != inst.G.n:
        return False
    if any(assignment[v] not in inst.lists[v] for v in range(inst.G.n)):
        return False
    return all((assignment[a], assignment[b]) in inst.H.arcs for a, b in inst.G.arcs)


# ---------------------------------------------------------------------------
# text format


def parse_instance(text: str, base_dir: str | None = None) -> LhomInstance:
    """Instance grammar::

        p lhom <nG> <mG>
        a <u> <v>            (exactly mG arcs of G)
        t <path>             (target digraph file, relative to base_dir), or
        h <digraph line>     (inline target: each line prefixed with 'h ')
        l <v> <h1> <h2> ...  (list of v; vertices without a list get V(H))
    """
    header = None
    arcs: list[tuple[int, int]] = []
    list_lines: list[tuple[int, list[str]]] = []
    inline: list[str] = []
    target_path = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line == "c" or line.startswith("c "):
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "h":
            inline.append(line[1:].strip())
            continue
        if header is None:
            if kind != "p" or len(tok) != 4 or tok[1] != "lhom":
                raise ParseError("malformed header, expected 'p lhom <nG> <mG>'", lineno)
            header = (_int(tok[2], lineno), _int(tok[3], lineno), lineno)
            continue
        if kind == "a":
            if len(tok) != 3:
                raise ParseError("expected 'a <u> <v>'", lineno)
            u, v = _int(tok[1], lineno), _int(tok[2], lineno)
            if not (0 <= u < header[0] and 0 <= v < header[0]):
                raise ParseError("vertex index out of range", lineno)
            arcs.append((u, v))
        elif kind == "t":
            if len(tok) != 2:
                raise ParseError("expected 't <path>'", lineno)
            target_path = tok[1]
        elif kind == "l":
            if len(tok) < 2:
                raise ParseError("expected 'l <v> <h1> ...'", lineno)
            list_lines.append((lineno, tok[1:]))
        else:
            raise ParseError(f"unknown line type {kind!r}", lineno)
    if header is None:
        raise ParseError("missing header 'p lhom <nG> <mG>'")
    nG, mG, _ = header
    if len(arcs) != mG:
        raise ParseError(f"header declares {mG} arcs but {len(arcs)} were given")
    if inline and target_path:
        raise ParseError("give either 't <path>' or an inline 'h' section, not both")
    if inline:
        H = parse_digraph("\n".join(inline))
    elif target_path:
        path = target_path if base_dir is None else os.path.join(base_dir, target_path)
        try:
            H = read_digraph(path)
        except OSError as exc:
            raise ParseError(f"cannot read target digraph {target_path!r}: {exc}") from None
    else:
        raise ParseError("no target digraph: add 't <path>' or 'h' lines")
    lists: list[frozenset[int] | None] = [None] * nG
    for lineno, tok in list_lines:
        v = _int(tok[0], lineno)
        if not 0 <= v < nG:
            raise ParseError("list vertex index out of range", lineno)
        values = [_int(x, lineno) for x in tok[1:]]
        if not values:
            raise ParseError(f"empty list for vertex {v}", lineno)
        if not all(0 <= h < H.n for h in values):
            raise ParseError("list entry is not a vertex of H", lineno)
        lists[v] = frozenset(values)
    full = frozenset(range(H.n))
    return LhomInstance(Digraph(nG, arcs), H, tuple(full if lst is None else lst for lst in lists))


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", lineno) from None


def serialize_instance(inst: LhomInstance) -> str:
    G = inst.G
    lines = [f"p lhom {G.n} {len(G.arcs)}"]
    lines += [f"a {u} {v}" for u, v in G.sorted_arcs()]
    lines += ["h " + line for line in serialize_digraph(inst.H).splitlines()]
    full = frozenset(range(inst.H.n))
    for v, lst in enumerate(inst.lists):
        if lst != full:
            lines.append(f"l {v} " + " ".join(map(str, sorted(lst))))
    return "\n".join(lines) + "\n"


def format_solution(assignment) -> str:
    if assignment is None:
        return "s NO\n"
    return "s YES\n" + "".join(f"m {v} {h}\n" for v, h in enumerate(assignment))


# ---------------------------------------------------------------------------
# arc consistency and backtracking


def _arc_consistency(G: Digraph, adj: np.ndarray, dom: np.ndarray) -> bool:
    """In-place AC-3 on boolean domains ``dom[v, h]``; False if a domain empties."""
    loops = adj.diagonal()
    for v in range(G.n):
        if (v, v) in G.arcs:
            dom[v] &= loops
    af = adj.astype(np.int32)
    out_arcs = [[] for _ in range(G.n)]
    in_arcs = [[] for _ in range(G.n)]
    for a, b in G.arcs:
        if a != b:
            out_arcs[a].append(b)
            in_arcs[b].append(a)
    if not dom.any(axis=1).all():
        return False
    queue = list(range(G.n))
    queued = [True] * G.n
    while queue:
        v = queue.pop()
        queued[v] = False
        dv = dom[v].astype(np.int32)
        # values of successors need a predecessor in dom[v], and vice versa
        for w in out_arcs[v]:
            keep = dom[w] & ((dv @ af) > 0)
            if (keep != dom[w]).any():
                dom[w] = keep
                if not keep.any():
                    return False
                if not queued[w]:
                    queued[w] = True
                    queue.append(w)
        for w in in_arcs[v]:
            keep = dom[w] & ((af @ dv) > 0)
            if (keep != dom[w]).any():
                dom[w] = keep
                if not keep.any():
                    return False
                if not queued[w]:
                    queued[w] = True
                    queue.append(w)
    return True


def arc_consistency(inst: LhomInstance) -> list[frozenset[int]] | None:
    """Largest arc-consistent sublists, or None if some list empties."""
    dom = inst.domains()
    if not _arc_consistency(inst.G, inst.H.adj, dom):
        return None
    return [frozenset(int(h) for h in np.flatnonzero(row)) for row in dom]


def solve_backtracking(inst: LhomInstance) -> Assignment | None:
    """Complete search: arc consistency at every node, smallest list first."""
    G, adj = inst.G, inst.H.adj

    def search(dom):
        if not _arc_consistency(G, adj, dom):
            return None
        sizes = dom.sum(axis=1)
        if (sizes == 1).all():
            return tuple(int(np.flatnonzero(row)[0]) for row in dom)
        open_sizes = np.where(sizes > 1, sizes, np.iinfo(sizes.dtype).max)
        v = int(np.argmin(open_sizes))
        for h in np.flatnonzero(dom[v]):
            trial = dom.copy()
            trial[v] = False
            trial[v, h] = True
            found = search(trial)
            if found is not None:
                return found
        return None

    result = search(inst.domains())
    if result is not None and not is_list_homomorphism(inst, result):
        raise VerificationError("backtracking produced an invalid assignment")
    return result


# ---------------------------------------------------------------------------
# polynomial solvers


def solve_with_min_ordering(inst: LhomInstance, order) -> Assignment | None:
    """Arc consistency, then the order-minimum of every list."""
    order = list(order)
    if not verify_min_ordering(inst.H, order):
        raise RefusalError("the given order is not a min-ordering of H", order)
    lists = arc_consistency(inst)
    if lists is None:
        return None
    rank = {v: i for i, v in enumerate(order)}
    result = tuple(min(lst, key=rank.__getitem__) for lst in lists)
    if not is_list_homomorphism(inst, result):
        raise VerificationError("min-ordering solver produced an invalid assignment")
    return result


def _pair_consistency(G: Digraph, adj: np.ndarray, rel: np.ndarray) -> bool:
    """In-place (2,3)-consistency on ``rel[i, j, a, b]``; False if a relation empties."""
    nG = G.n
    while True:
        before = rel.copy()
        for k in range(nG):
            left = rel[:, k].astype(np.int32)  # (i, a, b)
            right = rel[k].astype(np.int32)  # (j, b, c)
            comp = np.einsum("iab,jbc->ijac", left, right) > 0
            rel &= comp
        if not rel.reshape(nG * nG, -1).any(axis=1).all():
            return False
        if (rel == before).all():
            return True


def _initial_pair_relations(inst: LhomInstance) -> np.ndarray:
    G, adj = inst.G, inst.H.adj
    nG, nH = G.n, inst.H.n
    dom = inst.domains()
    rel = dom[:, None, :, None] & dom[None, :, None, :]
    eye = np.eye(nH, dtype=bool)
    for i in range(nG):
        rel[i, i] &= eye
    for a, b in G.arcs:
        if a == b:
            rel[a, a] &= adj & eye
        else:
            rel[a, b] &= adj
            rel[b, a] &= adj.T
    return rel


def solve_with_majority(inst: LhomInstance, g: TernaryTable, check: bool = True) -> Assignment | None:
    """(2,3)-consistency over all ordered vertex pairs of G, then greedy
    extension in vertex order, re-establishing consistency after each choice.
    With a majority polymorphism the consistent relations extend globally."""
    if check and not (verify_polymorphism(inst.H, g) and is_majority(g)):
        raise RefusalError("the given table is not a conservative majority polymorphism of H")
    G, adj = inst.G, inst.H.adj
    nH = inst.H.n
    rel = _initial_pair_relations(inst)
    if not _pair_consistency(G, adj, rel):
        return None
    result = []
    for v in range(G.n):
        a = int(np.flatnonzero(rel[v, v].diagonal())[0])
        keep = np.zeros(nH, dtype=bool)
        keep[a] = True
        rel[v] &= keep[None, :, None]
        rel[:, v] &= keep[None, None, :]
        if not _pair_consistency(G, adj, rel):
            raise VerificationError(f"greedy extension failed at vertex {v}")
        result.append(a)
    result = tuple(result)
    if not is_list_homomorphism(inst, result):
        raise VerificationError("majority solver produced an invalid assignment")
    return result


# ---------------------------------------------------------------------------
# dispatcher


class Method(enum.Enum):
    MIN_ORDERING = "MIN_ORDERING"
    MAJORITY = "MAJORITY"
    ORACLE = "ORACLE"


ORACLE_NOTE = (
    "exact backtracking used; no global min-ordering or conservative majority exists "
    "and the general polynomial algorithm for conservative CSPs is not implemented"
)


@dataclass
class SolveReport:
    verdict: str  # "DAT-FREE" or "DAT"
    witness: DatWitness | None
    method: Method
    assignment: Assignment | None
    note: str = ""
    order: list[int] | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": self.witness.to_dict() if self.witness else None,
            "method": self.method.value,
            "solvable": self.assignment is not None,
            "assignment": list(self.assignment) if self.assignment is not None else None,
            "note": self.note,
        }


def classify_and_solve(H: Digraph, inst: LhomInstance) -> SolveReport:
    if inst.H != H:
        raise ContractError("instance target differs from H")
    PG = PairGraph(H)
    TG = TripleGraph(H, PG)
    witness = find_dat(H, PG, TG)
    verdict = "DAT" if witness else "DAT-FREE"
    order = find_min_ordering(H)
    if order is not None:
        return SolveReport(verdict, witness, Method.MIN_ORDERING, solve_with_min_ordering(inst, order), order=order)
    if find_permutable_triple(TG) is None:
        mu = build_majority_mu(H, TG)
        return SolveReport(verdict, witness, Method.MAJORITY, solve_with_majority(inst, mu, check=False))
    return SolveReport(verdict, witness, Method.ORACLE, solve_backtracking(inst), note=ORACLE_NOTE)

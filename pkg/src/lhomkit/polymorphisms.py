"""Conservative polymorphisms: the binary f built from the condensation of H+,
the majority mu built from distinguishers, the ternary g built from f, their
verification, and min-orderings."""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import kernels
from .digraph import Digraph
from .errors import ContractError, RefusalError, VerificationError
from .pairs import PairGraph
from .triples import TripleGraph, find_permutable_triple


class BinaryTable:
    """Conservative binary operation stored as a selector: 0 picks x, 1 picks y."""

    arity = 2

    def __init__(self, selector):
        selector = np.asarray(selector, dtype=np.int8)
        n = selector.shape[0]
        if selector.shape != (n, n) or not np.isin(selector, (0, 1)).all():
            raise ValueError("binary selector must be an (n, n) array of 0/1")
        selector = selector.copy()
        selector[np.arange(n), np.arange(n)] = 0
        selector.flags.writeable = False
        self.n = n
        self.selector = selector

    @classmethod
    def from_function(cls, n: int, func) -> BinaryTable:
        sel = np.zeros((n, n), dtype=np.int8)
        for x in range(n):
            for y in range(n):
                val = func(x, y)
                if val not in (x, y):
                    raise ValueError(f"f({x},{y}) = {val} is not conservative")
                sel[x, y] = 0 if val == x else 1
        return cls(sel)

    @classmethod
    def projection(cls, n: int, coordinate: int = 0) -> BinaryTable:
        return cls(np.full((n, n), coordinate, dtype=np.int8))

    @classmethod
    def from_order(cls, order) -> BinaryTable:
        """min with respect to a linear order given as a vertex sequence."""
        rank = {v: i for i, v in enumerate(order)}
        return cls.from_function(len(order), lambda x, y: x if rank[x] <= rank[y] else y)

    @property
    def values(self) -> np.ndarray:
        n = self.n
        x, y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        return np.where(self.selector == 0, x, y)

    def __call__(self, x: int, y: int) -> int:
        return y if self.selector[x, y] else x

    def serialize(self, name: str = "f") -> str:
        lines = [f"binary {self.n}"]
        lines += [f"{name} {x} {y} {self(x, y)}" for x in range(self.n) for y in range(self.n)]
        return "\n".join(lines) + "\n"

    def __eq__(self, other) -> bool:
        return isinstance(other, BinaryTable) and np.array_equal(self.selector, other.selector)


class TernaryTable:
    """Conservative ternary operation stored as a coordinate selector 0/1/2."""

    arity = 3

    def __init__(self, selector):
        selector = np.asarray(selector, dtype=np.int8)
        n = selector.shape[0]
        if selector.shape != (n, n, n) or not np.isin(selector, (0, 1, 2)).all():
            raise ValueError("ternary selector must be an (n, n, n) array of 0/1/2")
        selector = selector.copy()
        selector.flags.writeable = False
        self.n = n
        self.selector = selector

    @classmethod
    def from_function(cls, n: int, func) -> TernaryTable:
        sel = np.zeros((n, n, n), dtype=np.int8)
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    val = func(x, y, z)
                    args = (x, y, z)
                    if val not in args:
                        raise ValueError(f"g{args} = {val} is not conservative")
                    sel[x, y, z] = args.index(val)
        return cls(sel)

    @property
    def values(self) -> np.ndarray:
        n = self.n
        grid = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
        return np.choose(self.selector, grid)

    def __call__(self, x: int, y: int, z: int) -> int:
        return (x, y, z)[self.selector[x, y, z]]

    def serialize(self, name: str = "g") -> str:
        n = self.n
        lines = [f"ternary {n}"]
        lines += [
            f"{name} {x} {y} {z} {self(x, y, z)}" for x in range(n) for y in range(n) for z in range(n)
        ]
        return "\n".join(lines) + "\n"

    def __eq__(self, other) -> bool:
        return isinstance(other, TernaryTable) and np.array_equal(self.selector, other.selector)


@dataclass(frozen=True)
class PolymorphismCheck:
    """Truthy iff the operation is a polymorphism; otherwise ``counterexample``
    holds the arcs whose image is not an arc."""

    ok: bool
    counterexample: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def verify_polymorphism(H: Digraph, T: BinaryTable | TernaryTable) -> PolymorphismCheck:
    if T.n != H.n:
        raise ContractError("table size does not match the digraph")
    arcs = np.array(H.sorted_arcs(), dtype=np.int64).reshape(-1, 2)
    if len(arcs) == 0:
        return PolymorphismCheck(True)
    vals = T.values.astype(np.int64)
    if T.arity == 2:
        a = vals[arcs[:, 0][:, None], arcs[:, 0][None, :]]
        b = vals[arcs[:, 1][:, None], arcs[:, 1][None, :]]
        bad = np.argwhere(~H.adj[a, b])
        if len(bad):
            i, j = bad[0]
            return PolymorphismCheck(False, (tuple(arcs[i]), tuple(arcs[j])))
        return PolymorphismCheck(True)
    i, j, k = kernels.ternary_counterexample(np.ascontiguousarray(H.adj), vals, arcs)
    if i >= 0:
        return PolymorphismCheck(False, (tuple(arcs[i]), tuple(arcs[j]), tuple(arcs[k])))
    return PolymorphismCheck(True)


def is_semilattice_on_pair(f: BinaryTable, u: int, v: int) -> bool:
    if u == v:
        raise ContractError("pair must consist of distinct vertices")
    return f(u, v) == f(v, u)


def is_majority_on_pair(g: TernaryTable, u: int, v: int) -> bool:
    if u == v:
        raise ContractError("pair must consist of distinct vertices")
    return all(
        g(a, a, b) == a and g(a, b, a) == a and g(b, a, a) == a for a, b in ((u, v), (v, u))
    )


def is_majority(g: TernaryTable) -> bool:
    return all(is_majority_on_pair(g, u, v) for u in range(g.n) for v in range(u + 1, g.n))


# ---------------------------------------------------------------------------
# binary f


def _pair_neither_components(PG: PairGraph) -> list[int]:
    return [
        c
        for c in range(PG.n_components)
        if not PG.diagonal[c] and not PG.special[c] and not PG.co_special[c]
    ]


def build_binary_f(PG: PairGraph) -> BinaryTable:
    """Binary conservative polymorphism, commutative exactly off the
    self-coupled components of H+.

    Co-special (not self-coupled) components take the first coordinate,
    special and self-coupled ones the second. The remaining components are
    peeled off as sink/coupled-source pairs of the residual condensation; each
    sink takes the first coordinate and its coupled source the second.
    """
    n_comp = PG.n_components
    first = [False] * n_comp  # True: f(x, y) = x on this component
    for c in range(n_comp):
        if PG.co_special[c] and not PG.self_coupled[c]:
            first[c] = True

    remaining = set(_pair_neither_components(PG))
    out: dict[int, set[int]] = {c: set() for c in remaining}
    for a, b in PG.condensation:
        if a in remaining and b in remaining:
            out[a].add(b)
    while remaining:
        sink = min(c for c in remaining if not (out[c] & remaining))
        source = PG.coupling[sink]
        first[sink] = True
        first[source] = False
        remaining.discard(sink)
        remaining.discard(source)

    n = PG.n
    sel = np.ones((n, n), dtype=np.int8)
    for p, c in enumerate(PG.scc):
        if first[c]:
            sel[p // n, p % n] = 0
    f = BinaryTable(sel)
    bad = propagation_violation(PG, f)
    if bad is not None:
        raise VerificationError(f"binary f violates propagation along H+ arc {bad}")
    return f


def propagation_violation(PG: PairGraph, f: BinaryTable):
    """First H+ arc (x,y)->(x',y') with f(x,y)=x but f(x',y')=y', or None."""
    sel = f.selector.reshape(-1)
    src, dst = np.nonzero(PG.arcs)
    bad = np.flatnonzero((sel[src] == 0) & (sel[dst] == 1))
    if len(bad):
        k = bad[0]
        return PG.pair(int(src[k])), PG.pair(int(dst[k]))
    return None


# ---------------------------------------------------------------------------
# distinguishers and the majority mu


def is_distinguisher(TG: TripleGraph, x: int, y: int, z: int) -> bool:
    """No (s, b, b) with s != b is reachable from (x, y, z) in H++."""
    if x == y or x == z:
        return True
    return not TG.reaches_any[x, y, z]


def is_weak_distinguisher(PG: PairGraph, TG: TripleGraph, x: int, y: int, z: int) -> bool:
    """No (s, b, b) with (s, b) invertible is reachable from (x, y, z) in H++."""
    if TG._pair_graph is None:
        TG._pair_graph = PG
    if x == y or x == z:
        return True
    return not TG.reaches_invertible[x, y, z]


def build_majority_mu(H: Digraph, TG: TripleGraph | None = None) -> TernaryTable:
    """Conservative majority: mu(u,v,w) is the first distinguisher among u, v, w,
    with mu = u when u repeats and mu = v when v = w."""
    TG = TG or TripleGraph(H)
    bad = find_permutable_triple(TG)
    if bad is not None:
        raise RefusalError(f"H has a permutable triple {bad}; no conservative majority exists", bad)
    n = H.n
    sel = np.zeros((n, n, n), dtype=np.int8)
    r = TG.reaches_any
    for u in range(n):
        for v in range(n):
            for w in range(n):
                if u == v or u == w:
                    sel[u, v, w] = 0
                elif v == w:
                    sel[u, v, w] = 1
                elif not r[u, v, w]:
                    sel[u, v, w] = 0
                elif not r[v, u, w]:
                    sel[u, v, w] = 1
                elif not r[w, u, v]:
                    sel[u, v, w] = 2
                else:  # pragma: no cover - excluded by the permutable-triple check
                    raise VerificationError(f"no distinguisher for {(u, v, w)}")
    return TernaryTable(sel)


# ---------------------------------------------------------------------------
# ternary g


def six_tuple(f: BinaryTable, x: int, y: int, z: int) -> tuple[int, ...]:
    return (f(x, y), f(y, x), f(y, z), f(z, y), f(x, z), f(z, x))


def build_ternary_g(PG: PairGraph, TG: TripleGraph, f: BinaryTable) -> TernaryTable:
    """g(x,y,z) is the most frequent entry of the six-tuple
    [f(x,y), f(y,x), f(y,z), f(z,y), f(x,z), f(z,x)]; ties go to the first of
    the tied arguments, in the order x, y, z, that is a weak distinguisher."""
    n = PG.n
    sel = np.zeros((n, n, n), dtype=np.int8)
    for x in range(n):
        for y in range(n):
            for z in range(n):
                sel[x, y, z] = _g_selector(PG, TG, f, x, y, z)
    return TernaryTable(sel)


def _g_selector(PG, TG, f, x, y, z) -> int:
    args = (x, y, z)
    counts = Counter(six_tuple(f, x, y, z))
    top = max(counts.values())
    tied = [i for i, a in enumerate(args) if counts[a] == top]
    if len({args[i] for i in tied}) == 1:
        return tied[0]
    for i in tied:
        others = args[:i] + args[i + 1 :]
        if is_weak_distinguisher(PG, TG, args[i], *others):
            return i
    raise RefusalError(f"no weak distinguisher among the tied values of {args}; H has a DAT", args)


# Six-tuples over the symbols x, y, z and the resulting value; '?' is a wildcard
# and None means "first weak distinguisher in the order x, y, z".
G_CASE_TABLE: tuple[tuple[str, str | None], ...] = (
    ("xx??xx", "x"), ("yyyy??", "y"), ("??zzzz", "z"),
    ("xxzzzx", "x"), ("yxyyxx", "x"), ("yyzyzz", "y"),
    ("xxyyzx", "x"), ("xxzyzz", "z"), ("yyzyxx", "y"),
    ("yyzzzx", "z"), ("yxyyzz", "y"), ("yxzzxx", "x"),
    ("yxzyxx", "x"), ("yxzyzz", "z"), ("xxzyzx", "x"),
    ("yyzyzx", "y"), ("yxyyzx", "y"), ("yxzzzx", "z"),
    ("xxyyzz", "x"), ("yyzzxx", "x"),
    ("yxzyzx", None),
)


def g_case_dispatch(PG: PairGraph, TG: TripleGraph, f: BinaryTable, x: int, y: int, z: int) -> int:
    """Value of g on pairwise distinct x, y, z via the explicit case table."""
    if len({x, y, z}) != 3:
        raise ContractError("the case table covers pairwise distinct triples only")
    symbol = {x: "x", y: "y", z: "z"}
    key = "".join(symbol[v] for v in six_tuple(f, x, y, z))
    for pattern, result in G_CASE_TABLE:
        if re.fullmatch(pattern.replace("?", "."), key):
            if result is not None:
                return {"x": x, "y": y, "z": z}[result]
            for lead, others in ((x, (y, z)), (y, (x, z)), (z, (x, y))):
                if is_weak_distinguisher(PG, TG, lead, *others):
                    return lead
            raise RefusalError(f"no weak distinguisher for {(x, y, z)}", (x, y, z))
    raise VerificationError(f"six-tuple {key} for {(x, y, z)} is not in the case table")


# ---------------------------------------------------------------------------
# min-orderings


def verify_min_ordering(H: Digraph, order) -> bool:
    order = list(order)
    if sorted(order) != list(range(H.n)):
        raise ContractError("order must be a permutation of the vertices")
    return bool(verify_polymorphism(H, BinaryTable.from_order(order)))


def find_min_ordering(H: Digraph) -> list[int] | None:
    """Exact search for a min-ordering, smallest vertex first.

    The order is grown from its minimum upward. Once a vertex is placed, its
    comparison with every other vertex is known, so an arc pair (uv, u'v')
    can be checked as soon as min(u, u') and min(v, v') are both decided.
    """
    n = H.n
    adj = H.adj
    arcs = H.sorted_arcs()
    # forbidden[a][b]: list of (c, d) such that "a < b and c < d" must not both hold
    forbidden: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for u, v in arcs:
        for u2, v2 in arcs:
            if u != u2 and v != v2 and not adj[u, v2]:
                forbidden.setdefault((u, u2), []).append((v2, v))
    rank = [-1] * n
    order: list[int] = []

    def less(a, b):
        # known only if a or b is placed
        ra, rb = rank[a], rank[b]
        if ra >= 0 and (rb < 0 or ra < rb):
            return True
        if rb >= 0 and (ra < 0 or rb < ra):
            return False
        return None

    def consistent() -> bool:
        for (a, b), pairs in forbidden.items():
            if less(a, b) is not True:
                continue
            for c, d in pairs:
                if less(c, d) is True:
                    return False
        return True

    def extend() -> bool:
        if len(order) == n:
            return True
        for v in range(n):
            if rank[v] >= 0:
                continue
            rank[v] = len(order)
            order.append(v)
            if consistent() and extend():
                return True
            order.pop()
            rank[v] = -1
        return False

    return list(order) if extend() else None

"""The pair digraph H+ on ordered vertex pairs, its strong components and
their special / co-special / self-coupled classification."""

from __future__ import annotations

import enum
from collections import deque
from functools import cached_property

import numpy as np

from .digraph import Digraph, Direction, Walk
from .errors import ContractError

Pair = tuple[int, int]


class Sign(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    def direction(self) -> Direction:
        return Direction.FORWARD if self is Sign.PLUS else Direction.BACKWARD


def pair_arc_tensors(adj: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Boolean ``(n*n, n*n)`` matrices of the + and - arcs of H+.

    plus[(u,v),(u',v')]  = uu' in E, vv' in E, uv' not in E
    minus[(u,v),(u',v')] = u'u in E, v'v in E, v'u not in E
    """
    n = adj.shape[0]

    def build(a):
        t = a[:, None, :, None] & a[None, :, None, :] & ~a[:, None, None, :]
        return t.reshape(n * n, n * n)

    return build(adj), build(np.ascontiguousarray(adj.T))


def tarjan_scc(successors: list[list[int]]) -> list[int]:
    """Iterative Tarjan. Component ids follow emission order, which is a
    reverse topological order of the condensation (sinks get small ids)."""
    n = len(successors)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    n_comp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            node, pos = work[-1]
            succ = successors[node]
            if pos < len(succ):
                work[-1] = (node, pos + 1)
                nxt = succ[pos]
                if index[nxt] == -1:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack[nxt] = True
                    work.append((nxt, 0))
                elif on_stack[nxt]:
                    low[node] = min(low[node], index[nxt])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                while True:
                    member = stack.pop()
                    on_stack[member] = False
                    comp[member] = n_comp
                    if member == node:
                        break
                n_comp += 1
    return comp


class PairGraph:
    """H+ for a digraph H, with SCCs and the component flags.

    A non-diagonal pair (x, y) is special when H+ has a walk of length >= 1
    from (x, y) to (y, x); this is a property of its whole strong component.
    Diagonal pairs are isolated and carry no flag.
    """

    def __init__(self, H: Digraph):
        self.base = H
        n = self.n = H.n
        self.plus, self.minus = pair_arc_tensors(H.adj)
        self.arcs = self.plus | self.minus
        self.successors = [[int(t) for t in np.flatnonzero(row)] for row in self.arcs]
        self.scc = tarjan_scc(self.successors)
        self.n_components = max(self.scc, default=-1) + 1

        members: list[list[int]] = [[] for _ in range(self.n_components)]
        for p, c in enumerate(self.scc):
            members[c].append(p)
        self.members = [tuple(m) for m in members]

        cond: set[tuple[int, int]] = set()
        internal = [False] * self.n_components
        for p, succ in enumerate(self.successors):
            cp = self.scc[p]
            for q in succ:
                cq = self.scc[q]
                if cp == cq:
                    internal[cp] = True
                else:
                    cond.add((cp, cq))
        self.condensation = frozenset(cond)
        self.has_internal_arc = tuple(internal)

        self.coupling = tuple(self.scc[self._swap(m[0])] for m in self.members)
        self.diagonal = tuple(all(p // n == p % n for p in m) for m in self.members)

        # reach[c] is a bitset of components reachable from c (including c);
        # arcs go from larger to smaller ids, so increasing id order is safe.
        out: list[list[int]] = [[] for _ in range(self.n_components)]
        for a, b in cond:
            out[a].append(b)
        reach = [0] * self.n_components
        for c in range(self.n_components):
            bits = 1 << c
            for d in out[c]:
                bits |= reach[d]
            reach[c] = bits
        self._reach = reach

        special = []
        for c in range(self.n_components):
            special.append(not self.diagonal[c] and bool(reach[c] >> self.coupling[c] & 1))
        self.special = tuple(special)
        self.co_special = tuple(special[self.coupling[c]] for c in range(self.n_components))
        self.self_coupled = tuple(
            not self.diagonal[c] and self.coupling[c] == c for c in range(self.n_components)
        )

    # -- indexing -----------------------------------------------------------

    def index(self, pair: Pair) -> int:
        return pair[0] * self.n + pair[1]

    def pair(self, index: int) -> Pair:
        return divmod(index, self.n)

    def _swap(self, index: int) -> int:
        u, v = divmod(index, self.n)
        return v * self.n + u

    def component_of(self, pair: Pair) -> int:
        return self.scc[self.index(pair)]

    def component_pairs(self, c: int) -> list[Pair]:
        return [self.pair(p) for p in self.members[c]]

    def reaches(self, c_from: int, c_to: int) -> bool:
        return bool(self._reach[c_from] >> c_to & 1)

    def arc_signs(self, a: Pair, b: Pair) -> list[Sign]:
        i, j = self.index(a), self.index(b)
        signs = []
        if self.plus[i, j]:
            signs.append(Sign.PLUS)
        if self.minus[i, j]:
            signs.append(Sign.MINUS)
        return signs

    def arc_list(self) -> list[tuple[Pair, Pair, Sign]]:
        out = []
        for sign, mat in ((Sign.PLUS, self.plus), (Sign.MINUS, self.minus)):
            for i, j in zip(*np.nonzero(mat)):
                out.append((self.pair(int(i)), self.pair(int(j)), sign))
        return sorted(out, key=lambda t: (t[0], t[1], t[2].value))

    @cached_property
    def invertible_mask(self) -> np.ndarray:
        """(n, n) boolean matrix of invertible pairs."""
        n = self.n
        mask = np.zeros((n, n), dtype=bool)
        for u in range(n):
            for v in range(n):
                if u != v:
                    mask[u, v] = self._invertible(u, v)
        return mask

    def _invertible(self, u: int, v: int) -> bool:
        c = self.component_of((u, v))
        return c == self.component_of((v, u)) and self.has_internal_arc[c]

    def dump(self) -> str:
        lines = []
        for c in range(self.n_components):
            lines.append(
                f"scc {c} size {len(self.members[c])} special {int(self.special[c])} "
                f"cospecial {int(self.co_special[c])} selfcoupled {int(self.self_coupled[c])} "
                f"coupled {self.coupling[c]}"
            )
        return "\n".join(lines) + "\n"


def build_pair_graph(H: Digraph) -> PairGraph:
    return PairGraph(H)


def is_invertible(PG: PairGraph, u: int, v: int) -> bool:
    if u == v:
        raise ContractError("invertibility is defined for distinct vertices")
    return PG._invertible(u, v)


def component_symmetric(PG: PairGraph, c: int) -> bool:
    for p in PG.members[c]:
        for q in PG.successors[p]:
            if PG.scc[q] == c and not PG.arcs[q, p]:
                return False
    return True


def non_reversible_arcs(PG: PairGraph, c: int) -> list[tuple[Pair, Pair]]:
    """Arcs inside component c whose reversal is not an arc, in lexicographic order."""
    out = []
    for p in PG.members[c]:
        for q in PG.successors[p]:
            if PG.scc[q] == c and not PG.arcs[q, p]:
                out.append((PG.pair(p), PG.pair(q)))
    return sorted(out)


def pair_walk(PG: PairGraph, start: Pair, goal: Pair, within: int | None = None):
    """Shortest directed walk in H+ from ``start`` to ``goal``.

    Returns ``(pairs, signs)`` or None. With ``within`` set, the walk is confined
    to that strong component. Ties prefer + arcs and smaller pair indices.
    """
    s, g = PG.index(start), PG.index(goal)
    if s == g:
        return [start], []
    parent = {s: None}
    queue = deque([s])
    while queue:
        p = queue.popleft()
        for q in PG.successors[p]:
            if q in parent or (within is not None and PG.scc[q] != within):
                continue
            parent[q] = p
            if q == g:
                queue.clear()
                break
            queue.append(q)
    if g not in parent:
        return None
    chain = [g]
    while parent[chain[-1]] is not None:
        chain.append(parent[chain[-1]])
    chain.reverse()
    pairs = [PG.pair(p) for p in chain]
    signs = [Sign.PLUS if PG.plus[a, b] else Sign.MINUS for a, b in zip(chain, chain[1:])]
    return pairs, signs


def lift_to_h_walks(PG: PairGraph, pairs, signs) -> tuple[Walk, Walk]:
    """Split an H+ walk into its coordinate walks P (first) and Q (second) in H;
    P avoids Q by construction."""
    pairs = [tuple(p) for p in pairs]
    if len(signs) != len(pairs) - 1:
        raise ContractError("sign pattern length must be one less than the number of pairs")
    for a, b, sign in zip(pairs, pairs[1:], signs):
        if sign not in PG.arc_signs(a, b):
            raise ContractError(f"{a} -> {b} is not a {sign.value} arc of H+")
    pattern = tuple(s.direction() for s in signs)
    return Walk(tuple(p[0] for p in pairs), pattern), Walk(tuple(p[1] for p in pairs), pattern)

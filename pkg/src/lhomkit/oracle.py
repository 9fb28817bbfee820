"""Exhaustive, definition-level checkers used as ground truth.

Nothing here imports the pair/triple machinery, the solvers or the
polymorphism builders; each routine transcribes a definition directly and is
guarded by an explicit size limit.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from typing import Iterator

from .digraph import Digraph
from .errors import ContractError


class SizeGuardError(ContractError):
    pass


def _arc(H: Digraph, a: int, b: int) -> bool:
    return (a, b) in H.arcs


# ---------------------------------------------------------------------------
# conservative binary operations


def _binary_is_polymorphism(H: Digraph, table: dict) -> bool:
    for a, b in H.arcs:
        for c, d in H.arcs:
            if (table[a, c], table[b, d]) not in H.arcs:
                return False
    return True


def enumerate_conservative_binary(H: Digraph) -> Iterator[dict]:
    """Yield every conservative binary polymorphism as a dict (x, y) -> value."""
    n = H.n
    if n > 5:
        raise SizeGuardError(f"enumeration of 2^(n^2-n) binary tables refused for n={n} > 5")
    off = [(x, y) for x in range(n) for y in range(n) if x != y]
    for choice in itertools.product((0, 1), repeat=len(off)):
        table = {(x, x): x for x in range(n)}
        for (x, y), c in zip(off, choice):
            table[x, y] = y if c else x
        if _binary_is_polymorphism(H, table):
            yield table


def count_conservative_binary(H: Digraph) -> int:
    return sum(1 for _ in enumerate_conservative_binary(H))


def pair_has_semilattice(H: Digraph, u: int, v: int, tables=None) -> bool:
    tables = list(enumerate_conservative_binary(H)) if tables is None else tables
    return any(t[u, v] == t[v, u] for t in tables)


# ---------------------------------------------------------------------------
# conservative ternary operations (small backtracking search)


def exists_conservative_majority(H: Digraph, pairs=None) -> bool:
    """Is there a conservative ternary polymorphism that is a majority on the
    given unordered pairs (all pairs when ``pairs`` is None)?"""
    n = H.n
    if n > 4:
        raise SizeGuardError(f"ternary table search refused for n={n} > 4")
    if pairs is None:
        pairs = list(itertools.combinations(range(n), 2))
    pairs = {frozenset(p) for p in pairs}
    triples = list(itertools.product(range(n), repeat=3))
    domain: dict[tuple, set] = {}
    for t in triples:
        values = set(t)
        if len(values) == 2 and frozenset(values) in pairs:
            (major,) = [a for a in values if t.count(a) == 2]
            values = {major}
        domain[t] = values
    # constraint: for arcs e1, e2, e3 the tails triple and heads triple map to an arc
    neighbours: dict[tuple, list] = {t: [] for t in triples}
    for e1, e2, e3 in itertools.product(sorted(H.arcs), repeat=3):
        tail = (e1[0], e2[0], e3[0])
        head = (e1[1], e2[1], e3[1])
        neighbours[tail].append((head, True))
        neighbours[head].append((tail, False))

    def supported(val, other_dom, forward):
        if forward:
            return any(_arc(H, val, w) for w in other_dom)
        return any(_arc(H, w, val) for w in other_dom)

    def propagate(dom) -> bool:
        queue = deque(triples)
        queued = set(triples)
        while queue:
            t = queue.popleft()
            queued.discard(t)
            for other, forward in neighbours[t]:
                keep = {val for val in dom[t] if supported(val, dom[other], forward)}
                if keep != dom[t]:
                    dom[t] = keep
                    if not keep:
                        return False
                    for nb, _ in neighbours[t]:
                        if nb not in queued:
                            queued.add(nb)
                            queue.append(nb)
        return True

    def search(dom) -> bool:
        if not propagate(dom):
            return False
        open_vars = [t for t in triples if len(dom[t]) > 1]
        if not open_vars:
            return True
        t = min(open_vars, key=lambda s: len(dom[s]))
        for val in sorted(dom[t]):
            trial = {k: set(v) for k, v in dom.items()}
            trial[t] = {val}
            if search(trial):
                return True
        return False

    return search(domain)


def local_condition(H: Digraph) -> bool:
    """For every pair {u, v}: some conservative binary polymorphism is
    commutative on it, or some conservative ternary polymorphism is a majority
    on it."""
    tables = list(enumerate_conservative_binary(H))
    for u, v in itertools.combinations(range(H.n), 2):
        if pair_has_semilattice(H, u, v, tables):
            continue
        if not exists_conservative_majority(H, [(u, v)]):
            return False
    return True


# ---------------------------------------------------------------------------
# definitional walk searches


def _pair_steps(H: Digraph, p: int, q: int):
    """Pairs (p', q') such that the one-step walks p..p', q..q' are congruent
    and the first avoids the second."""
    n = H.n
    for p2 in range(n):
        for q2 in range(n):
            # forward step: pp', qq' arcs, and no arc p q'
            if _arc(H, p, p2) and _arc(H, q, q2) and not _arc(H, p, q2):
                yield p2, q2
            # backward step: p'p, q'q arcs, and no arc q' p
            elif _arc(H, p2, p) and _arc(H, q2, q) and not _arc(H, q2, p):
                yield p2, q2


def _pair_reachable(H: Digraph, start, goal, max_len: int) -> bool:
    frontier = {start}
    seen = set()
    for _ in range(max_len):
        nxt = set()
        for p, q in frontier:
            for step in _pair_steps(H, p, q):
                if step == goal:
                    return True
                if step not in seen:
                    seen.add(step)
                    nxt.add(step)
        if not nxt:
            return False
        frontier = nxt
    return False


def definitional_invertible(H: Digraph, u: int, v: int, max_len: int | None = None) -> bool:
    """Congruent walks u->v avoiding v->u exist, and congruent walks v->u avoiding u->v exist."""
    if u == v:
        raise ContractError("invertibility is defined for distinct vertices")
    max_len = H.n * H.n if max_len is None else max_len
    if max_len < H.n * H.n:
        raise ContractError("max_len must be at least n^2")
    return _pair_reachable(H, (u, v), (v, u), max_len) and _pair_reachable(H, (v, u), (u, v), max_len)


def _triple_steps(H: Digraph, x: int, y: int, z: int):
    n = H.n
    for x2, y2, z2 in itertools.product(range(n), repeat=3):
        if (
            _arc(H, x, x2) and _arc(H, y, y2) and _arc(H, z, z2)
            and not _arc(H, x, y2) and not _arc(H, x, z2)
        ):
            yield x2, y2, z2
        elif (
            _arc(H, x2, x) and _arc(H, y2, y) and _arc(H, z2, z)
            and not _arc(H, y2, x) and not _arc(H, z2, x)
        ):
            yield x2, y2, z2


def _lead_targets(H: Digraph, x: int, y: int, z: int) -> set[tuple[int, int]]:
    """All (s, b), s != b, such that congruent walks x->s, y->b, z->b exist with
    the first avoiding the other two."""
    seen = {(x, y, z)}
    queue = deque(seen)
    while queue:
        t = queue.popleft()
        for step in _triple_steps(H, *t):
            if step not in seen:
                seen.add(step)
                queue.append(step)
    return {(s, b) for s, b, c in seen if b == c and s != b}


def definitional_permutable(H: Digraph, u: int, v: int, w: int) -> bool:
    if len({u, v, w}) != 3:
        raise ContractError("a triple of pairwise distinct vertices is required")
    return all(_lead_targets(H, *t) for t in ((u, v, w), (v, u, w), (w, u, v)))


def definitional_dat(H: Digraph, u: int, v: int, w: int) -> bool:
    if len({u, v, w}) != 3:
        raise ContractError("a triple of pairwise distinct vertices is required")
    for t in ((u, v, w), (v, u, w), (w, u, v)):
        if not any(definitional_invertible(H, s, b) for s, b in sorted(_lead_targets(H, *t))):
            return False
    return True


def has_dat(H: Digraph) -> bool:
    return any(definitional_dat(H, *t) for t in itertools.combinations(range(H.n), 3))


def has_permutable_triple(H: Digraph) -> bool:
    return any(definitional_permutable(H, *t) for t in itertools.combinations(range(H.n), 3))


# ---------------------------------------------------------------------------
# homomorphism enumeration


def enumerate_homomorphisms(G: Digraph, H: Digraph, lists=None) -> Iterator[tuple[int, ...]]:
    """All list homomorphisms G -> H, as tuples indexed by the vertices of G."""
    if H.n ** G.n > 10**7:
        raise SizeGuardError(f"|V(H)|^|V(G)| = {H.n}^{G.n} exceeds 10^7")
    if lists is None:
        lists = [range(H.n)] * G.n
    choices = [sorted(lst) for lst in lists]
    for image in itertools.product(*choices):
        if all((image[a], image[b]) in H.arcs for a, b in G.arcs):
            yield image


def is_three_colorable(G: Digraph) -> bool:
    if 3 ** G.n > 10**7:
        raise SizeGuardError("graph too large for brute-force colouring")
    for colours in itertools.product(range(3), repeat=G.n):
        if all(colours[a] != colours[b] for a, b in G.arcs):
            return True
    return False


def brute_min_ordering(H: Digraph) -> tuple[int, ...] | None:
    """First permutation (as a vertex sequence) whose min preserves arcs."""
    if math.factorial(H.n) > 10**6:
        raise SizeGuardError("too many orderings")
    for order in itertools.permutations(range(H.n)):
        rank = {v: i for i, v in enumerate(order)}

        def lo(a, b):
            return a if rank[a] < rank[b] else b

        if all((lo(u, u2), lo(v, v2)) in H.arcs for u, v in H.arcs for u2, v2 in H.arcs):
            return order
    return None

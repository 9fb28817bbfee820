"""Digraphs, walks with explicit forward/backward patterns, and the text format."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ContractError, ParseError


class Digraph:
    """Finite digraph on vertices ``0..n-1``; loops allowed, no multi-arcs.

    Arcs are kept both as a frozenset and as a dense boolean adjacency matrix
    so that ``is_arc`` is a single array lookup.
    """

    __slots__ = ("n", "arcs", "names", "adj", "_out", "_in")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = (), names: Sequence[str] | None = None):
        if n < 0:
            raise ContractError("vertex count must be non-negative")
        arcs = frozenset((int(u), int(v)) for u, v in arcs)
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ContractError(f"arc ({u},{v}) out of range for n={n}")
        if names is not None and len(names) != n:
            raise ContractError("names must have one entry per vertex")
        adj = np.zeros((n, n), dtype=bool)
        for u, v in arcs:
            adj[u, v] = True
        adj.flags.writeable = False
        self.n = n
        self.arcs = arcs
        self.names = tuple(names) if names is not None else None
        self.adj = adj
        self._out = tuple(tuple(int(x) for x in np.flatnonzero(adj[u])) for u in range(n))
        self._in = tuple(tuple(int(x) for x in np.flatnonzero(adj[:, u])) for u in range(n))

    @classmethod
    def from_adjacency(cls, adj) -> Digraph:
        adj = np.asarray(adj, dtype=bool)
        return cls(adj.shape[0], zip(*map(list, np.nonzero(adj))))

    def is_arc(self, u: int, v: int) -> bool:
        return bool(self.adj[u, v])

    def out_neighbors(self, u: int) -> tuple[int, ...]:
        return self._out[u]

    def in_neighbors(self, u: int) -> tuple[int, ...]:
        return self._in[u]

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    def is_symmetric(self) -> bool:
        return bool((self.adj == self.adj.T).all())

    def has_loops(self) -> bool:
        return bool(self.adj.diagonal().any())

    def name(self, v: int) -> str:
        return self.names[v] if self.names else str(v)

    def reverse(self) -> Digraph:
        return Digraph(self.n, ((v, u) for u, v in self.arcs), self.names)

    def induced(self, vertices: Sequence[int]) -> Digraph:
        index = {v: i for i, v in enumerate(vertices)}
        return Digraph(len(vertices), ((index[u], index[v]) for u, v in self.arcs if u in index and v in index))

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, Digraph) and self.n == other.n and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={self.sorted_arcs()})"


class Direction(enum.Enum):
    FORWARD = "F"
    BACKWARD = "B"

    def flipped(self) -> Direction:
        return Direction.BACKWARD if self is Direction.FORWARD else Direction.FORWARD


F = Direction.FORWARD
B = Direction.BACKWARD


def pattern_from_string(text: str) -> tuple[Direction, ...]:
    return tuple(Direction(c) for c in text)


def pattern_string(pattern: Sequence[Direction]) -> str:
    return "".join(d.value for d in pattern)


@dataclass(frozen=True)
class Walk:
    """A walk ``x_0..x_k`` together with the direction used for each step.

    The pattern is explicit because in a symmetric digraph the same edge can be
    read either way, and congruence compares the chosen directions.
    """

    vertices: tuple[int, ...]
    pattern: tuple[Direction, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        if isinstance(self.pattern, str):
            object.__setattr__(self, "pattern", pattern_from_string(self.pattern))
        else:
            object.__setattr__(self, "pattern", tuple(self.pattern))
        if not self.vertices:
            raise ContractError("a walk has at least one vertex")
        if len(self.pattern) != len(self.vertices) - 1:
            raise ContractError("pattern length must be one less than the vertex count")

    @classmethod
    def in_graph(cls, H: Digraph, vertices: Sequence[int], pattern) -> Walk:
        walk = cls(tuple(vertices), pattern)
        if not walk.is_valid_in(H):
            raise ContractError(f"not a walk of the digraph: {walk}")
        return walk

    @classmethod
    def trivial(cls, v: int) -> Walk:
        return cls((v,), ())

    def __len__(self) -> int:
        return len(self.pattern)

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def is_valid_in(self, H: Digraph) -> bool:
        for i, d in enumerate(self.pattern):
            a, b = self.vertices[i], self.vertices[i + 1]
            if not (0 <= a < H.n and 0 <= b < H.n):
                return False
            if d is F and not H.adj[a, b]:
                return False
            if d is B and not H.adj[b, a]:
                return False
        return 0 <= self.vertices[0] < H.n

    def __str__(self) -> str:
        out = [str(self.vertices[0])]
        for d, v in zip(self.pattern, self.vertices[1:]):
            out.append("->" if d is F else "<-")
            out.append(str(v))
        return "".join(out)


def congruent(P: Walk, Q: Walk) -> bool:
    return P.pattern == Q.pattern


def avoids(P: Walk, Q: Walk, H: Digraph) -> bool:
    """True iff P avoids Q: no step has an arc from P's i-th vertex to Q's
    (i+1)-st vertex in the direction of that step. Not symmetric in P, Q."""
    if not congruent(P, Q):
        raise ContractError("avoidance is only defined for congruent walks")
    adj = H.adj
    x, y = P.vertices, Q.vertices
    for i, d in enumerate(P.pattern):
        if d is F:
            if adj[x[i], y[i + 1]]:
                return False
        elif adj[y[i + 1], x[i]]:
            return False
    return True


def reverse_walk(P: Walk) -> Walk:
    return Walk(P.vertices[::-1], tuple(d.flipped() for d in reversed(P.pattern)))


def concat_walks(P: Walk, Q: Walk) -> Walk:
    if P.end != Q.start:
        raise ContractError(f"cannot concatenate: {P} ends at {P.end}, {Q} starts at {Q.start}")
    return Walk(P.vertices + Q.vertices[1:], P.pattern + Q.pattern)


def path_with_pattern(pattern: Sequence[Direction], offset: int = 0) -> list[tuple[int, int]]:
    """Arcs of a path ``offset, offset+1, ...`` oriented according to ``pattern``."""
    arcs = []
    for i, d in enumerate(pattern):
        a, b = offset + i, offset + i + 1
        arcs.append((a, b) if d is F else (b, a))
    return arcs


# ---------------------------------------------------------------------------
# text format


def _content_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line == "c" or line.startswith("c "):
            continue
        yield lineno, line.split()


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", lineno) from None


def parse_digraph(text: str) -> Digraph:
    """Parse ``p digraph <n> <m>`` followed by exactly m lines ``a <u> <v>``."""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("missing header 'p digraph <n> <m>'")
    lineno, head = lines[0]
    if len(head) != 4 or head[0] != "p" or head[1] != "digraph":
        raise ParseError("malformed header, expected 'p digraph <n> <m>'", lineno)
    n, m = _int(head[2], lineno), _int(head[3], lineno)
    if n < 0 or m < 0:
        raise ParseError("negative size in header", lineno)
    arcs = []
    for lineno, tok in lines[1:]:
        if tok[0] != "a" or len(tok) != 3:
            raise ParseError(f"expected 'a <u> <v>', got {' '.join(tok)!r}", lineno)
        u, v = _int(tok[1], lineno), _int(tok[2], lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex index out of range 0..{n - 1}", lineno)
        arcs.append((u, v))
    if len(arcs) != m:
        raise ParseError(f"header declares {m} arcs but {len(arcs)} were given", lines[-1][0])
    return Digraph(n, arcs)


def serialize_digraph(H: Digraph) -> str:
    lines = [f"p digraph {H.n} {len(H.arcs)}"]
    lines += [f"a {u} {v}" for u, v in H.sorted_arcs()]
    return "\n".join(lines) + "\n"


def read_digraph(path) -> Digraph:
    with open(path) as fh:
        return parse_digraph(fh.read())


# ---------------------------------------------------------------------------
# small families used throughout tests and examples


def directed_cycle(n: int) -> Digraph:
    return Digraph(n, ((i, (i + 1) % n) for i in range(n)))


def undirected(n: int, edges: Iterable[tuple[int, int]], loops: bool = False) -> Digraph:
    arcs = set()
    for u, v in edges:
        arcs.add((u, v))
        arcs.add((v, u))
    if loops:
        arcs.update((i, i) for i in range(n))
    return Digraph(n, arcs)


def reflexive_cycle(n: int) -> Digraph:
    return undirected(n, ((i, (i + 1) % n) for i in range(n)), loops=True)


def reflexive_path(n: int) -> Digraph:
    return undirected(n, ((i, i + 1) for i in range(n - 1)), loops=True)


def complete_graph(n: int) -> Digraph:
    return undirected(n, itertools.combinations(range(n), 2))


def transitive_tournament(n: int) -> Digraph:
    return Digraph(n, itertools.combinations(range(n), 2))


def digraph_from_index(n: int, index: int) -> Digraph:
    """Bit ``i`` of ``index`` is the arc ``(i // n, i % n)``."""
    return Digraph(n, ((i // n, i % n) for i in range(n * n) if index >> i & 1))


def all_digraphs(n: int) -> Iterator[Digraph]:
    """All 2**(n*n) labelled digraphs (loops allowed) in index order."""
    for index in range(1 << (n * n)):
        yield digraph_from_index(n, index)


def random_digraph(n: int, density: float, rng: np.random.Generator) -> Digraph:
    return Digraph.from_adjacency(rng.random((n, n)) < density)

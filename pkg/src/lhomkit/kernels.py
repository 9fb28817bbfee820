"""Hot loops over the triple digraph H++ and over arc tuples.

Every kernel exists twice: a numba ``@njit`` version (``*_numba``) and a pure
numpy version (``*_numpy``). The public names bind to one of them according to
``lhomkit._accel.USE_NUMBA``; both are importable so tests can compare them.

Triple states are flattened as ``(u * n + v) * n + w``. An arc
``(u,v,w) -> (u',v',w')`` of H++ exists when either

* ``uu', vv', ww'`` are arcs and ``uv'``, ``uw'`` are not (sign +1), or
* ``u'u, v'v, w'w`` are arcs and ``v'u``, ``w'u`` are not (sign -1).
"""

import numpy as np

from ._accel import USE_NUMBA, njit


def triple_index(n, u, v, w):
    return (u * n + v) * n + w


def triple_unindex(n, s):
    return s // (n * n), (s // n) % n, s % n


# ---------------------------------------------------------------------------
# backward closure: which states can reach the target set


@njit
def _closure_numba(adj, target):
    n = adj.shape[0]
    total = n * n * n
    seen = target.copy()
    queue = np.empty(total, np.int64)
    tail = 0
    for s in range(total):
        if seen[s]:
            queue[tail] = s
            tail += 1
    head = 0
    while head < tail:
        s = queue[head]
        head += 1
        u2 = s // (n * n)
        v2 = (s // n) % n
        w2 = s % n
        for u in range(n):
            if adj[u, u2] and not adj[u, v2] and not adj[u, w2]:
                for v in range(n):
                    if adj[v, v2]:
                        for w in range(n):
                            if adj[w, w2]:
                                p = (u * n + v) * n + w
                                if not seen[p]:
                                    seen[p] = True
                                    queue[tail] = p
                                    tail += 1
        for u in range(n):
            if adj[u2, u] and not adj[v2, u] and not adj[w2, u]:
                for v in range(n):
                    if adj[v2, v]:
                        for w in range(n):
                            if adj[w2, w]:
                                p = (u * n + v) * n + w
                                if not seen[p]:
                                    seen[p] = True
                                    queue[tail] = p
                                    tail += 1
    return seen


def _forward_predecessors(adj, reach):
    # pred[u,v,w] = OR_{u'} adj[u,u'] * OR_{v',w'} M_u[v,v'] M_u[w,w'] reach[u',v',w']
    # with M_u = adj & ~adj[u] (column mask).
    n = adj.shape[0]
    a = adj.astype(np.float64)
    r = reach.astype(np.float64)
    out = np.zeros((n, n, n), dtype=bool)
    for u in range(n):
        m = a * (~adj[u])[None, :]
        t = m @ r @ m.T  # (n_u', n_v, n_w)
        out[u] = np.tensordot(a[u], t, axes=(0, 0)) > 0
    return out


def _closure_numpy(adj, target):
    n = adj.shape[0]
    reach = target.reshape(n, n, n).copy()
    adj_t = np.ascontiguousarray(adj.T)
    while True:
        grown = reach | _forward_predecessors(adj, reach) | _forward_predecessors(adj_t, reach)
        if (grown == reach).all():
            return reach.reshape(-1)
        reach = grown


# ---------------------------------------------------------------------------
# forward BFS from one state, recording parents and arc signs


@njit
def _bfs_numba(adj, start):
    n = adj.shape[0]
    total = n * n * n
    parent = np.full(total, -1, np.int64)
    sign = np.zeros(total, np.int8)
    queue = np.empty(total, np.int64)
    parent[start] = start
    queue[0] = start
    head = 0
    tail = 1
    while head < tail:
        s = queue[head]
        head += 1
        u = s // (n * n)
        v = (s // n) % n
        w = s % n
        for u2 in range(n):
            if adj[u, u2]:
                for v2 in range(n):
                    if adj[v, v2] and not adj[u, v2]:
                        for w2 in range(n):
                            if adj[w, w2] and not adj[u, w2]:
                                t = (u2 * n + v2) * n + w2
                                if parent[t] == -1:
                                    parent[t] = s
                                    sign[t] = 1
                                    queue[tail] = t
                                    tail += 1
        for u2 in range(n):
            if adj[u2, u]:
                for v2 in range(n):
                    if adj[v2, v] and not adj[v2, u]:
                        for w2 in range(n):
                            if adj[w2, w] and not adj[w2, u]:
                                t = (u2 * n + v2) * n + w2
                                if parent[t] == -1:
                                    parent[t] = s
                                    sign[t] = -1
                                    queue[tail] = t
                                    tail += 1
    return parent, sign


def _successor_masks(adj, s):
    n = adj.shape[0]
    u, v, w = triple_unindex(n, s)
    not_u_out = ~adj[u]
    fwd = adj[u][:, None, None] & (adj[v] & not_u_out)[None, :, None] & (adj[w] & not_u_out)[None, None, :]
    not_u_in = ~adj[:, u]
    bwd = adj[:, u][:, None, None] & (adj[:, v] & not_u_in)[None, :, None] & (adj[:, w] & not_u_in)[None, None, :]
    return fwd.reshape(-1), bwd.reshape(-1)


def _bfs_numpy(adj, start):
    n = adj.shape[0]
    total = n * n * n
    parent = np.full(total, -1, np.int64)
    sign = np.zeros(total, np.int8)
    parent[start] = start
    queue = [start]
    head = 0
    while head < len(queue):
        s = queue[head]
        head += 1
        fwd, bwd = _successor_masks(adj, s)
        for mask, mark in ((fwd, 1), (bwd, -1)):
            fresh = np.flatnonzero(mask & (parent == -1))
            parent[fresh] = s
            sign[fresh] = mark
            queue.extend(int(t) for t in fresh)
    return parent, sign


# ---------------------------------------------------------------------------
# ternary polymorphism check over all arc triples


@njit
def _ternary_counterexample_numba(adj, table, arcs):
    m = arcs.shape[0]
    for i in range(m):
        for j in range(m):
            for k in range(m):
                a = table[arcs[i, 0], arcs[j, 0], arcs[k, 0]]
                b = table[arcs[i, 1], arcs[j, 1], arcs[k, 1]]
                if not adj[a, b]:
                    return i, j, k
    return -1, -1, -1


def _ternary_counterexample_numpy(adj, table, arcs):
    m = arcs.shape[0]
    tails, heads = arcs[:, 0], arcs[:, 1]
    for i in range(m):
        a = table[tails[i]][tails[:, None], tails[None, :]]
        b = table[heads[i]][heads[:, None], heads[None, :]]
        bad = np.argwhere(~adj[a, b])
        if len(bad):
            return i, int(bad[0][0]), int(bad[0][1])
    return -1, -1, -1


if USE_NUMBA:
    triple_closure = _closure_numba
    triple_bfs = _bfs_numba
    ternary_counterexample = _ternary_counterexample_numba
else:
    triple_closure = _closure_numpy
    triple_bfs = _bfs_numpy
    ternary_counterexample = _ternary_counterexample_numpy

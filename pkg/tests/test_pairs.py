import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings

from corpus import ARC, C3, RC4, digraph_strategy
from lhomkit import oracle
from lhomkit.digraph import Digraph, all_digraphs, avoids, congruent, random_digraph
from lhomkit.errors import ContractError
from lhomkit.pairs import (
    PairGraph,
    Sign,
    component_symmetric,
    is_invertible,
    lift_to_h_walks,
    pair_walk,
    tarjan_scc,
)


def _brute_arcs(H):
    E = H.arcs
    n = H.n
    out = set()
    for u, v, u2, v2 in itertools.product(range(n), repeat=4):
        if (u, u2) in E and (v, v2) in E and (u, v2) not in E:
            out.add(((u, v), (u2, v2), Sign.PLUS))
        if (u2, u) in E and (v2, v) in E and (v2, u) not in E:
            out.add(((u, v), (u2, v2), Sign.MINUS))
    return out


@settings(max_examples=80, deadline=None)
@given(digraph_strategy(4))
def test_arcs_match_definition(H):
    PG = PairGraph(H)
    assert set(PG.arc_list()) == _brute_arcs(H)


@settings(max_examples=80, deadline=None)
@given(digraph_strategy(4))
def test_skew_symmetry_flips_sign(H):
    PG = PairGraph(H)
    flip = {Sign.PLUS: Sign.MINUS, Sign.MINUS: Sign.PLUS}
    arcs = set(PG.arc_list())
    for (u, v), (u2, v2), s in arcs:
        assert ((v2, u2), (v, u), flip[s]) in arcs


def test_skew_symmetry_does_not_preserve_sign():
    # C3: (0,1) -> (1,2) is a + arc, but its mirror (2,1) -> (1,0) is only a - arc
    PG = PairGraph(C3)
    assert PG.arc_signs((0, 1), (1, 2)) == [Sign.PLUS]
    assert PG.arc_signs((2, 1), (1, 0)) == [Sign.MINUS]


@settings(max_examples=80, deadline=None)
@given(digraph_strategy(4))
def test_diagonal_pairs_isolated(H):
    PG = PairGraph(H)
    for u in range(H.n):
        i = PG.index((u, u))
        assert not PG.arcs[i].any() and not PG.arcs[:, i].any()
        c = PG.component_of((u, u))
        assert PG.diagonal[c] and not PG.special[c] and not PG.co_special[c] and not PG.self_coupled[c]


@settings(max_examples=80, deadline=None)
@given(digraph_strategy(4))
def test_component_flags(H):
    PG = PairGraph(H)
    for c in range(PG.n_components):
        assert PG.self_coupled[c] == (PG.special[c] and PG.co_special[c])
        assert PG.coupling[PG.coupling[c]] == c
    for c2, c1 in itertools.product(range(PG.n_components), repeat=2):
        if PG.reaches(c2, c1):
            if PG.special[c1] and not PG.diagonal[c2]:
                assert PG.special[c2]
            if PG.co_special[c2] and not PG.diagonal[c1]:
                assert PG.co_special[c1]


@settings(max_examples=80, deadline=None)
@given(digraph_strategy(4))
def test_invertibility_constant_on_components(H):
    PG = PairGraph(H)
    for c in range(PG.n_components):
        flags = {PG._invertible(u, v) for u, v in PG.component_pairs(c) if u != v}
        assert len(flags) <= 1


@settings(max_examples=50, deadline=None)
@given(digraph_strategy(5))
def test_tarjan_matches_networkx(H):
    PG = PairGraph(H)
    G = nx.DiGraph()
    G.add_nodes_from(range(H.n**2))
    G.add_edges_from(zip(*np.nonzero(PG.arcs)))
    ours = {frozenset(m) for m in PG.members}
    theirs = {frozenset(int(x) for x in c) for c in nx.strongly_connected_components(G)}
    assert ours == theirs
    # ids are a reverse topological order of the condensation
    assert all(a > b for a, b in PG.condensation)


def test_tarjan_small():
    comp = tarjan_scc([[1], [2], [0, 3], []])
    assert comp[0] == comp[1] == comp[2] != comp[3]
    assert comp[3] < comp[0]


def test_single_arc_pair_graph():
    PG = PairGraph(ARC)
    assert PG.n**2 == 4 and not PG.arcs.any()
    assert PG.n_components == 4
    assert not any(PG.special)
    assert pair_walk(PG, (0, 1), (1, 0)) is None


def test_c3_components():
    PG = PairGraph(C3)
    a = {PG.component_of(p) for p in [(0, 1), (1, 2), (2, 0)]}
    b = {PG.component_of(p) for p in [(1, 0), (2, 1), (0, 2)]}
    assert len(a) == 1 and len(b) == 1 and a != b
    (ca,), (cb,) = a, b
    assert PG.coupling[ca] == cb and PG.coupling[cb] == ca
    assert not PG.self_coupled[ca] and not PG.self_coupled[cb]
    # every + arc inside the component has a - arc in the opposite direction
    assert PG.arc_signs((0, 1), (1, 2)) == [Sign.PLUS]
    assert PG.arc_signs((1, 2), (0, 1)) == [Sign.MINUS]
    assert component_symmetric(PG, ca) and component_symmetric(PG, cb)
    assert not is_invertible(PG, 0, 1)


def test_rc4_invertible():
    PG = PairGraph(RC4)
    assert is_invertible(PG, 0, 1)
    assert oracle.definitional_invertible(RC4, 0, 1)


def test_invertible_requires_distinct():
    with pytest.raises(ContractError):
        is_invertible(PairGraph(C3), 1, 1)


def test_invertible_matches_definitional_oracle_n3():
    for H in all_digraphs(3):
        PG = PairGraph(H)
        for u, v in itertools.permutations(range(3), 2):
            assert is_invertible(PG, u, v) == oracle.definitional_invertible(H, u, v)
            assert is_invertible(PG, u, v) == is_invertible(PG, v, u)


def test_invertible_matches_definitional_oracle_n4_sample():
    rng = np.random.default_rng(11)
    for _ in range(300):
        H = random_digraph(4, rng.choice([0.3, 0.5, 0.7]), rng)
        PG = PairGraph(H)
        for u, v in itertools.permutations(range(4), 2):
            assert is_invertible(PG, u, v) == oracle.definitional_invertible(H, u, v)


def test_component_symmetric_examples():
    PG = PairGraph(Digraph(2, []))
    assert all(component_symmetric(PG, c) for c in range(PG.n_components))
    found = False
    for H in all_digraphs(3):
        if not H.is_symmetric():
            continue
        PG = PairGraph(H)
        for c in range(PG.n_components):
            if PG.has_internal_arc[c] and component_symmetric(PG, c):
                # every internal arc has its reversal
                for p in PG.members[c]:
                    for q in PG.successors[p]:
                        if PG.scc[q] == c:
                            assert PG.arcs[q, p]
                found = True
    assert found


def test_pair_walk_examples():
    PG = PairGraph(C3)
    assert pair_walk(PG, (0, 1), (0, 1)) == ([(0, 1)], [])
    pairs, signs = pair_walk(PG, (0, 1), (1, 2))
    assert pairs == [(0, 1), (1, 2)] and signs == [Sign.PLUS]
    P, Q = lift_to_h_walks(PG, pairs, signs)
    assert P.vertices == (0, 1) and Q.vertices == (1, 2) and avoids(P, Q, C3)
    P0, Q0 = lift_to_h_walks(PG, [(0, 2)], [])
    assert len(P0) == len(Q0) == 0 and P0.start == 0 and Q0.start == 2


def test_lift_rejects_non_arcs():
    with pytest.raises(ContractError):
        lift_to_h_walks(PairGraph(C3), [(0, 1), (1, 0)], [Sign.PLUS])


@settings(max_examples=60, deadline=None)
@given(digraph_strategy(4))
def test_lifted_walks_avoid(H):
    PG = PairGraph(H)
    n = H.n
    for a in range(0, n * n, 3):
        for b in range(0, n * n, 5):
            res = pair_walk(PG, PG.pair(a), PG.pair(b))
            if res is None:
                assert not PG.reaches(PG.scc[a], PG.scc[b])
                continue
            P, Q = lift_to_h_walks(PG, *res)
            assert P.is_valid_in(H) and Q.is_valid_in(H)
            assert congruent(P, Q) and avoids(P, Q, H)


def test_dump_is_stable():
    text = PairGraph(C3).dump()
    assert text == PairGraph(C3).dump()
    assert text.count("\n") == PairGraph(C3).n_components

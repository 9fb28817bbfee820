import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import ARC, C3, RC4, digraph_strategy
from lhomkit import oracle
from lhomkit.digraph import Digraph, complete_graph, random_digraph, serialize_digraph
from lhomkit.errors import ContractError, ParseError, RefusalError
from lhomkit.polymorphisms import TernaryTable, build_majority_mu, find_min_ordering
from lhomkit.solver import (
    LhomInstance,
    Method,
    arc_consistency,
    classify_and_solve,
    format_solution,
    is_list_homomorphism,
    parse_instance,
    serialize_instance,
    solve_backtracking,
    solve_with_majority,
    solve_with_min_ordering,
)


def _c3_text():
    return "p lhom 2 1\na 0 1\n" + "".join("h " + line + "\n" for line in serialize_digraph(C3).splitlines())


def test_parse_instance_defaults():
    inst = parse_instance(_c3_text())
    assert inst.G.arcs == {(0, 1)} and inst.H == C3
    assert inst.lists == (frozenset({0, 1, 2}),) * 2


def test_parse_instance_errors():
    with pytest.raises(ParseError):
        parse_instance(_c3_text() + "l 0\n")
    with pytest.raises(ParseError):
        parse_instance(_c3_text() + "l 0 7\n")
    with pytest.raises(ParseError):
        parse_instance("p lhom 2 2\na 0 1\n")
    with pytest.raises(ParseError):
        parse_instance("p lhom 1 0\n")


def test_parse_instance_target_path(tmp_path):
    (tmp_path / "h.txt").write_text(serialize_digraph(C3))
    inst = parse_instance("p lhom 1 0\nt h.txt\nl 0 2\n", base_dir=str(tmp_path))
    assert inst.H == C3 and inst.lists == (frozenset({2}),)


@settings(max_examples=50, deadline=None)
@given(digraph_strategy(4), digraph_strategy(4), st.data())
def test_instance_round_trip(G, H, data):
    lists = tuple(
        frozenset(data.draw(st.sets(st.integers(0, H.n - 1), min_size=1))) for _ in range(G.n)
    )
    inst = LhomInstance(G, H, lists)
    text = serialize_instance(inst)
    assert parse_instance(text) == inst
    assert serialize_instance(parse_instance(text)) == text


def test_instance_validates_lists():
    with pytest.raises(ContractError):
        LhomInstance(Digraph(1, []), C3, (frozenset(),))
    with pytest.raises(ContractError):
        LhomInstance(Digraph(1, []), C3, (frozenset({5}),))


def test_arc_consistency_examples():
    inst = LhomInstance.full_lists(Digraph(2, [(0, 1)]), ARC)
    assert arc_consistency(inst) == [frozenset({0}), frozenset({1})]
    inst = LhomInstance.full_lists(C3, C3)
    assert arc_consistency(inst) == [frozenset(range(3))] * 3
    inst = LhomInstance(Digraph(2, [(0, 1)]), ARC, (frozenset({1}), frozenset({0})))
    assert arc_consistency(inst) is None


def _micro_instances(count, seed, max_g=4, max_h=3):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        G = random_digraph(int(rng.integers(1, max_g + 1)), 0.35, rng)
        H = random_digraph(int(rng.integers(1, max_h + 1)), 0.5, rng)
        lists = []
        for _ in range(G.n):
            mask = rng.random(H.n) < 0.7
            mask[rng.integers(H.n)] = True
            lists.append(frozenset(int(i) for i in np.flatnonzero(mask)))
        out.append(LhomInstance(G, H, tuple(lists)))
    return out


def test_arc_consistency_is_sound_monotone_idempotent():
    for inst in _micro_instances(300, 1):
        sols = list(oracle.enumerate_homomorphisms(inst.G, inst.H, inst.lists))
        red = arc_consistency(inst)
        if red is None:
            assert not sols
            continue
        assert all(r <= l for r, l in zip(red, inst.lists))
        assert arc_consistency(inst.with_lists(red)) == red
        for s in sols:
            assert all(s[v] in red[v] for v in range(inst.G.n))


def test_backtracking_matches_enumeration():
    for inst in _micro_instances(400, 2):
        sols = list(oracle.enumerate_homomorphisms(inst.G, inst.H, inst.lists))
        res = solve_backtracking(inst)
        assert (res is not None) == bool(sols)
        if res is not None:
            assert is_list_homomorphism(inst, res)


def test_backtracking_examples():
    inst = LhomInstance(Digraph(1, []), C3, (frozenset({0}),))
    assert solve_backtracking(inst) == (0,)
    K3, K4 = complete_graph(3), complete_graph(4)
    res = solve_backtracking(LhomInstance.full_lists(K3, K3))
    assert res is not None and len(set(res)) == 3
    assert solve_backtracking(LhomInstance.full_lists(K4, K3)) is None


def test_min_ordering_solver():
    order = find_min_ordering(ARC)
    for inst in _micro_instances(200, 3, max_h=2):
        H2 = ARC
        inst = LhomInstance(inst.G, H2, tuple(frozenset(x for x in l if x < 2) or frozenset({0}) for l in inst.lists))
        res = solve_with_min_ordering(inst, order)
        assert (res is not None) == (solve_backtracking(inst) is not None)
        if res is not None:
            assert is_list_homomorphism(inst, res)
    empty = LhomInstance(Digraph(2, [(0, 1)]), ARC, (frozenset({1}), frozenset({0})))
    assert solve_with_min_ordering(empty, order) is None
    with pytest.raises(RefusalError):
        solve_with_min_ordering(LhomInstance.full_lists(C3, C3), [0, 1, 2])


def test_majority_solver_examples():
    mu = build_majority_mu(C3)
    G = Digraph(3, [(0, 1), (1, 2)])
    ok = LhomInstance(G, C3, (frozenset({0}), frozenset({1}), frozenset({2})))
    assert solve_with_majority(ok, mu) == (0, 1, 2)
    bad = LhomInstance(G, C3, (frozenset({0}), frozenset({2}), frozenset({2})))
    assert solve_with_majority(bad, mu) is None


def test_majority_solver_requires_majority():
    g = TernaryTable.from_function(3, lambda x, y, z: x)
    with pytest.raises(RefusalError):
        solve_with_majority(LhomInstance.full_lists(C3, C3), g)


def test_majority_solver_matches_oracle_over_c3():
    mu = build_majority_mu(C3)
    rng = np.random.default_rng(4)
    for _ in range(200):
        G = random_digraph(int(rng.integers(1, 8)), 0.3, rng)
        lists = tuple(
            frozenset(int(i) for i in rng.choice(3, size=int(rng.integers(1, 4)), replace=False)) for _ in range(G.n)
        )
        inst = LhomInstance(G, C3, lists)
        res = solve_with_majority(inst, mu)
        assert (res is not None) == (solve_backtracking(inst) is not None)
        if res is not None:
            assert is_list_homomorphism(inst, res)


def test_classify_and_solve_methods():
    G = Digraph(2, [(0, 1)])
    rep = classify_and_solve(C3, LhomInstance.full_lists(G, C3))
    assert rep.verdict == "DAT-FREE" and rep.method is Method.MAJORITY and rep.assignment is not None
    rep = classify_and_solve(RC4, LhomInstance.full_lists(G, RC4))
    assert rep.verdict == "DAT" and rep.witness is not None and rep.method is Method.ORACLE
    assert rep.note
    rep = classify_and_solve(ARC, LhomInstance.full_lists(G, ARC))
    assert rep.verdict == "DAT-FREE" and rep.method is Method.MIN_ORDERING


def test_format_solution():
    assert format_solution(None) == "s NO\n"
    assert format_solution((2, 0)) == "s YES\nm 0 2\nm 1 0\n"

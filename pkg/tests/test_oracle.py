import itertools

import pytest

from corpus import C3, RC4
from lhomkit import oracle
from lhomkit.digraph import Digraph, all_digraphs, complete_graph
from lhomkit.errors import ContractError
from lhomkit.polymorphisms import BinaryTable, verify_polymorphism

# computed once by exhaustive enumeration and locked as a regression value
C3_CONSERVATIVE_BINARY_COUNT = 4


def test_no_arcs_every_table_qualifies():
    for n in (2, 3):
        assert oracle.count_conservative_binary(Digraph(n, [])) == 2 ** (n * n - n)


def test_two_cycle_projections_only():
    H = Digraph(2, [(0, 1), (1, 0)])
    tables = list(oracle.enumerate_conservative_binary(H))
    as_sets = [{k: v for k, v in t.items()} for t in tables]
    proj_x = {(x, y): x for x in range(2) for y in range(2)}
    proj_y = {(x, y): y for x in range(2) for y in range(2)}
    mn = {(x, y): min(x, y) for x in range(2) for y in range(2)}
    assert proj_x in as_sets and proj_y in as_sets and mn not in as_sets


def test_c3_count_regression():
    assert oracle.count_conservative_binary(C3) == C3_CONSERVATIVE_BINARY_COUNT


def test_enumeration_matches_checker():
    for H in itertools.islice(all_digraphs(3), 0, 512, 7):
        found = {tuple(sorted(t.items())) for t in oracle.enumerate_conservative_binary(H)}
        expected = set()
        off = [(x, y) for x in range(3) for y in range(3) if x != y]
        for bits in itertools.product((0, 1), repeat=6):
            vals = {p: p[b] for p, b in zip(off, bits)}
            f = BinaryTable.from_function(3, lambda a, b: vals.get((a, b), a))
            if verify_polymorphism(H, f):
                expected.add(tuple(sorted(((x, y), int(f(x, y))) for x in range(3) for y in range(3))))
        assert found == expected


def test_majority_examples():
    assert oracle.exists_conservative_majority(C3)
    assert not oracle.exists_conservative_majority(RC4)
    assert oracle.exists_conservative_majority(Digraph(3, []))


def test_definitional_invertible_examples():
    assert not oracle.definitional_invertible(C3, 0, 1)
    assert oracle.definitional_invertible(RC4, 0, 1)
    assert oracle.definitional_invertible(RC4, 1, 0)
    with pytest.raises(ContractError):
        oracle.definitional_invertible(C3, 0, 1, max_len=3)
    with pytest.raises(ContractError):
        oracle.definitional_invertible(C3, 0, 0)


def test_homomorphism_enumeration():
    G = Digraph(1, [])
    H = Digraph(2, [])
    assert list(oracle.enumerate_homomorphisms(G, H, [{0, 1}])) == [(0,), (1,)]
    assert len(list(oracle.enumerate_homomorphisms(complete_graph(3), complete_graph(3)))) == 6
    assert not list(oracle.enumerate_homomorphisms(complete_graph(4), complete_graph(3)))


def test_size_guards():
    with pytest.raises(oracle.SizeGuardError):
        oracle.count_conservative_binary(Digraph(6, []))
    with pytest.raises(oracle.SizeGuardError):
        oracle.exists_conservative_majority(Digraph(5, []))
    with pytest.raises(oracle.SizeGuardError):
        next(oracle.enumerate_homomorphisms(Digraph(15, []), Digraph(4, [])))


def test_three_colorable():
    assert oracle.is_three_colorable(complete_graph(3))
    assert not oracle.is_three_colorable(complete_graph(4))

import dataclasses
import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from corpus import ARC, C3, RC4, RP3, digraph_strategy
from lhomkit import oracle
from lhomkit.digraph import Digraph, Walk, all_digraphs, random_digraph
from lhomkit.errors import ContractError
from lhomkit.pairs import PairGraph, Sign
from lhomkit.triples import (
    TripleGraph,
    dat_mask,
    find_dat,
    find_permutable_triple,
    is_dat,
    is_permutable_triple,
    permutable_mask,
    verify_dat_witness,
)


def _brute_triple_arcs(H, a):
    E = H.arcs
    u, v, w = a
    out = set()
    for b in itertools.product(range(H.n), repeat=3):
        u2, v2, w2 = b
        if (u, u2) in E and (v, v2) in E and (w, w2) in E and (u, v2) not in E and (u, w2) not in E:
            out.add((b, Sign.PLUS))
        if (u2, u) in E and (v2, v) in E and (w2, w) in E and (v2, u) not in E and (w2, u) not in E:
            out.add((b, Sign.MINUS))
    return out


@settings(max_examples=40, deadline=None)
@given(digraph_strategy(4))
def test_triple_arcs_match_definition(H):
    TG = TripleGraph(H)
    for a in itertools.product(range(H.n), repeat=3):
        assert set(TG.arcs_from(a)) == _brute_triple_arcs(H, a)


@settings(max_examples=40, deadline=None)
@given(digraph_strategy(4))
def test_last_two_coordinates_symmetric(H):
    TG = TripleGraph(H)
    for (u, v, w) in itertools.product(range(H.n), repeat=3):
        swapped = {((a, c, b), s) for (a, b, c), s in TG.arcs_from((u, w, v))}
        assert set(TG.arcs_from((u, v, w))) == swapped


def test_single_arc_has_no_triple_arcs():
    TG = TripleGraph(ARC)
    assert all(not TG.arcs_from(t) for t in itertools.product(range(2), repeat=3))


def test_c3_triple_arc():
    assert TripleGraph(C3).has_arc((0, 1, 2), (1, 2, 0)) == [Sign.PLUS]


def test_permutable_examples():
    assert not is_permutable_triple(TripleGraph(C3), 0, 1, 2)
    assert find_permutable_triple(TripleGraph(RC4)) is not None
    empty = TripleGraph(Digraph(3, []))
    assert not is_permutable_triple(empty, 0, 1, 2)
    with pytest.raises(ContractError):
        is_permutable_triple(empty, 0, 0, 1)


def test_dat_examples():
    for H, expected in ((RC4, True), (C3, False), (RP3, False)):
        PG = PairGraph(H)
        TG = TripleGraph(H, PG)
        hits = [t for t in itertools.permutations(range(H.n), 3) if is_dat(PG, TG, *t)]
        assert bool(hits) == expected
        assert oracle.has_dat(H) == expected
    assert find_dat(ARC) is None and find_dat(C3) is None


def test_rc4_witness_verifies():
    W = find_dat(RC4)
    assert W.triple == (0, 1, 2)
    assert verify_dat_witness(RC4, W)
    assert W.serialize() == find_dat(RC4).serialize()


def _break_first_lead(W, **changes):
    lead = dataclasses.replace(W.leads[0], **changes)
    return dataclasses.replace(W, leads=(lead,) + W.leads[1:])


def test_broken_avoidance_rejected():
    W = find_dat(RC4)
    P, Y, Z = W.leads[0].walks
    # replace the lead walk by the second walk: congruent but never avoiding itself
    bad = _break_first_lead(W, walks=(Y, Y, Z))
    assert not verify_dat_witness(RC4, bad)


def test_non_invertible_target_rejected():
    # digraph with a DAT plus a target swapped for a pair lacking invertibility walks
    W = find_dat(RC4)
    c = W.leads[0]
    trivial = (Walk.trivial(c.s), Walk.trivial(c.b))
    bad = _break_first_lead(W, inv_forward=trivial)
    assert not verify_dat_witness(RC4, bad)
    bad2 = _break_first_lead(W, s=c.b)
    assert not verify_dat_witness(RC4, bad2)


@settings(max_examples=60, deadline=None)
@given(digraph_strategy(4))
def test_is_dat_permutation_invariant(H):
    PG = PairGraph(H)
    TG = TripleGraph(H, PG)
    for t in itertools.combinations(range(H.n), 3):
        vals = {is_dat(PG, TG, *p) for p in itertools.permutations(t)}
        assert len(vals) == 1


def _check_routes(H):
    PG = PairGraph(H)
    TG = TripleGraph(H, PG)
    lazy_dat = np.zeros((H.n,) * 3, dtype=bool)
    lazy_perm = np.zeros((H.n,) * 3, dtype=bool)
    for t in itertools.permutations(range(H.n), 3):
        lazy_dat[t] = is_dat(PG, TG, *t)
        lazy_perm[t] = is_permutable_triple(TG, *t)
    assert np.array_equal(lazy_dat, dat_mask(TG))
    assert np.array_equal(lazy_perm, permutable_mask(TG))
    W = find_dat(H, PG, TG)
    assert (W is None) == (not lazy_dat.any())
    if W is not None:
        assert verify_dat_witness(H, W, PG)
    return W, lazy_perm.any()


def test_dat_routes_agree_n3_exhaustive():
    for H in all_digraphs(3):
        W, perm = _check_routes(H)
        assert (W is not None) == oracle.has_dat(H)
        assert perm == oracle.has_permutable_triple(H)


def test_dat_routes_agree_n4_sample():
    rng = np.random.default_rng(5)
    for i in range(60):
        H = random_digraph(4, (0.3, 0.5, 0.7)[i % 3], rng)
        W, perm = _check_routes(H)
        assert (W is not None) == oracle.has_dat(H)
        assert perm == oracle.has_permutable_triple(H)


def test_witness_to_dict():
    d = find_dat(RC4).to_dict()
    assert d["triple"] == [0, 1, 2] and len(d["leads"]) == 3

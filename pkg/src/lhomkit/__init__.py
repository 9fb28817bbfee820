"""Decide LHOM(H) via digraph asteroidal triples, synthesize conservative
polymorphisms for the tractable side, and build hardness gadgets otherwise."""

from ._accel import backend
from .digraph import Digraph, Walk, avoids, congruent, parse_digraph, read_digraph, serialize_digraph
from .errors import ContractError, LhomError, ParseError, RefusalError, VerificationError
from .gadgets import (
    build_chooser_single,
    build_chooser_square,
    build_dat_context,
    build_q_gadget,
    endpoint_behavior,
    reduce_3col,
)
from .pairs import PairGraph, build_pair_graph, is_invertible
from .polymorphisms import (
    BinaryTable,
    TernaryTable,
    build_binary_f,
    build_majority_mu,
    build_ternary_g,
    find_min_ordering,
    verify_polymorphism,
)
from .solver import LhomInstance, classify_and_solve, solve_backtracking, solve_with_majority, solve_with_min_ordering
from .triples import TripleGraph, build_triple_graph, find_dat, is_dat, verify_dat_witness

__version__ = "0.1.0"

"""Shared test corpora and named digraphs."""

import itertools

import numpy as np

from lhomkit.digraph import Digraph, all_digraphs, directed_cycle, random_digraph, reflexive_cycle, reflexive_path

SEED = 20240611
SIZES = (4, 5, 6)
DENSITIES = (0.2, 0.5, 0.8)

C3 = directed_cycle(3)
RC4 = reflexive_cycle(4)
RP3 = reflexive_path(3)
ARC = Digraph(2, [(0, 1)])

# first digraphs (by index order) whose DAT lies in a non-symmetric, resp.
# symmetric, strong component of H+; found by exhaustive search over n <= 4
NONSYM_DAT_INDEX = (3, 102)
SYM_DAT_INDEX = (4, 458)


def micro_universe():
    return list(all_digraphs(3))


def random_corpus(count=1000, seed=SEED):
    rng = np.random.default_rng(seed)
    combos = itertools.cycle(itertools.product(SIZES, DENSITIES))
    return [random_digraph(n, d, rng) for n, d in itertools.islice(combos, count)]


def digraph_strategy(max_n=4):
    from hypothesis import strategies as st

    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        cells = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
        return Digraph(n, [(i // n, i % n) for i, c in enumerate(cells) if c])

    return build()

"""Property-based checks over seeded random diagrams."""

import random

from hypothesis import given, settings, strategies as st

from linkforge.coloring import Tricoloring, enumerate_tricolorings, validate_tricoloring
from linkforge.diagram import mirror, parse_kld, serialize_kld, untangled_union, validate_diagram
from linkforge.generate import random_tricolored
from linkforge.moves import applicable_moves, apply_move
from linkforge.oracle import canonical_form
from linkforge.reduce import classify, state_sum

seeds = st.integers(min_value=0, max_value=2 ** 64 - 1)
SETTINGS = settings(max_examples=40, deadline=None)


@SETTINGS
@given(seeds)
def test_kld_round_trip(seed):
    d, _ = random_tricolored(10, seed)
    assert validate_diagram(d) is None
    assert parse_kld(serialize_kld(d))[0] == d


@SETTINGS
@given(seeds)
def test_generated_colorings_valid(seed):
    d, t = random_tricolored(10, seed)
    assert validate_tricoloring(d, t) is None


@SETTINGS
@given(seeds, st.integers(0, 10 ** 6))
def test_single_move_preserves_everything(seed, pick):
    d, t = random_tricolored(8, seed)
    p = t.to_gcoloring()
    moves = applicable_moves(d, p)
    m = moves[pick % len(moves)]
    d2, p2 = apply_move(d, p, m)
    assert validate_diagram(d2) is None
    assert classify(d2, p2).i == classify(d, t).i
    if m.kind != "Saddle":
        assert len(enumerate_tricolorings(d2)) == len(enumerate_tricolorings(d))


@SETTINGS
@given(seeds)
def test_mirror_negates(seed):
    d, t = random_tricolored(10, seed)
    m = mirror(d)
    assert validate_tricoloring(m, t) is None
    assert (classify(d, t).i + classify(m, t).i) % 3 == 0
    assert len(enumerate_tricolorings(m)) == len(enumerate_tricolorings(d))


@SETTINGS
@given(seeds, seeds)
def test_union_adds(s1, s2):
    a, ta = random_tricolored(7, s1)
    b, tb = random_tricolored(7, s2)
    u = untangled_union(a, b)
    tu = Tricoloring(ta.colors + tb.colors)
    assert classify(u, tu).i == (classify(a, ta).i + classify(b, tb).i) % 3


@SETTINGS
@given(seeds, st.integers(0, 2))
def test_color_permutation_invariance(seed, shift):
    d, t = random_tricolored(10, seed)
    rotated = Tricoloring(tuple((c + shift) % 3 for c in t.colors))
    swapped = Tricoloring(tuple((-c) % 3 for c in t.colors))
    i = state_sum(d, t)
    assert state_sum(d, rotated) == i == state_sum(d, swapped)


@SETTINGS
@given(seeds)
def test_canonical_form_ignores_crossing_order(seed):
    d, t = random_tricolored(9, seed)
    order = list(range(d.n_crossings))
    random.Random(seed).shuffle(order)
    shuffled = type(d)(tuple(d.crossings[i] for i in order), d.loops)
    # reordering can flip the read direction of an all-over two-arc component
    same = shuffled.over_in == tuple(d.over_in[i] for i in order)
    if validate_diagram(shuffled) is None and same:
        assert canonical_form(shuffled, t) == canonical_form(d, t)

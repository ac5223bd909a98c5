import random

import pytest

from linkforge.catalog import builtin_diagram
from linkforge.coloring import Tricoloring, enumerate_tricolorings, monochromatic, nontrivial_tricoloring
from linkforge.diagram import mirror, untangled_union
from linkforge.errors import BadDegree, InvalidInput, NotInnermost, ResourceBound
from linkforge.generate import braid_closure, random_tricolored
from linkforge.reduce import (TrefoilLedger, clasp_normalize, classify, eliminate_innermost,
                              reduce_innermost_degree, replay_trace, run_engine, seifert_circles,
                              state_sum)


def nontrivial(name):
    d = builtin_diagram(name)
    return d, nontrivial_tricoloring(d)


def test_unknot_normalizes_to_one_free_loop():
    d = builtin_diagram("unknot")
    g, ledger, _ = clasp_normalize(d, monochromatic(d))
    assert list(g.loops) == [1] and g.degree(1) == 0 and not g.clasps
    assert ledger.events == []


def test_monochromatic_trefoil_splits_only_loops():
    d = builtin_diagram("trefoil_right")
    g, ledger, _ = clasp_normalize(d, monochromatic(d, 1))
    assert g.n_clasps() == 3
    assert [k for k, _ in ledger.events] == ["Loop"] * 3
    assert all(c.residual == 0 for c in g.clasps.values())


def test_nontrivial_trefoil_splits_by_sign():
    d, t = nontrivial("trefoil_right")
    _, ledger, _ = clasp_normalize(d, t)
    assert [k for k, _ in ledger.events] == ["Right"] * 3
    _, ledger, _ = clasp_normalize(mirror(d), nontrivial_tricoloring(mirror(d)))
    assert [k for k, _ in ledger.events] == ["Left"] * 3


def test_invalid_input():
    d = builtin_diagram("trefoil_right")
    with pytest.raises(InvalidInput):
        clasp_normalize(d, Tricoloring((0, 0, 1, 0, 0, 0)))


@pytest.mark.parametrize("name,cls,i", [
    ("trefoil_right", "RightTrefoil", 1),
    ("trefoil_left", "LeftTrefoil", 2),
    ("square_knot", "Trivial", 0),
    ("granny_knot", "RightTrefoil", 1),
    ("fig5a_decay_example", "Trivial", 0),
])
def test_classify_catalog(name, cls, i):
    d, t = nontrivial(name)
    r = classify(d, t)
    assert (r.cls, r.i) == (cls, i)
    assert str(r) == f"class={cls} i={i}"


@pytest.mark.parametrize("name", ["unknot", "trefoil_right", "hopf", "figure_eight", "torus_2_5"])
@pytest.mark.parametrize("color", [0, 1, 2])
def test_monochromatic_is_trivial(name, color):
    d = builtin_diagram(name)
    assert classify(d, monochromatic(d, color)).i == 0


def test_seifert_circles_partition_arcs():
    d = builtin_diagram("torus_2_5")
    circles = seifert_circles(d)
    assert len(circles) == 2 and sorted(a for c in circles for a in c) == list(d.arcs)


def test_degree_reduction():
    d = builtin_diagram("torus_2_5")
    g, _, _ = clasp_normalize(d, monochromatic(d))
    inner = g.innermost()
    assert len(inner) == 1 and g.degree(inner[0]) == 5
    outer = next(x for x in g.loops if x not in inner)
    with pytest.raises(NotInnermost):
        reduce_innermost_degree(g, outer)
    g2 = reduce_innermost_degree(g, inner[0])
    new = [x for x in g2.loops if x not in g.loops]
    assert sum(g2.degree(x) for x in new) == 5
    assert all(g2.degree(x) <= 3 for x in new)
    assert g2.n_clasps() == g.n_clasps()
    assert all(g2.parent[x] == g.parent[inner[0]] for x in new)
    with pytest.raises(BadDegree):
        eliminate_innermost(g, inner[0], TrefoilLedger())


def test_degree_reduction_on_random_instances():
    seen = 0
    for seed in range(300):
        d, t = random_tricolored(12, seed)
        g, _, _ = clasp_normalize(d, t)
        for x in g.innermost():
            k = g.degree(x)
            if k <= 3:
                continue
            seen += 1
            g2 = reduce_innermost_degree(g, x)
            new = [y for y in g2.loops if y not in g.loops]
            assert sum(g2.degree(y) for y in new) == k
            assert all(g2.degree(y) <= 3 for y in new)
    assert seen > 0


def test_low_degree_loop_unchanged():
    d = builtin_diagram("hopf")
    g, _, _ = clasp_normalize(d, monochromatic(d))
    x = g.innermost()[0]
    assert g.degree(x) == 2
    assert reduce_innermost_degree(g, x).snapshot() == g.snapshot()


def test_degree_zero_elimination():
    d = builtin_diagram("unlink2")
    g, ledger, _ = clasp_normalize(d, monochromatic(d))
    g2, ledger2 = eliminate_innermost(g, 1, ledger)
    assert list(g2.loops) == [2] and ledger2.events == ledger.events


def test_hopf_eliminates_to_nothing():
    d = builtin_diagram("hopf")
    g, ledger, _ = run_engine(d, monochromatic(d, 2))
    assert not g.loops and not g.clasps and ledger.i == 0


def test_granny_ledger():
    d, t = nontrivial("granny_knot")
    _, ledger, _ = run_engine(d, t)
    assert ledger.i == 1


def test_step_limit():
    d, t = nontrivial("square_knot")
    with pytest.raises(ResourceBound):
        classify(d, t, step_limit=1)


def test_engine_matches_state_sum_and_replays():
    for seed in range(100):
        d, t = random_tricolored(12, 500 + seed)
        r = classify(d, t)
        assert r.i == state_sum(d, t)
        g, ledger = replay_trace(d, t, r.trace)
        assert not g.loops and ledger.i == r.i


def test_replay_rejects_foreign_trace():
    d, t = nontrivial("trefoil_right")
    r = classify(d, t)
    with pytest.raises(InvalidInput):
        replay_trace(builtin_diagram("figure_eight"), monochromatic(builtin_diagram("figure_eight")),
                     r.trace)


def test_mirror_antisymmetry():
    for seed in range(60):
        d, t = random_tricolored(10, seed)
        assert (classify(d, t).i + classify(mirror(d), t).i) % 3 == 0


def test_all_trefoil_colorings_agree():
    d = builtin_diagram("trefoil_right")
    vals = {classify(d, t).i for t in enumerate_tricolorings(d) if len(set(t.colors)) > 1}
    assert vals == {1}


def test_union_additivity_small():
    r, l = nontrivial("trefoil_right"), nontrivial("trefoil_left")
    u = untangled_union(r[0], l[0])
    assert classify(u, Tricoloring(r[1].colors + l[1].colors)).i == 0
    rr = untangled_union(r[0], r[0])
    assert classify(rr, Tricoloring(r[1].colors * 2)).i == 2


def test_braid_closure_counts():
    d = braid_closure(3, [1, -2, 1, -2])
    assert d.n_crossings == 4
    assert classify(d, monochromatic(d)).i == 0

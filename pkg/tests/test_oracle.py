import pytest

from linkforge.catalog import builtin_diagram
from linkforge.coloring import Tricoloring, monochromatic, nontrivial_tricoloring
from linkforge.errors import ResourceBound
from linkforge.generate import random_tricolored
from linkforge.moves import MoveEvent, apply_move, replay
from linkforge.oracle import (NotFound, canonical_form, default_max_states, find_unlink_path,
                              is_unlink, prove_equivalent, reachable_set)
from linkforge.reduce import classify
from linkforge.diagram import LinkDiagram


def relabel_rotate(d, k):
    """Same diagram with each component's numbering rotated by k."""
    m = {}
    for comp in d.components:
        for i, a in enumerate(comp):
            m[a] = comp[(i + k) % len(comp)]
    return LinkDiagram(tuple(tuple(m[a] for a in s) for s in d.crossings), d.loops), m


def test_unknot_forms():
    d = builtin_diagram("unknot")
    assert canonical_form(d, Tricoloring((0,))) == canonical_form(d, Tricoloring((0,)))
    assert canonical_form(d, Tricoloring((0,))) != canonical_form(d, Tricoloring((1,)))


def test_trefoils_differ():
    r, l = builtin_diagram("trefoil_right"), builtin_diagram("trefoil_left")
    assert canonical_form(r, monochromatic(r)) != canonical_form(l, monochromatic(l))


def test_relabeling_invariance():
    for seed in range(40):
        d, t = random_tricolored(8, seed)
        if len(d.components) != 1 or not d.n_crossings:
            continue
        for k in (1, 2, 5):
            d2, m = relabel_rotate(d, k)
            inv = {v: a for a, v in m.items()}
            t2 = Tricoloring(tuple(t[inv[a]] for a in d2.arcs))
            assert canonical_form(d2, t2) == canonical_form(d, t)


def test_unknot_reach_contains_kinks():
    d, p = builtin_diagram("unknot"), monochromatic(builtin_diagram("unknot"))
    # depth-one states are generated first, so a small cap suffices
    res = reachable_set(d, p, max_crossings=3, max_states=200)
    for side in "LR":
        for first in "ou":
            d1, p1 = apply_move(d, p, MoveEvent("R1_add", (1, side, first)))
            assert canonical_form(d1, p1) in res.forms


def test_reachable_partial_flag():
    d = builtin_diagram("unknot")
    res = reachable_set(d, monochromatic(d), max_crossings=4, max_states=20)
    assert res.partial and len(res.forms) == 20


def test_empty_path():
    d = builtin_diagram("unknot")
    assert prove_equivalent(d, monochromatic(d), d, monochromatic(d)) == []


def test_decay_example_reaches_unlink():
    d = builtin_diagram("fig5a_decay_example")
    t = nontrivial_tricoloring(d)
    path = find_unlink_path(d, t, max_crossings=6, max_states=10 ** 6)
    d2, _ = replay(d, t, path)
    assert is_unlink(d2)
    assert classify(d, t).i == 0


def test_monochromatic_trefoil_unties():
    d = builtin_diagram("trefoil_right")
    path = find_unlink_path(d, monochromatic(d), max_crossings=3)
    d2, _ = replay(d, monochromatic(d), path)
    assert d2.n_crossings == 0 and d2.n_components == 1


def test_tricolored_trefoil_not_found():
    r, u = builtin_diagram("trefoil_right"), builtin_diagram("unknot")
    with pytest.raises(NotFound):
        prove_equivalent(r, nontrivial_tricoloring(r), u, monochromatic(u), max_crossings=3)
    with pytest.raises(ResourceBound):
        prove_equivalent(r, nontrivial_tricoloring(r), u, monochromatic(u), max_states=50)


def test_paths_are_sound_and_symmetric():
    h = builtin_diagram("hopf")
    u2 = builtin_diagram("unlink2")
    ph, pu = monochromatic(h), monochromatic(u2)
    fwd = prove_equivalent(h, ph, u2, pu, max_crossings=2)
    d, p = replay(h, ph, fwd)
    assert canonical_form(d, p) == canonical_form(u2, pu)
    back = prove_equivalent(u2, pu, h, ph, max_crossings=2)
    d, p = replay(u2, pu, back)
    assert canonical_form(d, p) == canonical_form(h, ph)


def test_reachable_states_share_class():
    from collections import deque
    from linkforge.moves import applicable_moves
    for seed in (1, 4, 9):
        d, t = random_tricolored(4, seed)
        bound = d.n_crossings + 1
        seen = {canonical_form(d, t)}
        values = {classify(d, t).i}
        queue = deque([(d, t.to_gcoloring())])
        while queue and len(seen) < 300:
            cur, p = queue.popleft()
            for m in applicable_moves(cur, p):
                nd, np_ = apply_move(cur, p, m)
                f = canonical_form(nd, np_)
                if nd.n_crossings > bound or f in seen:
                    continue
                seen.add(f)
                values.add(classify(nd, np_).i)
                queue.append((nd, np_))
        assert len(values) == 1


def test_env_override(monkeypatch):
    monkeypatch.setenv("LINKFORGE_MAX_STATES", "123")
    assert default_max_states() == 123
    monkeypatch.delenv("LINKFORGE_MAX_STATES")
    assert default_max_states() == 10 ** 6


def test_canonical_limit():
    d = builtin_diagram("trefoil_right")
    with pytest.raises(ResourceBound):
        canonical_form(d, monochromatic(d), max_crossings=2)

import pytest

from linkforge.catalog import CATALOG, builtin_diagram, connected_sum
from linkforge.coloring import nontrivial_tricoloring
from linkforge.diagram import (LinkDiagram, mirror, parse_kld, serialize_kld, untangled_union,
                               validate_diagram)
from linkforge.errors import KLDSyntaxError, UnknownName, ValidationError
from linkforge.oracle import canonical_form

TREFOIL = "kld 1\nX 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n"


def test_parse_unknot():
    d, block = parse_kld("kld 1\nU 1\n")
    assert d.n_crossings == 0 and d.n_components == 1 and block is None


def test_parse_trefoil():
    d, _ = parse_kld(TREFOIL)
    assert d.n_crossings == 3
    assert d.components == ((1, 2, 3, 4, 5, 6),)


def test_dangling_arcs_rejected():
    with pytest.raises(ValidationError):
        parse_kld("kld 1\nX 1 2 3 4\n")


@pytest.mark.parametrize("text,line,col", [
    ("kld 2\n", 1, 1),
    ("kld 1\nX 1 2 3\n", 2, 8),
    ("kld 1\nX 1 2 3 4 5\n", 2, 11),
    ("kld 1\nX 1 two 3 4\n", 2, 5),
    ("kld 1\n  Q 1\n", 2, 3),
    ("# only a comment\n", 1, 1),
])
def test_syntax_errors_locate(text, line, col):
    with pytest.raises(KLDSyntaxError) as exc:
        parse_kld(text)
    assert (exc.value.line, exc.value.col) == (line, col)


def test_comments_and_coloring_block():
    d, block = parse_kld("kld 1  # header\nU 1\nG sigma3\nC 1 R # red\n")
    assert block.group == "sigma3" and block.entries == ((1, "R"),)


def test_serialize_round_trips():
    assert serialize_kld(parse_kld("kld 1\nU 1\n")[0]) == "kld 1\nU 1\n"
    assert serialize_kld(parse_kld(TREFOIL)[0]) == TREFOIL
    u = untangled_union(builtin_diagram("unknot"), builtin_diagram("unknot"))
    assert serialize_kld(u) == "kld 1\nU 1\nU 2\n"


def test_rotated_slots_rejected():
    d, _ = parse_kld(TREFOIL)
    a, b, c, e = d.crossings[0]
    by_two = LinkDiagram(((c, e, a, b),) + d.crossings[1:], ())
    assert validate_diagram(by_two).invariant == "under-strand slots"
    by_one = LinkDiagram(((e, a, b, c),) + d.crossings[1:], ())
    assert isinstance(validate_diagram(by_one), ValidationError)


def test_nonplanar_rotation_fails_euler():
    # swapping the over slots of one crossing keeps every strand intact but
    # breaks the face count
    d = LinkDiagram(((1, 4, 2, 5), (3, 6, 4, 1), (5, 2, 3, 6)), ())
    assert validate_diagram(d) is not None
    d = LinkDiagram(((1, 4, 2, 5), (3, 6, 1, 4), (5, 2, 6, 3)), ())
    assert validate_diagram(d).invariant == "Euler check"


@pytest.mark.parametrize("name", CATALOG)
def test_catalog_validates(name):
    d = builtin_diagram(name)
    assert validate_diagram(d) is None
    assert parse_kld(serialize_kld(d))[0] == d


def test_catalog_facts():
    assert builtin_diagram("trefoil_right").signs == (1, 1, 1)
    assert builtin_diagram("trefoil_left").signs == (-1, -1, -1)
    t = builtin_diagram("torus_2_5")
    assert (t.n_crossings, t.n_components) == (5, 1)
    assert builtin_diagram("hopf").n_components == 2
    with pytest.raises(UnknownName):
        builtin_diagram("nonsense")


def test_face_count():
    for name in ("trefoil_right", "figure_eight", "hopf", "torus_2_5"):
        d = builtin_diagram(name)
        assert len(d.faces) == d.n_crossings + 2


def test_mirror():
    r, l = builtin_diagram("trefoil_right"), builtin_diagram("trefoil_left")
    m = mirror(r)
    assert m.signs == (-1, -1, -1)
    t_m, t_l = nontrivial_tricoloring(m), nontrivial_tricoloring(l)
    assert canonical_form(m, t_m) == canonical_form(l, t_l)
    for name in CATALOG:
        d = builtin_diagram(name)
        assert mirror(mirror(d)) == d
    assert mirror(builtin_diagram("unknot")) == builtin_diagram("unknot")


def test_untangled_union():
    u, t = builtin_diagram("unknot"), builtin_diagram("trefoil_right")
    assert (untangled_union(u, u).n_components, untangled_union(u, u).n_crossings) == (2, 0)
    assert (untangled_union(t, u).n_components, untangled_union(t, u).n_crossings) == (2, 3)
    tt = untangled_union(t, t)
    assert (tt.n_components, tt.n_crossings) == (2, 6)
    assert len(tt.outer_faces) == 2


def test_connected_sum_is_a_knot():
    s = connected_sum(builtin_diagram("trefoil_right"), builtin_diagram("figure_eight"))
    assert (s.n_components, s.n_crossings) == (1, 7)
    assert sorted(s.signs) == [-1, -1, 1, 1, 1, 1, 1]

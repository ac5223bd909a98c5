import itertools

import pytest

from linkforge.errors import IndexOutOfRange, InvalidParameter, NotAGroup
from linkforge.group import (builtin_dihedral, builtin_sigma3, group_from_token, is_closed_subset,
                             load_group_table, make_group, stabilizers_from_token)


def brute_classes(g):
    return {frozenset(g.conj(h, x) for h in range(g.order)) for x in range(g.order)}


def test_trivial_group():
    g = make_group([[0]], ["e"])
    assert g.order == 1 and g.identity == 0 and g.inv(0) == 0


def test_sigma3_table_has_three_classes():
    g, _ = builtin_sigma3()
    again = make_group(g.table, g.names)
    assert again.order == 6
    assert len(brute_classes(again)) == 3
    assert set(again.classes) == brute_classes(again)


def test_repeated_rows_rejected():
    with pytest.raises(NotAGroup):
        make_group([[0, 1], [0, 1]], ["a", "b"])


def test_non_associative_rejected():
    # a Latin square with identity 0 that is not associative
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NotAGroup):
        make_group(t, list("abcde"))


def test_sigma3_products():
    g, inv = builtin_sigma3()
    s12, s13, s23 = (g.index(n) for n in ("s12", "s13", "s23"))
    assert g.mul(s12, s12) == g.identity
    assert g.mul(g.mul(s12, s13), s12) == s23
    assert is_closed_subset(g, inv.members)
    assert set(inv.members) == {s12, s13, s23}


def _isomorphic(g, h):
    if g.order != h.order:
        return False
    for perm in itertools.permutations(range(h.order)):
        if all(perm[g.mul(a, b)] == h.mul(perm[a], perm[b])
               for a in range(g.order) for b in range(g.order)):
            return True
    return False


def test_dihedral3_is_sigma3():
    d3, refl = builtin_dihedral(3)
    s3, inv = builtin_sigma3()
    assert _isomorphic(d3, s3)
    assert len(refl) == 3


def test_dihedral5():
    g, refl = builtin_dihedral(5)
    assert g.order == 10 and len(refl) == 5
    assert all(g.conj(h, x) in refl for h in range(10) for x in refl)
    assert all(g.mul(x, x) == g.identity for x in refl)


@pytest.mark.parametrize("n", [2, 1, 0])
def test_dihedral_too_small(n):
    with pytest.raises(InvalidParameter):
        builtin_dihedral(n)


def test_closed_subsets():
    g, _ = builtin_sigma3()
    assert is_closed_subset(g, {g.identity})
    assert not is_closed_subset(g, {g.index("s12")})
    with pytest.raises(IndexOutOfRange):
        is_closed_subset(g, {17})


def test_tokens(tmp_path):
    g, s = group_from_token("dihedral:4")
    assert g.order == 8 and stabilizers_from_token(g, s, None) == s
    assert len(stabilizers_from_token(g, s, "all")) == 8
    s3, inv = builtin_sigma3()
    f = tmp_path / "z2.tbl"
    f.write_text("e a\ne a\na e\n")
    z2 = load_group_table(f)
    assert z2.order == 2 and z2.mul(1, 1) == 0
    with pytest.raises(InvalidParameter):
        stabilizers_from_token(s3, inv, "s12")

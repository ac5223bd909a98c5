"""Finite groups given by multiplication tables, plus stabilizer subsets.

Elements are dense integer indices ``0..order-1``; names are for display and
serialization only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

from .errors import IndexOutOfRange, InvalidParameter, NotAGroup


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...]
    identity: int
    inverses: tuple[int, ...] = field(repr=False)
    classes: tuple[frozenset[int], ...] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.names)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, h: int, g: int) -> int:
        """Return h g h^-1."""
        return self.table[self.table[h][g]][self.inverses[h]]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown group element {name!r}") from None

    def class_of(self, g: int) -> frozenset[int]:
        for c in self.classes:
            if g in c:
                return c
        raise IndexOutOfRange(g)


@dataclass(frozen=True)
class StabilizerSet:
    members: frozenset[int]

    def __contains__(self, g: int) -> bool:
        return g in self.members

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)


def make_group(table, names) -> FiniteGroup:
    """Validate a multiplication table and precompute inverses and classes.

    Raises NotAGroup naming the first violated axiom.
    """
    n = len(names)
    rows = tuple(tuple(int(x) for x in row) for row in table)
    if n == 0 or len(rows) != n or any(len(r) != n for r in rows):
        raise NotAGroup(f"table must be {n}x{n}")
    for a, b in itertools.product(range(n), repeat=2):
        if not 0 <= rows[a][b] < n:
            raise NotAGroup(f"table not closed at ({names[a]}, {names[b]})")

    identity = None
    for e in range(n):
        if all(rows[e][g] == g and rows[g][e] == g for g in range(n)):
            identity = e
            break
    if identity is None:
        raise NotAGroup("no identity element")

    inverses = []
    for g in range(n):
        inv = [h for h in range(n) if rows[g][h] == identity and rows[h][g] == identity]
        if not inv:
            raise NotAGroup(f"element {names[g]} has no inverse")
        inverses.append(inv[0])

    for a, b, c in itertools.product(range(n), repeat=3):
        if rows[rows[a][b]][c] != rows[a][rows[b][c]]:
            raise NotAGroup(
                f"associativity fails for ({names[a]}, {names[b]}, {names[c]})")

    classes: list[frozenset[int]] = []
    seen: set[int] = set()
    for g in range(n):
        if g in seen:
            continue
        cls = frozenset(rows[rows[h][g]][inverses[h]] for h in range(n))
        seen |= cls
        classes.append(cls)

    return FiniteGroup(rows, tuple(names), identity, tuple(inverses), tuple(classes))


def is_closed_subset(g: FiniteGroup, s) -> bool:
    """True iff ``s`` is closed under inversion and conjugation."""
    s = set(s)
    for x in s:
        if not 0 <= x < g.order:
            raise IndexOutOfRange(x)
    for x in s:
        if g.inv(x) not in s:
            return False
        if any(g.conj(h, x) not in s for h in range(g.order)):
            return False
    return True


def stabilizer_set(g: FiniteGroup, s) -> StabilizerSet:
    if not is_closed_subset(g, s):
        raise InvalidParameter("stabilizer set must be closed under inverses and conjugation")
    return StabilizerSet(frozenset(s))


def _perm_group(perms, names) -> FiniteGroup:
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x))
    table = [[index[tuple(p[q[x]] for x in range(len(p)))] for q in perms] for p in perms]
    return make_group(table, names)


SIGMA3_NAMES = ("e", "s12", "s13", "s23", "r", "r2")


def builtin_sigma3() -> tuple[FiniteGroup, StabilizerSet]:
    """The symmetric group on three letters and its set of inversions."""
    perms = [
        (0, 1, 2),
        (1, 0, 2),
        (2, 1, 0),
        (0, 2, 1),
        (1, 2, 0),
        (2, 0, 1),
    ]
    g = _perm_group(perms, SIGMA3_NAMES)
    return g, StabilizerSet(frozenset({1, 2, 3}))


def builtin_dihedral(n: int) -> tuple[FiniteGroup, StabilizerSet]:
    """Dihedral group of order 2n; the stabilizer set is the n reflections.

    Element ``k`` for ``k < n`` is the rotation r^k, element ``n + k`` is
    the reflection x -> k - x (mod n).
    """
    if n < 3:
        raise InvalidParameter(f"dihedral group needs n >= 3, got {n}")

    def act(i, x):
        return (i + x) % n if i < n else (i - n - x) % n

    perms = [tuple(act(i, x) for x in range(n)) for i in range(2 * n)]
    names = [f"r{k}" for k in range(n)] + [f"f{k}" for k in range(n)]
    g = _perm_group(perms, names)
    return g, StabilizerSet(frozenset(range(n, 2 * n)))


def load_group_table(path) -> FiniteGroup:
    """Read a table file: a header of element names, then one row per element."""
    lines = [ln.split() for ln in Path(path).read_text(encoding="utf-8").splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise NotAGroup("empty table file")
    names = lines[0]
    idx = {name: i for i, name in enumerate(names)}
    try:
        table = [[idx[tok] for tok in row] for row in lines[1:]]
    except KeyError as exc:
        raise NotAGroup(f"unknown element {exc.args[0]!r} in table") from None
    return make_group(table, names)


def group_from_token(token: str) -> tuple[FiniteGroup, StabilizerSet | None]:
    """Resolve ``sigma3``, ``dihedral:<n>`` or a table file path."""
    if token == "sigma3":
        return builtin_sigma3()
    if token.startswith("dihedral:"):
        try:
            n = int(token.split(":", 1)[1])
        except ValueError:
            raise InvalidParameter(f"bad dihedral token {token!r}") from None
        return builtin_dihedral(n)
    return load_group_table(token), None


def stabilizers_from_token(g: FiniteGroup, default: StabilizerSet | None,
                           token: str | None) -> StabilizerSet | None:
    """``inversions``/``reflections`` select the builtin set, ``all`` is G,
    otherwise a comma-separated list of element names."""
    if token is None or token in ("inversions", "reflections", "default"):
        return default
    if token == "all":
        return StabilizerSet(frozenset(range(g.order)))
    return stabilizer_set(g, [g.index(t) for t in token.split(",")])

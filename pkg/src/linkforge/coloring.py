"""G-colorings of link diagrams.

A coloring assigns a group element to every arc (every edge between
consecutive crossings). The element is the meridian value for the arc's own
orientation. Wirtinger's relation at a crossing with over value ``o`` says
the outgoing under arc is ``o u o^-1`` (positive crossing) or ``o^-1 u o``
(negative crossing), and the two halves of the over-strand agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .diagram import ColoringBlock, LinkDiagram
from .errors import ColoringError, ResourceBound
from .group import FiniteGroup, StabilizerSet, builtin_sigma3

# R, G, B are the inversions s12, s13, s23 of the symmetric group
TRICOLOR_TOKENS = ("R", "G", "B")
_SIGMA3, _INVERSIONS = builtin_sigma3()
TRICOLOR_ELEMENTS = (_SIGMA3.index("s12"), _SIGMA3.index("s13"), _SIGMA3.index("s23"))

DEFAULT_NODE_BUDGET = 10_000_000


@dataclass(frozen=True)
class GColoring:
    group: FiniteGroup
    values: tuple[int, ...]  # values[a - 1] is the element on arc a

    def __getitem__(self, arc: int) -> int:
        return self.values[arc - 1]

    def names(self) -> list[str]:
        return [self.group.names[v] for v in self.values]

    def conjugate(self, h: int) -> "GColoring":
        return GColoring(self.group, tuple(self.group.conj(h, v) for v in self.values))

    def is_monochromatic(self) -> bool:
        return len(set(self.values)) <= 1


@dataclass(frozen=True)
class Tricoloring:
    """Arc colors as indices into ``R G B``."""

    colors: tuple[int, ...]

    def __getitem__(self, arc: int) -> int:
        return self.colors[arc - 1]

    def tokens(self) -> list[str]:
        return [TRICOLOR_TOKENS[c] for c in self.colors]

    def to_gcoloring(self) -> GColoring:
        return GColoring(_SIGMA3, tuple(TRICOLOR_ELEMENTS[c] for c in self.colors))

    @classmethod
    def from_gcoloring(cls, psi: GColoring) -> "Tricoloring":
        try:
            return cls(tuple(TRICOLOR_ELEMENTS.index(v) for v in psi.values))
        except ValueError:
            raise ColoringError("coloring uses a non-inversion element") from None

    @classmethod
    def from_tokens(cls, tokens) -> "Tricoloring":
        return cls(tuple(TRICOLOR_TOKENS.index(t) for t in tokens))


def sigma3():
    return _SIGMA3, _INVERSIONS


def as_tricoloring(psi) -> Tricoloring:
    return psi if isinstance(psi, Tricoloring) else Tricoloring.from_gcoloring(psi)


def as_gcoloring(psi) -> GColoring:
    return psi.to_gcoloring() if isinstance(psi, Tricoloring) else psi


def wirtinger_out(g: FiniteGroup, sign: int, over: int, under_in: int) -> int:
    if sign > 0:
        return g.conj(over, under_in)
    return g.conj(g.inv(over), under_in)


def validate_coloring(d: LinkDiagram, g: FiniteGroup, s: StabilizerSet | None,
                      psi: GColoring):
    """Return None when ``psi`` is a (G,S)-coloring of ``d``, else a ColoringError."""
    if len(psi.values) != d.n_arcs:
        return ColoringError(f"coloring has {len(psi.values)} values for {d.n_arcs} arcs")
    for i, v in enumerate(psi.values):
        if not 0 <= v < g.order:
            return ColoringError(f"arc {i + 1}: not a group element", arc=i + 1)
    for c, (a, b, c2, dd) in enumerate(d.crossings):
        if psi[b] != psi[dd]:
            return ColoringError(f"crossing {c}: over-strand arcs {b},{dd} differ",
                                 crossing=c)
        if psi[c2] != wirtinger_out(g, d.sign(c), psi[b], psi[a]):
            return ColoringError(f"crossing {c}: Wirtinger relation fails", crossing=c)
    if s is not None:
        for a in d.arcs:
            if psi[a] not in s:
                return ColoringError(f"arc {a}: value outside the stabilizer set", arc=a)
    return None


def validate_tricoloring(d: LinkDiagram, t: Tricoloring):
    """Same-or-all-different rule at every crossing."""
    if len(t.colors) != d.n_arcs:
        return ColoringError("wrong number of colors")
    for c, (a, b, c2, dd) in enumerate(d.crossings):
        if t[b] != t[dd]:
            return ColoringError(f"crossing {c}: over-strand arcs differ", crossing=c)
        if len({t[a], t[b], t[c2]}) == 2:
            return ColoringError(f"crossing {c}: exactly two colors meet", crossing=c)
    return None


def enumerate_colorings(d: LinkDiagram, g: FiniteGroup, s: StabilizerSet | None = None,
                        node_budget: int = DEFAULT_NODE_BUDGET) -> list[GColoring]:
    """All (G,S)-colorings, sorted lexicographically by arc values.

    Backtracking with forward propagation: every crossing relates its four
    arcs, so fixing an over value and either under value forces the rest.
    """
    n = d.n_arcs
    allowed = sorted(s.members) if s is not None else list(range(g.order))
    allowed_set = set(allowed)
    inv = g.inverses
    by_arc = [[] for _ in range(n + 1)]
    rels = []
    for c, (a, b, c2, dd) in enumerate(d.crossings):
        rel = (a, b, c2, dd, d.sign(c))
        rels.append(rel)
        for x in (a, b, c2, dd):
            by_arc[x].append(rel)

    order = _traversal_order(d)
    values = [None] * (n + 1)
    out = []
    nodes = 0

    def propagate(start, trail):
        stack = [start]
        while stack:
            x = stack.pop()
            for a, b, c2, dd, sign in by_arc[x]:
                o = values[b] if values[b] is not None else values[dd]
                forced = []
                if o is not None:
                    forced += [(b, o), (dd, o)]
                    ho, hi = (o, inv[o]) if sign > 0 else (inv[o], o)
                    if values[a] is not None:
                        forced.append((c2, g.mul(g.mul(ho, values[a]), hi)))
                    if values[c2] is not None:
                        forced.append((a, g.mul(g.mul(hi, values[c2]), ho)))
                for y, v in forced:
                    if values[y] is None:
                        if v not in allowed_set:
                            return False
                        values[y] = v
                        trail.append(y)
                        stack.append(y)
                    elif values[y] != v:
                        return False
        return True

    def search(i):
        nonlocal nodes
        while i < len(order) and values[order[i]] is not None:
            i += 1
        if i == len(order):
            out.append(GColoring(g, tuple(values[1:])))
            return
        x = order[i]
        for v in allowed:
            nodes += 1
            if nodes > node_budget:
                raise ResourceBound(f"coloring search exceeded {node_budget} nodes")
            trail = [x]
            values[x] = v
            if propagate(x, trail):
                search(i + 1)
            for y in trail:
                values[y] = None

    search(0)
    out.sort(key=lambda p: p.values)
    return out


def _traversal_order(d: LinkDiagram) -> list[int]:
    """Arcs component by component in orientation order (a spanning walk)."""
    return [a for comp in d.components for a in comp]


def enumerate_tricolorings(d: LinkDiagram) -> list[Tricoloring]:
    """Tricolorings via the linear system ``a + o + c = 0`` and ``b = d`` over GF(3).

    Independent of the group-theoretic search; both must agree.
    """
    n = d.n_arcs
    rows = []
    for a, b, c, dd in d.crossings:
        r = [0] * n
        r[b - 1] += 1
        r[dd - 1] -= 1
        rows.append([x % 3 for x in r])
        r = [0] * n
        r[a - 1] += 1
        r[b - 1] += 1
        r[c - 1] += 1
        rows.append([x % 3 for x in r])
    basis = _nullspace_mod3(rows, n)
    sols = set()
    for coeffs in itertools.product(range(3), repeat=len(basis)):
        v = [0] * n
        for k, vec in zip(coeffs, basis):
            if k:
                v = [(x + k * y) % 3 for x, y in zip(v, vec)]
        sols.add(tuple(v))
    # order by the group-element values so both enumerations line up
    return sorted((Tricoloring(s) for s in sols),
                  key=lambda t: tuple(TRICOLOR_ELEMENTS[c] for c in t.colors))


def _nullspace_mod3(rows, n):
    m = [r[:] for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        p = next((i for i in range(r, len(m)) if m[i][col]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 if m[r][col] == 1 else 2
        m[r] = [(x * inv) % 3 for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [(x - f * y) % 3 for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * n
        v[fcol] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-m[i][fcol]) % 3
        basis.append(v)
    return basis


def conjugation_classes(colorings: list[GColoring], g: FiniteGroup) -> list[list[GColoring]]:
    """Partition by simultaneous conjugation; classes in order of first member."""
    classes: dict[tuple, list[GColoring]] = {}
    for psi in colorings:
        key = min(tuple(g.conj(h, v) for v in psi.values) for h in range(g.order))
        classes.setdefault(key, []).append(psi)
    return list(classes.values())


def nontrivial_tricoloring(d: LinkDiagram) -> Tricoloring | None:
    """First tricoloring that is tricolored at every crossing, else the first
    non-monochromatic one, else None."""
    cols = enumerate_tricolorings(d)
    full = [t for t in cols
            if all(len({t[a], t[b], t[c]}) == 3 for a, b, c, _ in d.crossings)]
    if full:
        return full[0]
    rest = [t for t in cols if len(set(t.colors)) > 1]
    return rest[0] if rest else None


def monochromatic(d: LinkDiagram, color: int = 0) -> Tricoloring:
    return Tricoloring((color,) * d.n_arcs)


def coloring_from_block(d: LinkDiagram, block: ColoringBlock, g: FiniteGroup | None = None
                        ) -> GColoring:
    """Read ``C`` entries; R/G/B are accepted when the group is sigma3."""
    from .group import group_from_token
    if g is None:
        g = group_from_token(block.group or "sigma3")[0]
    vals = {}
    for arc, tok in block.entries:
        if not 1 <= arc <= d.n_arcs:
            raise ColoringError(f"coloring entry for unknown arc {arc}", arc=arc)
        if tok in TRICOLOR_TOKENS and g.order == 6 and tok not in g.names:
            vals[arc] = TRICOLOR_ELEMENTS[TRICOLOR_TOKENS.index(tok)]
        else:
            try:
                vals[arc] = g.index(tok)
            except KeyError:
                raise ColoringError(f"unknown color {tok!r}", arc=arc) from None
    missing = [a for a in d.arcs if a not in vals]
    if missing:
        raise ColoringError(f"arcs {missing} are uncolored", arc=missing[0])
    return GColoring(g, tuple(vals[a] for a in d.arcs))


def coloring_block(psi, group_token: str = "sigma3") -> ColoringBlock:
    if isinstance(psi, Tricoloring):
        return ColoringBlock(group_token, tuple(zip(range(1, len(psi.colors) + 1), psi.tokens())))
    if group_token == "sigma3" and all(v in TRICOLOR_ELEMENTS for v in psi.values):
        return coloring_block(Tricoloring.from_gcoloring(psi), group_token)
    return ColoringBlock(group_token, tuple(zip(range(1, len(psi.values) + 1), psi.names())))

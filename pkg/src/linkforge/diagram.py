"""Oriented planar link diagrams.

A diagram is a list of crossings plus a list of crossingless loops. Each
crossing stores four arc labels in counterclockwise order starting at the
incoming under-strand, so the under-strand runs slot 0 -> slot 2. Arcs are
numbered consecutively along each component; that numbering is the only
orientation data, and the direction of every over-strand is inferred from it.

A positive crossing has its over-strand running slot 3 -> slot 1.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

from .errors import KLDSyntaxError, ValidationError


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[tuple[int, int, int, int], ...] = ()
    loops: tuple[int, ...] = ()

    # -- orientation -----------------------------------------------------

    @cached_property
    def _oriented(self):
        return _infer_orientation(self.crossings, self.loops)

    @property
    def over_in(self) -> tuple[int, ...]:
        """Slot (1 or 3) where the over-strand enters, per crossing."""
        return self._oriented[0]

    @property
    def components(self) -> tuple[tuple[int, ...], ...]:
        return self._oriented[1]

    @property
    def n_arcs(self) -> int:
        return sum(len(c) for c in self.components)

    @property
    def arcs(self) -> range:
        return range(1, self.n_arcs + 1)

    @cached_property
    def next_arc(self) -> dict[int, int]:
        nxt = {}
        for comp in self.components:
            for i, a in enumerate(comp):
                nxt[a] = comp[(i + 1) % len(comp)]
        return nxt

    @cached_property
    def signs(self) -> tuple[int, ...]:
        return tuple(1 if o == 3 else -1 for o in self.over_in)

    def sign(self, c: int) -> int:
        return self.signs[c]

    def over_out(self, c: int) -> int:
        return 4 - self.over_in[c]

    def is_incoming(self, c: int, slot: int) -> bool:
        return slot == 0 or slot == self.over_in[c]

    @cached_property
    def ends(self) -> dict[int, tuple[tuple[int, int], tuple[int, int]]]:
        """arc -> ((tail crossing, slot), (head crossing, slot))."""
        tails, heads = {}, {}
        for c, slots in enumerate(self.crossings):
            for s, a in enumerate(slots):
                if self.is_incoming(c, s):
                    heads[a] = (c, s)
                else:
                    tails[a] = (c, s)
        return {a: (tails[a], heads[a]) for a in heads}

    def component_of(self, arc: int) -> int:
        for i, comp in enumerate(self.components):
            if arc in comp:
                return i
        raise KeyError(arc)

    # -- planar structure ------------------------------------------------

    def partner(self, dart: tuple[int, int]) -> tuple[int, int]:
        c, s = dart
        tail, head = self.ends[self.crossings[c][s]]
        return head if dart == tail else tail

    @cached_property
    def faces(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Faces as cycles of darts. Tracing turns right at every crossing,
        so a face lies on the right of each dart's traversal direction."""
        seen = set()
        faces = []
        for c in range(len(self.crossings)):
            for s in range(4):
                if (c, s) in seen:
                    continue
                face = []
                dart = (c, s)
                while dart not in seen:
                    seen.add(dart)
                    face.append(dart)
                    c2, s2 = self.partner(dart)
                    dart = (c2, (s2 + 1) % 4)
                faces.append(tuple(face))
        return tuple(faces)

    @cached_property
    def face_of_dart(self) -> dict[tuple[int, int], int]:
        return {d: i for i, f in enumerate(self.faces) for d in f}

    def right_face(self, arc: int) -> int:
        return self.face_of_dart[self.ends[arc][0]]

    def left_face(self, arc: int) -> int:
        return self.face_of_dart[self.ends[arc][1]]

    def face_arcs(self, f: int) -> list[tuple[int, str]]:
        """(arc, side) pairs along face ``f``; side R means the face lies to
        the right of the arc's orientation."""
        out = []
        for c, s in self.faces[f]:
            a = self.crossings[c][s]
            out.append((a, "R" if self.ends[a][0] == (c, s) else "L"))
        return out

    def face_on(self, arc: int, side: str) -> int:
        return self.right_face(arc) if side == "R" else self.left_face(arc)

    @cached_property
    def crossing_components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components of the 4-valent crossing graph."""
        parent = list(range(len(self.crossings)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, ((ct, _), (ch, _)) in self.ends.items():
            parent[find(ct)] = find(ch)
        groups = defaultdict(list)
        for c in range(len(self.crossings)):
            groups[find(c)].append(c)
        return tuple(tuple(g) for g in sorted(groups.values()))

    @cached_property
    def outer_faces(self) -> tuple[int, ...]:
        """One face per connected piece, taken as the unbounded one: the
        longest face, ties broken by smallest first dart."""
        out = []
        for piece in self.crossing_components:
            ps = set(piece)
            cands = [i for i, f in enumerate(self.faces) if f[0][0] in ps]
            out.append(min(cands, key=lambda i: (-len(self.faces[i]), min(self.faces[i]))))
        return tuple(out)

    # -- convenience -------------------------------------------------------

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_components(self) -> int:
        return len(self.components)

    def writhe(self) -> int:
        return sum(self.signs)


# ---------------------------------------------------------------------------
# orientation inference


def _infer_orientation(crossings, loops):
    occ = defaultdict(list)
    for c, slots in enumerate(crossings):
        if len(slots) != 4:
            raise ValidationError("crossing arity", f"crossing {c} has {len(slots)} slots")
        for s, a in enumerate(slots):
            occ[a].append((c, s))
    labels = set(occ) | set(loops)
    n = len(labels)
    if labels != set(range(1, n + 1)):
        missing = sorted(set(range(1, max(labels, default=0) + 1)) - labels)
        raise ValidationError("arc numbering", f"arcs not 1..n, missing {missing}")
    for a in loops:
        if a in occ:
            raise ValidationError("crossingless loop", f"loop arc {a} occurs in a crossing")
    if len(set(loops)) != len(loops):
        raise ValidationError("crossingless loop", "duplicate loop id")
    for a, places in sorted(occ.items()):
        if len(places) != 2:
            raise ValidationError("arc occurrence",
                                  f"arc {a} occurs {len(places)} times (crossing {places[0][0]})")

    parent = {a: a for a in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, c, d in crossings:
        parent[find(a)] = find(c)
        parent[find(b)] = find(d)
    groups = defaultdict(list)
    for a in labels:
        groups[find(a)].append(a)
    comps = sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])
    nxt = {}
    for comp in comps:
        lo, hi = comp[0], comp[-1]
        if hi - lo + 1 != len(comp):
            raise ValidationError("component numbering",
                                  f"arcs {comp} are not consecutive along their component")
        for a in comp:
            nxt[a] = a + 1 if a < hi else lo

    over_in = [0] * len(crossings)
    pending = defaultdict(list)  # component lo -> crossings with ambiguous over direction
    used = defaultdict(int)  # (from, to) transitions
    for i, (a, b, c, d) in enumerate(crossings):
        if nxt[a] != c:
            raise ValidationError("under-strand slots",
                                  f"crossing {i}: under-strand {a}->{c} against arc numbering")
        used[(a, c)] += 1
        fwd, bwd = nxt[b] == d, nxt[d] == b
        if fwd and bwd:
            pending[find(b)].append(i)
        elif fwd:
            over_in[i] = 1
            used[(b, d)] += 1
        elif bwd:
            over_in[i] = 3
            used[(d, b)] += 1
        else:
            raise ValidationError("orientation",
                                  f"crossing {i}: over-strand {b},{d} not consecutive arcs")
    for root, idxs in pending.items():
        comp = sorted(groups[root])
        transitions = [(x, nxt[x]) for x in comp]
        for i in idxs:
            _, b, _, d = crossings[i]
            free = [t for t in transitions if used[t] == 0 and set(t) == {b, d}]
            if not free:
                raise ValidationError("orientation", f"crossing {i}: no free transition")
            t = free[0]
            used[t] += 1
            over_in[i] = 1 if t == (b, d) else 3
    for comp in comps:
        if comp[0] in loops:
            continue
        for x in comp:
            if used[(x, nxt[x])] != 1:
                raise ValidationError("orientation",
                                      f"arc {x} does not enter exactly one crossing")
    components = tuple(tuple(c) for c in comps)
    return tuple(over_in), components


# ---------------------------------------------------------------------------
# validation


def validate_diagram(d: LinkDiagram):
    """Return None if ``d`` is valid, otherwise the first ValidationError."""
    try:
        d._oriented
        d.ends
    except ValidationError as err:
        return err
    for c, slots in enumerate(d.crossings):
        if d.over_in[c] not in (1, 3):
            return ValidationError("under-strand slots", f"crossing {c}")
    faces = d.faces
    for piece in d.crossing_components:
        ps = set(piece)
        v = len(piece)
        e = 2 * v
        f = sum(1 for face in faces if face[0][0] in ps)
        if v - e + f != 2:
            return ValidationError("Euler check",
                                   f"piece with crossing {piece[0]}: V-E+F = {v - e + f}")
    return None


def check_diagram(d: LinkDiagram) -> LinkDiagram:
    err = validate_diagram(d)
    if err is not None:
        raise err
    return d


# ---------------------------------------------------------------------------
# operations


def crossing_change(slots, over_in):
    """Slots of the crossing with over and under strands exchanged."""
    a, b, c, d = slots
    return (d, a, b, c) if over_in == 3 else (b, c, d, a)


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Reflect the projection in a line of the plane.

    Every crossing keeps its over-strand but its slots run clockwise, so all
    signs flip. Arc numbering is unchanged, hence colorings carry over as is.
    """
    new = tuple((a, dd, c, b) for a, b, c, dd in d.crossings)
    out = LinkDiagram(new, d.loops)
    want = tuple(4 - o for o in d.over_in)
    if out.over_in != want:
        # a two-arc component lying over at both its crossings is read in
        # crossing-list order; relabel it (both arcs carry one color)
        from .assemble import assemble_from_diagram
        out, _ = assemble_from_diagram(d, new, want)
    return out


def shift(d: LinkDiagram, k: int) -> LinkDiagram:
    return LinkDiagram(tuple(tuple(a + k for a in s) for s in d.crossings),
                       tuple(a + k for a in d.loops))


def untangled_union(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    """Place ``d2`` beside ``d1``; arcs of ``d2`` are shifted past those of ``d1``."""
    s = shift(d2, d1.n_arcs)
    return LinkDiagram(d1.crossings + s.crossings, d1.loops + s.loops)


# ---------------------------------------------------------------------------
# KLD text format


@dataclass(frozen=True)
class ColoringBlock:
    group: str | None
    entries: tuple[tuple[int, str], ...]


def parse_kld(text: str) -> tuple[LinkDiagram, ColoringBlock | None]:
    """Parse KLD text; returns the diagram and the coloring block if any."""
    crossings, loops, entries = [], [], []
    group = None
    seen_header = False
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        col = len(line) - len(line.lstrip()) + 1
        if not seen_header:
            if toks != ["kld", "1"]:
                raise KLDSyntaxError(lineno, col, "'kld 1' header")
            seen_header = True
            continue
        kind = toks[0]
        if kind == "X":
            if len(toks) != 5:
                raise KLDSyntaxError(lineno, _arity_col(line, toks, 5), "X followed by 4 arc indices")
            crossings.append(tuple(_int_tok(toks[i], lineno, line, i) for i in range(1, 5)))
        elif kind == "U":
            if len(toks) != 2:
                raise KLDSyntaxError(lineno, _arity_col(line, toks, 2), "U followed by one loop id")
            loops.append(_int_tok(toks[1], lineno, line, 1))
        elif kind == "C":
            if len(toks) != 3:
                raise KLDSyntaxError(lineno, _arity_col(line, toks, 3), "C <arc> <color>")
            entries.append((_int_tok(toks[1], lineno, line, 1), toks[2]))
        elif kind == "G":
            if len(toks) != 2:
                raise KLDSyntaxError(lineno, _arity_col(line, toks, 2), "G <group-token>")
            group = toks[1]
        else:
            raise KLDSyntaxError(lineno, col, "one of X, U, C, G")
    if not seen_header:
        raise KLDSyntaxError(1, 1, "'kld 1' header")
    d = check_diagram(LinkDiagram(tuple(crossings), tuple(loops)))
    block = ColoringBlock(group, tuple(entries)) if (entries or group) else None
    return d, block


def _int_tok(tok, lineno, line, i):
    try:
        v = int(tok)
    except ValueError:
        v = 0
    if v < 1:
        col = _col_of_token(line, i)
        raise KLDSyntaxError(lineno, col, "positive integer")
    return v


def _arity_col(line, toks, want):
    """Column of the first extra token, or just past the end when tokens are missing."""
    if len(toks) > want:
        return _col_of_token(line, want)
    return len(line.rstrip()) + 1


def _col_of_token(line, i):
    pos = 0
    for k, tok in enumerate(line.split()):
        pos = line.index(tok, pos)
        if k == i:
            return pos + 1
        pos += len(tok)
    return 1


def serialize_kld(d: LinkDiagram, coloring: ColoringBlock | None = None) -> str:
    lines = ["kld 1"]
    lines += ["X %d %d %d %d" % s for s in d.crossings]
    lines += [f"U {a}" for a in d.loops]
    if coloring is not None:
        if coloring.group is not None:
            lines.append(f"G {coloring.group}")
        lines += [f"C {a} {tok}" for a, tok in coloring.entries]
    return "\n".join(lines) + "\n"

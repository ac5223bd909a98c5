"""Colored Reidemeister moves and same-color saddle reconnections.

Every move edits a keyed copy of the diagram (see ``assemble``) and then
renormalizes, so outputs always satisfy the KLD numbering conventions.
New crossings are built from a small straight-line picture of the local disk:
the counterclockwise order of half-edges is read off their angles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .assemble import assemble
from .coloring import GColoring, as_gcoloring, validate_coloring, wirtinger_out
from .diagram import LinkDiagram
from .errors import ColorMismatch, InvalidMove

KINDS = ("R1_add", "R1_remove", "R2_add", "R2_remove", "R3", "Saddle")


@dataclass(frozen=True, order=True)
class MoveEvent:
    kind: str
    site: tuple

    def sort_key(self):
        return (KINDS.index(self.kind), tuple(str(x) if isinstance(x, str) else f"{x:08d}"
                                              for x in self.site))

    def __str__(self):
        return " ".join([self.kind] + [str(x) for x in self.site])

    @classmethod
    def parse(cls, line: str) -> "MoveEvent":
        toks = line.split()
        if not toks or toks[0] not in KINDS:
            raise InvalidMove(f"unknown move {line!r}")
        site = tuple(int(t) if t.lstrip("-").isdigit() else t for t in toks[1:])
        return cls(toks[0], site)


def parse_log(text: str) -> list[MoveEvent]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(MoveEvent.parse(line))
    return out


def format_log(events) -> str:
    return "".join(f"{e}\n" for e in events)


# ---------------------------------------------------------------------------
# keyed editing


class _Edit:
    def __init__(self, d: LinkDiagram, psi: GColoring):
        self.d = d
        self.g = psi.group
        self.raw = [[(a,) for a in s] for s in d.crossings]
        self.hints = [(0, o) for o in d.over_in]
        self.alive = [True] * len(self.raw)
        self.loops = [(a,) for a in d.loops]
        self.color = {(a,): psi[a] for a in d.arcs}
        self.parent = {}
        self.dropped = set()  # keys whose color is recomputed or irrelevant
        self.erased = set()  # keys removed from the diagram outright
        self._next = d.n_arcs + 1

    def fresh(self, color):
        k = (self._next,)
        self._next += 1
        self.color[k] = color
        return k

    def find(self, k):
        while self.parent.get(k, k) != k:
            k = self.parent[k]
        return k

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            lo, hi = min(ra, rb), max(ra, rb)
            self.parent[hi] = lo

    def remove_crossing(self, c):
        s = self.raw[c]
        self.union(s[0], s[2])
        self.union(s[1], s[3])
        self.alive[c] = False

    def add_crossing(self, keys, hint, at=None):
        if at is None:
            self.raw.append(list(keys))
            self.hints.append(hint)
            self.alive.append(True)
        else:
            self.raw[at] = list(keys)
            self.hints[at] = hint
            self.alive[at] = True

    def _deleted(self):
        return {self.find(k) for k in self.erased}

    def split_arc(self, a):
        """Give the head end of arc ``a`` a fresh key; returns (tail key, head key)."""
        tail_key = (a,)
        if a in self.d.loops:
            return tail_key, tail_key
        head_key = self.fresh(self.color[tail_key])
        c, s = self.d.ends[a][1]
        self.raw[c][s] = head_key
        return tail_key, head_key

    def finish(self):
        raw, hints = [], []
        used = set()
        for keys, hint, alive in zip(self.raw, self.hints, self.alive):
            if alive:
                mapped = tuple(self.find(k) for k in keys)
                raw.append(mapped)
                hints.append(hint)
                used.update(mapped)
        classes, dropped_only = {}, {}
        for k in self.color:
            target = dropped_only if k in self.dropped else classes
            target.setdefault(self.find(k), set()).add(self.color[k])
        for rep, cols in dropped_only.items():
            if rep not in classes and (rep in used or rep not in self._deleted()):
                classes[rep] = {min(cols)}
        for rep, cols in classes.items():
            if len(cols) != 1:
                raise ColorMismatch(f"reconnected strands carry different colors at {rep}")
        loop_keys = sorted(r for r in classes if r not in used)
        d2, keymap = assemble(raw, loop_keys, hints)
        values = [None] * d2.n_arcs
        for rep, cols in classes.items():
            values[keymap[rep] - 1] = next(iter(cols))
        return d2, GColoring(self.g, tuple(values))


def _crossing_from_halves(halves):
    """halves: four ``(angle, key, is_under, is_incoming)``.

    Returns raw keys counterclockwise with an under half-edge first, and the
    ``(under_in, over_in)`` hint.
    """
    hs = sorted(halves, key=lambda h: h[0] % (2 * math.pi))
    start = next(i for i, h in enumerate(hs) if h[2])
    hs = hs[start:] + hs[:start]
    keys = tuple(h[1] for h in hs)
    under_in = next(i for i, h in enumerate(hs) if h[2] and h[3])
    over_in = next(i for i, h in enumerate(hs) if not h[2] and h[3])
    return keys, (under_in, over_in)


def _ang(x, y):
    return math.atan2(y, x)


# ---------------------------------------------------------------------------
# R1


def _r1_remove(ed: _Edit, c):
    s = ed.d.crossings[c]
    if not any(s[i] == s[(i + 1) % 4] for i in range(4)):
        raise InvalidMove(f"crossing {c} is not a kink")
    ed.remove_crossing(c)


def _r1_add(ed: _Edit, a, side, first):
    if side not in ("L", "R") or first not in ("o", "u"):
        raise InvalidMove("R1_add needs side L/R and first pass o/u")
    if not 1 <= a <= ed.d.n_arcs:
        raise InvalidMove(f"no arc {a}")
    col = ed.color[(a,)]
    e_in, e_out = ed.split_arc(a)
    if a in ed.d.loops:
        ed.loops.remove((a,))
    k = ed.fresh(col)
    if first == "u":
        keys, over_in = ((e_in, e_out, k, k), 3) if side == "L" else ((e_in, k, k, e_out), 1)
    else:
        keys, over_in = ((k, e_in, e_out, k), 1) if side == "L" else ((k, k, e_out, e_in), 3)
    ed.add_crossing(keys, (0, over_in))


# ---------------------------------------------------------------------------
# R2


def _bigon(d: LinkDiagram, c1, c2):
    for f in d.faces:
        if len(f) == 2 and {f[0][0], f[1][0]} == {c1, c2} and c1 != c2:
            return f
    return None


def _r2_removable(d: LinkDiagram, c1, c2):
    f = _bigon(d, c1, c2)
    if f is None:
        return False
    arcs = [d.crossings[c][s] for c, s in f]
    for a in arcs:
        slots = [(c, s) for c in (c1, c2) for s in range(4) if d.crossings[c][s] == a]
        over = [s % 2 == 1 for _, s in slots]
        if len(set(over)) != 1:
            return False
    return True


def _r2_remove(ed: _Edit, c1, c2):
    if not _r2_removable(ed.d, c1, c2):
        raise InvalidMove(f"crossings {c1},{c2} do not form a removable bigon")
    for c, s in _bigon(ed.d, c1, c2):
        ed.dropped.add((ed.d.crossings[c][s],))
    ed.remove_crossing(c1)
    ed.remove_crossing(c2)


def _r2_add(ed: _Edit, e, side_e, f, side_f, over):
    d = ed.d
    if e == f or not (1 <= e <= d.n_arcs and 1 <= f <= d.n_arcs):
        raise InvalidMove("R2_add needs two distinct arcs")
    if e in d.loops or f in d.loops:
        raise InvalidMove("R2_add on crossingless loops is not supported")
    if d.face_on(e, side_e) != d.face_on(f, side_f):
        raise InvalidMove(f"arcs {e},{f} do not share a face on the given sides")
    if over not in ("e", "f"):
        raise InvalidMove("over flag must be e or f")
    g = ed.g
    ce, cf = ed.color[(e,)], ed.color[(f,)]
    e_along = side_e == "R"  # traversal west->east agrees with orientation
    f_along = side_f == "R"  # traversal east->west agrees with orientation
    e_tail, e_head = ed.split_arc(e)
    f_tail, f_head = ed.split_arc(f)
    e_W, e_E = (e_tail, e_head) if e_along else (e_head, e_tail)
    f_E, f_W = (f_tail, f_head) if f_along else (f_head, f_tail)
    e_M = ed.fresh(None)
    f_M = ed.fresh(None)
    e_under = over == "f"
    # crossing A at (-1, 0), crossing B at (1, 0); e dips below the f line
    A = [(_ang(-2, 2), e_W, e_under, e_along), (_ang(1, -1), e_M, e_under, not e_along),
         (_ang(1, 0), f_M, not e_under, f_along), (_ang(-1, 0), f_W, not e_under, not f_along)]
    B = [(_ang(-1, -1), e_M, e_under, e_along), (_ang(2, 2), e_E, e_under, not e_along),
         (_ang(1, 0), f_E, not e_under, f_along), (_ang(-1, 0), f_M, not e_under, not f_along)]
    kA, hA = _crossing_from_halves(A)
    kB, hB = _crossing_from_halves(B)
    ed.add_crossing(kA, hA)
    ed.add_crossing(kB, hB)
    # colors of the middle pieces
    if over == "e":
        ed.color[e_M] = ce
        sA = _sign_of(hA)
        sB = _sign_of(hB)
        # f_M lies between the crossings; which formula depends on direction
        if f_along:
            ed.color[f_M] = wirtinger_out(g, sB, ce, cf)
        else:
            ed.color[f_M] = wirtinger_out(g, sA, ce, cf)
    else:
        ed.color[f_M] = cf
        sA = _sign_of(hA)
        sB = _sign_of(hB)
        if e_along:
            ed.color[e_M] = wirtinger_out(g, sA, cf, ce)
        else:
            ed.color[e_M] = wirtinger_out(g, sB, cf, ce)


def _sign_of(hint):
    under_in, over_in = hint
    return 1 if over_in == (under_in + 3) % 4 else -1


# ---------------------------------------------------------------------------
# R3


def _triangle(d: LinkDiagram, cs):
    for f in d.faces:
        if len(f) == 3 and sorted(c for c, _ in f) == sorted(cs) and len(set(cs)) == 3:
            return f
    return None


def _r3_data(d: LinkDiagram, face):
    """Boundary points, chords and heights for a triangle face, or None."""
    # boundary endpoints counterclockwise: reverse face order, two per vertex
    pts = []
    for c, s in reversed(face):
        pts.append((c, (s + 1) % 4))
        pts.append((c, (s + 2) % 4))
    tri = {c for c, _ in face}
    chords = []
    for i in range(3):
        c, p = pts[i]
        # walk into the triangle along the strand
        q = (p + 2) % 4
        a = d.crossings[c][q]
        tail, head = d.ends[a]
        other = head if tail == (c, q) else tail
        c2, p2 = other
        if c2 not in tri or c2 == c:
            return None
        exit_pt = (c2, (p2 + 2) % 4)
        if pts.index(exit_pt) != i + 3:
            return None
        chords.append(((c, p), (c2, p2), a, exit_pt))
    # heights: which chord is over at each crossing
    over_count = [0, 0, 0]
    pair_cross = {}
    for i in range(3):
        for j in range(i + 1, 3):
            ci = {chords[i][0][0], chords[i][1][0]}
            cj = {chords[j][0][0], chords[j][1][0]}
            common = ci & cj
            if len(common) != 1:
                return None
            x = common.pop()
            pair_cross[(i, j)] = x
            i_slots = _chord_slots_at(d, chords[i], x)
            if i_slots % 2 == 1:
                over_count[i] += 1
            else:
                over_count[j] += 1
    if sorted(over_count) != [0, 1, 2]:
        return None
    return pts, chords, over_count, pair_cross


def _chord_slots_at(d, chord, x):
    (c1, p1), (c2, p2), _, _ = chord
    if c1 == x:
        return p1
    if c2 == x:
        return p2
    raise AssertionError("chord does not pass crossing")


def _r3(ed: _Edit, cs):
    d = ed.d
    face = _triangle(d, cs)
    data = _r3_data(d, face) if face is not None else None
    if data is None:
        raise InvalidMove(f"crossings {cs} do not bound an R3 triangle")
    pts, chords, height, pair_cross = data
    g = ed.g
    keys_at = {pt: (d.crossings[pt[0]][pt[1]],) for pt in pts}
    P = [(math.cos(k * math.pi / 3), math.sin(k * math.pi / 3)) for k in range(6)]

    def line(i, sigma):
        (x0, y0), (x1, y1) = P[i], P[i + 3]
        ux, uy = x1 - x0, y1 - y0
        n = math.hypot(ux, uy)
        ux, uy = ux / n, uy / n
        off = 0.2 * sigma
        return (x0 - uy * off, y0 + ux * off), (ux, uy)

    def meet(i, j, sigma):
        (px, py), (ux, uy) = line(i, sigma)
        (qx, qy), (vx, vy) = line(j, sigma)
        det = ux * (-vy) - uy * (-vx)
        t = ((qx - px) * (-vy) - (qy - py) * (-vx)) / det
        return t

    def order_on(i, sigma):
        others = [j for j in range(3) if j != i]
        ts = {j: meet(i, j, sigma) for j in others}
        return sorted(others, key=lambda j: ts[j])

    # current configuration: along chord 0 from P0, the first crossing is the
    # one at the entry point
    first_now = next(j for j in range(3) if j != 0
                     and pair_cross[tuple(sorted((0, j)))] == chords[0][0][0])
    sigma = 1 if order_on(0, 1)[0] != first_now else -1

    incoming = []
    for i in range(3):
        c, p = chords[i][0]
        incoming.append(d.is_incoming(c, p))  # external at P_i enters the disk
    segs = {}
    for i in range(3):
        seq = order_on(i, sigma)
        mid = ed.fresh(None)
        segs[i] = (seq, [keys_at[pts[i]], mid, keys_at[pts[i + 3]]])
    # drop the old internal arcs
    for _, _, a, _ in chords:
        ed.dropped.add((a,))
        ed.erased.add((a,))
    old = sorted(cs)
    new_hints = {}
    slot_pairs = [(0, 1), (0, 2), (1, 2)]
    for (i, j), at in zip(slot_pairs, old):
        halves = []
        for k in (i, j):
            seq, ks = segs[k]
            pos = seq.index(j if k == i else i)
            before, after = ks[pos], ks[pos + 1]
            _, (ux, uy) = line(k, sigma)
            under = height[k] < height[j if k == i else i]
            halves.append((_ang(-ux, -uy), before, under, incoming[k]))
            halves.append((_ang(ux, uy), after, under, not incoming[k]))
        keys, hint = _crossing_from_halves(halves)
        ed.add_crossing(keys, hint, at=at)
        new_hints[(i, j)] = (keys, hint)
    # transport colors along the chords, top strand first
    for k in sorted(range(3), key=lambda k: -height[k]):
        seq, ks = segs[k]
        steps = [(seq[0], ks[0], ks[1]), (seq[1], ks[1], ks[2])]
        if not incoming[k]:
            steps = [(seq[1], ks[2], ks[1]), (seq[0], ks[1], ks[0])]
        for n_step, (other, src, dst) in enumerate(steps):
            keys, hint = new_hints[tuple(sorted((k, other)))]
            if height[k] > height[other]:
                val = ed.color[src]
            else:
                val = wirtinger_out(g, _sign_of(hint), ed.color[_over_key_at(keys, hint)],
                                    ed.color[src])
            if n_step == 0:
                ed.color[dst] = val
            elif ed.color[dst] != val:
                raise AssertionError("R3 color transport inconsistent")


def _over_key_at(keys, hint):
    return keys[hint[1]]


# ---------------------------------------------------------------------------
# saddle


def _saddle(ed: _Edit, e, side_e, f, side_f):
    d = ed.d
    if e == f:
        raise InvalidMove("saddle needs two distinct arcs")
    for a in (e, f):
        if not 1 <= a <= d.n_arcs:
            raise InvalidMove(f"no arc {a}")
    ce, cf = ed.color[(e,)], ed.color[(f,)]
    if ce != cf:
        raise ColorMismatch(f"arcs {e} and {f} carry different colors")
    e_loop, f_loop = e in d.loops, f in d.loops
    if e_loop or f_loop:
        if (side_e, side_f) != ("-", "-"):
            raise InvalidMove("saddles with crossingless loops use side '-'")
        gone = f if f_loop else e
        keep = e if gone == f else f
        ed.loops.remove((gone,))
        ed.union((keep,), (gone,))
        return
    if side_e == "*" or side_f == "*":
        if (side_e, side_f) != ("*", "*") or _piece(d, e) == _piece(d, f):
            raise InvalidMove("'*' saddles join arcs of different diagram pieces")
        side_e = side_f = "R"
    elif side_e not in ("L", "R") or side_f not in ("L", "R"):
        raise InvalidMove("side must be L or R")
    elif d.face_on(e, side_e) != d.face_on(f, side_f):
        raise InvalidMove(f"arcs {e},{f} do not share a face on the given sides")
    if (side_e != side_f) and ed.g.inv(ce) != ce:
        raise InvalidMove("parallel saddle needs a self-inverse color")
    e_tail, e_head = ed.split_arc(e)
    f_tail, f_head = ed.split_arc(f)
    e_W, e_E = (e_tail, e_head) if side_e == "R" else (e_head, e_tail)
    f_E, f_W = (f_tail, f_head) if side_f == "R" else (f_head, f_tail)
    ed.union(e_W, f_W)
    ed.union(e_E, f_E)


def _piece(d: LinkDiagram, a):
    c = d.ends[a][0][0]
    return next(i for i, p in enumerate(d.crossing_components) if c in p)


# ---------------------------------------------------------------------------
# public API


def applicable_moves(d: LinkDiagram, psi, additions: bool = True) -> list[MoveEvent]:
    """All removals, R3 triangles and saddles, plus canonical R-additions."""
    psi = as_gcoloring(psi)
    ev = set()
    n = d.n_crossings
    for c, s in enumerate(d.crossings):
        if any(s[i] == s[(i + 1) % 4] for i in range(4)):
            ev.add(MoveEvent("R1_remove", (c,)))
    for f in d.faces:
        cs = sorted({c for c, _ in f})
        if len(f) == 2 and len(cs) == 2 and _r2_removable(d, *cs):
            ev.add(MoveEvent("R2_remove", tuple(cs)))
        if len(f) == 3 and len(cs) == 3 and _r3_data(d, f) is not None:
            ev.add(MoveEvent("R3", tuple(cs)))
    # saddles inside faces
    for fi in range(len(d.faces)):
        fa = d.face_arcs(fi)
        for i in range(len(fa)):
            for j in range(len(fa)):
                (a, sa), (b, sb) = fa[i], fa[j]
                if a < b and psi[a] == psi[b]:
                    ev.add(MoveEvent("Saddle", (a, sa, b, sb)))
    # saddles between separate pieces, and with crossingless loops
    pieces = d.crossing_components
    if len(pieces) > 1:
        first_arc = {}
        for a in d.arcs:
            if a in d.loops:
                continue
            first_arc.setdefault(_piece(d, a), []).append(a)
        for p in range(len(pieces)):
            for q in range(p + 1, len(pieces)):
                for a in first_arc[p]:
                    for b in first_arc[q]:
                        if psi[a] == psi[b]:
                            ev.add(MoveEvent("Saddle", (min(a, b), "*", max(a, b), "*")))
    for lp in d.loops:
        for b in d.arcs:
            if b != lp and psi[b] == psi[lp]:
                if b in d.loops and b < lp:
                    continue
                ev.add(MoveEvent("Saddle", (min(lp, b), "-", max(lp, b), "-")
                                 if b in d.loops else (lp, "-", b, "-")))
    if additions:
        for a in d.arcs:
            for side in ("L", "R"):
                for first in ("o", "u"):
                    ev.add(MoveEvent("R1_add", (a, side, first)))
        for fi, f in enumerate(d.faces):
            fa = d.face_arcs(fi)
            for i in range(len(fa)):
                (a, sa), (b, sb) = fa[i], fa[(i + 1) % len(fa)]
                if a != b:
                    for over in ("e", "f"):
                        ev.add(MoveEvent("R2_add", (a, sa, b, sb, over)))
    return sorted(ev, key=MoveEvent.sort_key)


def apply_move(d: LinkDiagram, psi, m: MoveEvent):
    """Apply ``m``; returns ``(diagram, GColoring)``."""
    psi = as_gcoloring(psi)
    ed = _Edit(d, psi)
    k, site = m.kind, m.site
    try:
        if k == "R1_remove":
            (c,) = site
            _check_crossing(d, c)
            _r1_remove(ed, c)
        elif k == "R1_add":
            _r1_add(ed, *site)
        elif k == "R2_remove":
            c1, c2 = site
            _check_crossing(d, c1)
            _check_crossing(d, c2)
            _r2_remove(ed, c1, c2)
        elif k == "R2_add":
            _r2_add(ed, *site)
        elif k == "R3":
            for c in site:
                _check_crossing(d, c)
            _r3(ed, tuple(site))
        elif k == "Saddle":
            _saddle(ed, *site)
        else:
            raise InvalidMove(f"unknown move kind {k}")
    except (TypeError, ValueError) as exc:
        raise InvalidMove(f"bad site for {m}: {exc}") from None
    return ed.finish()


def _check_crossing(d, c):
    if not isinstance(c, int) or not 0 <= c < d.n_crossings:
        raise InvalidMove(f"no crossing {c}")


def replay(d: LinkDiagram, psi, events):
    psi = as_gcoloring(psi)
    for m in events:
        d, psi = apply_move(d, psi, m)
    return d, psi


def _corner_saddle(d: LinkDiagram, c, s):
    """Saddle joining the two arcs that meet at corner ``s`` of crossing ``c``."""
    a, b = d.crossings[c][s], d.crossings[c][(s + 1) % 4]
    side_b = "R" if d.ends[b][0] == (c, (s + 1) % 4) else "L"
    side_a = "R" if d.ends[a][1] == (c, s) else "L"
    if a == b:
        return None
    if a < b:
        return MoveEvent("Saddle", (a, side_a, b, side_b))
    return MoveEvent("Saddle", (b, side_b, a, side_a))


def strand_crossing(d: LinkDiagram, psi, c: int):
    """Pass two equal-colored strands through each other at crossing ``c``.

    Realized as a saddle at a corner of ``c`` (turning it into a kink), removal
    of the kink, a kink of the opposite type, and a saddle joining the new
    kink's loop back to the strand the first saddle cut off. Returns
    ``(diagram, coloring, events)``.
    """
    from .oracle import canonical_form
    from .diagram import crossing_change

    psi = as_gcoloring(psi)
    _check_crossing(d, c)
    a, b, c2, dd = d.crossings[c]
    if not psi[a] == psi[b] == psi[c2]:
        raise ColorMismatch(f"crossing {c} joins strands of different colors")
    flipped = list(d.crossings)
    flipped[c] = crossing_change(d.crossings[c], d.over_in[c])
    target = LinkDiagram(tuple(flipped), d.loops)
    target_form = canonical_form(target, psi)

    for s in range(4):
        m1 = _corner_saddle(d, c, s)
        if m1 is None or m1.site[1] != m1.site[3]:
            continue
        d1, p1 = apply_move(d, psi, m1)
        kinks = [m for m in applicable_moves(d1, p1, additions=False) if m.kind == "R1_remove"]
        for m2 in kinks:
            d2, p2 = apply_move(d1, p1, m2)
            for arc in d2.arcs:
                for side in ("L", "R"):
                    for first in ("o", "u"):
                        m3 = MoveEvent("R1_add", (arc, side, first))
                        d3, p3 = apply_move(d2, p2, m3)
                        for m4 in applicable_moves(d3, p3, additions=False):
                            if m4.kind != "Saddle":
                                continue
                            d4, p4 = apply_move(d3, p3, m4)
                            if canonical_form(d4, p4) == target_form:
                                return d4, p4, [m1, m2, m3, m4]
    raise InvalidMove(f"no saddle realization found for crossing {c}")


def check_colored(d: LinkDiagram, psi):
    from .diagram import validate_diagram
    err = validate_diagram(d)
    if err is not None:
        raise err
    psi = as_gcoloring(psi)
    err = validate_coloring(d, psi.group, None, psi)
    if err is not None:
        raise err

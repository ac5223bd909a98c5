"""Classification of tricolored diagrams into Trivial / RightTrefoil / LeftTrefoil.

The engine works on a loops-and-clasps graph. Loops are the Seifert circles of
the oriented smoothing, one clasp per crossing joins the two circles that meet
there, and circle nesting comes from the planar embedding. Every clasp carries
a Z3 weight: the crossing's term in the shadow 3-cocycle state-sum of the
dihedral quandle on three elements. Normalization splits a unit off each
non-monochromatic clasp (its handedness fixed by the crossing sign); the
remainder stays on the clasp and is released as ledger events when innermost
loops are eliminated. The ledger therefore always folds to the state-sum,
which is invariant under Reidemeister moves and same-color saddles.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .coloring import Tricoloring, as_tricoloring, validate_tricoloring
from .diagram import LinkDiagram, validate_diagram
from .errors import (BadDegree, InvalidInput, NoProgress, NotInnermost, ResourceBound)

DEFAULT_STEP_LIMIT = 1_000_000

# Positive crossings split off a right-handed unit when this is False.
FLIP_HANDEDNESS = False

CLASSES = ("Trivial", "RightTrefoil", "LeftTrefoil")
_EVENT_VALUE = {"Loop": 0, "Right": 1, "Left": 2}
_VALUE_EVENT = {0: "Loop", 1: "Right", 2: "Left"}


# ---------------------------------------------------------------- state-sum

def _theta(x: int, y: int, z: int) -> int:
    """Mochizuki 3-cocycle of Z3, with the polynomial part divided exactly."""
    return ((x - y) * ((2 * z ** 3 - y ** 3 - (2 * z - y) ** 3) // 3)) % 3


def region_colors(d: LinkDiagram, t: Tricoloring, base=None) -> dict[int, int]:
    """Shadow coloring of faces: crossing arc ``a`` from face value ``r`` gives
    ``2 t(a) - r``. ``base`` lists one (face, color) seed per piece; by default
    the outer face of each piece gets 0."""
    col = {}
    for face, value in base or [(f, 0) for f in d.outer_faces]:
        col[face] = value
        stack = [face]
        while stack:
            f = stack.pop()
            for a, side in d.face_arcs(f):
                other = d.left_face(a) if side == "R" else d.right_face(a)
                v = (2 * t[a] - col[f]) % 3
                if other not in col:
                    col[other] = v
                    stack.append(other)
                elif col[other] != v:
                    raise AssertionError("inconsistent shadow coloring")
    return col


def crossing_weights(d: LinkDiagram, t: Tricoloring, base=None) -> list[int]:
    col = region_colors(d, t, base)
    out = []
    for c, s in enumerate(d.crossings):
        k = 0 if d.over_out(c) == 1 else 3  # corner between under-in and over-out
        r = col[d.face_of_dart[(c, (k + 1) % 4)]]
        out.append((d.sign(c) * _theta(r, t[s[0]], t[s[1]])) % 3)
    return out


def state_sum(d: LinkDiagram, psi, base=None) -> int:
    """The i-invariant computed directly, without the graph engine."""
    return sum(crossing_weights(d, as_tricoloring(psi), base)) % 3


# ------------------------------------------------------------------ graph

@dataclass(frozen=True)
class Clasp:
    ends: tuple[int, int]      # the two loops joined
    sign: int
    colors: tuple[int, int]    # (under strand, over strand)
    residual: int              # Z3 weight not yet released to the ledger


@dataclass
class ClaspGraph:
    # loop id -> (clasp ids in cyclic order, color of the segment after each end);
    # a loop with no ends keeps its single color
    loops: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=dict)
    clasps: dict[int, Clasp] = field(default_factory=dict)
    parent: dict[int, int | None] = field(default_factory=dict)

    def copy(self) -> "ClaspGraph":
        return ClaspGraph(dict(self.loops), dict(self.clasps), dict(self.parent))

    def degree(self, loop: int) -> int:
        return len(self.loops[loop][0])

    def innermost(self) -> list[int]:
        has_child = {p for p in self.parent.values() if p is not None}
        return sorted(x for x in self.loops if x not in has_child)

    def n_clasps(self) -> int:
        return len(self.clasps)

    def snapshot(self):
        return (tuple(sorted(self.loops.items())), tuple(sorted(self.clasps.items())),
                tuple(sorted(self.parent.items(), key=lambda kv: kv[0])))

    def _next_id(self) -> int:
        return max(self.loops, default=0) + 1

    def _drop_end(self, loop: int, clasp: int) -> None:
        ends, cols = self.loops[loop]
        p = ends.index(clasp)
        # the merged segment keeps the color it had before the end
        ends = ends[:p] + ends[p + 1:]
        cols = cols[:p] + cols[p + 1:] if len(cols) > 1 else cols
        self.loops[loop] = (ends, cols)


@dataclass
class TrefoilLedger:
    events: list[tuple[str, str]] = field(default_factory=list)  # (kind, origin)

    @property
    def i(self) -> int:
        return sum(_EVENT_VALUE[k] for k, _ in self.events) % 3

    def add(self, kind: str, origin: str) -> None:
        self.events.append((kind, origin))


@dataclass(frozen=True)
class ClassificationResult:
    cls: str
    i: int
    trace: tuple[str, ...]

    def __str__(self) -> str:
        return f"class={self.cls} i={self.i}"


# ---------------------------------------------------------- normalization

def seifert_circles(d: LinkDiagram) -> list[tuple[int, ...]]:
    """Arc cycles of the oriented smoothing, each starting at its smallest arc."""
    nxt = {}
    for a in d.arcs:
        if a in d.loops:
            nxt[a] = a
            continue
        c, slot = d.ends[a][1]
        s = d.crossings[c]
        nxt[a] = s[d.over_out(c)] if slot == 0 else s[2]
    seen, out = set(), []
    for a in d.arcs:
        if a in seen:
            continue
        cyc = [a]
        seen.add(a)
        b = nxt[a]
        while b != a:
            cyc.append(b)
            seen.add(b)
            b = nxt[b]
        out.append(tuple(cyc))
    return out


def _nesting(d: LinkDiagram, circles, circle_of) -> dict[int, int | None]:
    """Parent circle of each circle, from the region/circle tree."""
    face_root = {}

    def find(x):
        while face_root.get(x, x) != x:
            x = face_root[x]
        return x

    def union(x, y):
        x, y = find(x), find(y)
        if x != y:
            face_root[max(x, y)] = min(x, y)

    outer = d.outer_faces
    for f in outer[1:]:
        union(f, outer[0])
    for c in range(d.n_crossings):
        corners = (1, 3) if d.over_in[c] == 3 else (0, 2)
        fa, fb = (d.face_of_dart[(c, (k + 1) % 4)] for k in corners)
        union(fa, fb)

    OUT = ("region", find(outer[0])) if outer else ("region", None)
    adj: dict = {}
    for i, cyc in enumerate(circles):
        node = ("circle", i)
        if cyc[0] in d.loops:
            regions = {OUT}
        else:
            regions = set()
            for a in cyc:
                regions.add(("region", find(d.right_face(a))))
                regions.add(("region", find(d.left_face(a))))
        for r in regions:
            adj.setdefault(node, set()).add(r)
            adj.setdefault(r, set()).add(node)
    parent_circle: dict[int, int | None] = {}
    owner = {OUT: None}
    queue = [OUT]
    seen = {OUT}
    while queue:
        node = queue.pop(0)
        for nb in sorted(adj.get(node, ()), key=repr):
            if nb in seen:
                continue
            seen.add(nb)
            if nb[0] == "circle":
                parent_circle[nb[1]] = owner[node]
                owner[nb] = nb[1]
            else:
                owner[nb] = owner[node]
            queue.append(nb)
    if len(parent_circle) != len(circles):
        raise AssertionError("circle nesting is not a tree")
    return parent_circle


def clasp_normalize(d: LinkDiagram, psi) -> tuple[ClaspGraph, TrefoilLedger, list[str]]:
    """Build the loops-and-clasps graph, splitting one unit per crossing."""
    err = validate_diagram(d)
    t = as_tricoloring(psi) if psi is not None else None
    if err is None and t is not None:
        err = validate_tricoloring(d, t)
    if err is not None:
        raise InvalidInput(f"invalid tricolored diagram: {err}")
    circles = seifert_circles(d)
    circle_of = {a: i for i, cyc in enumerate(circles) for a in cyc}
    parent = _nesting(d, circles, circle_of)
    weights = crossing_weights(d, t)

    g = ClaspGraph()
    ledger = TrefoilLedger()
    trace = []
    lid = {i: i + 1 for i in range(len(circles))}
    for i, cyc in enumerate(circles):
        ends = tuple(d.ends[a][1][0] + 1 for a in cyc) if cyc[0] not in d.loops else ()
        cols = tuple(t[a] for a in cyc[1:] + cyc[:1]) if ends else (t[cyc[0]],)
        g.loops[lid[i]] = (ends, cols)
        g.parent[lid[i]] = None if parent[i] is None else lid[parent[i]]
    for c, s in enumerate(d.crossings):
        a, b = circle_of[s[0]], circle_of[s[d.over_in[c]]]
        if a == b:
            raise AssertionError("a Seifert circle meets itself at a crossing")
        under, over = t[s[0]], t[s[1]]
        if under == over:
            split = 0
        else:
            split = 1 if (d.sign(c) > 0) != FLIP_HANDEDNESS else 2
        g.clasps[c + 1] = Clasp((lid[a], lid[b]), d.sign(c), (under, over),
                                (weights[c] - split) % 3)
        trace.append(f"CLASP {c + 1}")
        trace.append(f"SPLIT {_VALUE_EVENT[split]}")
        ledger.add(_VALUE_EVENT[split], f"clasp {c + 1}")
    return g, ledger, trace


# ------------------------------------------------------------ rewriting

def _require_innermost(g: ClaspGraph, loop: int) -> None:
    if loop not in g.loops:
        raise NotInnermost(f"no loop {loop}")
    if loop not in g.innermost():
        raise NotInnermost(f"loop {loop} contains another loop")


def loop_saddle(g: ClaspGraph, loop: int, i: int, j: int) -> tuple[int, int]:
    """Saddle the segments after ends ``i`` and ``j`` (equal colors) of ``loop``."""
    ends, cols = g.loops[loop]
    if not 0 <= i < j < len(ends) or cols[i] != cols[j]:
        raise NoProgress(f"no same-color saddle at {i},{j} on loop {loop}")
    a = (ends[i + 1:j + 1], cols[i + 1:j + 1])
    b = (ends[j + 1:] + ends[:i + 1], cols[j + 1:] + cols[:i + 1])
    new_a, new_b = g._next_id(), g._next_id() + 1
    par = g.parent.pop(loop)
    del g.loops[loop]
    g.loops[new_a], g.loops[new_b] = a, b
    g.parent[new_a] = g.parent[new_b] = par
    for x in (new_a, new_b):
        for cl in g.loops[x][0]:
            e = g.clasps[cl].ends
            g.clasps[cl] = replace(g.clasps[cl], ends=tuple(x if y == loop else y for y in e))
    return new_a, new_b


def reduce_innermost_degree(g: ClaspGraph, loop: int, trace: list[str] | None = None
                            ) -> ClaspGraph:
    """Split ``loop`` by same-color saddles until every piece has degree at most 3."""
    _require_innermost(g, loop)
    g = g.copy()
    todo = [loop]
    while todo:
        x = todo.pop(0)
        ends, cols = g.loops[x]
        if len(ends) <= 3:
            continue
        pair = next(((i, j) for i in range(len(cols)) for j in range(i + 1, len(cols))
                     if cols[i] == cols[j]), None)
        if pair is None:
            raise NoProgress(f"loop {x} of degree {len(ends)} has no same-color segments")
        a, b = loop_saddle(g, x, *pair)
        if trace is not None:
            trace.append(f"LSADDLE {x} {pair[0]} {pair[1]}")
        todo += [a, b]
    return g


def eliminate_innermost(g: ClaspGraph, loop: int, ledger: TrefoilLedger,
                        trace: list[str] | None = None) -> tuple[ClaspGraph, TrefoilLedger]:
    """Remove an innermost loop of degree 0 to 3 together with its clasps."""
    _require_innermost(g, loop)
    k = g.degree(loop)
    if k > 3:
        raise BadDegree(f"loop {loop} has degree {k}")
    g = g.copy()
    ledger = TrefoilLedger(list(ledger.events))
    trace = trace if trace is not None else []
    trace.append(f"ELIM {loop} {k}")
    ends = list(g.loops[loop][0])
    origin = f"loop {loop}"

    def emit(kind):
        ledger.add(kind, origin)
        trace.append(f"SPLIT {kind}")

    if k == 1:
        cl = g.clasps[ends[0]]
        if cl.colors[0] == cl.colors[1] and cl.residual != 0:
            raise AssertionError("monochromatic clasp with nonzero weight")
        emit(_VALUE_EVENT[cl.residual])
    elif k == 2:
        emit(_VALUE_EVENT[sum(g.clasps[x].residual for x in ends) % 3])
    elif k == 3:
        r = g.clasps[ends[0]].residual
        for kind in {0: ("Right", "Left"), 1: ("Left", "Left"), 2: ("Right", "Right")}[r]:
            emit(kind)
        emit(_VALUE_EVENT[sum(g.clasps[x].residual for x in ends[1:]) % 3])
    for x in ends:
        cl = g.clasps.pop(x)
        for y in cl.ends:
            if y != loop:
                g._drop_end(y, x)
    del g.loops[loop]
    del g.parent[loop]
    return g, ledger


# -------------------------------------------------------------- driver

def _step_limit() -> int:
    env = os.environ.get("LINKFORGE_STEP_LIMIT")
    return int(env) if env else DEFAULT_STEP_LIMIT


def run_engine(d: LinkDiagram, psi, step_limit: int | None = None, on_round=None):
    """Normalize and eliminate until no loops remain; returns (graph, ledger, trace)."""
    limit = step_limit if step_limit is not None else _step_limit()
    g, ledger, trace = clasp_normalize(d, psi)
    steps = 0
    while g.loops:
        steps += 1
        if steps > limit:
            raise ResourceBound(f"classification exceeded {limit} steps")
        inner = g.innermost()
        if not inner:
            raise NoProgress("no innermost loop")
        loop = inner[0]
        if g.degree(loop) > 3:
            g = reduce_innermost_degree(g, loop, trace)
            continue
        before = g.n_clasps()
        deg = g.degree(loop)
        g, ledger = eliminate_innermost(g, loop, ledger, trace)
        if deg and g.n_clasps() >= before:
            raise NoProgress(f"eliminating loop {loop} did not remove clasps")
        if on_round is not None:
            on_round(before, g.n_clasps(), deg)
    return g, ledger, trace


def classify(d: LinkDiagram, psi, step_limit: int | None = None) -> ClassificationResult:
    _, ledger, trace = run_engine(d, psi, step_limit)
    i = ledger.i
    return ClassificationResult(CLASSES[i], i, tuple(trace))


def replay_trace(d: LinkDiagram, psi, trace) -> tuple[ClaspGraph, TrefoilLedger]:
    """Re-run the rewrites named by ``trace`` and check every recorded split."""
    g, ledger, first = clasp_normalize(d, psi)
    lines = [ln.strip() for ln in trace if ln.strip()]
    n0 = len(first)
    if lines[:n0] != first:
        raise InvalidInput("trace does not start with this diagram's normalization")
    k = n0
    while k < len(lines):
        parts = lines[k].split()
        if parts[0] == "LSADDLE":
            loop_saddle(g, int(parts[1]), int(parts[2]), int(parts[3]))
            k += 1
        elif parts[0] == "ELIM":
            loop = int(parts[1])
            if g.degree(loop) != int(parts[2]):
                raise InvalidInput(f"trace line {k + 1}: degree mismatch")
            sub: list[str] = []
            g, ledger = eliminate_innermost(g, loop, ledger, sub)
            if lines[k:k + len(sub)] != sub:
                raise InvalidInput(f"trace line {k + 1}: splits differ on replay")
            k += len(sub)
        else:
            raise InvalidInput(f"trace line {k + 1}: unexpected {parts[0]}")
    return g, ledger

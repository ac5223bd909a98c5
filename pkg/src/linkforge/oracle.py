"""Bounded breadth-first equivalence search over colored diagrams.

States are deduplicated by a relabeling-invariant canonical form, so the
search explores colored diagrams up to renumbering of arcs and crossings.
NotFound is inconclusive: additions are only generated at canonical sites.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field

from .coloring import as_gcoloring
from .diagram import LinkDiagram
from .errors import LinkforgeError, ResourceBound
from .moves import MoveEvent, applicable_moves, apply_move

DEFAULT_MAX_STATES = 1_000_000
CANONICAL_CROSSING_LIMIT = 40
_ADDED = {"R1_add": 1, "R2_add": 2}


class NotFound(LinkforgeError):
    exit_code = 3


def default_max_states() -> int:
    env = os.environ.get("LINKFORGE_MAX_STATES")
    return int(env) if env else DEFAULT_MAX_STATES


def canonical_form(d: LinkDiagram, psi, max_crossings: int = CANONICAL_CROSSING_LIMIT) -> bytes:
    """Relabeling-invariant serialization of a colored diagram.

    Each connected piece is labeled by a deterministic traversal from a start
    arc: walk its component, then enter new components in the order their
    arcs are met around the head crossings of already labeled arcs. The piece
    key is the minimum over all start arcs; pieces and loops are then sorted.
    """
    if d.n_crossings > max_crossings:
        raise ResourceBound(f"canonical form limited to {max_crossings} crossings")
    psi = as_gcoloring(psi)
    pieces = []
    for piece in d.crossing_components:
        arcs = sorted({a for c in piece for a in d.crossings[c]})
        best = min(_piece_key(d, psi, piece, a) for a in arcs)
        pieces.append(best)
    pieces.sort()
    loops = sorted(psi[a] for a in d.loops)
    text = "/".join(";".join(",".join(map(str, x)) for x in cr) + "|" + ",".join(map(str, col))
                    for cr, col in pieces)
    text += "#" + ",".join(map(str, loops))
    return text.encode()


def _piece_key(d, psi, piece, start):
    label = {}
    order = []
    nxt = d.next_arc

    def walk(a):
        while a not in label:
            order.append(a)
            label[a] = len(order)
            a = nxt[a]

    walk(start)
    i = 0
    while i < len(order):
        c, slot = d.ends[order[i]][1]
        s = d.crossings[c]
        for k in (1, 2, 3):
            b = s[(slot + k) % 4]
            if b not in label:
                walk(b)
        i += 1
    crossings = tuple(sorted(tuple(label[a] for a in d.crossings[c]) for c in piece))
    return crossings, tuple(psi[a] for a in order)


def is_unlink(d: LinkDiagram) -> bool:
    return d.n_crossings == 0


@dataclass
class SearchResult:
    forms: set = field(default_factory=set)
    partial: bool = False
    path: list | None = None
    states: int = 0


def _bfs(d, psi, max_crossings, max_states, goal=None):
    psi = as_gcoloring(psi)
    start = canonical_form(d, psi)
    parents = {start: None}
    queue = deque([(d, psi, start)])
    res = SearchResult()
    if goal is not None and goal(d, start):
        res.path = []
        res.forms = set(parents)
        return res
    while queue:
        cur, cpsi, cform = queue.popleft()
        for m in applicable_moves(cur, cpsi):
            if cur.n_crossings + _ADDED.get(m.kind, 0) > max_crossings:
                continue
            nd, npsi = apply_move(cur, cpsi, m)
            if nd.n_crossings > max_crossings:
                continue
            form = canonical_form(nd, npsi)
            if form in parents:
                continue
            parents[form] = (cform, m, cur, cpsi)
            if goal is not None and goal(nd, form):
                res.path = _path(parents, form)
                res.forms = set(parents)
                return res
            if len(parents) >= max_states:
                res.partial = True
                res.forms = set(parents)
                return res
            queue.append((nd, npsi, form))
    res.forms = set(parents)
    return res


def _path(parents, form):
    """Moves from the start state, re-labelled for replay from the start."""
    chain = []
    while parents[form] is not None:
        prev, m, cur, cpsi = parents[form]
        chain.append((m, cur, cpsi))
        form = prev
    chain.reverse()
    return [m for m, _, _ in chain]


def reachable_set(d, psi, max_crossings: int | None = None, max_states: int | None = None
                  ) -> SearchResult:
    """BFS closure under applicable moves; ``partial`` is set when capped."""
    if max_crossings is None:
        max_crossings = d.n_crossings + 2
    if max_states is None:
        max_states = default_max_states()
    return _bfs(d, psi, max_crossings, max_states)


def prove_equivalent(d1, psi1, d2, psi2, max_crossings: int | None = None,
                     max_states: int | None = None) -> list[MoveEvent]:
    """A replayable move path from (d1, psi1) to (d2, psi2).

    Raises NotFound when the bounded search is exhausted, ResourceBound when
    the state cap is hit first.
    """
    if max_crossings is None:
        max_crossings = max(d1.n_crossings, d2.n_crossings) + 2
    if max_states is None:
        max_states = default_max_states()
    target = canonical_form(d2, psi2)
    res = _bfs(d1, psi1, max_crossings, max_states, goal=lambda _d, f: f == target)
    if res.path is not None:
        return res.path
    if res.partial:
        raise ResourceBound(f"search hit {max_states} states", partial=res)
    raise NotFound("no path within bounds")


def find_unlink_path(d, psi, max_crossings: int | None = None,
                     max_states: int | None = None) -> list[MoveEvent]:
    """A path to any crossingless diagram (an unlink)."""
    if max_crossings is None:
        max_crossings = d.n_crossings + 2
    if max_states is None:
        max_states = default_max_states()
    res = _bfs(d, psi, max_crossings, max_states, goal=lambda nd, _f: is_unlink(nd))
    if res.path is not None:
        return res.path
    if res.partial:
        raise ResourceBound(f"search hit {max_states} states", partial=res)
    raise NotFound("no unlink within bounds")

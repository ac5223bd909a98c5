"""Seeded random tricolored diagrams from braid closures."""

from __future__ import annotations

import random

from .assemble import assemble
from .coloring import Tricoloring, enumerate_tricolorings
from .diagram import LinkDiagram, check_diagram


def braid_closure(n_strands: int, word) -> LinkDiagram:
    """Closure of a braid word; ``+i`` puts the strand from position i over."""
    pos = [(p, 0) for p in range(n_strands)]  # current key on each position
    fresh = 0
    raw, hints = [], []
    for gen in word:
        i = abs(gen) - 1
        lb, rb = pos[i], pos[i + 1]
        fresh += 1
        lt, rt = ("k", fresh, 0), ("k", fresh, 1)
        if gen > 0:  # lb -> rt passes over, so rb -> lt is under
            raw.append((rb, rt, lt, lb))
            hints.append((0, 3))
        else:
            raw.append((lb, rb, rt, lt))
            hints.append((0, 1))
        pos[i], pos[i + 1] = lt, rt
    close = {pos[p]: (p, 0) for p in range(n_strands)}
    raw = [tuple(close.get(k, k) for k in x) for x in raw]
    used = {k for x in raw for k in x}
    loops = [(p, 0) for p in range(n_strands) if (p, 0) not in used]
    keyed = sorted(used | set(loops), key=repr)
    rank = {k: (n,) for n, k in enumerate(keyed, 1)}
    d, _ = assemble([tuple(rank[k] for k in x) for x in raw], [rank[k] for k in loops], hints)
    return check_diagram(d)


def random_tricolored(max_crossings: int, seed: int) -> tuple[LinkDiagram, Tricoloring]:
    """A random braid closure with at most ``max_crossings`` crossings and a
    random tricoloring, preferring non-monochromatic ones."""
    rng = random.Random(seed)
    while True:
        n = rng.randint(2, 4)
        length = rng.randint(0, max(0, max_crossings))
        word = [rng.choice((1, -1)) * rng.randint(1, n - 1) for _ in range(length)]
        d = braid_closure(n, word)
        cols = enumerate_tricolorings(d)
        if not cols:
            continue
        nontrivial = [t for t in cols if len(set(t.colors)) > 1]
        return d, rng.choice(nontrivial if nontrivial and rng.random() < 0.8 else cols)

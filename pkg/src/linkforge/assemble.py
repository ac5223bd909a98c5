"""Rebuild a normalized LinkDiagram from crossings labelled by arbitrary keys.

Moves produce crossings whose arcs carry provisional keys (tuples of ints)
and whose slots are only known up to rotation by two. ``assemble`` traces the
components, fixes an orientation for each, renumbers arcs consecutively and
rotates every crossing so slot 0 is the incoming under-strand.
"""

from __future__ import annotations

from collections import defaultdict

from .diagram import LinkDiagram


def assemble(raw, loop_keys=(), hints=None):
    """Build a diagram.

    raw   -- list of 4-tuples of keys, counterclockwise, under-strand on
             positions 0 and 2 (either may be the incoming one).
    hints -- per crossing, ``(under_in, over_in)`` positions, either may be
             None. Each component is oriented to agree with the first hinted
             pass met when walking from its smallest key.

    Returns ``(diagram, keymap)`` where keymap sends every key to its label.
    """
    hints = hints or [(None, None)] * len(raw)
    occ = defaultdict(list)
    for c, keys in enumerate(raw):
        for p, k in enumerate(keys):
            occ[k].append((c, p))
    for k, places in occ.items():
        if len(places) != 2:
            raise AssertionError(f"key {k} occurs {len(places)} times")

    def other_end(k, end):
        a, b = occ[k]
        return b if end == a else a

    comps = []  # (min key, [(key, head endpoint)...] in orientation order)
    seen = set()
    for start in sorted(occ):
        if start in seen:
            continue
        walk = []
        k, head = start, occ[start][1]
        while True:
            walk.append((k, head))
            seen.add(k)
            c, p = head
            q = (p + 2) % 4
            k2 = raw[c][q]
            head2 = other_end(k2, (c, q))
            if k2 == start and head2 == walk[0][1]:
                break
            k, head = k2, head2
            if len(walk) > 4 * len(raw) + 4:
                raise AssertionError("component walk did not close")
        agree = None
        for k, (c, p) in walk:
            want = hints[c][p % 2]
            if want is not None:
                agree = want == p
                break
        if agree is False:
            walk = _reverse(walk, raw, other_end)
        comps.append((min(k for k, _ in walk), walk))
    for k in sorted(set(loop_keys)):
        comps.append((k, None))
    comps.sort(key=lambda t: t[0])

    keymap = {}
    incoming = {}
    loops = []
    label = 0
    for first, walk in comps:
        if walk is None:
            label += 1
            keymap[first] = label
            loops.append(label)
            continue
        i0 = next(i for i, (k, _) in enumerate(walk) if k == first)
        walk = walk[i0:] + walk[:i0]
        for k, head in walk:
            label += 1
            keymap[k] = label
            incoming[head] = True

    crossings = []
    over_in = []
    for c, keys in enumerate(raw):
        u = 0 if incoming.get((c, 0)) else 2
        rot = [keys[(u + i) % 4] for i in range(4)]
        crossings.append(tuple(keymap[k] for k in rot))
        over_in.append(1 if incoming.get((c, (u + 1) % 4)) else 3)
    d = LinkDiagram(tuple(crossings), tuple(loops))
    d, keymap = _fix_ambiguous(d, tuple(over_in), keymap)
    return d, keymap


def _reverse(walk, raw, other_end):
    out = []
    for k, head in reversed(walk):
        out.append((k, other_end(k, head)))
    return out


def _fix_ambiguous(d, want, keymap):
    if d.over_in == want:
        return d, keymap
    # two-arc components lying over at both visits: relabel lo <-> hi
    for comp in d.components:
        if len(comp) != 2:
            continue
        if _agree_on(d, want, comp):
            continue
        lo, hi = comp
        swap = {lo: hi, hi: lo}
        cand = LinkDiagram(tuple(tuple(swap.get(a, a) for a in s) for s in d.crossings),
                           d.loops)
        try:
            ok = _agree_on(cand, want, comp)
        except Exception:
            ok = False
        if ok:
            d = cand
            keymap = {k: swap.get(v, v) for k, v in keymap.items()}
    if d.over_in != want:
        raise AssertionError("could not normalize over-strand directions")
    return d, keymap


def _agree_on(d, want, comp):
    got = d.over_in
    return all(got[i] == want[i] for i, s in enumerate(d.crossings)
               if s[1] in comp or s[3] in comp)


def assemble_from_diagram(old, crossings, over_in):
    raw = [tuple((a,) for a in s) for s in crossings]
    hints = [(0, o) for o in over_in]
    d, keymap = assemble(raw, [(a,) for a in old.loops], hints)
    return d, keymap

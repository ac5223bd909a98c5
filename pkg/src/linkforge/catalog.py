"""Built-in diagrams, addressable by name."""

from __future__ import annotations

from functools import lru_cache

from .coloring import monochromatic
from .diagram import LinkDiagram, check_diagram, parse_kld, untangled_union
from .errors import UnknownName

_PD = {
    "unknot": "kld 1\nU 1\n",
    "trefoil_right": "kld 1\nX 1 5 2 4\nX 3 1 4 6\nX 5 3 6 2\n",
    "trefoil_left": "kld 1\nX 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n",
    "figure_eight": "kld 1\nX 4 2 5 1\nX 8 6 1 5\nX 6 3 7 4\nX 2 7 3 8\n",
    "hopf": "kld 1\nX 4 1 3 2\nX 2 3 1 4\n",
    "torus_2_5": "kld 1\nX 1 6 2 7\nX 3 8 4 9\nX 5 10 6 1\nX 7 2 8 3\nX 9 4 10 5\n",
    "stevedore": "kld 1\nX 1 4 2 5\nX 7 10 8 11\nX 3 9 4 8\nX 9 3 10 2\nX 5 12 6 1\nX 11 6 12 7\n",
    "unlink2": "kld 1\nU 1\nU 2\n",
}

CATALOG = ("unknot", "trefoil_right", "trefoil_left", "figure_eight", "hopf", "square_knot",
           "granny_knot", "torus_2_5", "fig5a_decay_example", "stevedore", "unlink2")


def connected_sum(d1: LinkDiagram, d2: LinkDiagram, a1: int = 1, a2: int = 1) -> LinkDiagram:
    """Band-sum arc ``a1`` of ``d1`` with arc ``a2`` of ``d2`` placed beside it."""
    from .moves import MoveEvent, apply_move
    u = untangled_union(d1, d2)
    psi = monochromatic(u).to_gcoloring()
    b = a2 + d1.n_arcs
    out, _ = apply_move(u, psi, MoveEvent("Saddle", (a1, "*", b, "*")))
    return out


@lru_cache(maxsize=None)
def builtin_diagram(name: str) -> LinkDiagram:
    if name in _PD:
        return parse_kld(_PD[name])[0]
    if name == "square_knot":
        return connected_sum(builtin_diagram("trefoil_right"), builtin_diagram("trefoil_left"))
    if name == "granny_knot":
        return connected_sum(builtin_diagram("trefoil_left"), builtin_diagram("trefoil_left"))
    if name == "fig5a_decay_example":
        return check_diagram(parse_kld(_FIG5A)[0])
    raise UnknownName(f"no builtin diagram {name!r}")


# Ribbon knot with vanishing invariant; same-color saddles and R2 removals
# take it to an unlink in seven moves.
_FIG5A = _PD["stevedore"]

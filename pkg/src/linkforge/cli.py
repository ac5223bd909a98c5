"""Command-line entry point: ``linkforge <subcommand> ...``.

Machine output is one ``key=value`` record per line. Exit codes: 0 success,
1 invalid input, 2 resource bound hit, 3 oracle search exhausted.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .catalog import builtin_diagram
from .coloring import (as_gcoloring, coloring_block, coloring_from_block, conjugation_classes,
                       enumerate_colorings, monochromatic, nontrivial_tricoloring,
                       validate_coloring)
from .diagram import parse_kld, serialize_kld, validate_diagram
from .errors import KLDSyntaxError, LinkforgeError
from .generate import random_tricolored
from .group import group_from_token, stabilizers_from_token
from .moves import MoveEvent, format_log, parse_log, replay
from .oracle import default_max_states, find_unlink_path, prove_equivalent
from .reduce import classify


def _read_source(src: str):
    """Diagram and optional coloring block from a path, ``-`` or ``builtin:<name>``."""
    if src.startswith("builtin:"):
        return builtin_diagram(src[len("builtin:"):]), None
    text = sys.stdin.read() if src == "-" else Path(src).read_text(encoding="utf-8")
    return parse_kld(text)


def _load_colored(src: str):
    """Diagram plus a coloring: the file's block, else a nontrivial tricoloring,
    else the monochromatic one."""
    d, block = _read_source(src)
    err = validate_diagram(d)
    if err is not None:
        raise err
    if block is not None:
        psi = coloring_from_block(d, block)
        err = validate_coloring(d, psi.group, None, psi)
        if err is not None:
            raise err
        return d, psi
    return d, (nontrivial_tricoloring(d) or monochromatic(d)).to_gcoloring()


def _emit(out, **kv):
    """One record: space-separated key=value pairs on a single line."""
    print(" ".join(f"{k}={v}" for k, v in kv.items()), file=out)


def cmd_validate(args, out):
    d, block = _read_source(args.input)
    err = validate_diagram(d)
    if err is not None:
        raise err
    _emit(out, valid="true", crossings=d.n_crossings, components=d.n_components, arcs=d.n_arcs)
    if block is not None:
        psi = coloring_from_block(d, block)
        err = validate_coloring(d, psi.group, None, psi)
        if err is not None:
            raise err
        _emit(out, coloring="valid")
    return 0


def cmd_colorings(args, out):
    d, _ = _read_source(args.input)
    err = validate_diagram(d)
    if err is not None:
        raise err
    g, default = group_from_token(args.group)
    s = stabilizers_from_token(g, default, args.stabilizers)
    cols = enumerate_colorings(d, g, s)
    _emit(out, count=len(cols))
    _emit(out, classes=len(conjugation_classes(cols, g)))
    if args.list:
        for psi in cols:
            _emit(out, coloring=",".join(psi.names()))
    return 0


def cmd_apply_move(args, out):
    d, psi = _load_colored(args.input)
    events = [MoveEvent.parse(m) for m in args.move]
    if args.log:
        events += parse_log(Path(args.log).read_text(encoding="utf-8"))
    d, psi = replay(d, psi, events)
    out.write(serialize_kld(d, coloring_block(psi)))
    return 0


def cmd_classify(args, out):
    d, psi = _load_colored(args.input)
    res = classify(d, psi)
    if args.trace:
        Path(args.trace).write_text("\n".join(res.trace) + "\n", encoding="utf-8")
    _emit(out, **{"class": res.cls, "i": res.i})
    return 0


def cmd_oracle(args, out):
    d1, p1 = _load_colored(args.a)
    max_states = args.max_states if args.max_states is not None else default_max_states()
    if args.b is None:
        path = find_unlink_path(d1, p1, args.max_crossings, max_states)
    else:
        d2, p2 = _load_colored(args.b)
        path = prove_equivalent(d1, p1, d2, p2, args.max_crossings, max_states)
    _emit(out, found="true", length=len(path))
    out.write(format_log(path))
    return 0


def cmd_random(args, out):
    d, t = random_tricolored(args.crossings, args.seed)
    out.write(serialize_kld(d, coloring_block(as_gcoloring(t))))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="linkforge", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a KLD file")
    s.add_argument("input")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("colorings", help="count (G,S)-colorings")
    s.add_argument("input")
    s.add_argument("--group", default="sigma3")
    s.add_argument("--stabilizers", default=None)
    s.add_argument("--list", action="store_true")
    s.set_defaults(func=cmd_colorings)

    s = sub.add_parser("apply-move", help="apply moves and print the result")
    s.add_argument("input")
    s.add_argument("move", nargs="*", help='e.g. "R1_add 1 L o"')
    s.add_argument("--log", help="file of moves, one per line")
    s.set_defaults(func=cmd_apply_move)

    s = sub.add_parser("classify", help="Trivial / RightTrefoil / LeftTrefoil")
    s.add_argument("input")
    s.add_argument("--trace")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("oracle", help="bounded search for a move path")
    s.add_argument("a")
    s.add_argument("b", nargs="?", help="target; omitted means any unlink")
    s.add_argument("--max-crossings", type=int, default=None)
    s.add_argument("--max-states", type=int, default=None)
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("random", help="random tricolored diagram")
    s.add_argument("--crossings", type=int, required=True)
    s.add_argument("--seed", type=lambda x: int(x, 0) % 2 ** 64, default=0)
    s.set_defaults(func=cmd_random)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except KLDSyntaxError as exc:
        _emit(err, error="syntax", line=exc.line, col=exc.col)
        _emit(err, expected=exc.expected.replace(" ", "_"))
        return exc.exit_code
    except LinkforgeError as exc:
        _emit(err, error=type(exc).__name__, detail=str(exc).replace("\n", " "))
        return exc.exit_code
    except (OSError, UnicodeDecodeError) as exc:
        _emit(err, error="io", detail=str(exc))
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

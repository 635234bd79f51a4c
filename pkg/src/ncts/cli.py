"""Command-line front end: ``ncts <subcommand> ...``.

Exit codes: 0 success, 1 an identity check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import dimer, network, oracle, reductions
from .connection import solve, solve_below
from .errors import BelowPath, NCTSError
from .lattice import parse_path, point, projections
from .ncalgebra import Generator, concat, word_to_str

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("NCTS_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"NCTS_SEED must be an integer, got {raw!r}") from None


def _parse_point(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*\(?\s*(-?\d+)\s*,\s*(-?\d+)\s*\)?\s*", text)
    if not m:
        raise UsageError(f"bad point {text!r}; expected j,k")
    try:
        return tuple(point(int(m[1]), int(m[2])))
    except ValueError as e:
        raise UsageError(str(e)) from None


def _parse_range(text: str) -> range:
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", text)
    if not m or int(m[1]) > int(m[2]):
        raise UsageError(f"bad range {text!r}; expected lo..hi")
    return range(int(m[1]), int(m[2]) + 1)


def _parse_window(text: str) -> tuple[range, range]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"bad window {text!r}; expected jlo..jhi,klo..khi")
    return _parse_range(parts[0]), _parse_range(parts[1])


def _emit(obj, fmt: str, text: str | None = None) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text if text is not None else json.dumps(obj, sort_keys=True))


def _write_dot(path: str | None, dot: str) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(dot)


# -- subcommands ----------------------------------------------------------------------

def cmd_solve(args) -> int:
    path = parse_path(args.path)
    p = _parse_point(args.point)
    try:
        poly = solve(path, p)
        where = "above"
    except BelowPath:
        poly = solve_below(path, p)
        where = "below"
    if args.bullet:
        poly = poly.involution()
    obj = {"path": path.to_json_obj(), "point": list(p), "region": where,
           "bullet": args.bullet, "terms": poly.to_json_obj()}
    _emit(obj, args.format, str(poly))
    return EXIT_OK


def _section(args):
    path = parse_path(args.path)
    p = _parse_point(args.point)
    j0, j1 = projections(path, p)
    return path, p, j0, j1


def cmd_paths(args) -> int:
    path, p, j0, j1 = _section(args)
    net = network.build_network(path, j0, j1)
    paths = network.enumerate_paths(net, args.entry, args.exit)
    last = path.label(j1)
    rows = [{"connectors": list(np_.connectors), "weight": word_to_str(np_.weight),
             "term": word_to_str(concat(np_.weight, (Generator(last),)))}
            for np_ in paths]
    obj = {"point": list(p), "projections": [j0, j1], "chips": [c.kind for c in net.chips],
           "count": len(rows), "paths": rows}
    _write_dot(args.dot, network.to_dot(net))
    _emit(obj, args.format, "\n".join(r["term"] for r in rows))
    return EXIT_OK


def cmd_dimers(args) -> int:
    path, p, j0, j1 = _section(args)
    g = dimer.build_ladder(path, j0, j1)
    ms = dimer.enumerate_matchings(g)
    rows = [{"edges": [list(e) for e in sorted(m.edges, key=lambda e: (e[1], e[0]))],
             "weight": word_to_str(m.weight)} for m in ms]
    obj = {"point": list(p), "projections": [j0, j1], "columns": g.columns,
           "removed_rungs": sorted(g.removed_rungs),
           "faces": [{"label": f.label, "kind": f.kind, "color": f.color} for f in g.faces],
           "count": len(rows), "matchings": rows}
    _write_dot(args.dot, dimer.to_dot(g))
    _emit(obj, args.format, "\n".join(r["weight"] for r in rows))
    return EXIT_OK


def cmd_check(args) -> int:
    path = parse_path(args.path)
    j_range, k_range = _parse_window(args.window)
    seed = args.seed if args.seed is not None else _default_seed()
    report = oracle.run_identity_suite(path, j_range, k_range, args.trials, seed, args.dim, args.modulus)
    lines = [f"{'PASS' if s['failed'] == 0 and s['checked'] else 'FAIL'} {s['name']}: "
             f"{s['checked']} checked, {s['failed']} failed" for s in report["identities"]]
    nc = report["negative_control"]
    lines.append(f"negative control detected in {nc['detected']}/{nc['scenes']} scenes")
    _emit(report, args.format, "\n".join(lines))
    return EXIT_OK if report["ok"] else EXIT_FAIL


def cmd_reduce(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.which == "qsystem":
        runs = []
        for t in range(args.trials):
            st = reductions.qsystem_iterate(reductions.qsystem_initial(seed + t, args.dim, args.modulus), args.n)
            runs.append({"qsystem": reductions.check_qsystem(st),
                         "embedding": reductions.embed_qsystem(st, range(-8, 9), range(0, args.n + 1))})
        expo = reductions.check_exponent_system(args.range)
        report = {"trials": runs, "exponent_system": expo,
                  "ok": expo["ok"] and all(r["qsystem"]["ok"] and r["embedding"]["ok"] for r in runs)}
        failing = sorted({i["name"] for r in runs for part in r.values() for i in part["identities"] if i["failed"]}
                         | {i["name"] for i in expo["identities"] if i["failed"]})
    else:
        report = reductions.check_quantum_reduction(args.range, args.patch)
        failing = [i["name"] for i in report["exponent_conditions"] + report["patch_checks"] if i["failed"]]
    text = "ok" if report["ok"] else "failed: " + ", ".join(failing)
    _emit(report, args.format, text)
    return EXIT_OK if report["ok"] else EXIT_FAIL


def cmd_render(args) -> int:
    path, p, j0, j1 = _section(args)
    if args.what == "network":
        dot = network.to_dot(network.build_network(path, j0, j1))
    else:
        dot = dimer.to_dot(dimer.build_ladder(path, j0, j1))
    if args.out:
        _write_dot(args.out, dot)
    else:
        sys.stdout.write(dot)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ncts", description="Non-commutative A1 T-system toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_section(sp, formats=("json", "text")):
        sp.add_argument("--path", required=True, help="flat:lo..hi, 'j0=..; heights=..' or JSON")
        sp.add_argument("--point", required=True, help="j,k")
        sp.add_argument("--format", choices=formats, default="text")

    sp = sub.add_parser("solve", help="closed-form solution at a point")
    with_section(sp)
    sp.add_argument("--bullet", action="store_true", help="print T* instead of T")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("paths", help="weighted network paths")
    with_section(sp)
    sp.add_argument("--entry", type=int, choices=(1, 2), default=1)
    sp.add_argument("--exit", type=int, choices=(1, 2), default=1)
    sp.add_argument("--dot")
    sp.set_defaults(func=cmd_paths)

    sp = sub.add_parser("dimers", help="weighted ladder matchings")
    with_section(sp)
    sp.add_argument("--dot")
    sp.set_defaults(func=cmd_dimers)

    sp = sub.add_parser("check", help="randomized identity suite")
    sp.add_argument("--path", required=True)
    sp.add_argument("--window", required=True, help="jlo..jhi,klo..khi")
    sp.add_argument("--trials", type=int, default=oracle.DEFAULT_TRIALS)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--dim", type=int, default=oracle.DEFAULT_DIM)
    sp.add_argument("--modulus", type=int, default=oracle.P61)
    sp.add_argument("--format", choices=("json", "text"), default="text")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("reduce", help="Q-system and quantum reductions")
    sp.add_argument("which", choices=("qsystem", "quantum"))
    sp.add_argument("--n", type=int, default=20)
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--range", type=int, default=50)
    sp.add_argument("--patch", type=int, default=4)
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--dim", type=int, default=oracle.DEFAULT_DIM)
    sp.add_argument("--modulus", type=int, default=oracle.P61)
    sp.add_argument("--format", choices=("json", "text"), default="text")
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("render", help="DOT rendering of the network or ladder")
    sp.add_argument("--path", required=True)
    sp.add_argument("--point", required=True)
    sp.add_argument("--what", choices=("network", "ladder"), default="network")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_render)
    return ap


_VALUE_FLAGS = ("--window", "--point", "--path")


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse reads "-4..4" or "-1,3" as an option; bind such values to their flag
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        if getattr(args, "trials", 1) < 1 or getattr(args, "dim", 1) < 1:
            raise UsageError("--trials and --dim must be positive")
        return args.func(args)
    except (UsageError, NCTSError, ValueError, OSError) as e:
        print(f"ncts: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

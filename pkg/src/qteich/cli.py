"""Command line front end.

Exit codes: 0 when every check passes, 1 when a check fails or a computation
does not converge, 2 for usage, parse and validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, coords, qdilog, suites
from .fatgraph import FatGraph, dumps, flip, format_float, load
from .report import VerificationReport

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _complex_arg(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected RE or RE,IM, got {text!r}")


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="seed for random sweeps (default 0)")
    parser.add_argument("--tol", type=float, default=d(None), help="override the default tolerance")
    parser.add_argument("--json", metavar="PATH", default=d(None), help="write the JSON report to PATH ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qteich", description="Fat graphs, shear coordinates and quantum flips.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(suites.SUITES) + ["flip-morphism", "all"])
    v.add_argument("--m", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--u", type=float)
    v.add_argument("--v", type=float)
    v.add_argument("--sweep", type=int, default=20, help="random (u, v) samples per (m, n)")
    v.add_argument("--hbar", type=float, help="restrict phi-properties to one hbar")
    v.add_argument("--graph", help="graph file for flip-morphism")
    v.add_argument("--edge", help="edge label for flip-morphism")

    e = sub.add_parser("eval", parents=[common], help="evaluate a single quantity")
    e.add_argument("kind", choices=["phi", "F", "length", "holonomy", "bracket"])
    e.add_argument("--hbar", type=float)
    e.add_argument("--z", type=_complex_arg)
    e.add_argument("--graph")
    e.add_argument("--coords", help="coordinate file (Z lines); defaults to Z lines of the graph file")
    e.add_argument("--face", type=int)

    q = sub.add_parser("qdilog", parents=[common], help="quantum logarithm tools")
    qs = q.add_subparsers(dest="qcommand", required=True)
    qe = qs.add_parser("eval", parents=[common], help="evaluate phi_hbar")
    qe.add_argument("--hbar", type=float, required=True)
    qe.add_argument("--z", type=_complex_arg, required=True)
    qc = qs.add_parser("check-properties", parents=[common], help="JSON table of the identity suite")
    qc.add_argument("--hbar", type=float)

    g = sub.add_parser("graph", parents=[common], help="inspect or flip a graph file")
    gs = g.add_subparsers(dest="gcommand", required=True)
    gi = gs.add_parser("info", parents=[common])
    gi.add_argument("file")
    gf = gs.add_parser("flip", parents=[common])
    gf.add_argument("file")
    gf.add_argument("--edge", required=True)
    gf.add_argument("--out", help="write the flipped graph here instead of stdout")
    return p


def _fmt(x: float) -> str:
    return format_float(x)


def _fmt_complex(z: complex) -> str:
    return f"{_fmt(z.real)} {_fmt(z.imag)}"


def _emit(report: VerificationReport, json_path: str | None, out) -> None:
    if json_path == "-":
        out.write(report.to_json())
        return
    if json_path:
        Path(json_path).write_text(report.to_json(), encoding="utf-8")
    for c in sorted(report.checks, key=lambda c: c.id):
        out.write(f"{c.status.upper():4}  {c.id}  residual={_fmt(c.residual)} {c.comparison} {_fmt(c.tolerance)}")
        out.write(f"  [{c.detail}]\n" if c.detail and c.status != "pass" else "\n")
    for c in sorted(report.findings, key=lambda c: c.id):
        out.write(f"NOTE  {c.id}  {c.anchor}: residual={_fmt(c.residual)} ({c.status})\n")
    counts = report.counts()
    out.write(f"{report.suite}: {counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped\n")


def _load_graph(path: str | None) -> tuple[FatGraph, dict[str, float]]:
    if not path:
        raise UsageError("--graph is required")
    return load(path)


def _load_coords(g: FatGraph, embedded: dict[str, float], path: str | None) -> dict[str, float]:
    c = coords.load_coords(path) if path else embedded
    missing = sorted(set(g.labels) - set(c))
    if missing:
        raise UsageError(f"no coordinate for edges {missing}")
    return {lab: c[lab] for lab in g.labels}


def _face(g: FatGraph, index: int | None) -> tuple[int, ...]:
    if index is None:
        raise UsageError("--face is required")
    if not 0 <= index < g.num_faces:
        raise UsageError(f"face index {index} out of range (graph has {g.num_faces} faces)")
    return g.faces[index]


def _verify(args: argparse.Namespace, out) -> int:
    name = args.suite
    tol = args.tol
    if name == "flip-morphism":
        if not args.graph or not args.edge:
            raise UsageError("flip-morphism needs --graph and --edge")
        report = suites.flip_morphism(args.graph, args.edge)
    elif name == "all":
        report = suites.run_all(seed=args.seed)
    elif name in ("rep-pentagon", "rep-conjugation"):
        fn = suites.SUITES[name]
        kw = dict(m=args.m, n=args.n, u=args.u, v=args.v, sweep=args.sweep, seed=args.seed)
        if tol is not None:
            kw["tol"] = tol
        try:
            report = fn(**kw)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    elif name == "phi-properties":
        report = suites.phi_properties(args.hbar, tol)
    elif name == "torus-pentagon":
        report = suites.torus_pentagon()
        if args.json != "-":
            for k, v in report.parameters.items():
                out.write(f"{k} = {v}\n")
    elif name in ("classical-pentagon", "wp-invariance"):
        kw = {"seed": args.seed}
        if tol is not None:
            kw["tol"] = tol
        report = suites.SUITES[name](**kw)
    else:
        report = suites.SUITES[name](seed=args.seed)
    _emit(report, args.json, out)
    return EXIT_OK if report.passed else EXIT_FAIL


def _eval(args: argparse.Namespace, out) -> int:
    kind = args.kind
    if kind in ("phi", "F"):
        if args.hbar is None or args.z is None:
            raise UsageError(f"eval {kind} needs --hbar and --z")
        ctx = qdilog.QDilogContext(args.hbar, **({"tol": args.tol} if args.tol else {}))
        res = qdilog.phi_hbar(ctx, args.z) if kind == "phi" else qdilog.F_hbar(ctx, args.z)
        payload = {"hbar": args.hbar, "z": [args.z.real, args.z.imag], "value": [res.value.real, res.value.imag], "error": res.error}
        out.write(f"value {_fmt_complex(res.value)}\nerror {_fmt(res.error)}\n")
        _dump(payload, args.json)
        return EXIT_OK
    g, embedded = _load_graph(args.graph)
    if kind == "bracket":
        P = coords.wp_bracket(g)
        width = max(len(lab) for lab in g.labels)
        out.write(" " * width + " " + " ".join(f"{lab:>{width}}" for lab in g.labels) + "\n")
        for lab, row in zip(g.labels, P.matrix):
            out.write(f"{lab:>{width}} " + " ".join(f"{int(x):>{width}}" for x in row) + "\n")
        _dump({"labels": list(g.labels), "matrix": P.matrix.tolist()}, args.json)
        return EXIT_OK
    c = _load_coords(g, embedded, args.coords)
    face = _face(g, args.face)
    if kind == "length":
        s = coords.face_sum(g, c, face)
        out.write(f"length {_fmt(abs(s))}\nsigned_sum {_fmt(s)}\n")
        _dump({"face": args.face, "length": abs(s), "signed_sum": s}, args.json)
        return EXIT_OK
    m = coords.holonomy(g, c, coords.face_path(g, face))
    mn = coords.normalize(m)
    out.write(f"matrix {_fmt(mn[0, 0])} {_fmt(mn[0, 1])} {_fmt(mn[1, 0])} {_fmt(mn[1, 1])}\n")
    out.write(f"trace {_fmt(float(np.trace(mn)))}\n")
    try:
        length = coords.geodesic_length(m)
        out.write(f"geodesic_length {_fmt(length)}\n")
    except coords.EllipticError as exc:
        length = None
        out.write(f"geodesic_length undefined ({exc})\n")
    _dump({"face": args.face, "matrix": mn.tolist(), "trace": float(np.trace(mn)), "geodesic_length": length}, args.json)
    return EXIT_OK


def _dump(payload: dict, path: str | None) -> None:
    if path is None:
        return
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _qdilog(args: argparse.Namespace, out) -> int:
    if args.qcommand == "eval":
        ctx = qdilog.QDilogContext(args.hbar, **({"tol": args.tol} if args.tol else {}))
        res = qdilog.phi_hbar(ctx, args.z)
        out.write(f"value {_fmt_complex(res.value)}\nerror {_fmt(res.error)}\n")
        _dump({"hbar": args.hbar, "z": [args.z.real, args.z.imag], "value": [res.value.real, res.value.imag], "error": res.error}, args.json)
        return EXIT_OK
    report = suites.phi_properties(args.hbar, args.tol)
    text = report.to_json()
    out.write(text)
    if args.json and args.json != "-":
        Path(args.json).write_text(text, encoding="utf-8")
    return EXIT_OK if report.passed else EXIT_FAIL


def _graph(args: argparse.Namespace, out) -> int:
    g, c = load(args.file)
    if args.gcommand == "info":
        info = {
            "vertices": g.num_vertices,
            "edges": g.num_edges,
            "faces": g.num_faces,
            "genus": g.genus,
            "holes": g.num_holes,
            "faces_by_label": [g.face_labels(f) for f in g.faces],
        }
        for k, v in info.items():
            out.write(f"{k} {v}\n")
        _dump(info, args.json)
        return EXIT_OK
    g2 = flip(g, args.edge)
    c2 = coords.classical_flip(g, c, args.edge) if c else None
    text = dumps(g2, c2)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    handlers = {"verify": _verify, "eval": _eval, "qdilog": _qdilog, "graph": _graph}
    try:
        return handlers[args.command](args, out)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"qteich: error: {msg}\n")
        return EXIT_USAGE
    except (qdilog.AccuracyError, ArithmeticError) as exc:
        sys.stderr.write(f"qteich: error: {exc}\n")
        return EXIT_FAIL


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()

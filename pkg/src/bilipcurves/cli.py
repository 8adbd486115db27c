"""Command-line front end: ``bilipcurves analyze|compare|project|verify-infinity``."""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .algebra.parse import ParseError
from .curves import (
    CompleteIntersection3,
    CurveError,
    Parametrized,
    PlaneCurve,
    parse_curve,
    space_singular_points,
)
from .decider import (
    ASSUMPTIONS,
    EQUIVALENT,
    INCONCLUSIVE,
    NOT_EQUIVALENT,
    SPACE_ASSUMPTIONS,
    analyze_plane,
    compare_plane,
    compare_space,
)
from .projection import (
    GenericityError,
    ProjectionSpec,
    certify,
    generic_projection,
    space_degree,
    verify_infinity_embedding,
)
from .puiseux import PuiseuxError

EXIT_OK = 0
EXIT_NOT_EQUIVALENT = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3

SCHEMA = 1
VERDICT_EXIT = {EQUIVALENT: EXIT_OK, NOT_EQUIVALENT: EXIT_NOT_EQUIVALENT, INCONCLUSIVE: EXIT_INCONCLUSIVE}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bilipcurves", description="Bi-Lipschitz equivalence of complex algebraic curves.")
    p.add_argument("--version", action="version", version=f"bilipcurves {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="invariants and germ table of one curve")
    a.add_argument("file")

    c = sub.add_parser("compare", help="decide equivalence of two curves")
    c.add_argument("file_a")
    c.add_argument("file_b")
    c.add_argument("--seed", type=int, default=0)

    pr = sub.add_parser("project", help="certified generic plane projection of a space curve")
    pr.add_argument("file")
    pr.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify-infinity", help="sample the projection's distortion outside a ball")
    v.add_argument("file")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--radius", type=float, default=100.0)
    v.add_argument("--samples", type=int, default=10000)
    v.add_argument("--center", help="center directions, e.g. '0,0,1' (several separated by ';')")
    return p


def _load(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        curve = parse_curve(data.decode("utf-8"))
    except (ParseError, CurveError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    digest = {"path": path, "sha256": hashlib.sha256(data).hexdigest()}
    return curve, digest


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _document(argv, inputs, result, seeds=None, assumptions=None) -> dict:
    return {
        "schema": SCHEMA,
        "tool": "bilipcurves",
        "version": __version__,
        "command": list(argv),
        "inputs": inputs,
        "seeds": seeds or {},
        "assumptions": assumptions or [],
        "result": result,
    }


def _space_summary(s) -> dict:
    sing = space_singular_points(s)
    return {
        "kind": "param" if isinstance(s, Parametrized) else "ci3",
        "curve": str(s),
        "degree": space_degree(s),
        "singular_count": sing.count,
        "singular_orbits": [o.describe() for o in sing.orbits],
        "provenance": "exact",
    }


def _analyze(args, argv):
    curve, dig = _load(args.file)
    if isinstance(curve, PlaneCurve):
        an = analyze_plane(curve)
        result = {"kind": "plane", "curve": str(curve), **an.table(), "provenance": "exact"}
        code = EXIT_INCONCLUSIVE if an.warnings else EXIT_OK
        summary = f"plane curve, degrees {curve.degrees}, genus {an.genera}, {len(an.sites)} singular orbits"
        return _document(argv, [dig], result, assumptions=ASSUMPTIONS), code, summary
    result = _space_summary(curve)
    summary = f"space curve of degree {result['degree']} with {result['singular_count']} singular points"
    return _document(argv, [dig], result, assumptions=SPACE_ASSUMPTIONS), EXIT_OK, summary


def _compare(args, argv):
    a, da = _load(args.file_a)
    b, db = _load(args.file_b)
    plane_a, plane_b = isinstance(a, PlaneCurve), isinstance(b, PlaneCurve)
    if plane_a != plane_b:
        raise InputError("cannot compare a plane curve with a space curve")
    if plane_a:
        rep = compare_plane(a, b)
        seeds = {}
    else:
        rep = compare_space(a, b, args.seed)
        seeds = {"projection": args.seed}
    doc = _document(argv, [da, db], rep.describe(), seeds, rep.assumptions)
    summary = f"verdict: {rep.verdict}" + (f" ({rep.reason})" if rep.reason else "")
    return doc, VERDICT_EXIT[rep.verdict], summary


def _project(args, argv):
    s, dig = _load(args.file)
    if isinstance(s, PlaneCurve):
        raise InputError("project needs a space curve")
    seeds = {"projection": args.seed}
    try:
        plane, spec, cert = generic_projection(s, args.seed)
    except GenericityError as exc:
        result = {"error": str(exc), "certificate": exc.certificate.describe() if exc.certificate else None}
        return _document(argv, [dig], result, seeds, SPACE_ASSUMPTIONS), EXIT_INCONCLUSIVE, str(exc)
    _, part, _ = certify(s, spec, args.seed)
    result = {
        "plane_curve": str(plane),
        "projection": spec.describe(),
        "certificate": cert.describe(),
        "partition": part.describe(),
        "provenance": "exact",
    }
    summary = f"projection {plane} (S2 nodes: {part.new_node_count})"
    return _document(argv, [dig], result, seeds, SPACE_ASSUMPTIONS), EXIT_OK, summary


def _parse_center(text: str, n: int) -> ProjectionSpec:
    try:
        dirs = [[Fraction(c.strip()) for c in d.split(",")] for d in text.split(";")]
    except ValueError as exc:
        raise InputError(f"bad --center: {exc}") from exc
    if any(len(d) != n for d in dirs):
        raise InputError(f"--center directions need {n} coordinates")
    try:
        return ProjectionSpec.from_directions(dirs, n)
    except ValueError as exc:
        raise InputError(f"bad --center: {exc}") from exc


def _verify(args, argv):
    s, dig = _load(args.file)
    if not isinstance(s, Parametrized):
        raise InputError("verify-infinity needs a parametrized space curve")
    if args.radius <= 0 or args.samples < 2:
        raise InputError("need --radius > 0 and --samples >= 2")
    seeds = {"projection": args.seed, "sampling": args.seed}
    if args.center:
        spec = _parse_center(args.center, s.dimension)
        seeds.pop("projection")
    else:
        try:
            _, spec, _ = generic_projection(s, args.seed)
        except GenericityError as exc:
            return _document(argv, [dig], {"error": str(exc)}, seeds), EXIT_INCONCLUSIVE, str(exc)
    rep = verify_infinity_embedding(s, spec, args.radius, args.samples, args.seed)
    result = {"projection": spec.describe(), **rep.describe()}
    code = EXIT_OK if rep.verdict == "pass" else EXIT_NOT_EQUIVALENT
    summary = f"verifier {rep.verdict}: min ratio {rep.min_ratio:.3g} over {rep.pair_count} pairs"
    return _document(argv, [dig], result, seeds), code, summary


COMMANDS = {"analyze": _analyze, "compare": _compare, "project": _project, "verify-infinity": _verify}


def run_cli(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INPUT
    start = time.perf_counter()
    try:
        doc, code, summary = COMMANDS[args.command](args, argv)
    except InputError as exc:
        stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (PuiseuxError, CurveError) as exc:
        doc = _document(argv, [], {"error": str(exc)})
        code, summary = EXIT_INCONCLUSIVE, f"inconclusive: {exc}"
    except ValueError as exc:
        stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    stdout.write(json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n")
    stderr.write(f"{summary} [{time.perf_counter() - start:.2f}s]\n")
    return code


def main() -> None:
    raise SystemExit(run_cli())


if __name__ == "__main__":
    main()

"""Command-line front end.

Subcommands: validate, volume, pattern, compare, triangulate, catalog,
export.  Inputs are TLD files, "-" for stdin, or catalog names (with or
without a "catalog:" prefix).  Exit codes: 0 success, 1 domain failure,
2 usage or I/O trouble.
"""

import argparse
import json
import math
import sys

from .catalog import catalog_diagram, catalog_names, catalog_tld
from .circle_pattern import (
    PatternError,
    layout_pattern,
    pattern_report,
    pattern_svg,
    shape_parameters,
    solve_radii,
    verify_gluing,
    volume_bounds,
)
from .core import MapError, TLDError
from .cuts import check_bs_condition, has_cycle_of_tangles, is_weakly_prime
from .diagram import collapse_bigons, parse_diagram, serialize_diagram, validate_basic
from .geometry import (
    GeometryError,
    classify_field,
    exact_volume,
    incommensurable,
)
from .tiling import classify_vertices
from .triangulation import TriangulationError, export_json, stellate, three_two_moves

EQUALITY_TOL = 1e-8

_ERRORS = (TLDError, MapError, TriangulationError, GeometryError, PatternError)


class UsageError(Exception):
    """Bad invocation or unusable input source; maps to exit code 2."""


# -- input resolution --------------------------------------------------------------


def _catalog_lookup(name: str):
    names = catalog_names()
    if name in names:
        return catalog_diagram(name)
    # allow the "-link" suffix people use when naming the link rather
    # than the tiling, e.g. 3.3.6.6-link
    if name.endswith("-link") and name[: -len("-link")] in names:
        return catalog_diagram(name[: -len("-link")])
    return None


def resolve_input(spec: str):
    """Turn a CLI input spec into a diagram.

    "-" reads TLD text from stdin, "catalog:NAME" and bare catalog
    names use the built-in catalog, anything else is a file path.
    """
    if spec == "-":
        return parse_diagram(sys.stdin.read())
    if spec.startswith("catalog:"):
        d = _catalog_lookup(spec[len("catalog:") :])
        if d is None:
            raise UsageError(f"unknown catalog entry {spec[len('catalog:'):]!r}; try the catalog subcommand")
        return d
    d = _catalog_lookup(spec)
    if d is not None:
        return d
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise UsageError(f"{spec!r} is neither a readable file nor a catalog entry")
    return parse_diagram(text)


# -- output plumbing ---------------------------------------------------------------


def _version() -> str:
    try:
        from importlib.metadata import version

        return version("torusweave")
    except Exception:
        return "0.1.0"


def _meta(args) -> dict:
    return {
        "version": _version(),
        "window": getattr(args, "window", 3),
        "tolerances": {
            "newton": getattr(args, "tol_newton", 1e-12),
            "gluing": getattr(args, "tol_gluing", 1e-9),
            "equality": EQUALITY_TOL,
        },
    }


def _num(x: float) -> float:
    return float(f"{x:.10g}")


def _emit(args, text: str) -> None:
    out = getattr(args, "output", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _report(args, lines: list, payload: dict) -> None:
    if args.format == "json":
        payload = {"meta": _meta(args)} | payload
        _emit(args, json.dumps(payload, indent=2))
    else:
        _emit(args, "\n".join(lines))


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


# -- subcommands -------------------------------------------------------------------


def cmd_validate(args) -> int:
    d = resolve_input(args.input)
    checks = []
    problems = validate_basic(d)
    checks.append(("basic structure", not problems, problems[0] if problems else ""))
    if problems:
        checks.append(("weakly prime", None, "skipped"))
        checks.append(("cycle of tangles", None, "skipped"))
    else:
        wp = is_weakly_prime(d, window=args.window)
        checks.append(("weakly prime", wp.ok, wp.reason))
        if wp.ok:
            ct = has_cycle_of_tangles(d, window=args.window)
            checks.append(("cycle of tangles", ct.ok, ct.reason))
        else:
            checks.append(("cycle of tangles", None, "skipped"))
    ok = all(c[1] for c in checks)

    lines = [f"input: {args.input} ({len(d.over)} crossings, window {args.window})"]
    for name, passed, why in checks:
        if passed is None:
            lines.append(f"  {name}: skipped")
        elif passed:
            lines.append(f"  {name}: ok")
        else:
            lines.append(f"  {name}: FAIL - {why}")
    lines.append("result: " + ("pass" if ok else "FAIL"))
    _report(
        args,
        lines,
        {
            "input": args.input,
            "crossings": len(d.over),
            "checks": [
                {"name": n, "ok": p, "witness": w or None} for n, p, w in checks
            ],
            "ok": ok,
        },
    )
    return 0 if ok else 1


def _volume_terms_text(report) -> str:
    pieces = [f"{c}*{name}" for c, name in report.terms if c]
    return " + ".join(pieces) if pieces else "0"


def cmd_volume(args) -> int:
    d = resolve_input(args.input)
    problems = validate_basic(d)
    if problems:
        return _fail(f"invalid diagram: {problems[0]}")
    tiling = collapse_bigons(d)
    had_bigons = any(f.degree == 2 for f in d.map.faces)
    crossings = len(d.over)
    vtypes = classify_vertices(tiling)

    lines = [f"input: {args.input} ({crossings} crossings)"]
    payload: dict = {"input": args.input, "crossings": crossings, "bigons": had_bigons}
    bounds = None

    if vtypes.semi_regular:
        census = tiling.map.face_degree_census()
        report = exact_volume(census, bigons=had_bigons, crossings=crossings)
        payload["path"] = "exact"
        payload["volume"] = report.as_dict()
        lines.append("path: exact (semi-regular tiling)")
        lines.append(f"volume = {_volume_terms_text(report)} = {report.value:.10g}")
        if report.density is not None:
            lines.append(f"density = {report.density:.10g} per crossing")
        if report.field is not None:
            fc = classify_field(census)
            payload["field"] = {"label": fc.label, "arithmetic": fc.arithmetic, "note": fc.note}
            lines.append(f"field: {fc.label} ({fc.note})")
    else:
        bs = check_bs_condition(d, window=args.window)
        if not bs.ok:
            return _fail(f"hyperbolicity check failed: {bs.reason}")
        # passing the cut check rules out bigons, so the bounds apply
        bounds = volume_bounds(d)
        vol = bounds["vol_estimate"]
        payload["path"] = "maximize"
        payload["volume"] = {"value": _num(vol), "density": _num(vol / crossings)}
        lines.append("path: maximize (angle structure optimization)")
        lines.append(f"volume = {vol:.10g}")
        lines.append(f"density = {vol / crossings:.10g} per crossing")

    if args.bounds and bounds is None:
        if had_bigons:
            return _fail("volume bounds need a bigon-free diagram")
        bounds = volume_bounds(d)
    if bounds is not None:
        payload["bounds"] = {
            "vol_perp": _num(bounds["vol_perp"]),
            "vol_estimate": _num(bounds["vol_estimate"]),
            "vol_diamond": _num(bounds["vol_diamond"]),
            "equality_flag": bounds["equality_flag"],
        }
        lines.append(
            "bounds: vol_perp %.10g <= vol %.10g <= vol_diamond %.10g"
            % (bounds["vol_perp"], bounds["vol_estimate"], bounds["vol_diamond"])
        )
        lines.append(f"equality_flag: {bounds['equality_flag']}")
    _report(args, lines, payload)
    return 0


def cmd_pattern(args) -> int:
    d = resolve_input(args.input)
    problems = validate_basic(d)
    if problems:
        return _fail(f"invalid diagram: {problems[0]}")
    radii = solve_radii(d, tol=args.tol_newton)
    pattern = layout_pattern(d, radii)
    t = stellate(d)
    shapes = shape_parameters(pattern, t)
    gluing = verify_gluing(t, shapes, tol=args.tol_gluing)
    bounds = volume_bounds(d)
    info = pattern_report(pattern)
    tau = pattern.tau

    svg = None
    if args.svg or args.format == "svg":
        svg = pattern_svg(pattern)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(svg + "\n")
    if args.format == "svg":
        _emit(args, svg)
        return 0

    lines = [f"input: {args.input} ({len(d.over)} crossings)"]
    lines.append(f"tolerances: newton {args.tol_newton:g}, gluing {args.tol_gluing:g}")
    degree_radius = sorted({(deg, _num(r)) for deg, r in zip(info["degrees"], info["radii"])})
    lines.append(
        "radii by face degree: "
        + ", ".join(f"{deg}-gon {r:.10g}" for deg, r in degree_radius)
    )
    lines.append(f"cusp shape tau = {tau.real:.10g} + {tau.imag:.10g}i")
    lines.append(f"layout residual = {info['residual']:.3g}")
    if gluing.ok:
        lines.append("gluing equations: ok (complete hyperbolic structure)")
    else:
        lines.append(
            "gluing equations: incomplete (%d class(es) carry scaling holonomy; "
            "the pattern is still the right-angled lower bound)" % len(gluing.bad_classes)
        )
    lines.append(
        "bounds: vol_perp %.10g <= vol %.10g <= vol_diamond %.10g"
        % (bounds["vol_perp"], bounds["vol_estimate"], bounds["vol_diamond"])
    )
    lines.append(f"equality_flag: {bounds['equality_flag']}")
    if args.svg:
        lines.append(f"svg written to {args.svg}")

    payload = {
        "input": args.input,
        "crossings": len(d.over),
        "pattern": {
            "radii": [_num(r) for r in info["radii"]],
            "degrees": info["degrees"],
            "t1": [_num(v) for v in info["t1"]],
            "t2": [_num(v) for v in info["t2"]],
            "tau": [_num(tau.real), _num(tau.imag)],
            "residual": _num(info["residual"]),
        },
        "gluing": {
            "ok": gluing.ok,
            "bad_classes": [
                {"index": i, "label": lab, "residual": _num(r)}
                for i, lab, r in gluing.bad_classes
            ],
        },
        "bounds": {
            "vol_perp": _num(bounds["vol_perp"]),
            "vol_estimate": _num(bounds["vol_estimate"]),
            "vol_diamond": _num(bounds["vol_diamond"]),
            "equality_flag": bounds["equality_flag"],
        },
    }
    if args.svg:
        payload["svg"] = args.svg
    _report(args, lines, payload)
    return 0


def _census_summary(census: dict) -> str:
    return " ".join(f"{deg}^{census[deg]}" for deg in sorted(census))


def cmd_compare(args) -> int:
    sides = []
    for spec in (args.a, args.b):
        d = resolve_input(spec)
        problems = validate_basic(d)
        if problems:
            return _fail(f"invalid diagram {spec!r}: {problems[0]}")
        if any(f.degree == 2 for f in d.map.faces):
            return _fail(f"unsupported: {spec!r} has bigons; the volume formula compared here is bigon-free")
        tiling = collapse_bigons(d)
        vtypes = classify_vertices(tiling)
        if not vtypes.semi_regular:
            return _fail(f"unsupported: {spec!r} is not semi-regular: {vtypes.failures[0]}")
        census = tiling.map.face_degree_census()
        sides.append((spec, census, exact_volume(census, bigons=False), classify_field(census)))

    (spec1, c1, v1, f1), (spec2, c2, v2, f2) = sides
    p1, q1 = 10 * c1.get(6, 0), c1.get(4, 0)
    p2, q2 = 10 * c2.get(6, 0), c2.get(4, 0)
    det = p1 * q2 - q1 * p2
    verdict = incommensurable(c1, c2)

    lines = []
    for spec, c, v, f in sides:
        lines.append(f"{spec}: census {_census_summary(c)}")
        lines.append(f"  volume = {_volume_terms_text(v)} = {v.value:.10g}")
        lines.append(f"  field: {f.label} ({f.note})")
    lines.append(f"determinant p1*q2 - q1*p2 = {det}")
    lines.append(f"verdict: {verdict}")
    _report(
        args,
        lines,
        {
            "inputs": [spec1, spec2],
            "censuses": [
                {str(k): v for k, v in sorted(c1.items())},
                {str(k): v for k, v in sorted(c2.items())},
            ],
            "volumes": [v1.as_dict(), v2.as_dict()],
            "fields": [
                {"label": f.label, "arithmetic": f.arithmetic, "note": f.note}
                for f in (f1, f2)
            ],
            "determinant": det,
            "verdict": verdict,
        },
    )
    return 0


def _class_census(t) -> dict:
    counts: dict = {}
    for c in t.edge_classes:
        counts[c.label] = counts.get(c.label, 0) + 1
    return counts


def cmd_triangulate(args) -> int:
    d = resolve_input(args.input)
    t = stellate(d)
    moved = three_two_moves(t)
    lines = [f"input: {args.input} ({len(d.over)} crossings)"]
    for name, tri in (("stellated", t), ("moved", moved)):
        cc = _class_census(tri)
        lines.append(
            f"{name}: {len(tri.tets)} tetrahedra; edge classes: "
            + ", ".join(f"{cc.get(k, 0)} {k}" for k in ("horizontal", "vertical", "stellating"))
        )
    _report(
        args,
        lines,
        {
            "input": args.input,
            "stellated": export_json(t),
            "moved": export_json(moved),
        },
    )
    return 0


def cmd_catalog(args) -> int:
    names = catalog_names()
    _report(args, names, {"names": names})
    return 0


def cmd_export(args) -> int:
    spec = args.input
    if spec.startswith("catalog:"):
        spec = spec[len("catalog:") :]
    names = catalog_names()
    if spec in names or (spec.endswith("-link") and spec[: -len("-link")] in names):
        if spec not in names:
            spec = spec[: -len("-link")]
        text = catalog_tld(spec)
    else:
        text = serialize_diagram(resolve_input(args.input))
    if args.format == "json":
        _report(args, [], {"input": args.input, "tld": text})
    else:
        _emit(args, text)
    return 0


# -- argument parsing --------------------------------------------------------------


def _positive(value: str) -> float:
    x = float(value)
    if not (x > 0) or not math.isfinite(x):
        raise argparse.ArgumentTypeError("tolerance must be positive and finite")
    return x


def _window(value: str) -> int:
    w = int(value)
    if w < 2:
        raise argparse.ArgumentTypeError("window must be at least 2")
    return w


def _add_common(sp, formats=("text", "json")) -> None:
    sp.add_argument("--window", type=_window, default=3, help="translate search window (default 3)")
    sp.add_argument("--tol-newton", type=_positive, default=1e-12, help="radius solve tolerance (default 1e-12)")
    sp.add_argument("--tol-gluing", type=_positive, default=1e-9, help="gluing residual tolerance (default 1e-9)")
    sp.add_argument("--format", choices=list(formats), default="text", help="output format")
    sp.add_argument("-o", "--output", metavar="PATH", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusweave",
        description="Hyperbolic geometry of alternating link diagrams on the torus.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("validate", help="run the diagram sanity checks")
    sp.add_argument("input", help="TLD file, catalog name, or - for stdin")
    _add_common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("volume", help="hyperbolic volume (exact or optimized)")
    sp.add_argument("input", help="TLD file, catalog name, or - for stdin")
    sp.add_argument("--bounds", action="store_true", help="also report the volume sandwich (bigon-free only)")
    _add_common(sp)
    sp.set_defaults(func=cmd_volume)

    sp = sub.add_parser("pattern", help="orthogonal circle pattern pipeline")
    sp.add_argument("input", help="TLD file, catalog name, or - for stdin")
    sp.add_argument("--svg", metavar="PATH", help="also write an SVG drawing here")
    _add_common(sp, formats=("text", "json", "svg"))
    sp.set_defaults(func=cmd_pattern)

    sp = sub.add_parser("compare", help="volume-based commensurability verdict")
    sp.add_argument("a", help="first input")
    sp.add_argument("b", help="second input")
    _add_common(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("triangulate", help="emit the stellated and moved triangulations")
    sp.add_argument("input", help="TLD file, catalog name, or - for stdin")
    _add_common(sp)
    sp.set_defaults(func=cmd_triangulate)

    sp = sub.add_parser("catalog", help="list the built-in diagrams")
    _add_common(sp)
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("export", help="emit a diagram as TLD text")
    sp.add_argument("input", help="TLD file, catalog name, or - for stdin")
    _add_common(sp)
    sp.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except _ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

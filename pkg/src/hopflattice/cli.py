"""Command-line tool: build, verify, compare, render and export kissing configurations.

Exit codes: 0 success, 1 verification or comparison failure, 2 usage, input
or construction error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Callable

from .algebra import HALF, ExactScalar
from .analysis import (
    LatticeError,
    analyze,
    assert_kissing,
    experiment_e5_lift,
    gram_and_basis,
    natural_scale,
)
from .configuration import Configuration, ConstructionError, unit_check
from .constructions import (
    bw16_canonical,
    cell24_hopf,
    cell24_standard,
    check_fibers,
    e8_canonical,
    e8_hopf,
    lambda16_hopf,
)
from .render import RenderSpec, render_svg, write_frames

SCHEMA_VERSION = 1
APPROX_TOL = 1e-12

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

BUILDERS: dict[tuple[str, str], Callable[[], Configuration]] = {
    ("cell24", "hopf"): cell24_hopf,
    ("cell24", "canonical"): cell24_standard,
    ("e8", "hopf"): e8_hopf,
    ("e8", "canonical"): e8_canonical,
    ("lambda16", "hopf"): lambda16_hopf,
    ("lambda16", "canonical"): bw16_canonical,
}

# point count, nearest-neighbor count, (own-fiber count, count per touched fiber, fibers touched)
EXPECTED = {
    "cell24": (24, 8, (0, 2, 4)),
    "e8": (240, 56, (8, 6, 8)),
    "lambda16": (4320, 280, (56, 14, 16)),
}


class InputError(Exception):
    """Unreadable or malformed input; maps to exit code 2."""


# --------------------------------------------------------------------------
# configuration files


def config_to_json(config: Configuration) -> dict:
    meta = {
        "name": config.name,
        "method": config.method,
        "level": config.level,
        "ambient_dim": config.ambient_dim,
        "antipodal": config.antipodal,
        "offsets": config.meta.get("offsets", {}),
    }
    points = [{"coords": [str(c) for c in p], "approx": [float(c) for c in p], "fiber": f}
              for p, f in zip(config.points, config.fiber_labels)]
    return {"schema_version": SCHEMA_VERSION, "meta": meta, "points": points}


def dump_config(config: Configuration) -> str:
    return json.dumps(config_to_json(config), indent=1, sort_keys=True) + "\n"


def save_config(config: Configuration, path: Path) -> None:
    Path(path).write_text(dump_config(config), encoding="utf-8")


def config_from_json(data: dict) -> tuple[Configuration, list[list[float] | None]]:
    """Parse a config document; returns the configuration and the stored float coordinates.

    Only the format is checked here.  Geometric invariants are left to ``verify``.
    """
    if not isinstance(data, dict):
        raise InputError("top level must be a JSON object")
    if data.get("schema_version") != SCHEMA_VERSION:
        raise InputError(f"unsupported schema_version {data.get('schema_version')!r}")
    meta = data.get("meta") or {}
    raw = data.get("points")
    if not isinstance(raw, list) or not raw:
        raise InputError("'points' must be a non-empty list")
    points, labels, approx = [], [], []
    for k, entry in enumerate(raw):
        try:
            coords = tuple(ExactScalar.parse(s) for s in entry["coords"])
            labels.append(str(entry["fiber"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"point {k}: {exc}") from None
        points.append(coords)
        approx.append(entry.get("approx"))
    # keep each float list next to its exact point through the canonical re-sort
    order = sorted(range(len(points)), key=lambda i: points[i])
    try:
        config = Configuration(tuple(points), tuple(labels), name=str(meta.get("name", "unnamed")),
                               method=str(meta.get("method", "hopf")), level=meta.get("level"),
                               antipodal=bool(meta.get("antipodal", True)),
                               meta={"offsets": meta.get("offsets", {})})
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return config, [approx[i] for i in order]


def load_config(path: str | Path) -> tuple[Configuration, list[list[float] | None]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    return config_from_json(data)


def resolve(source: str) -> tuple[Configuration, list[list[float] | None]]:
    """A config file path, or a built-in ``target[:method]`` such as ``e8`` or ``lambda16:canonical``."""
    if Path(source).exists():
        return load_config(source)
    target, _, method = source.partition(":")
    key = (target, method or "hopf")
    if key in BUILDERS:
        config = BUILDERS[key]()
        return config, [[float(c) for c in p] for p in config.points]
    raise InputError(f"{source}: no such file or built-in target")


# --------------------------------------------------------------------------
# verification


def verify_config(config: Configuration, approx: list | None = None) -> dict:
    """Run the invariant suite; returns a JSON-ready report with ``ok`` and ``failures``."""
    failures = []

    def fail(check: str, detail: str, witness=None):
        failures.append({"check": check, "detail": detail, "witness": witness})

    bad_units = unit_check(config.points)
    if bad_units:
        fail("unit_norm", f"{len(bad_units)} points are not unit vectors", bad_units[:10])

    if approx is not None:
        for i, (p, a) in enumerate(zip(config.points, approx)):
            if a is None:
                continue
            if len(a) != len(p) or any(abs(float(c) - float(x)) > APPROX_TOL for c, x in zip(p, a)):
                fail("approx", f"point {i}: approx disagrees with exact coords", [i])
                break

    for i in range(1, len(config)):
        if config.points[i] == config.points[i - 1]:
            fail("duplicate", f"points {i - 1} and {i} coincide", [i - 1, i])
            break

    ok, witness = assert_kissing(config, HALF)
    if not ok:
        i, j, dot = witness
        fail("kissing", f"points {i} and {j} have dot {dot} > 1/2", [i, j, str(dot)])

    if config.antipodal and not config.is_negation_closed():
        fail("antipodal", "set is flagged antipodal but is not closed under negation")

    report = analyze(config)
    summary = report.to_json()
    expected = EXPECTED.get(config.name)
    if expected is not None:
        count, neighbors, (own, per, touched) = expected
        if report.point_count != count:
            fail("count", f"{report.point_count} points, expected {count}")
        if report.uniform_neighbor_count() != neighbors:
            fail("neighbors", f"neighbor counts {sorted(set(report.neighbor_counts))}, "
                              f"expected uniform {neighbors}")
        if config.method == "hopf":
            profile = report.uniform_fiber_profile()
            want = (own, [per] * touched)
            if profile != want:
                fail("fiber_profile", f"fiber profile {profile}, expected {want}")

    if config.method == "hopf" and config.level in (1, 2, 3) and not bad_units:
        off = check_fibers(config)
        if off:
            fail("fiber_labels", f"{len(off)} points do not map to their labeled base point",
                 off[:10])

    return {"ok": not failures, "failures": failures, "analysis": summary}


def lattice_summary(config: Configuration) -> dict:
    try:
        scale = natural_scale(config)
        return gram_and_basis(config, scale).summary()
    except LatticeError as exc:
        return {"error": str(exc)}


def compare_configs(a: Configuration, b: Configuration) -> dict:
    diffs = []
    if len(a) != len(b):
        diffs.append({"field": "point_count", "a": len(a), "b": len(b)})
    ra, rb = analyze(a), analyze(b)
    sa = {str(k): v for k, v in sorted(ra.dot_spectrum.items())}
    sb = {str(k): v for k, v in sorted(rb.dot_spectrum.items())}
    if ra.dot_spectrum != rb.dot_spectrum:
        diffs.append({"field": "dot_spectrum", "a": sa, "b": sb})
    la, lb = lattice_summary(a), lattice_summary(b)
    for key in ("rank", "determinant", "even", "error"):
        if la.get(key) != lb.get(key):
            diffs.append({"field": f"lattice.{key}", "a": la.get(key), "b": lb.get(key)})
    return {"equal": not diffs, "diffs": diffs, "lattice": {"a": la, "b": lb}}


# --------------------------------------------------------------------------
# commands


def _print_json(obj, stream=None) -> None:
    print(json.dumps(obj, indent=1, sort_keys=True, ensure_ascii=False), file=stream or sys.stdout)


def cmd_build(args) -> int:
    try:
        config = BUILDERS[(args.target, args.method)]()
    except ConstructionError as exc:
        _print_json({"error": str(exc), "witness": _jsonable(exc.witness)}, sys.stderr)
        return EXIT_INPUT
    out = args.out or f"{args.target}-{args.method}.json"
    save_config(config, Path(out))
    print(f"{len(config)} points -> {out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    config, approx = resolve(args.path)
    report = verify_config(config, approx)
    _print_json(report)
    return EXIT_OK if report["ok"] else EXIT_FAIL


def cmd_compare(args) -> int:
    a, _ = resolve(args.a)
    b, _ = resolve(args.b)
    result = compare_configs(a, b)
    _print_json(result)
    return EXIT_OK if result["equal"] else EXIT_FAIL


def cmd_render(args) -> int:
    config, _ = resolve(args.path)
    try:
        spec = RenderSpec(plane=tuple(args.plane), frame_count=args.frames,
                          projection_axes=tuple(args.axes), width=args.size, height=args.size,
                          marker_radius=args.radius)
        spec.check_dim(config.ambient_dim)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.per_frame:
        paths = write_frames(config, spec, Path(args.per_frame))
        print(f"{len(paths)} frames -> {args.per_frame}")
        return EXIT_OK
    svg = render_svg(config, spec)
    if args.out:
        Path(args.out).write_text(svg, encoding="utf-8")
        print(f"{spec.frame_count} frames -> {args.out}")
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def cmd_export(args) -> int:
    config, _ = resolve(args.path)
    dim = config.ambient_dim
    out = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([f"x{k}" for k in range(dim)] + ["fiber"])
        for p, f in zip(config.points, config.fiber_labels):
            writer.writerow([format(float(c), ".17g") for c in p] + [f])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_experiment_e5(args) -> int:
    report = experiment_e5_lift(args.fiber_size)
    top = report.max_offdiag_dot
    _print_json({
        "fiber_size": args.fiber_size,
        "point_count": report.point_count,
        "max_offdiag_dot": str(top),
        "max_offdiag_dot_float": float(top),
        "kissing": top <= HALF,
        "note": "exploratory; a lift of the 40 D5 points to 320 kissing points in R^8 "
                "is not known to come out of this recipe",
    })
    return EXIT_OK


def _jsonable(x):
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, ExactScalar):
        return str(x)
    return x


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopflattice", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a configuration and write it as JSON")
    b.add_argument("target", choices=["cell24", "e8", "lambda16"])
    b.add_argument("method", nargs="?", default="hopf", choices=["hopf", "canonical"])
    b.add_argument("-o", "--out")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check kissing, counts and fiber structure")
    v.add_argument("path")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compare", help="compare dot spectra and lattice reports")
    c.add_argument("a")
    c.add_argument("b")
    c.set_defaults(func=cmd_compare)

    r = sub.add_parser("render", help="write rotating projection views as SVG")
    r.add_argument("path")
    r.add_argument("--frames", type=int, default=15)
    r.add_argument("--plane", type=int, nargs=2, default=[0, 2], metavar=("I", "J"))
    r.add_argument("--axes", type=int, nargs=2, default=[0, 1], metavar=("I", "J"))
    r.add_argument("--size", type=int, default=240, help="frame width and height in pixels")
    r.add_argument("--radius", type=float, default=3.0, help="marker radius in pixels")
    r.add_argument("-o", "--out")
    r.add_argument("--per-frame", metavar="DIR", help="write frame_000.svg ... into DIR instead")
    r.set_defaults(func=cmd_render)

    e = sub.add_parser("export", help="write float coordinates as CSV")
    e.add_argument("path")
    e.add_argument("--format", choices=["csv"], default="csv")
    e.add_argument("-o", "--out")
    e.set_defaults(func=cmd_export)

    x = sub.add_parser("experiment-e5", help="lift the D5 kissing points through the second Hopf map")
    x.add_argument("--fiber-size", type=int, choices=[1, 2, 4, 8], default=4)
    x.set_defaults(func=cmd_experiment_e5)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConstructionError as exc:
        _print_json({"error": str(exc), "witness": _jsonable(exc.witness)}, sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

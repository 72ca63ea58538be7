"""Command-line interface: ``buresforms {point,omega,spectrum,sweep,acceptance}``.

Exit codes: 0 success, 1 acceptance failure, 2 invalid state, 3 solver
failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from pathlib import Path

import numpy as np

from . import fixtures as fx
from .acceptance import CRITERIA, run_acceptance
from .duality import is_pm_equal, solve_dual_form
from .errors import BuresFormsError, DegenerateStateError, SolverError
from .exterior import basis
from .metric import MetricTensor, bures_metric
from .spectral import (COMPONENT_SPECTRAL_SCALE, build_endomorphism, cayley_calibration,
                       eigen_spectrum)
from .state import COORDINATES, PointCoords, density_from_angles
from .sweeps import FIGURES, SweepSpec, coefficient_sweep, figure_summary, write_figure

SCHEMA = 1
EXIT_OK, EXIT_ACCEPTANCE, EXIT_STATE, EXIT_SOLVER, EXIT_USAGE = 0, 1, 2, 3, 64

FIXTURE_POINTS = {"q1": fx.Q1, "q2": fx.Q2, "q3": fx.Q3}
FIXTURE_ORIENTATION = {"q1": fx.Q1_ORIENTATION, "q2": fx.Q2_ORIENTATION, "q3": fx.Q3_ORIENTATION}

_PI_RE = re.compile(r"^\s*([+-]?)\s*(\d+(?:\.\d*)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


class UsageError(Exception):
    pass


def parse_angle(text) -> float:
    """Parse '2pi/3', '-pi/3', 'pi', '0.25*pi' or a plain decimal number of radians."""
    if isinstance(text, (int, float)):
        return float(text)
    m = _PI_RE.match(str(text).lower())
    if m:
        sign, num, den = m.groups()
        value = float(num) if num else 1.0
        value *= np.pi / (float(den) if den else 1.0)
        return -value if sign == "-" else value
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"cannot parse angle {text!r}") from None


def point_from_mapping(data: dict) -> PointCoords:
    unknown = set(data) - set(COORDINATES)
    if unknown:
        raise UsageError(f"unknown point keys: {', '.join(sorted(unknown))}")
    missing = [c for c in COORDINATES if c not in data]
    if missing:
        raise UsageError(f"missing point keys: {', '.join(missing)}")
    return PointCoords(**{c: parse_angle(data[c]) for c in COORDINATES})


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_point_args(p):
    p.add_argument("--fixture", choices=sorted(FIXTURE_POINTS),
                   help="start from a reference point")
    p.add_argument("--point-file", type=Path, help="JSON object with the eight angles")
    for c in COORDINATES:
        p.add_argument(f"--{c}", help=f"{c} in radians, or a multiple of pi such as 2pi/3")
    p.add_argument("--orientation", type=int, choices=(1, -1),
                   help="chart orientation (default: the fixture's, else +1)")


def resolve_point(args) -> tuple[PointCoords, int, str | None]:
    values: dict = {}
    fixture = args.fixture
    if fixture:
        base = FIXTURE_POINTS[fixture]
        values = {c: getattr(base, c) for c in COORDINATES}
    if args.point_file:
        try:
            data = json.loads(args.point_file.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read point file: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("point file must hold a JSON object")
        unknown = set(data) - set(COORDINATES)
        if unknown:
            raise UsageError(f"unknown point keys: {', '.join(sorted(unknown))}")
        values.update(data)
    for c in COORDINATES:
        v = getattr(args, c)
        if v is not None:
            values[c] = v
    point = point_from_mapping(values)
    # a fixture label only applies if no coordinate was overridden
    matched = next((k for k, q in FIXTURE_POINTS.items() if q == point), None)
    orientation = args.orientation or (FIXTURE_ORIENTATION[matched] if matched else 1)
    return point, orientation, matched


def _complex_matrix(M) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


def _check(name, value, tolerance, reference, anchor) -> dict:
    return {"name": name, "value": float(value), "reference": float(reference),
            "tolerance": tolerance, "anchor": anchor,
            "passed": bool(abs(value - reference) <= tolerance)}


def _report(command: str, inputs: dict) -> dict:
    return {"schema": SCHEMA, "command": command, "inputs": inputs, "outputs": {},
            "residuals": {}, "tolerances": {}, "checks": [], "wall_time": 0.0}


def cmd_point(args) -> tuple[dict, int]:
    point, orientation, matched = resolve_point(args)
    rep = _report("point", {"point": {c: getattr(point, c) for c in COORDINATES},
                            "orientation": orientation, "fixture": matched})
    rho, frame = density_from_angles(point)
    m = bures_metric(point, orientation)
    rep["outputs"] = {
        "rho": _complex_matrix(rho.entries),
        "eigenvalues": [float(x) for x in frame.eigenvalues],
        "metric": m.g.tolist(),
        "det_g": m.det,
        "condition_number": float(np.linalg.cond(m.g)),
    }
    if matched in ("q1", "q2"):
        ref = fx.RHO1 if matched == "q1" else fx.RHO2
        rep["tolerances"]["rho_entries"] = 1e-10
        rep["checks"].append(_check(f"{matched} density matrix max entry deviation",
                                    float(np.abs(rho.entries - ref).max()), 1e-10, 0.0,
                                    f"reference density matrix at {matched}"))
    return rep, EXIT_OK


def cmd_omega(args) -> tuple[dict, int]:
    point, orientation, matched = resolve_point(args)
    rep = _report("omega", {"point": {c: getattr(point, c) for c in COORDINATES},
                            "orientation": orientation, "sign": args.sign, "fixture": matched})
    m = bures_metric(point, orientation)
    sol = solve_dual_form(m, args.sign)
    other = solve_dual_form(m, -args.sign)
    rep["outputs"] = {
        "coefficients": {"".join(map(str, idx)): float(c)
                         for idx, c in zip(basis(4), sol.omega.coefficients)},
        "plus_minus_equal_to_opposite_branch": is_pm_equal(sol, other),
    }
    rep["residuals"] = {"duality_max_abs": sol.residual, "duality_relative": sol.relative_residual}
    rep["tolerances"] = {"duality_relative": 1e-9, "coefficients": 1e-9}
    ref = {"q1": fx.OMEGA_Q1, "q2": fx.OMEGA_Q2}.get(matched)
    if ref is not None and orientation == FIXTURE_ORIENTATION[matched]:
        for idx, target in ref[args.sign].items():
            key = "".join(map(str, idx))
            rep["checks"].append(_check(f"coefficient {key}", sol[idx], 1e-9, target,
                                        f"reference four-form coefficient at {matched}"))
    return rep, EXIT_OK


def cmd_spectrum(args) -> tuple[dict, int]:
    source = args.omega_source
    euclidean = args.euclidean or source == "cayley"
    if euclidean:
        point, orientation, matched = None, 1, None
        metric = MetricTensor.euclidean()
    else:
        point, orientation, matched = resolve_point(args)
        metric = bures_metric(point, orientation)
    if args.scale == "component":
        scale = COMPONENT_SPECTRAL_SCALE
    elif args.scale == "raw":
        scale = 1.0
    else:
        scale = 1.0 if source == "cayley" else COMPONENT_SPECTRAL_SCALE
    map_sign = args.sign
    if source == "solve-here":
        omega = solve_dual_form(metric, args.sign).omega
    elif source == "cayley":
        omega = cayley_calibration()
    else:
        q = fx.Q1 if source == "fixture-q1" else fx.Q2
        o = fx.Q1_ORIENTATION if source == "fixture-q1" else fx.Q2_ORIENTATION
        omega = solve_dual_form(bures_metric(q, o), args.sign).omega
        # a transported form is used with the unsigned map; the sign picks the branch
        map_sign = 1
    rep = _report("spectrum", {
        "point": None if point is None else {c: getattr(point, c) for c in COORDINATES},
        "orientation": orientation, "sign": args.sign, "omega_source": source,
        "euclidean": euclidean, "scale": scale})
    endo = build_endomorphism(omega, metric, map_sign, scale)
    spec = eigen_spectrum(endo)
    rep["outputs"] = {
        "eigenvalues": [float(x) for x in spec.eigenvalues],
        "clusters": [[v, k] for v, k in spec.clusters],
        "pattern": list(spec.pattern),
    }
    rep["residuals"] = {"trace": spec.trace, "eigenvalue_sum": spec.eigenvalue_sum,
                        "general_solver_deviation": spec.general_solver_deviation}
    rep["tolerances"] = {"trace": 1e-8, "reference_eigenvalues_relative": 1e-4}
    reference = None
    if source == "solve-here" and matched == "q1":
        reference = fx.SPECTRUM_Q1
    elif source == "solve-here" and matched == "q2":
        reference = fx.SPECTRUM_Q2
    if reference is not None and scale == COMPONENT_SPECTRAL_SCALE:
        dev = np.max(np.abs(np.sort(spec.eigenvalues) - np.sort(reference)) / np.abs(np.sort(reference)))
        rep["checks"].append(_check("reference spectrum max relative deviation", dev, 1e-4, 0.0,
                                    f"reference spectrum at {matched}"))
    if source == "fixture-q1" and matched == "q3" and scale == COMPONENT_SPECTRAL_SCALE:
        top, bottom = fx.CROSS_POINT_LEADING[args.sign]
        ev = spec.eigenvalues
        rep["checks"].append(_check("largest eigenvalue", ev[0], 1e-4 * abs(top), top,
                                    "cross-point leading eigenvalue"))
        rep["checks"].append(_check("most negative eigenvalue", ev[-1], 1e-4 * abs(bottom), bottom,
                                    "cross-point leading eigenvalue"))
    return rep, EXIT_OK


def cmd_sweep(args) -> tuple[dict, int]:
    numbers = sorted(FIGURES) if args.all else args.figure
    if not numbers:
        raise UsageError("give --figure N (1-10) or --all")
    bad = [n for n in numbers if n not in FIGURES]
    if bad:
        raise UsageError(f"unknown figure {bad[0]}; choose 1-10")
    rep = _report("sweep", {"figures": numbers, "points": args.points, "out": str(args.out)})
    summaries = []
    status = EXIT_OK
    for n in numbers:
        res = coefficient_sweep(SweepSpec.for_figure(n, args.points), workers=args.workers)
        write_figure(n, res, args.out)
        s = figure_summary(n, res)
        summaries.append(s)
        if res.success_fraction < 0.9:
            status = EXIT_SOLVER
        if FIGURES[n].reference_maximum is not None:
            rep["checks"].append(_check(f"fig{n:02d} maximum value", s["max_value"], 1e-3,
                                        FIGURES[n].reference_maximum, "reference curve maximum"))
    rep["outputs"] = {"figures": summaries}
    rep["tolerances"] = {"closed_form_deviation": 1e-8, "reference_maximum": 1e-3}
    return rep, status


def cmd_acceptance(args) -> tuple[dict, int]:
    numbers = args.criteria or [c[0] for c in CRITERIA]
    results = run_acceptance(numbers)
    rep = _report("acceptance", {"criteria": numbers})
    rep["outputs"] = {"criteria": [
        {"number": r.number, "title": r.title, "passed": r.passed, "error": r.error,
         "checks": [{"name": c.name, "value": c.value, "tolerance": c.tolerance,
                     "reference": c.reference, "passed": c.passed} for c in r.checks]}
        for r in results]}
    rep["checks"] = [{"name": f"criterion {r.number}: {r.title}", "passed": r.passed}
                     for r in results]
    rep["_lines"] = [r.summary_line() for r in results]
    return rep, EXIT_OK if all(r.passed for r in results) else EXIT_ACCEPTANCE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="buresforms", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("point", help="density matrix, eigenvalues and metric at a point")
    _add_point_args(p)

    p = sub.add_parser("omega", help="pinned self-dual or anti-self-dual four-form")
    _add_point_args(p)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)

    p = sub.add_parser("spectrum", help="spectrum of F -> *(omega ^ F)")
    _add_point_args(p)
    p.add_argument("--sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--omega-source", default="solve-here",
                   choices=("solve-here", "fixture-q1", "fixture-q2", "cayley"))
    p.add_argument("--euclidean", action="store_true", help="use the identity metric")
    p.add_argument("--scale", choices=("auto", "component", "raw"), default="auto",
                   help="eigenvalue normalization (auto: raw for cayley, else component)")

    p = sub.add_parser("sweep", help="coefficient sweeps; writes figNN.csv and figNN.json")
    p.add_argument("--figure", type=int, action="append", help="figure number 1-10")
    p.add_argument("--all", action="store_true")
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--out", type=Path, default=Path("."))
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("acceptance", help="run the acceptance suite")
    p.add_argument("--criteria", type=int, nargs="+", choices=[c[0] for c in CRITERIA])

    for p in sub.choices.values():
        p.add_argument("--json", action="store_true", help="print the JSON report")
    return parser


COMMANDS = {"point": cmd_point, "omega": cmd_omega, "spectrum": cmd_spectrum,
            "sweep": cmd_sweep, "acceptance": cmd_acceptance}


def _print_human(rep: dict, out) -> None:
    if "_lines" in rep:
        for line in rep["_lines"]:
            print(line, file=out)
        return
    for key, value in rep["outputs"].items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            for item in value:
                print(json.dumps(item), file=out)
        else:
            print(f"{key}: {json.dumps(value)}", file=out)
    for k, v in rep["residuals"].items():
        print(f"residual {k}: {v:.3g}", file=out)
    for c in rep["checks"]:
        status = "PASS" if c["passed"] else "FAIL"
        extra = f" = {c['value']:.10g} vs {c['reference']:.10g} (tol {c['tolerance']:g}; {c['anchor']})" \
            if "anchor" in c else ""
        print(f"[{status}] {c['name']}{extra}", file=out)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        rep, code = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"buresforms: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateStateError as exc:
        print(f"buresforms: degenerate state: {exc}", file=sys.stderr)
        return EXIT_STATE
    except (SolverError, BuresFormsError) as exc:
        print(f"buresforms: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"buresforms: invalid input: {exc}", file=sys.stderr)
        return EXIT_STATE
    rep["wall_time"] = time.perf_counter() - start
    if args.command != "acceptance" and any(not c["passed"] for c in rep["checks"]) and code == 0:
        code = EXIT_ACCEPTANCE
    if args.json:
        clean = {k: v for k, v in rep.items() if not k.startswith("_")}
        print(json.dumps(clean, indent=2), file=out)
    else:
        _print_human(rep, out)
    return code


if __name__ == "__main__":
    sys.exit(main())

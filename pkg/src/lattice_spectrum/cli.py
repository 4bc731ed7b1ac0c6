"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .dispersion import (
    BAND_BOTTOM,
    BAND_TOP,
    EDGE_GUARD,
    CouplingPair,
    determinant,
    edge_coefficients,
    edge_distance,
)
from .eigensolver import EigenvalueReport, find_discrete_spectrum
from .oracle import eigenvalues_outside_band
from .regions import DEFAULT_BOUNDARY_TOL, classify

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

MAX_STEPS = 4096
ORACLE_EDGE_MIN = 0.05
REFLECTION_TOL = 1e-12
REFLECTION_ROOT_TOL = 1e-10
EDGE_SAMPLES = (1e-4, 1e-6, 1e-8)


def fmt(x: float) -> str:
    """17 significant digits, enough to round-trip a double."""
    return format(float(x), ".17g")


def _finite(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return value


def _report_dict(report: EigenvalueReport, region: str) -> dict:
    return {
        "mu": report.mu,
        "lambda": report.lam,
        "region": region,
        "below": list(report.below),
        "above": list(report.above),
        "zeta_mu": report.zeta_mu,
        "zeta_lambda": report.zeta_lambda,
        "zeta_min": report.zeta_min,
        "zeta_max": report.zeta_max,
        "tolerance": report.tolerance,
        "warnings": [
            {"edge": w.edge, "distance": w.distance, "detail": w.detail}
            for w in report.warnings
        ],
    }


def cmd_eig(args, out) -> int:
    if not 1e-14 <= args.tol <= 1e-6:
        args.parser.error(f"--tol must lie in [1e-14, 1e-6], got {args.tol}")
    cp = CouplingPair(args.mu, args.lam)
    report = find_discrete_spectrum(cp, args.tol)
    region = classify(cp).name
    if args.format == "json":
        out.write(json.dumps(_report_dict(report, region), indent=2) + "\n")
        return EXIT_OK
    rows = ["quantity,value", f"mu,{fmt(cp.mu)}", f"lambda,{fmt(cp.lam)}", f"region,{region}"]
    rows += [f"below,{fmt(z)}" for z in report.below]
    rows += [f"above,{fmt(z)}" for z in report.above]
    for key in ("zeta_mu", "zeta_lambda", "zeta_min", "zeta_max"):
        value = getattr(report, key)
        rows.append(f"{key},{'' if value is None else fmt(value)}")
    rows.append(f"tolerance,{fmt(report.tolerance)}")
    for w in report.warnings:
        where = w.edge + w.distance if w.edge == BAND_TOP else w.edge - w.distance
        rows.append(f"near_threshold,{fmt(where)}")
    out.write("\n".join(rows) + "\n")
    return EXIT_OK


def cmd_classify(args, out) -> int:
    if args.boundary_tol < 0:
        args.parser.error("--boundary-tol must be non-negative")
    cp = CouplingPair(args.mu, args.lam)
    label = classify(cp, args.boundary_tol)
    ec = edge_coefficients(cp)
    payload = {
        "mu": cp.mu,
        "lambda": cp.lam,
        "region": label.name,
        "n_below": label.n_below,
        "n_above": label.n_above,
        "upper_class": label.upper_class,
        "lower_class": label.lower_class,
        "c_plus_half": ec.c_plus_half,
        "c_minus_half": ec.c_minus_half,
    }
    out.write(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def _split_levels(report: EigenvalueReport) -> tuple[float | None, float | None]:
    """(zeta1, zeta2) with a lone level above the band named zeta2."""
    levels = report.eigenvalues
    if len(levels) >= 2:
        return levels[0], levels[1]
    if report.above:
        return None, report.above[0]
    if report.below:
        return report.below[0], None
    return None, None


def phase_diagram_rows(mu_min, mu_max, lam_min, lam_max, steps, with_eigenvalues=False):
    """Yield CSV lines (header first), λ in the outer loop."""
    header = "mu,lambda,region,n_below,n_above"
    if with_eigenvalues:
        header += ",zeta1,zeta2"
    yield header
    mus = np.linspace(mu_min, mu_max, steps)
    lams = np.linspace(lam_min, lam_max, steps)
    for lam in lams.tolist():
        for mu in mus.tolist():
            cp = CouplingPair(mu, lam)
            label = classify(cp)
            counts = (label.n_below, label.n_above)
            tail = ""
            if with_eigenvalues:
                report = find_discrete_spectrum(cp)
                counts = report.counts
                z1, z2 = _split_levels(report)
                tail = "," + ",".join("" if z is None else fmt(z) for z in (z1, z2))
            yield f"{fmt(mu)},{fmt(lam)},{label.name},{counts[0]},{counts[1]}{tail}"


def _write_lines(path: str, lines, err) -> int:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in lines:
                fh.write(line + "\n")
    except OSError as exc:
        err.write(f"error: cannot write {path}: {exc}\n")
        return EXIT_IO
    return EXIT_OK


def cmd_phase_diagram(args, out) -> int:
    if not 2 <= args.steps <= MAX_STEPS:
        args.parser.error(f"--steps must lie in [2, {MAX_STEPS}]")
    if not (args.mu_min < args.mu_max and args.lambda_min < args.lambda_max):
        args.parser.error("each axis needs min < max")
    rows = phase_diagram_rows(
        args.mu_min, args.mu_max, args.lambda_min, args.lambda_max,
        args.steps, args.with_eigenvalues,
    )
    return _write_lines(args.out, rows, args.err)


def det_trace_rows(cp: CouplingPair, z_min: float, z_max: float, samples: int):
    yield "z,delta,a,b,c"
    for z in np.linspace(z_min, z_max, samples).tolist():
        p = determinant(cp, z)
        yield ",".join(fmt(v) for v in (p.z, p.delta, p.a, p.b, p.c))


def cmd_det_trace(args, out) -> int:
    if args.samples < 2:
        args.parser.error("--samples must be >= 2")
    if not args.z_min < args.z_max:
        args.parser.error("--z-min must be below --z-max")
    lo, hi = args.z_min, args.z_max
    off_band = hi < BAND_BOTTOM - EDGE_GUARD or lo > BAND_TOP + EDGE_GUARD
    if not off_band:
        args.parser.error(f"window [{lo}, {hi}] touches the band [0, 2]")
    cp = CouplingPair(args.mu, args.lam)
    return _write_lines(args.out, det_trace_rows(cp, lo, hi, args.samples), args.err)


def verification_checks(cp: CouplingPair, n: int = 4096, tol: float = 1e-8):
    """Run the determinant-vs-oracle checks for one coupling pair.

    Returns a list of ``(name, passed, detail)``.
    """
    checks = []
    report = find_discrete_spectrum(cp)
    below, above = eigenvalues_outside_band(cp, n, max(tol * 1e-2, 1e-12))

    same_counts = report.counts == (len(below), len(above))
    checks.append((
        "count agreement",
        same_counts,
        f"determinant {report.counts}, oracle {(len(below), len(above))}",
    ))

    worst, compared = 0.0, 0
    if same_counts:
        for z_det, z_orc in zip(report.eigenvalues, below + above):
            if edge_distance(z_det) >= ORACLE_EDGE_MIN:
                worst = max(worst, abs(z_det - z_orc))
                compared += 1
    checks.append((
        "root agreement",
        same_counts and worst <= tol,
        f"{compared} roots matched, max |diff| {worst:.3e} (tol {tol:g})",
    ))

    mirror = find_discrete_spectrum(cp.reflected())
    worst_delta = 0.0
    for z in (-50.0, -3.0, -0.5, -1e-3, 2.001, 2.5, 4.0, 52.0):
        d = determinant(cp, z).delta
        d_ref = determinant(cp.reflected(), 2.0 - z).delta
        worst_delta = max(worst_delta, abs(d - d_ref) / max(1.0, abs(d)))
    mapped_below = sorted(2.0 - z for z in mirror.above)
    mapped_above = sorted(2.0 - z for z in mirror.below)
    roots_ok = len(mapped_below) == len(report.below) and len(mapped_above) == len(report.above)
    if roots_ok:
        pairs = zip(report.below + report.above, mapped_below + mapped_above)
        roots_ok = all(abs(x - y) <= REFLECTION_ROOT_TOL for x, y in pairs)
    checks.append((
        "reflection identity",
        worst_delta <= REFLECTION_TOL and roots_ok,
        f"max relative Δ mismatch {worst_delta:.3e}, mirrored roots {'ok' if roots_ok else 'differ'}",
    ))

    ec = edge_coefficients(cp)
    worst_ratio = 0.0
    for s in EDGE_SAMPLES:
        up = abs(determinant(cp, BAND_TOP + s).delta * math.sqrt(s) - ec.c_plus_half)
        down = abs(determinant(cp, BAND_BOTTOM - s).delta * math.sqrt(s) - ec.c_minus_half)
        worst_ratio = max(
            worst_ratio,
            up / (10.0 * math.sqrt(s) * (1.0 + abs(ec.c_plus_0))),
            down / (10.0 * math.sqrt(s) * (1.0 + abs(ec.c_minus_0))),
        )
    checks.append((
        "edge asymptotics",
        worst_ratio <= 1.0,
        f"worst error / bound {worst_ratio:.3e}",
    ))
    return checks


def cmd_verify(args, out) -> int:
    if args.n < 256:
        args.parser.error("--n must be >= 256")
    if not args.tol > 0:
        args.parser.error("--tol must be positive")
    cp = CouplingPair(args.mu, args.lam)
    checks = verification_checks(cp, args.n, args.tol)
    out.write(f"verify mu={fmt(cp.mu)} lambda={fmt(cp.lam)} n={args.n}\n")
    for name, passed, detail in checks:
        out.write(f"{'PASS' if passed else 'FAIL'}  {name:<20} {detail}\n")
    ok = all(passed for _, passed, _ in checks)
    out.write("result: " + ("pass" if ok else "fail") + "\n")
    return EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lattice-spectrum",
        description="Bound states of the 1D lattice Schrödinger operator "
        "with on-site (mu) and nearest-neighbour (lambda) couplings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def coupling(p):
        p.add_argument("--mu", type=_finite, required=True)
        p.add_argument("--lambda", dest="lam", type=_finite, required=True)

    p = sub.add_parser("eig", help="eigenvalues outside the band")
    coupling(p)
    p.add_argument("--tol", type=_finite, default=1e-12)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_eig, parser=p)

    p = sub.add_parser("classify", help="region label and predicted counts")
    coupling(p)
    p.add_argument("--boundary-tol", type=_finite, default=DEFAULT_BOUNDARY_TOL)
    p.set_defaults(func=cmd_classify, parser=p)

    p = sub.add_parser("phase-diagram", help="region map over a (mu, lambda) grid")
    for name in ("--mu-min", "--mu-max", "--lambda-min", "--lambda-max"):
        p.add_argument(name, type=_finite, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--with-eigenvalues", action="store_true")
    p.set_defaults(func=cmd_phase_diagram, parser=p)

    p = sub.add_parser("det-trace", help="sample Δ, a, b, c on a z window")
    coupling(p)
    p.add_argument("--z-min", type=_finite, required=True)
    p.add_argument("--z-max", type=_finite, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_det_trace, parser=p)

    p = sub.add_parser("verify", help="determinant vs lattice oracle for one pair")
    coupling(p)
    p.add_argument("--n", type=int, default=4096)
    p.add_argument("--tol", type=_finite, default=1e-8)
    p.set_defaults(func=cmd_verify, parser=p)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.err = err
        return args.func(args, out)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

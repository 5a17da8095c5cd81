"""Command-line entry point: run verification suites and emit reports.

Usage: gjms6 SUITE [--geometry G] [--n N] [--lmax L] [--grid N] [--tol T]
       [--seed S] [--out PATH] [--csv WHAT:PATH]
with SUITE one of covariance, symmetry, dtn, trace, critical, all.
Exit status is nonzero iff any check fails.
"""
from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

import numpy as np

from . import geometry
from .geometry import GeometryKind, ModelGeometry
from .report import CheckReport, Stopwatch, emit_csv

Q = Fraction

GEOMETRIES = {
    "halfspace": geometry.halfspace,
    "ball": geometry.ball,
    "hemisphere": geometry.hemisphere,
    "hyperbolic": geometry.hyperbolic_geodesic,
}

SUITES = ("covariance", "symmetry", "dtn", "trace", "critical", "all")


class ConfigError(ValueError):
    pass


def _rand_poly(rng, d, deg, nterms, maxc=3):
    from .polys import Poly

    p = Poly.zero(d)
    for _ in range(nterms):
        e = [0] * d
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(d)] += 1
        c = rng.randint(-maxc, maxc)
        if c:
            p = p + Poly.monomial(d, e, c)
    return p


def run_covariance(report: CheckReport, n: int, seed: int, probes: int = 12):
    from .conformal import VariationProbe, critical_T_shift, finite_covariance_residual, infinitesimal_covariance_residual
    from .geometry import halfspace

    rng = random.Random(seed)
    g = halfspace(n)
    d = n + 1
    for k in range(probes):
        sigma = _rand_poly(rng, d, 3, 2)
        u = _rand_poly(rng, d, 3, 2)
        probe = VariationProbe(sigma=sigma)
        for j in range(6):
            with Stopwatch() as sw:
                r = infinitesimal_covariance_residual(j, probe, u, g)
            report.add(f"covariance-infinitesimal-B{j}-probe{k}", "boundary-operator-covariance",
                       Q(0) if r.iszero() else Q(1), 0.0, True, sw.ms)
    for k in range(max(2, probes // 4)):
        sigma = _rand_poly(rng, d, 2, 2, 2)
        u = _rand_poly(rng, d, 2, 2, 2)
        for j in range(6):
            with Stopwatch() as sw:
                r = finite_covariance_residual(j, sigma, u, g, order=6)
            report.add(f"covariance-finite-B{j}-probe{k}", "boundary-operator-covariance",
                       Q(0) if r.iszero() else Q(1), 0.0, True, sw.ms)
    if n == 5:
        for k in range(max(2, probes // 4)):
            sigma = _rand_poly(rng, 6, 2, 2, 2)
            for j in range(1, 6):
                with Stopwatch() as sw:
                    r = critical_T_shift(j, sigma, g)
                report.add(f"critical-shift-T{j}-probe{k}", "critical-coefficient-shift",
                           Q(0) if r.iszero() else Q(1), 0.0, True, sw.ms)


def run_symmetry(report: CheckReport, n: int, seed: int, pairs: int = 20):
    from .energy import fi_fb_decompose, q6_form, symmetry_residual
    from .geometry import ball

    rng = random.Random(seed)
    g = ball(n)
    d = n + 1
    for k in range(pairs):
        u = _rand_poly(rng, d, 5, 3)
        v = _rand_poly(rng, d, 5, 3)
        with Stopwatch() as sw:
            res = symmetry_residual(g, u, v)
        report.add(f"energy-symmetry-pair{k}", "energy-form-symmetry", res.q, 0.0, True, sw.ms)
    for k in range(3):
        u = _rand_poly(rng, d, 4, 3)
        v = _rand_poly(rng, d, 4, 3)
        with Stopwatch() as sw:
            dec = fi_fb_decompose(g, u, v)
            tot = q6_form(g, u, v).total
            resid = (dec.FI + dec.FB - tot).q
            sym = (fi_fb_decompose(g, v, u).FI - dec.FI).q
        report.add(f"interior-boundary-split-pair{k}", "energy-form-symmetry",
                   resid + abs(sym), 0.0, True, sw.ms)


def run_dtn(report: CheckReport, geom: ModelGeometry, lmax: int, tol: float):
    from .fractional import dtn_selfadjointness, dtn_verify

    n = geom.n
    if geom.kind is GeometryKind.UPPER_HALF_SPACE:
        with Stopwatch() as sw:
            recs = dtn_verify(geom, n, None)
        report.extend_records(recs, "dtn-identities", sw.ms)
        return
    for ell in range(min(lmax, 6) + 1):
        with Stopwatch() as sw:
            recs = dtn_verify(geom, n, ell, tol=tol)
        report.extend_records(recs, "dtn-identities", sw.ms)
    for j in (1, 3, 5):
        with Stopwatch() as sw:
            recs = dtn_selfadjointness(geom, n, j, range(min(lmax, 4) + 1))
        report.extend_records(recs, "dtn-selfadjointness", sw.ms)


def run_trace(report: CheckReport, geom: ModelGeometry, n: int, lmax: int,
              grid: int, tol: float, seed: int):
    from .traces import ExtremalSpec, corollary_check

    rng = np.random.default_rng(seed)
    dim_center = n + 1
    centered = [ExtremalSpec("power", (0.0,) * dim_center, 1.0) for _ in range(3)]
    with Stopwatch() as sw:
        rep = corollary_check(geom, centered, lmax=lmax, grid_size=grid)
    report.add("trace-centered-extremals", "sharp-trace-equality", rep.relative_gap, tol, False, sw.ms)
    offc = [
        ExtremalSpec("power", tuple([0.3] + [0.0] * n), 1.0),
        ExtremalSpec("power", tuple([0.0, 0.25] + [0.0] * (n - 1)), 0.7),
        ExtremalSpec("power", tuple([0.1, -0.2] + [0.0] * (n - 1)), 1.3),
    ]
    if geom.kind is GeometryKind.UPPER_HALF_SPACE:
        offc = [
            ExtremalSpec.from_flat("power", 1.0, [0.2] + [0.0] * (n - 1), n),
            ExtremalSpec.from_flat("power", 1.5, [0.0] * n, n, 0.8),
            ExtremalSpec.from_flat("power", 0.7, [-0.1, 0.1] + [0.0] * (n - 2), n, 1.2),
        ]
    with Stopwatch() as sw:
        rep = corollary_check(geom, offc, lmax=lmax, grid_size=grid)
    report.add("trace-offcenter-extremals", "sharp-trace-equality", rep.relative_gap, tol, False, sw.ms)
    gaps = []
    for k in range(5):
        coeffs = [rng.normal(size=6) * 0.5 ** np.arange(6) for _ in range(3)]
        with Stopwatch() as sw:
            r = corollary_check(geom, coeffs, lmax=lmax, grid_size=grid)
        gaps.append((k, r.gap))
        report.add(f"trace-positive-gap-{k}", "sharp-trace-inequality",
                   0.0 if r.gap > 0 else -1.0, 0.5, False, sw.ms)
    report.series["gap_vs_probe"] = (("probe", "gap"), gaps)
    # gap as a function of the flat bubble scale
    rows = []
    for eps in (0.5, 1.0, 2.0):
        specs = [ExtremalSpec.from_flat("power", eps, [0.0] * n, n) for _ in range(3)]
        r = corollary_check(geometry.ball(n), specs, lmax=lmax, grid_size=grid)
        rows.append((eps, r.relative_gap))
    report.series["gap_vs_epsilon"] = (("epsilon", "relative_gap"), rows)


def run_critical(report: CheckReport, geom: ModelGeometry, lmax: int, grid: int,
                 tol: float, seed: int):
    from .solver import BoundaryTriple, hemisphere_factored_residual, hemisphere_mode_solve
    from .traces import ExtremalSpec, critical_check

    n = geom.n
    specs = [
        ExtremalSpec("log", tuple([0.3] + [0.0] * n), 0.4),
        ExtremalSpec("power", tuple([0.0, 0.25] + [0.0] * (n - 1)), 0.7),
        ExtremalSpec("power", tuple([0.1, -0.2] + [0.0] * (n - 1)), 1.3),
    ]
    with Stopwatch() as sw:
        rep = critical_check(geom, specs, lmax=lmax, grid_size=grid)
    report.add("critical-trace-extremals", "critical-trace-equality", rep.gap, tol, False, sw.ms)
    if geom.kind is GeometryKind.ROUND_HEMISPHERE:
        sol = hemisphere_mode_solve(n, 1, BoundaryTriple(0.2, 0.5, 0.3), N=grid)
        with Stopwatch() as sw:
            resid = hemisphere_factored_residual(sol.profile, np.linspace(0.3, 1.5, 7))
        report.add("critical-factorized-equation", "critical-extremal-equation", resid, 1e-8, False, sw.ms)


def run_multiplier_table(report: CheckReport, n: int, lmax: int):
    from .fractional import round_multiplier

    rows = []
    for ell in range(min(lmax, 10) + 1):
        rows.append((ell, round_multiplier(n, Q(5, 2), ell)))
    report.series["multiplier_table"] = (("ell", "multiplier"), rows)


def build_config(args) -> dict:
    return {
        "suite": args.suite,
        "geometry": args.geometry,
        "n": args.n,
        "lmax": args.lmax,
        "grid": args.grid,
        "tol": args.tol,
        "seed": args.seed,
    }


def run_suite(args) -> CheckReport:
    if args.n < 5:
        raise ConfigError("boundary dimension must satisfy n >= 5")
    if args.tol <= 0:
        raise ConfigError("tolerance must be positive")
    if args.suite == "critical" and args.n != 5:
        raise ConfigError("the critical suite requires n = 5")
    if args.suite in ("trace",) and args.n < 6:
        raise ConfigError("the subcritical trace suite requires n >= 6")
    geom = GEOMETRIES[args.geometry](args.n)
    if args.suite == "critical" and geom.kind is GeometryKind.HYPERBOLIC_GEODESIC:
        raise ConfigError("critical trace checks run on the half space, ball, or hemisphere")
    if args.suite == "trace" and geom.kind is GeometryKind.HYPERBOLIC_GEODESIC:
        raise ConfigError("trace checks run on the half space, ball, or hemisphere")

    report = CheckReport(args.suite, build_config(args))
    if args.suite in ("covariance", "all"):
        run_covariance(report, args.n, args.seed)
    if args.suite in ("symmetry", "all"):
        run_symmetry(report, args.n if args.n >= 6 else 7, args.seed)
    if args.suite in ("dtn", "all"):
        run_dtn(report, geom, args.lmax, args.tol)
    if args.suite in ("trace", "all") and args.n >= 6:
        run_trace(report, geom if geom.kind is not GeometryKind.HYPERBOLIC_GEODESIC
                  else geometry.ball(args.n), args.n, args.lmax, args.grid, args.tol, args.seed)
    if args.suite in ("critical", "all") and args.n == 5:
        run_critical(report, geom if geom.kind in (GeometryKind.EUCLIDEAN_BALL, GeometryKind.ROUND_HEMISPHERE)
                     else geometry.ball(5), args.lmax, args.grid, max(args.tol, 1e-5), args.seed)
    run_multiplier_table(report, args.n, args.lmax)
    return report


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="gjms6", description=__doc__)
    ap.add_argument("suite", choices=SUITES)
    ap.add_argument("--geometry", choices=sorted(GEOMETRIES), default="ball")
    ap.add_argument("--n", type=int, default=7, help="boundary dimension (>= 5)")
    ap.add_argument("--lmax", type=int, default=32, help="harmonic-degree cap")
    ap.add_argument("--grid", type=int, default=64, help="collocation size")
    ap.add_argument("--tol", type=float, default=1e-6, help="numeric tolerance")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", type=str, default=None, help="JSON report path")
    ap.add_argument("--csv", type=str, default=None, metavar="WHAT:PATH",
                    help="emit a data series (multiplier_table, gap_vs_epsilon, ...)")
    args = ap.parse_args(argv)

    try:
        report = run_suite(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    report.print_lines()
    if args.out:
        report.write_json(args.out)
        print(f"report written to {args.out}")
    if args.csv:
        what, _, path = args.csv.partition(":")
        if not path:
            print("csv argument must look like WHAT:PATH", file=sys.stderr)
            return 2
        emit_csv(report, what, path)
        print(f"series {what!r} written to {path}")
    return 0 if report.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())

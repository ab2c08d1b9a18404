"""Config-driven experiment runner.

Subcommands mirror the library modules: ``region``, ``counterexample``,
``growth``, ``domar``, ``carleman``, ``sector``, ``opgroup``, ``suite`` and
``emit``.  Flags mirror plain-text ``key=value`` config keys one-to-one
(``--config`` supplies defaults, explicit flags win, unknown keys are
rejected).  Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 usage error.
``emit`` writes plot data as CSV and renders a PNG figure next to it.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import geometry as geo
from . import harmonic as ha
from . import opgroup as og
from . import potential as pot
from .construction import HalfPlaneConstruction
from .reporting import (PLOT_KINDS, Report, emit_plotdata, load_report_rows,
                        render_figure, rows_to_csv, write_report)
from .suites import SUITES, run_suite

__all__ = ["main", "entry", "UsageError"]

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace("i", "j").replace(" ", ""))
    except ValueError as exc:
        raise UsageError(f"bad complex literal {text!r}") from exc


def _load_config(path: str) -> dict:
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        out[key] = (val, lineno)
    return out


def _merge_config(args, parser_keys, path):
    """Config supplies defaults for keys the command declares; explicit
    flags win; unknown keys are usage errors with their location."""
    if not path:
        return
    cfg = _load_config(path)
    for key, (val, lineno) in cfg.items():
        attr = key.replace("-", "_")
        if attr not in parser_keys:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        if getattr(args, attr) is None:
            setattr(args, attr, val)


def _need(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"missing required option --{name.replace('_','-')}")


def _as_float(args, name):
    v = getattr(args, name)
    if v is None or isinstance(v, float):
        return v
    try:
        return float(v)
    except ValueError as exc:
        raise UsageError(f"--{name}: bad number {v!r}") from exc


def _as_int(args, name):
    v = getattr(args, name)
    if v is None or isinstance(v, int):
        return v
    try:
        return int(v)
    except ValueError as exc:
        raise UsageError(f"--{name}: bad integer {v!r}") from exc


def _finish(args, report: Report, t0: float) -> int:
    report.wall_clock = time.perf_counter() - t0
    if getattr(args, "out", None):
        paths = write_report(report, args.out)
        print(f"wrote {paths['csv']} {paths['json']}")
    print(f"{report.experiment_id}: {report.verdict}")
    for key, val in report.summary.items():
        print(f"  {key} = {val}")
    return report.exit_code


def _matrix_from_arg(text: str) -> og.MatrixGenerator:
    text = text.strip()
    try:
        if text.startswith("jordan:"):
            return og.MatrixGenerator.from_jordan_spec(text)
        return og.MatrixGenerator.from_text(Path(text).read_text())
    except (OSError, og.OpGroupError) as exc:
        raise UsageError(f"bad matrix input {text!r}: {exc}") from exc


# ------------------------------------------------------------------ handlers

def _cmd_region(args) -> int:
    t0 = time.perf_counter()
    _need(args, "h")
    try:
        h = geo.parse_approach_literal(args.h)
    except (geo.GeometryError, OSError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    phi = _as_float(args, "phi")
    x0 = _as_float(args, "x0") or 0.0
    region = geo.DiscRegion(h, phi) if phi is not None \
        else geo.HalfPlaneRegion(h, x0)
    if args.action == "check":
        _need(args, "point")
        z = _parse_complex(args.point)
        inside = geo.region_contains(region, z)
        rows = [{"h": args.h, "point": str(z), "contains": inside}]
        rep = Report("region-check", {"h": args.h, "point": args.point},
                     rows, "pass", seed=args.seed,
                     summary={"contains": inside})
        return _finish(args, rep, t0)
    n = _as_int(args, "N") or 8
    pts = geo.approach_path(region, n)
    rows = [{"k": k, "re": float(p.real), "im": float(p.imag),
             "contains": geo.region_contains(region, p)}
            for k, p in enumerate(pts)]
    ok = all(r["contains"] for r in rows)
    rep = Report("region-path", {"h": args.h, "N": n}, rows,
                 "pass" if ok else "fail", seed=args.seed,
                 summary={"all_inside": ok})
    return _finish(args, rep, t0)


def _cmd_counterexample(args) -> int:
    t0 = time.perf_counter()
    _merge_config(args, {"gamma", "eps", "delta", "grid"}, args.config)
    _need(args, "gamma", "eps", "delta")
    gamma = _as_float(args, "gamma")
    eps = _as_float(args, "eps")
    delta = _as_float(args, "delta")
    grid = _as_int(args, "grid") or 400
    try:
        u = HalfPlaneConstruction(gamma, eps, delta, grid=grid)
    except ha.HarmonicError as exc:
        raise UsageError(str(exc)) from exc
    if args.write_config:
        Path(args.write_config).write_text(u.to_config())
    tol = 1e-3
    xs = np.concatenate([-np.linspace(0.05, 0.95, 10),
                         np.linspace(0.05, 0.95, 10)])
    edge = np.abs(u(xs + 1e-4j))
    region = geo.HalfPlaneRegion(geo.ApproachFunction.power(gamma), 0.0)
    verdict = ha.boundary_limit(u, region, n_points=22, tol=tol)
    rng = np.random.default_rng(args.seed or 0)
    zz = rng.uniform(0.05, 0.95, 200) + 1j * rng.uniform(0.05, 0.95, 200)
    witness = float(np.abs(u(zz)).max())
    rows = [{"x": float(x), "abs_u_at_bottom": float(v)}
            for x, v in zip(xs, edge)]
    ok = (edge.max() <= tol and verdict.decision == "tends-to-zero"
          and witness >= 10 * tol)
    rep = Report("counterexample",
                 {"gamma": gamma, "eps": eps, "delta": delta, "grid": grid},
                 rows, "pass" if ok else "fail", seed=args.seed,
                 summary={"boundary_vanish": float(edge.max()),
                          "wedge_limit": verdict.decision,
                          "witness": witness})
    return _finish(args, rep, t0)


def _build_function(args):
    name = args.function
    if name == "shapiro":
        return ha.ShapiroSeriesHarmonic()
    if name.startswith("const:"):
        return ha.FourierSeriesHarmonic([float(name.split(":", 1)[1])])
    if name.startswith("poisson:"):
        path = name.split(":", 1)[1]
        try:
            data = np.loadtxt(path)
        except OSError as exc:
            raise UsageError(f"cannot read density table {path!r}") from exc
        if data.ndim != 2 or data.shape[1] != 2:
            raise UsageError(f"density table {path!r} must have two columns")
        return ha.PoissonIntegralHarmonic(data[:, 0], data[:, 1])
    if name == "construction":
        _merge_config(args, {"gamma", "eps", "delta", "grid", "function",
                             "r_min", "r_max", "points", "resolution"},
                      args.config)
        _need(args, "gamma", "eps", "delta")
        return HalfPlaneConstruction(_as_float(args, "gamma"),
                                     _as_float(args, "eps"),
                                     _as_float(args, "delta"),
                                     grid=_as_int(args, "grid") or 400)
    raise UsageError(f"unknown function {name!r}")


def _cmd_growth(args) -> int:
    t0 = time.perf_counter()
    _need(args, "function")
    u = _build_function(args)
    if args.h is not None:
        # verdict sweep: boundary limits along the h-regions over an angle
        # grid, with the growth class in the summary
        if u.domain != "disc":
            raise UsageError("verdict sweeps need a disc function")
        try:
            h = geo.parse_approach_literal(args.h)
        except (geo.GeometryError, OSError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        nphi = _as_int(args, "phi_count") or 36
        phis = np.linspace(0.0, 2.0 * math.pi, nphi, endpoint=False)
        rep_u = ha.uniqueness_report(u, h, phis, n_points=40)
        rows = rep_u.rows()
        verdict = "pass" if not rep_u.contradiction else "fail"
        rep = Report("growth-verdicts",
                     {"function": args.function, "h": args.h,
                      "phi_count": nphi},
                     rows, verdict, seed=args.seed,
                     summary={"class": rep_u.growth.tag,
                              "budget_within": rep_u.budget_within,
                              "all_zero_limits": rep_u.all_zero_limits,
                              "predicts_zero": rep_u.predicts_zero,
                              "interior_max": rep_u.interior_max,
                              "contradiction": rep_u.contradiction})
        return _finish(args, rep, t0)
    lo = _as_float(args, "r_min") or (0.9 if u.domain == "disc" else 1e-3)
    hi = _as_float(args, "r_max") or (0.999 if u.domain == "disc" else 0.5)
    npts = _as_int(args, "points") or 24
    res = _as_int(args, "resolution") or 2048
    if u.domain == "disc":
        grid = 1.0 - np.geomspace(1.0 - lo, 1.0 - hi, npts)
        key = "r"
    else:
        grid = np.geomspace(lo, hi, npts)
        key = "y"
    prof = ha.envelope(u, grid, resolution=res)
    cls = ha.classify_growth(prof, window=max(prof.closeness()) + 1e-12)
    rows = [{key: float(g), "M_u": float(mu), "M_abs_u": float(ma)}
            for g, mu, ma in zip(prof.grid, prof.M_u, prof.M_abs)]
    verdict = "inconclusive" if cls.tag == "inconclusive" else "pass"
    rep = Report("growth", {"function": args.function, "points": npts},
                 rows, verdict, seed=args.seed,
                 summary={"class": cls.tag, "exponent": cls.exponent,
                          "constant": cls.constant, "residual": cls.residual})
    return _finish(args, rep, t0)


def _cmd_domar(args) -> int:
    t0 = time.perf_counter()
    _need(args, "majorant")
    try:
        w = pot.parse_majorant_literal(args.majorant)
    except (pot.PotentialError, OSError) as exc:
        raise UsageError(str(exc)) from exc
    K = _as_int(args, "K") or 20000
    if args.search_T:
        found = pot.domar_minimal_T(w)
        if found is None:
            rep = Report("domar-search", {"majorant": args.majorant}, [],
                         "fail", seed=args.seed,
                         summary={"T_star": None,
                                  "note": "no passing level below ceiling"})
            return _finish(args, rep, t0)
        rows = [{"T_star": found.T_star, "sum": found.check.total,
                 "bound": found.check.bound,
                 "degenerate_zero_sum": found.degenerate_zero_sum}]
        rep = Report("domar-search", {"majorant": args.majorant}, rows,
                     "pass", seed=args.seed,
                     summary={"T_star": found.T_star,
                              "interior_bound": found.check.bound})
        return _finish(args, rep, t0)
    _need(args, "T")
    T = _as_float(args, "T")
    try:
        chk = pot.domar_check(w, T, K=K)
    except pot.CutoffError as exc:
        raise UsageError(str(exc)) from exc
    rows = [{"T": T, "sum": chk.total, "passed": chk.passed,
             "bound": chk.bound, "terms": chk.terms_used,
             "crossing_index": chk.crossing_index}]
    rep = Report("domar-check", {"majorant": args.majorant, "T": T}, rows,
                 "pass" if chk.passed else "fail", seed=args.seed,
                 summary={"sum": chk.total, "interior_bound": chk.bound,
                          "crossing_index": chk.crossing_index})
    return _finish(args, rep, t0)


def _cmd_carleman(args) -> int:
    t0 = time.perf_counter()
    _need(args, "N")
    N = _as_float(args, "N")
    band = _as_int(args, "band")
    if band is not None:
        cb = pot.carleman_band_bound(N, band)
        ref = -N * math.exp((band - 1) ** 2)
        ok = cb.log_value <= ref
        rows = [{"band": band, "value": cb.value, "log_value": cb.log_value,
                 "log_reference": ref, "dominated": ok}]
        rep = Report("carleman-band", {"N": N, "band": band}, rows,
                     "pass" if ok else "fail", seed=args.seed,
                     summary={"log_value": cb.log_value, "log_reference": ref})
        return _finish(args, rep, t0)
    _need(args, "r1", "r2")
    cb = pot.carleman_measure_bound(pot.WidthFunction.canonical(N),
                                    _as_float(args, "r1"),
                                    _as_float(args, "r2"))
    rows = [{"r1": _as_float(args, "r1"), "r2": _as_float(args, "r2"),
             "value": cb.value, "log_value": cb.log_value,
             "integral": cb.integral}]
    rep = Report("carleman-bound", {"N": N}, rows, "pass", seed=args.seed,
                 summary={"value": cb.value, "log_value": cb.log_value})
    return _finish(args, rep, t0)


def _cmd_sector(args) -> int:
    t0 = time.perf_counter()
    _need(args, "gamma", "delta", "N", "M")
    z = _parse_complex(args.z) if args.z else 10.0 + 0.0j
    try:
        cert = pot.sector_certificate(_as_float(args, "gamma"),
                                      _as_float(args, "delta"),
                                      _as_int(args, "N"), _as_int(args, "M"),
                                      z)
    except pot.ParameterError as exc:
        rep = Report("sector", {"gamma": args.gamma, "delta": args.delta},
                     [{"violating_n": exc.n, "error": str(exc)}], "fail",
                     seed=args.seed, summary={"violating_n": exc.n})
        return _finish(args, rep, t0)
    rows = [{"n": n, "term": term} for n, term in cert.middle_terms]
    rows.append({"n": "final", "term": cert.final_term})
    rep = Report("sector", {"gamma": args.gamma, "delta": args.delta,
                            "N": args.N, "M": args.M}, rows,
                 "pass" if cert.certified else "fail", seed=args.seed,
                 summary={"total": cert.total, "certified": cert.certified,
                          "violating_n": cert.violating_n})
    return _finish(args, rep, t0)


def _parse_vector(text: str, n: int) -> np.ndarray:
    text = text.strip()
    if text.startswith("e"):
        idx = int(text[1:]) - 1
        if not (0 <= idx < n):
            raise UsageError(f"basis vector {text!r} out of range for n={n}")
        v = np.zeros(n, dtype=complex)
        v[idx] = 1.0
        return v
    try:
        vals = [complex(s.replace("i", "j")) for s in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad vector literal {text!r}") from exc
    if len(vals) != n:
        raise UsageError(f"vector needs {n} entries, got {len(vals)}")
    return np.asarray(vals, dtype=complex)


def _cmd_opgroup(args) -> int:
    t0 = time.perf_counter()
    _need(args, "matrix")
    G = _matrix_from_arg(args.matrix)
    if args.action == "decay":
        _need(args, "beta")
        beta = _as_float(args, "beta")
        x = _parse_vector(args.vector or "e1", G.n)
        alphas = og.default_alphas()
        vals = og.d_apply_grid(G, beta, x, alphas)
        norms = np.linalg.norm(vals, axis=1)
        rows = [{"alpha": float(a), "norm": float(v), "beta": beta}
                for a, v in zip(alphas, norms)]
        rep = Report("opgroup-decay", {"matrix": args.matrix, "beta": beta},
                     rows, "pass", seed=args.seed,
                     summary={"sup": float(norms.max()),
                              "tail": float(norms[-1])})
        return _finish(args, rep, t0)
    _need(args, "theorem")
    try:
        F = og.ClosedRealSet.from_string(args.F) if args.F \
            else og.ClosedRealSet.empty()
    except og.OpGroupError as exc:
        raise UsageError(str(exc)) from exc
    rng = np.random.default_rng(args.seed or 0)
    theorem = args.theorem
    rows = []
    if theorem == "identities":
        worst = 0.0
        for a in np.logspace(-6, 0, 8):
            for b in np.linspace(-8, 8, 9):
                D = og.D_op(G, float(a), float(b))
                r = np.linalg.norm(D - og.d_op_factored(G, float(a), float(b)))
                r /= max(np.linalg.norm(D), 1e-300)
                worst = max(worst, float(r))
        rows.append({"check": "factored-form", "worst_residual": worst})
        ok = worst <= 1e-10
        summary = {"worst_residual": worst}
    elif theorem in ("d1", "d2-necessity"):
        X = og.spectral_subspace(G, F)
        ok = True
        for vi, v in enumerate(og.membership_suite_vectors(G.n, rng, 5)):
            spectral = X.contains_vector(v)
            lim = og.limit_membership(G, F, v, rng=rng).member
            bnd = og.bounded_membership(G, F, v, rng=rng).member
            agree = lim is spectral
            rows.append({"F": str(F), "vector": vi,
                         "member_spectral": spectral, "member_limit": lim,
                         "member_bounded": bnd, "agree": agree})
            if theorem == "d1":
                ok &= agree
            else:
                ok &= bnd is True    # off-spectrum boundedness never separates
        summary = {"cases": len(rows)}
    elif theorem == "ranges":
        n_pow = _as_int(args, "n")
        if n_pow is None:
            _, a = og.growth_exponent(G)
            n_pow = 2 if a < 1.0 else 3
        X = og.spectral_subspace(G, F)
        R = og.ranges_intersection(G, F, n_pow)
        ok = R.equals(X, tol=1e-8)
        rows.append({"F": str(F), "power": n_pow, "dim_X": X.dim,
                     "dim_ranges": R.dim,
                     "principal_sine": R.principal_sine(X), "equal": ok})
        summary = {"dim_X": X.dim, "dim_ranges": R.dim, "equal": ok}
    else:
        raise UsageError(f"unknown theorem {args.theorem!r}")
    rep = Report(f"opgroup-{theorem}", {"matrix": args.matrix, "F": args.F},
                 rows, "pass" if ok else "fail", seed=args.seed,
                 summary=summary)
    return _finish(args, rep, t0)


def _cmd_suite(args) -> int:
    t0 = time.perf_counter()
    if args.name not in SUITES:
        raise UsageError(f"unknown suite {args.name!r}; "
                         f"choose from {sorted(SUITES)}")
    report = run_suite(args.name)
    rows = report.rows()
    for row in rows:
        print(f"criterion {row['criterion']:>2} {row['name']:<42} "
              f"{'PASS' if row['passed'] else 'FAIL'}  ({row['elapsed_s']}s)")
    rep = Report(f"suite-{args.name}", {"suite": args.name}, rows,
                 "pass" if report.passed else "fail", seed=args.seed,
                 summary={"criteria": len(rows),
                          "failed": sum(not r["passed"] for r in rows)})
    return _finish(args, rep, t0)


def _cmd_emit(args) -> int:
    t0 = time.perf_counter()
    _need(args, "report", "kind", "out")
    try:
        rows = load_report_rows(args.report)
    except (OSError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    try:
        header, data = emit_plotdata(rows, args.kind)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(rows_to_csv(data, header))
    made = [str(out)]
    if not args.no_fig:
        png = render_figure(args.kind, header, data, out.with_suffix(".png"))
        made.append(str(png))
    print("wrote " + " ".join(made))
    return EXIT_PASS


# --------------------------------------------------------------------- main

def _build_parser() -> _Parser:
    p = _Parser(prog="harmspec", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="report base path (writes .csv/.json)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--config", help="key=value config file")

    sp = sub.add_parser("region", help="approach-region queries")
    sp.add_argument("action", choices=["check", "path"])
    sp.add_argument("--h", help="zero|linear:c|cubic:c|power:g|custom:path")
    sp.add_argument("--point")
    sp.add_argument("--phi")
    sp.add_argument("--x0")
    sp.add_argument("--N")
    common(sp)
    sp.set_defaults(fn=_cmd_region)

    sp = sub.add_parser("counterexample", help="wedge construction checks")
    for k in ("--gamma", "--eps", "--delta", "--grid"):
        sp.add_argument(k)
    sp.add_argument("--write-config", dest="write_config")
    common(sp)
    sp.set_defaults(fn=_cmd_counterexample)

    sp = sub.add_parser("growth", help="envelope profile and class")
    sp.add_argument("--function",
                    help="shapiro|const:<v>|poisson:<table>|construction")
    for k in ("--gamma", "--eps", "--delta", "--grid",
              "--r-min", "--r-max", "--points", "--resolution"):
        sp.add_argument(k)
    sp.add_argument("--h", help="verdict sweep along these approach regions")
    sp.add_argument("--phi-count", dest="phi_count")
    common(sp)
    sp.set_defaults(fn=_cmd_growth)

    sp = sub.add_parser("domar", help="majorant summability bound")
    sp.add_argument("--majorant", help="const:v|pow:p|exp:p|custom:table")
    sp.add_argument("--T")
    sp.add_argument("--search-T", dest="search_T", action="store_true")
    sp.add_argument("--K")
    common(sp)
    sp.set_defaults(fn=_cmd_domar)

    sp = sub.add_parser("carleman", help="strip harmonic-measure bound")
    sp.add_argument("--N")
    sp.add_argument("--band")
    sp.add_argument("--r1")
    sp.add_argument("--r2")
    common(sp)
    sp.set_defaults(fn=_cmd_carleman)

    sp = sub.add_parser("sector", help="sector estimate certificate")
    for k in ("--gamma", "--delta", "--N", "--M", "--z"):
        sp.add_argument(k)
    common(sp)
    sp.set_defaults(fn=_cmd_sector)

    sp = sub.add_parser("opgroup", help="matrix-group theorem checks")
    sp.add_argument("action", choices=["verify", "decay"])
    sp.add_argument("--matrix", help="text file or jordan:[(h,s),...]")
    sp.add_argument("--theorem",
                    help="identities|d1|ranges|d2-necessity")
    sp.add_argument("--F", help="closed set, e.g. [-inf,0]u[2,3.5]")
    sp.add_argument("--n")
    sp.add_argument("--beta", help="frequency for a decay sweep")
    sp.add_argument("--vector", help="e<k> or comma-separated entries")
    common(sp)
    sp.set_defaults(fn=_cmd_opgroup)

    sp = sub.add_parser("suite", help="acceptance bundles")
    sp.add_argument("name", help="|".join(sorted(SUITES)))
    common(sp)
    sp.set_defaults(fn=_cmd_suite)

    sp = sub.add_parser("emit", help="plot data (CSV + PNG) from a report")
    sp.add_argument("--report", help="report .json written by a run")
    sp.add_argument("--kind", help="|".join(PLOT_KINDS))
    sp.add_argument("--out", help="target CSV path")
    sp.add_argument("--no-fig", dest="no_fig", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=_cmd_emit)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

"""Command-line front end.

Exit codes: 0 PASS/success, 1 VIOLATION or failed test, 2 usage error,
3 INCONCLUSIVE. Primary output (CSV or JSON) goes to ``--out`` or stdout;
diagnostics go to stderr. Identical arguments give byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import densities, samplers, selfdecomp, stattests, weakconv
from .analysis import check_cm, check_pd, classify_orbit, solve_p
from .analysis.functional import Dense, Discrete
from .core import CheckReport, RngStream, Verdict, from_dict
from .densities import fmt, rows_to_csv

EXIT = {Verdict.PASS: 0, Verdict.VIOLATION: 1, Verdict.INCONCLUSIVE: 3}
USAGE_ERROR = 2


class UsageError(Exception):
    pass


def parse_grid(text: str) -> np.ndarray:
    """``min:max:points`` -> linspace."""
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError as exc:
        raise UsageError(f"--grid expects min:max:points, got {text!r}") from exc
    if n < 1 or hi < lo:
        raise UsageError(f"bad grid {text!r}")
    return np.linspace(lo, hi, n)


def load_json_arg(text: str):
    """Inline JSON (starting with ``{``) or a path to a JSON file."""
    try:
        if text.lstrip().startswith("{"):
            data = json.loads(text)
        else:
            data = json.loads(Path(text).read_text())
        return from_dict(data)
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"cannot read spec/law {text!r}: {exc}") from exc


def emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def report_json(report: CheckReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"


def emit_report(args, report: CheckReport) -> int:
    emit(args, report_json(report))
    return EXIT[report.verdict]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_sample(args) -> int:
    rng = RngStream(args.seed)
    name = args.name
    if name == "positive-stable":
        x = samplers.positive_stable(args.p, args.N, rng)
    elif name == "sym-stable":
        x = samplers.sym_stable(args.p, args.N, rng)
    elif name == "gen-gamma":
        x = samplers.gen_gamma(args.lam, args.p, args.a, args.N, rng)
    elif name == "weakly-stable-radial":
        x = samplers.weakly_stable_radial(args.alpha, args.n, args.N, rng)
    elif name == "sphere":
        pts = samplers.sphere_points(args.n, args.N, rng)
        emit(args, rows_to_csv([f"x{i}" for i in range(args.n)], pts))
        return 0
    elif name == "fixed-point":
        x = selfdecomp.sample_fixed_point(args.alpha, args.beta, args.base, args.N, rng=rng).samples
    else:
        raise UsageError(f"unknown sampler {name!r}")
    emit(args, rows_to_csv(["x"], ((v,) for v in x)))
    return 0


def cmd_density(args) -> int:
    grid = parse_grid(args.grid)
    fam = args.family
    if fam == "f2n":
        f = densities.density_f2n(args.n, grid)
    elif fam == "f1n":
        f = densities.density_f1n(args.n, grid)
    elif fam == "falphan":
        f = densities.density_falphan(args.alpha, args.n, grid).fs
    elif fam == "positive-stable":
        f = densities.positive_stable_pdf(grid, args.p)
    elif fam == "gen-gamma":
        f = densities.gen_gamma_pdf(args.lam, args.p, args.a, grid)
    else:
        raise UsageError(f"unknown density family {fam!r}")
    emit(args, rows_to_csv(["x", "f"], zip(grid, np.broadcast_to(f, grid.shape))))
    return 0


def cmd_cf(args) -> int:
    spec = load_json_arg(args.spec)
    t = parse_grid(args.grid)
    val = np.broadcast_to(densities.eval_cf(spec, t), t.shape)
    bound = np.broadcast_to(densities.cf_truncation_bound(spec, t), t.shape)
    emit(args, rows_to_csv(["t", "phi", "truncation_bound"], zip(t, val, bound)))
    return 0


def cmd_convolve(args) -> int:
    kind = weakconv.parse_kind(args.kind)
    l1, l2 = load_json_arg(args.law1), load_json_arg(args.law2)
    rng = RngStream(args.seed)
    out = weakconv.weak_sum(kind, l1, l2, args.N, rng)
    x = samplers.draw_radial(out, args.N, rng.child(100))
    emit(args, rows_to_csv(["x"], ((v,) for v in x)))
    summary = {"kind": args.kind, "N": args.N, "seed": args.seed, "result": type(out).__name__}
    code = 0
    if args.against:
        ref = samplers.draw_radial(load_json_arg(args.against), args.N, rng.child(101))
        D, pv = stattests.ks_two_sample(x, ref)
        summary.update(statistic=D, p_value=pv, threshold=stattests.ks_critical(args.N, args.N),
                       passed=bool(pv >= stattests.LEVEL))
        code = 0 if summary["passed"] else 1
    sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")
    return code


def cmd_solve_p(args) -> int:
    try:
        p = solve_p(args.a, args.b)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    emit(args, f"{p!r}\n")
    return 0


def cmd_classify_orbit(args) -> int:
    try:
        res = classify_orbit(args.a, args.b, depth=args.depth, tol=args.tol or 1e-12)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if isinstance(res, Discrete):
        body = {"verdict": "Discrete", "c": res.c, "ratio": [res.ratio.numerator, res.ratio.denominator]}
        code = 0
    elif isinstance(res, Dense):
        body = {"verdict": "Dense", "depth": res.depth, "max_denominator": res.max_denominator,
                "note": "numerical evidence, not a proof"}
        code = 0
    else:
        body = {"verdict": "Inconclusive", "depth": res.depth, "tol": res.tol}
        code = 3
    emit(args, json.dumps(body, sort_keys=True, indent=2) + "\n")
    return code


def cmd_check_cm(args) -> int:
    t_grid = parse_grid(args.grid) if args.grid else None
    try:
        rep = check_cm(args.C, args.D, args.alpha, args.M, t_grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return emit_report(args, rep)


def cmd_check_pd(args) -> int:
    spec = load_json_arg(args.spec)
    kw = {"rng": RngStream(args.seed), "nodesets": args.nodesets, "npoints": args.npoints}
    if args.tmax:
        kw["tmax"] = args.tmax
    if args.tol:
        kw["tol_fft"] = args.tol
    return emit_report(args, check_pd(spec, **kw))


def cmd_fixedpoint(args) -> int:
    sol, rep = selfdecomp.solve_G(args.alpha, args.beta, grid_size=args.grid_size, iters=args.iters,
                                  residual_tol=args.tol or selfdecomp.RESIDUAL_TOL)
    emit(args, sol.to_csv())
    text = report_json(rep)
    if args.report:
        Path(args.report).write_text(text)
    else:
        sys.stderr.write(text)
    return EXIT[rep.verdict]


def cmd_verify(args) -> int:
    if args.name == "remark3":
        params = {"alpha": args.alpha, "n": args.n}
    elif args.name == "theorem3":
        params = {"alpha": args.alpha, "p": args.p, "a": args.a}
    else:
        raise UsageError(f"unknown named test {args.name!r}")
    if args.seeds:
        res = stattests.run_multi_seed(args.name, seeds=range(args.seed, args.seed + args.seeds),
                                       required=args.required or int(np.ceil(0.9 * args.seeds)),
                                       N=args.N, **params)
        body = {"test": args.name, **params, "N": args.N, "seeds": args.seeds, "required": res.required,
                "n_pass": res.n_pass, "passed": res.passed,
                "reports": [r.to_dict() for r in res.reports]}
        emit(args, json.dumps(body, sort_keys=True, indent=2) + "\n")
        return 0 if res.passed else 1
    try:
        rep = stattests.NAMED_TESTS[args.name](N=args.N, rng=RngStream(args.seed), **params)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return emit_report(args, rep)


def cmd_axioms(args) -> int:
    try:
        kind = weakconv.parse_kind(args.kind)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = weakconv.check_axioms(kind, trials=args.trials, rng=RngStream(args.seed), N=args.N)
    return emit_report(args, rep)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit seed")
    common.add_argument("--N", type=int, default=100_000, help="sample count")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--tol", type=float, default=None, help="tolerance override")

    ap = _Parser(prog="wgconv", description="Weak generalized convolution toolkit.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("sample", cmd_sample, "draw samples to CSV")
    p.add_argument("name", choices=["positive-stable", "sym-stable", "gen-gamma", "weakly-stable-radial",
                                    "sphere", "fixed-point"])
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--base", default="uniform_pm1")

    p = add("density", cmd_density, "tabulate a density to CSV")
    p.add_argument("family", choices=["f2n", "f1n", "falphan", "positive-stable", "gen-gamma"])
    p.add_argument("--grid", default="0:10:101")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--a", type=float, default=1.0)

    p = add("cf", cmd_cf, "evaluate a CF spec on a grid")
    p.add_argument("spec", help="JSON file or inline JSON")
    p.add_argument("--grid", default="0:10:101")

    p = add("convolve", cmd_convolve, "weak generalized convolution of two radial laws")
    p.add_argument("kind", help="spherical:n or stable:p")
    p.add_argument("law1")
    p.add_argument("law2")
    p.add_argument("--against", default=None, help="reference law JSON for a KS summary")

    p = add("solve-p", cmd_solve_p, "root of a^p + b^p = 1")
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)

    p = add("classify-orbit", cmd_classify_orbit, "discrete or dense orbit {a^i b^j}")
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)
    p.add_argument("--depth", type=int, default=40)

    p = add("check-cm", cmd_check_cm, "complete monotonicity of exp(-C t^alpha - D t)")
    p.add_argument("C", type=float)
    p.add_argument("D", type=float)
    p.add_argument("alpha", type=float)
    p.add_argument("M", type=int, nargs="?", default=12)
    p.add_argument("--grid", default=None)

    p = add("check-pd", cmd_check_pd, "positive-definiteness screening of a CF spec")
    p.add_argument("spec")
    p.add_argument("--tmax", type=float, default=None)
    p.add_argument("--npoints", type=int, default=2**16)
    p.add_argument("--nodesets", type=int, default=64)

    p = add("fixedpoint", cmd_fixedpoint, "CDF of the self-decomposable fixed point")
    p.add_argument("alpha", type=float)
    p.add_argument("beta", type=float)
    p.add_argument("--grid-size", type=int, default=4001)
    p.add_argument("--iters", type=int, default=200)
    p.add_argument("--report", default=None, help="residual report path (default stderr)")

    p = add("verify", cmd_verify, "run a named distributional identity test")
    p.add_argument("name", choices=sorted(stattests.NAMED_TESTS))
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--seeds", type=int, default=0, help="run the multi-seed protocol over this many seeds")
    p.add_argument("--required", type=int, default=None)

    p = add("axioms", cmd_axioms, "randomized axiom checks for a convolution kind")
    p.add_argument("kind")
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(N=4000)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError(ap.format_usage())
        if args.seed < 0 or args.seed >= 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(str(exc).rstrip() + "\n")
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())

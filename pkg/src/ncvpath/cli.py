"""Command-line front end: ``ncvpath {fit,cv,diagnose,simulate,bench}``.

Exit codes: 0 success, 2 unreadable or malformed input, 3 numerical
failure (no grid point converged, degenerate problem), 4 invalid flags.
"""

from __future__ import annotations

import argparse
import os
import sys


from . import __version__
from .artifact import (ArtifactError, dumps, load, path_from_dict, path_to_dict,
                       report_to_dict, selection_to_dict, write_coef_table)
from .bench import SOLVERS, BenchConfig, time_paths
from .cd_linear import FitConfig
from .cd_logistic import ScaleMode
from .convexity import diagnose_path
from .design import DataError, Family, read_csv, standardize, write_csv
from .path import DegenerateProblemError, fit_path
from .penalties import NonconvexUpdateError, Penalty, PenaltySpec
from .selection import cross_validate
from .simgen import DenseNormal, FourSpike, SimSpec, SparseExp, generate, replicate_seeds

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_FLAGS = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FLAGS, f"{self.prog}: error: {message}\n")


def _write_text(target, text):
    if target in (None, "-"):
        sys.stdout.write(text)
        return
    with open(target, "w", newline="") as fh:
        fh.write(text)


def _fit_flags(p):
    p.add_argument("--data", required=True, help="CSV file with a header row")
    p.add_argument("--response", required=True, help="name of the response column")
    p.add_argument("--family", choices=[f.value for f in Family], default="gaussian")
    p.add_argument("--penalty", choices=[x.value for x in Penalty], default="mcp")
    p.add_argument("--gamma", type=float, default=None,
                   help="shape parameter (default 3 for MCP, 3.7 for SCAD)")
    p.add_argument("--nlambda", type=int, default=100)
    p.add_argument("--lambda-min-ratio", type=float, default=None)
    p.add_argument("--solver", choices=SOLVERS, default="cd")
    p.add_argument("--scale-mode", choices=[m.value for m in ScaleMode], default="adaptive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--max-iter", type=int, default=10000)
    p.add_argument("--out", default=None, help="output file (stdout when omitted)")


def _check_fit_flags(args):
    family = Family(args.family)
    penalty = Penalty(args.penalty)
    try:
        spec = PenaltySpec(penalty, 0.0, args.gamma)
    except ValueError as exc:
        raise CliError(EXIT_FLAGS, str(exc)) from None
    if args.nlambda < 1:
        raise CliError(EXIT_FLAGS, "--nlambda must be >= 1")
    if args.lambda_min_ratio is not None and not 0 < args.lambda_min_ratio < 1:
        raise CliError(EXIT_FLAGS, "--lambda-min-ratio must lie in (0, 1)")
    if args.tol <= 0 or args.max_iter < 1:
        raise CliError(EXIT_FLAGS, "--tol must be positive and --max-iter >= 1")
    if args.solver == "lla" and family is Family.BINOMIAL:
        raise CliError(EXIT_FLAGS, "--solver lla supports --family gaussian only")
    if family is Family.BINOMIAL and ScaleMode(args.scale_mode) is ScaleMode.FIXED \
            and penalty is not Penalty.LASSO:
        # v_j <= 1/4, so the fixed-scale update needs gamma > 4 (MCP) or > 5 (SCAD)
        bound = 4.0 if penalty is Penalty.MCP else 5.0
        if spec.gamma <= bound:
            raise CliError(EXIT_FLAGS,
                           f"fixed-scale {penalty.value} on binomial data needs gamma > {bound:g} "
                           f"(got {spec.gamma:g}); use --scale-mode adaptive or a larger gamma")
    return family, penalty, spec.gamma


def _read(args, family):
    try:
        return read_csv(args.data, args.response, family)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {args.data}: {exc.strerror}") from None
    except DataError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None


def _fit_meta(args):
    return {"data": os.path.basename(args.data), "response": args.response,
            "seed": args.seed, "tol": args.tol, "max_iter": args.max_iter,
            "nlambda": args.nlambda, "package_version": __version__}


def cmd_fit(args):
    family, penalty, gamma = _check_fit_flags(args)
    data = _read(args, family)
    design = standardize(data)
    path = fit_path(design, penalty, gamma, ScaleMode(args.scale_mode),
                    FitConfig(tol=args.tol, max_iter=args.max_iter),
                    nlambda=args.nlambda, lambda_min_ratio=args.lambda_min_ratio,
                    solver=args.solver)
    if not path.converged.any():
        raise CliError(EXIT_NUMERIC, "no grid point converged; try a larger --max-iter")
    report = diagnose_path(path, design)
    doc = path_to_dict(path, report, data.feature_names, meta=_fit_meta(args))
    _write_text(args.out, dumps(doc))
    if args.coef_table:
        with open(args.coef_table, "w", newline="") as fh:
            write_coef_table(fh, path, data.feature_names)
    unconverged = int((~path.converged).sum())
    if unconverged:
        print(f"warning: {unconverged} grid point(s) did not converge", file=sys.stderr)
    return EXIT_OK


def cmd_cv(args):
    family, penalty, gamma = _check_fit_flags(args)
    if args.folds < 2:
        raise CliError(EXIT_FLAGS, "--folds must be >= 2")
    data = _read(args, family)
    if args.loss is not None and (args.loss == "mse") != (family is Family.GAUSSIAN):
        raise CliError(EXIT_FLAGS, f"--loss {args.loss} is not available for {family.value} data")
    try:
        report = cross_validate(data, penalty, gamma, ScaleMode(args.scale_mode),
                                folds=args.folds, seed=args.seed, nlambda=args.nlambda,
                                lambda_min_ratio=args.lambda_min_ratio,
                                config=FitConfig(tol=args.tol, max_iter=args.max_iter),
                                loss=args.loss, solver=args.solver)
    except ValueError as exc:
        if isinstance(exc, (NonconvexUpdateError, DegenerateProblemError)):
            raise
        raise CliError(EXIT_FLAGS, str(exc)) from None
    doc = selection_to_dict(report, meta={
        "data": os.path.basename(args.data), "response": args.response,
        "family": family.value, "penalty": penalty.value, "gamma": gamma,
        "scale_mode": args.scale_mode, "solver": args.solver})
    _write_text(args.out, dumps(doc))
    return EXIT_OK


def render_report(report) -> str:
    star = "none" if report.lambda_star is None else repr(report.lambda_star)
    lines = [
        f"family: {report.family.value}  penalty: {report.penalty.value}  gamma: {report.gamma!r}",
        f"lambda_star: {star}",
    ]
    if report.lambda_star is not None:
        upper = "none" if report.lambda_star_upper is None else repr(report.lambda_star_upper)
        lines.append(f"last convex lambda above lambda_star: {upper}")
        if report.nonmonotone:
            lines.append("note: convex and nonconvex grid points interleave below lambda_star")
    lines.append(f"{'lambda':>14} {'|A|':>5} {'|U|':>5} {'c_star':>14}  convex")
    for row in report.rows():
        lines.append(f"{row['lambda']:14.6g} {row['active_size']:5d} {row['augmented_size']:5d} "
                     f"{row['c_star']:14.6g}  {'yes' if row['locally_convex'] else 'no'}")
    return "\n".join(lines) + "\n"


def cmd_diagnose(args):
    try:
        path, report = path_from_dict(load(args.artifact))
    except ArtifactError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    if args.data is not None:
        if args.response is None:
            raise CliError(EXIT_FLAGS, "--data requires --response")
        data = _read(args, path.family)
        design = standardize(data)
        if design.p != path.betas.shape[1]:
            raise CliError(EXIT_INPUT, "data file does not match the artifact's features")
        report = diagnose_path(path, design)
    if report is None:
        raise CliError(EXIT_INPUT, "artifact has no convexity report; pass --data to compute one")
    if args.json:
        _write_text(args.out, dumps(report_to_dict(report)))
    else:
        _write_text(args.out, render_report(report))
    if args.plot_data:
        with open(args.plot_data, "w", newline="") as fh:
            fh.write("lambda,c_star,locally_convex,active_size,"
                     + ",".join(f"beta_{j + 1}" for j in range(path.betas.shape[1])) + "\n")
            for k, row in enumerate(report.rows()):
                vals = [repr(row["lambda"]), repr(row["c_star"]), str(int(row["locally_convex"])),
                        str(row["active_size"]), *(repr(float(b)) for b in path.betas[k])]
                fh.write(",".join(vals) + "\n")
    return EXIT_OK


def _signal(args):
    if args.signal == "fourspike":
        return FourSpike(args.s, args.count if args.count is not None else 4)
    if args.signal == "sparseexp":
        return SparseExp(args.count if args.count is not None else 5, args.rate)
    return DenseNormal(args.count if args.count is not None else 100, args.sd)


def cmd_simulate(args):
    if args.reps < 1:
        raise CliError(EXIT_FLAGS, "--reps must be >= 1")
    if args.signal == "fourspike" and args.count not in (None, 4):
        raise CliError(EXIT_FLAGS, "the four-spike signal always has count 4")
    try:
        specs = [SimSpec(args.n, args.p, _signal(args), args.rho, Family(args.family), s)
                 for s in replicate_seeds(args.seed, args.reps)]
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    os.makedirs(args.out, exist_ok=True)
    for i, spec in enumerate(specs):
        data, beta = generate(spec)
        write_csv(os.path.join(args.out, f"data_{i:03d}.csv"), data, response="y")
        with open(os.path.join(args.out, f"truth_{i:03d}.csv"), "w", newline="") as fh:
            fh.write("feature,beta\n")
            for name, b in zip(data.feature_names, beta):
                fh.write(f"{name},{float(b)!r}\n")
    return EXIT_OK


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def cmd_bench(args):
    solvers = [s for s in args.solvers.split(",") if s]
    unknown = [s for s in solvers if s not in SOLVERS]
    if unknown or not solvers:
        raise CliError(EXIT_FLAGS, f"unknown solver(s) {unknown}; choose from {list(SOLVERS)}")
    if args.reps < 3:
        raise CliError(EXIT_FLAGS, "--reps must be >= 3")
    configs = [BenchConfig(n, p, rho, Family(args.family))
               for rho in args.rho for n in args.n for p in args.p]
    table = time_paths(configs, solvers, reps=args.reps, seed=args.seed,
                       penalty=args.penalty, nlambda=args.nlambda)
    _write_text(args.out, table.to_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ncvpath", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="fit a regularization path")
    _fit_flags(p)
    p.add_argument("--coef-table", default=None, help="also write a wide CSV coefficient table")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("cv", help="choose lambda by cross-validation, AIC and BIC")
    _fit_flags(p)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--loss", choices=["mse", "misclassification", "deviance"], default=None)
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("diagnose", help="render the convexity report of a path artifact")
    p.add_argument("artifact")
    p.add_argument("--data", default=None, help="recompute the report from this CSV")
    p.add_argument("--response", default=None)
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--plot-data", default=None, help="write per-lambda CSV for plotting")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("simulate", help="write seeded synthetic datasets and true coefficients")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--signal", choices=["fourspike", "sparseexp", "densenormal"],
                   default="fourspike")
    p.add_argument("--s", type=float, default=1.0, help="four-spike magnitude")
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--rate", type=float, default=3.0)
    p.add_argument("--sd", type=float, default=3.0)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--family", choices=[f.value for f in Family], default="gaussian")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="time CD against LLA over a grid of problem sizes")
    p.add_argument("--n", type=_int_list, default=[200])
    p.add_argument("--p", type=_int_list, default=[50, 100, 200, 400])
    p.add_argument("--rho", type=_float_list, default=[0.0])
    p.add_argument("--family", choices=[f.value for f in Family], default="gaussian")
    p.add_argument("--solvers", default="cd,lla")
    p.add_argument("--penalty", choices=[x.value for x in Penalty], default="mcp")
    p.add_argument("--nlambda", type=int, default=100)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"ncvpath {args.command}: {exc}", file=sys.stderr)
        return exc.code
    except NonconvexUpdateError as exc:
        print(f"ncvpath {args.command}: {exc}", file=sys.stderr)
        return EXIT_FLAGS
    except DegenerateProblemError as exc:
        print(f"ncvpath {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DataError as exc:
        print(f"ncvpath {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"ncvpath {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

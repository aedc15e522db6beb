"""Command-line front end.

Subcommands: derivative (quadrature table for a named function), solve
(one problem file, either method or both), dual (alias for solve
--method dual), convergence (order study), reproduce (pinned benchmark
checks). Output is CSV with 17-significant-digit values and LF line
endings, byte-deterministic for identical inputs.

Exit codes: 0 success or analysis outcome (including Unreliable), 1
reproduction-check failure, 2 usage/parse/IO error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bench import derivative_table, run_target
from .caputo import MethodKind
from .dual import compare_to_exact, convergence_study, dual_solve
from .problem_file import ProblemFileError, dump_problem, parse_problem
from .profiles import get_profile
from .solver import SolverDomainError, solve

_FMT = "%.17g"


def _fmt(v: float) -> str:
    return _FMT % (v,)


def _emit(lines: list[str], out_path: str | None):
    text = "\n".join(lines) + "\n"
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _parse_points(spec: str) -> list[float]:
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"point range must be start:stop:step, got {spec!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"bad point range {spec!r}")
        count = int(round((stop - start) / step))
        return [start + i * step for i in range(count + 1)]
    return [float(p) for p in spec.split(",") if p.strip()]


def _parse_h_list(spec: str) -> list[float]:
    return [float(p) for p in spec.split(",") if p.strip()]


def cmd_derivative(args) -> int:
    points = _parse_points(args.points)
    rows = derivative_table(args.f, args.alpha, args.h, points)
    lines = ["x,taylor_or_analytic,substitution,abs_err_subst,byparts,abs_err_byparts"]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _emit(lines, args.out)
    return 0


def _solution_columns(problem, report_or_sol, method: str):
    exact = problem.exact
    if method == "dual":
        report = report_or_sol
        a, b = report.sol_subst, report.sol_byparts
        header = "x,u_subst,u_byparts,abs_diff,residual_subst,residual_byparts"
        cols = [
            a.u.x,
            a.u.values,
            b.u.values,
            np.abs(a.u.values - b.u.values),
            a.residual.values,
            b.residual.values,
        ]
        if exact is not None:
            header += ",error_subst,error_byparts"
            cols.append(compare_to_exact(a, exact).errors)
            cols.append(compare_to_exact(b, exact).errors)
        return header, cols
    sol = report_or_sol
    tag = "subst" if method == "subst" else "byparts"
    header = f"x,u_{tag},residual_{tag}"
    cols = [sol.u.x, sol.u.values, sol.residual.values]
    if exact is not None:
        header += f",error_{tag}"
        cols.append(compare_to_exact(sol, exact).errors)
    return header, cols


def cmd_solve(args) -> int:
    problem = parse_problem(args.problem)
    if args.dump_normalized is not None:
        _emit(dump_problem(problem).splitlines(), args.dump_normalized)
        return 0
    cfg = problem.config()
    lines: list[str] = []
    if args.method == "dual":
        report = dual_solve(problem.equation, cfg, threshold=problem.threshold)
        header, cols = _solution_columns(problem, report, "dual")
        lines.append(header)
        for k in range(len(cols[0])):
            lines.append(",".join(_fmt(float(c[k])) for c in cols))
        lines.append(
            f"verdict={report.verdict} deviation={_fmt(report.deviation)} threshold={_fmt(report.threshold)}"
        )
        if args.plot_data:
            _write_plot_data(args.plot_data, problem, report)
    else:
        method = MethodKind.SUBSTITUTION if args.method == "subst" else MethodKind.BYPARTS
        try:
            sol = solve(problem.equation, cfg, method=method)
        except SolverDomainError as exc:
            lines.append(f"converged=false reason={exc}")
            _emit(lines, args.out)
            return 0
        header, cols = _solution_columns(problem, sol, args.method)
        lines.append(header)
        for k in range(len(cols[0])):
            lines.append(",".join(_fmt(float(c[k])) for c in cols))
        lines.append(f"converged={'true' if sol.converged else 'false'} iterations={sol.newton_iters}")
    _emit(lines, args.out)
    return 0


def _write_plot_data(prefix: str, problem, report):
    curves = {
        "subst": report.sol_subst.u,
        "byparts": report.sol_byparts.u,
    }
    for name, grid in curves.items():
        with open(f"{prefix}_{name}.dat", "w", encoding="utf-8", newline="\n") as fh:
            for x, v in zip(grid.x, grid.values):
                fh.write(f"{_fmt(x)} {_fmt(v)}\n")
    if problem.exact is not None:
        from .expr import evaluate

        x = report.sol_subst.u.x
        exact_vals = np.asarray(evaluate(problem.exact, x, np.zeros_like(x)))
        with open(f"{prefix}_exact.dat", "w", encoding="utf-8", newline="\n") as fh:
            for xv, v in zip(x, exact_vals):
                fh.write(f"{_fmt(xv)} {_fmt(v)}\n")


def cmd_convergence(args) -> int:
    h_list = _parse_h_list(args.h_list)
    method = MethodKind.SUBSTITUTION if args.method == "subst" else MethodKind.BYPARTS
    if args.problem is not None:
        problem = parse_problem(args.problem)
        if problem.exact is None:
            raise ProblemFileError("convergence study needs an 'exact' entry in the problem file")

        def err_of_h(h):
            from .solver import SolverConfig

            sol = solve(problem.equation, SolverConfig(h=h), method=method)
            if not sol.converged:
                return None
            return compare_to_exact(sol, problem.exact).sup

    else:
        if args.f is None or args.alpha is None or args.x is None:
            raise ValueError("derivative mode needs --f, --alpha and --x")
        get_profile(args.f)  # fail fast on unknown profiles

        def err_of_h(h):
            rows = derivative_table(args.f, args.alpha, h, [args.x])
            _, _oracle, _sub, err_s, _byp, err_b = rows[0]
            return err_s if method is MethodKind.SUBSTITUTION else err_b
    rows = convergence_study(err_of_h, h_list)
    lines = ["h,error,observed_order"]
    for row in rows:
        err = "" if row.error is None else _fmt(row.error)
        if row.saturated:
            order = "saturated"
        elif row.observed_order is None:
            order = ""
        else:
            order = _fmt(row.observed_order)
        lines.append(f"{_fmt(row.h)},{err},{order}")
    _emit(lines, args.out)
    return 0


def cmd_reproduce(args) -> int:
    checks = run_target(args.target)
    lines = [check.line() for check in checks]
    passed = sum(1 for c in checks if c.ok)
    lines.append(f"summary: {passed}/{len(checks)} checks passed")
    _emit(lines, args.out)
    return 0 if passed == len(checks) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracdual",
        description=(
            "Solve fractional differential equations with two independent "
            "discretizations and trust the result only when they agree."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derivative", help="tabulate a fractional derivative by both quadratures")
    p.add_argument("--f", required=True, help="function profile: tan|sin|cos|exp|const1|x^<beta>")
    p.add_argument("--alpha", type=float, required=True, help="derivative order > 0")
    p.add_argument("--h", type=float, required=True, help="grid step")
    p.add_argument("--points", required=True, help="evaluation points: start:stop:step or comma list")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=cmd_derivative)

    for name, forced_method in (("solve", None), ("dual", "dual")):
        p = sub.add_parser(
            name,
            help="solve a problem file" if name == "solve" else "solve with both methods and report the verdict",
        )
        p.add_argument("--problem", required=True, help="problem file path")
        if forced_method is None:
            p.add_argument("--method", choices=("subst", "byparts", "dual"), default="dual")
        p.add_argument("--out", default=None)
        p.add_argument("--plot-data", default=None, help="prefix for two-column curve files")
        p.add_argument("--dump-normalized", default=None, help="write the normalized problem file and exit")
        p.set_defaults(func=cmd_solve, **({"method": forced_method} if forced_method else {}))

    p = sub.add_parser("convergence", help="empirical-order study under step halving")
    p.add_argument("--problem", default=None, help="problem file with an 'exact' entry")
    p.add_argument("--f", default=None, help="derivative mode: function profile")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--x", type=float, default=None, help="derivative mode: evaluation point")
    p.add_argument("--h-list", required=True, help="comma list of halving steps, e.g. 4e-4,2e-4,1e-4")
    p.add_argument("--method", choices=("subst", "byparts"), default="subst")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_convergence)

    p = sub.add_parser("reproduce", help="run the pinned benchmark reproduction suite")
    p.add_argument("target", choices=("table1", "table2", "table3", "figures", "all"))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProblemFileError as exc:
        print(f"error: problem-file: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

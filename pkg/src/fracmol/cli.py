"""Command-line front end: ``fracmol solve | convergence | list``.

Data files (snapshots, error tables, matrix dumps) are byte-identical across
reruns of the same command. The run report additionally records wall time,
which of course varies.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from fracmol.odeint import TolSettings
from fracmol.operators import dump_matrices
from fracmol.problems import BUILTINS, ProblemConfig, builtin_config, load_config
from fracmol.solver import ProblemSpec, SpectralSolution, error_metrics, evaluate, solve

OUT_ENV = "FRACMOL_OUT"
DEFAULT_OUT = "fracmol-out"

# CLI flag -> factory keyword
VARIANT_FLAGS = {
    "alpha": "alpha",
    "beta": "beta",
    "gamma": "gamma",
    "kalpha": "k_alpha",
    "kbeta": "k_beta",
    "case": "case",
    "table_case": "table_case",
}


class CliError(Exception):
    """A failure reported to the user as a one-line diagnostic."""


@dataclass
class RunReport:
    problem: str
    n: int
    abs_tol: float
    rel_tol: float
    wall_time: float
    accepted_steps: int
    rejected_steps: int
    rhs_evaluations: int
    e2: Optional[float] = None
    e_inf: Optional[float] = None
    files: list[str] = field(default_factory=list)

    def numbers(self) -> list[float]:
        vals = [self.abs_tol, self.rel_tol, self.wall_time]
        vals += [v for v in (self.e2, self.e_inf) if v is not None]
        return vals

    def check(self) -> None:
        if not all(math.isfinite(v) for v in self.numbers()):
            raise CliError(f"{self.problem}: non-finite number in report")
        if not self.wall_time > 0:
            raise CliError(f"{self.problem}: wall time not positive")

    def as_dict(self) -> dict[str, Any]:
        return {
            "problem": self.problem,
            "n": self.n,
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
            "E2": self.e2,
            "Einf": self.e_inf,
            "wall_time": self.wall_time,
            "accepted_steps": self.accepted_steps,
            "rejected_steps": self.rejected_steps,
            "rhs_evaluations": self.rhs_evaluations,
            "files": list(self.files),
        }


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # one line, no usage dump
        raise CliError(message)


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return "" if v is None else str(v)


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    return path


def write_json(path: Path, payload: Any) -> Path:
    path.write_text(json.dumps(payload, indent=2, allow_nan=False) + "\n")
    return path


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--example", type=int, choices=sorted(BUILTINS), help="built-in problem id")
    src.add_argument("--config", type=Path, help="JSON problem config")
    p.add_argument("--alpha", type=float, help="advection order (examples 2-4)")
    p.add_argument("--beta", type=float, help="diffusion order (examples 2-4)")
    p.add_argument("--gamma", type=float, help="time exponent (example 2)")
    p.add_argument("--kalpha", type=float, help="advection strength (example 3)")
    p.add_argument("--kbeta", type=float, help="diffusion strength (example 3)")
    p.add_argument("--case", type=int, choices=(1, 2), help="case I or II (example 4)")
    p.add_argument("--table-case", type=int, choices=range(1, 10), metavar="{1..9}",
                   help="parameter row of the zero-source study (example 3)")
    p.add_argument("--abstol", type=float, default=TolSettings.abs_tol)
    p.add_argument("--reltol", type=float, default=TolSettings.rel_tol)
    p.add_argument("--out", type=Path, default=None,
                   help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracmol", description="Spectral method-of-lines solver for "
                     "two-sided space-fractional advection-diffusion equations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ps = sub.add_parser("solve", help="solve one problem and write snapshots")
    _add_problem_args(ps)
    ps.add_argument("--n", type=int, required=True, help="basis size")
    ps.add_argument("--snapshots", type=str, default=None,
                    help="comma-separated output times (default 0,T/4,T/2,3T/4,T)")
    ps.add_argument("--xsamples", type=int, default=201)
    ps.add_argument("--dump-matrices", action="store_true")

    pc = sub.add_parser("convergence", help="error table over a range of n")
    _add_problem_args(pc)
    pc.add_argument("--nmin", type=int, required=True)
    pc.add_argument("--nmax", type=int, required=True)
    pc.add_argument("--nstep", type=int, default=1)

    sub.add_parser("list", help="list the built-in problems")
    return parser


def _problem(args: argparse.Namespace) -> ProblemConfig:
    given = {flag: getattr(args, flag) for flag in VARIANT_FLAGS if getattr(args, flag) is not None}
    if args.config is not None:
        if given:
            raise CliError(f"variant flags {_flags(given)} conflict with --config")
        return load_config(args.config)
    allowed = {f.lstrip("-").replace("-", "_") for f in BUILTINS[args.example].flags}
    bad = sorted(set(given) - allowed)
    if bad:
        raise CliError(f"example {args.example} does not accept {_flags(bad)}")
    if "table_case" in given and set(given) & {"alpha", "beta", "kalpha", "kbeta"}:
        raise CliError("--table-case conflicts with --alpha/--beta/--kalpha/--kbeta")
    return builtin_config(args.example, **{VARIANT_FLAGS[k]: v for k, v in given.items()})


def _flags(names) -> str:
    return ", ".join("--" + n.replace("_", "-") for n in names)


def _tol(args: argparse.Namespace) -> TolSettings:
    return TolSettings(abs_tol=args.abstol, rel_tol=args.reltol)


def _out_dir(args: argparse.Namespace) -> Path:
    out = args.out or Path(os.environ.get(OUT_ENV, DEFAULT_OUT))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _snapshot_times(text: Optional[str], horizon: float) -> list[float]:
    if text is None:
        return [horizon * j / 4 for j in range(5)]
    try:
        times = [float(s) for s in text.split(",")]
    except ValueError:
        raise CliError(f"--snapshots: cannot parse {text!r}") from None
    for t in times:
        if not 0 <= t <= horizon:
            raise CliError(f"--snapshots: time {t} outside [0, {horizon}]")
    return times


def _report(config: ProblemConfig, sol: SpectralSolution, tol: TolSettings) -> RunReport:
    rep = RunReport(
        problem=config.name, n=sol.n, abs_tol=tol.abs_tol, rel_tol=tol.rel_tol,
        wall_time=sol.wall_time, accepted_steps=sol.coefficients.accepted,
        rejected_steps=sol.coefficients.rejected,
        rhs_evaluations=sol.coefficients.rhs_evaluations,
    )
    if sol.spec.exact is not None:
        rep.e2, rep.e_inf = error_metrics(sol)
    return rep


def cmd_solve(args: argparse.Namespace) -> RunReport:
    if args.n < 1:
        raise CliError("--n must be >= 1")
    if args.xsamples < 2:
        raise CliError("--xsamples must be >= 2")
    config = _problem(args)
    spec: ProblemSpec = config.to_spec()
    times = _snapshot_times(args.snapshots, spec.horizon)
    tol = _tol(args)
    out = _out_dir(args)

    sol = solve(spec, args.n, tol)
    rep = _report(config, sol, tol)

    x = np.linspace(0.0, spec.ell, args.xsamples)
    values = evaluate(sol, x, np.array(times))
    if not np.all(np.isfinite(values)):
        raise CliError(f"{config.name}: non-finite solution values")
    files: list[Path] = []
    for i, (t, u) in enumerate(zip(times, values)):
        if args.format == "csv":
            files.append(write_csv(out / f"snapshot_{i:03d}.csv", ("t", "x", "u"),
                                   [(float(t), float(xi), float(ui)) for xi, ui in zip(x, u)]))
        else:
            files.append(write_json(out / f"snapshot_{i:03d}.json",
                                    {"t": float(t), "x": x.tolist(), "u": u.tolist()}))
    if rep.e2 is not None:
        if args.format == "csv":
            files.append(write_csv(out / "errors.csv", ("n", "E2", "Einf"),
                                   [(sol.n, rep.e2, rep.e_inf)]))
        else:
            files.append(write_json(out / "errors.json",
                                    {"n": sol.n, "E2": rep.e2, "Einf": rep.e_inf}))
    if args.dump_matrices:
        files.extend(dump_matrices(sol.operators, out / "matrices"))
    rep.files = [str(p) for p in files]
    rep.check()
    _write_report(out, rep.as_dict(), args.format)
    return rep


def _write_report(out: Path, payload: dict[str, Any], fmt: str) -> None:
    if fmt == "json":
        write_json(out / "report.json", payload)
    else:
        flat = {k: (";".join(v) if isinstance(v, list) else v) for k, v in payload.items()}
        write_csv(out / "report.csv", list(flat), [list(flat.values())])


def cmd_convergence(args: argparse.Namespace) -> list[RunReport]:
    if not 1 <= args.nmin <= args.nmax or args.nstep < 1:
        raise CliError("need 1 <= --nmin <= --nmax and --nstep >= 1")
    config = _problem(args)
    spec = config.to_spec()
    if spec.exact is None:
        raise CliError(f"{config.name} has no exact solution; convergence needs one")
    tol = _tol(args)
    out = _out_dir(args)
    reports = []
    for n in range(args.nmin, args.nmax + 1, args.nstep):
        rep = _report(config, solve(spec, n, tol), tol)
        rep.check()
        reports.append(rep)
        print(f"n={n:4d}  E2={rep.e2:.3e}  Einf={rep.e_inf:.3e}  time={rep.wall_time:.3f}s")
    rows = [(r.n, r.e2, r.e_inf, r.wall_time) for r in reports]
    if args.format == "csv":
        write_csv(out / "convergence.csv", ("n", "E2", "Einf", "wall_time"), rows)
        # wall times vary between runs; the error table alone is reproducible
        write_csv(out / "errors.csv", ("n", "E2", "Einf"), [r[:3] for r in rows])
    else:
        write_json(out / "convergence.json",
                   {"problem": config.name, "rows": [dict(zip(("n", "E2", "Einf", "wall_time"), r))
                                                     for r in rows]})
        write_json(out / "errors.json",
                   {"problem": config.name, "rows": [dict(zip(("n", "E2", "Einf"), r[:3]))
                                                     for r in rows]})
    return reports


def list_text() -> str:
    lines = []
    for info in BUILTINS.values():
        flags = " ".join(info.flags) if info.flags else "(no variant flags)"
        lines.append(f"{info.example_id}  {info.summary}")
        lines.append(f"   flags: {flags}")
        lines.append(f"   reference: {info.reference}")
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "list":
            print(list_text())
        elif args.command == "solve":
            start = time.perf_counter()
            rep = cmd_solve(args)
            metrics = "" if rep.e2 is None else f" E2={rep.e2:.3e} Einf={rep.e_inf:.3e}"
            print(f"{rep.problem} n={rep.n}{metrics} solve={rep.wall_time:.3f}s "
                  f"total={time.perf_counter() - start:.3f}s files={len(rep.files)}")
        else:
            cmd_convergence(args)
        return 0
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except KeyboardInterrupt:
        print("fracmol: interrupted", file=sys.stderr)
        return 130
    except Exception as exc:  # noqa: BLE001  every failure becomes one line
        msg = " ".join(str(exc).split()) or type(exc).__name__
        print(f"fracmol: error: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end: ``simulate``, ``compare``, ``audit`` and ``coeffs``.

Configuration is a plain ``key = value`` file::

    # published comparison setting
    r = 0.1
    K = 0.3
    c1 = 0.1
    c2 = 0.2
    delta = 0.1
    e = 0.1
    d1 = 0.2
    d2 = 0.2
    S0 = 0.01
    I0 = 0.01
    P0 = 0.01
    order = 2        # optional, with t_end, step, grid

Exit status: 0 on success, 1 on bad input, 3 when the printed constants are
undefined for the parameters.  ``audit`` additionally returns 2 when any
printed constant disagrees with the expansion.
"""
from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import TextIO

import numpy as np

from .engine import solve
from .model import InitialState, InvalidModel, ModelParams, validate
from .oracle import DEFAULT_STEP, integrate, sample
from .paper_series import (
    ResonantParameters,
    audit,
    evaluate_paper_series,
    exit_status,
    initial_defect,
    paper_coefficients,
)

__all__ = [
    "RunConfig",
    "ConfigError",
    "ComparisonSummary",
    "parse_config",
    "run_compare",
    "run_audit",
    "run_simulate",
    "format_number",
    "main",
]

MODEL_KEYS = ("r", "K", "c1", "c2", "delta", "e", "d1", "d2")
STATE_KEYS = ("S0", "I0", "P0")
RUN_KEYS = ("order", "t_end", "step", "grid")
COMPARE_COLUMNS = ("t", "S_num", "I_num", "P_num", "S_hpm", "I_hpm", "P_hpm", "S_paper", "I_paper", "P_paper")
VARIABLES = ("S", "I", "P")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    ics: InitialState
    order: int = 2
    t_end: float = 10.0
    step: float = DEFAULT_STEP
    output_grid: int = 201
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.order < 0:
            raise ConfigError("order must be >= 0")
        if not (self.t_end > 0 and math.isfinite(self.t_end)):
            raise ConfigError("t_end must be positive")
        if not (0 < self.step <= self.t_end):
            raise ConfigError("step must satisfy 0 < step <= t_end")
        if self.output_grid < 2:
            raise ConfigError("grid must be at least 2")

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_end, self.output_grid)


def parse_config(text: str) -> RunConfig:
    """Parse a ``key = value`` document into a validated :class:`RunConfig`."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = (part.strip() for part in line.partition("="))
        if key not in MODEL_KEYS + STATE_KEYS + RUN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: missing value for {key!r}")
        values[key] = (value, lineno)  # type: ignore[assignment]

    missing = [k for k in MODEL_KEYS + STATE_KEYS if k not in values]
    if missing:
        raise ConfigError("missing required keys: " + ", ".join(missing))

    def number(key, kind=float):
        value, lineno = values[key]
        try:
            return kind(value)
        except ValueError:
            raise ConfigError(f"line {lineno}: cannot parse {value!r} for {key!r}") from None

    params = ModelParams(**{k: number(k) for k in MODEL_KEYS})
    ics = InitialState(*(number(k) for k in STATE_KEYS))
    report = validate(params, ics)
    if not report.ok:
        raise InvalidModel(report)
    run = {}
    if "order" in values:
        run["order"] = number("order", int)
    if "t_end" in values:
        run["t_end"] = number("t_end")
    if "step" in values:
        run["step"] = number("step")
    if "grid" in values:
        run["output_grid"] = number("grid", int)
    return RunConfig(params, ics, warnings=tuple(report.warnings), **run)


def format_number(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(out: TextIO, header, rows) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join("" if v is None else format_number(v) for v in row) + "\n")


@dataclass
class ComparisonSummary:
    """Worst-case differences over the output grid.

    ``stats[pair][variable] = (max_abs, max_rel, t_of_max_abs)`` for the
    pairs ``engine-oracle``, ``paper-oracle`` and ``engine-paper``; the second
    member of each pair is the reference for relative differences.
    """

    t_end: float
    order: int
    stats: dict[str, dict[str, tuple[float, float, float]]] = field(default_factory=dict)
    paper_defect: tuple[float, float, float] | None = None
    engine_defect: tuple[float, float, float] = (0.0, 0.0, 0.0)
    warnings: list[str] = field(default_factory=list)

    def max_abs(self, pair: str) -> float:
        return max(v[0] for v in self.stats[pair].values())

    def format(self) -> str:
        lines = [
            f"# comparison window [0, {self.t_end:g}], expansion order N={self.order}",
            "# pair           var  max_abs_diff              max_rel_diff              t_at_max",
        ]
        for pair, per_var in self.stats.items():
            for var, (a, r, t) in per_var.items():
                lines.append(f"{pair:<16} {var:<4} {a:<25.17g} {r:<25.17g} {t:g}")
        ed = ", ".join(f"{v}={d:.3g}" for v, d in zip(VARIABLES, self.engine_defect))
        lines.append(f"# t=0 defect of the expansion: {ed}")
        if self.paper_defect is not None:
            pd = ", ".join(f"|sum {c}|={abs(d):.17g}" for c, d in zip("ABC", self.paper_defect))
            lines.append(f"# t=0 defect of the printed series: {pd}")
        lines.extend("# warning: " + w for w in self.warnings)
        return "\n".join(lines) + "\n"


def _pair_stats(a: np.ndarray, b: np.ndarray, times: np.ndarray):
    out = {}
    for i, var in enumerate(VARIABLES):
        diff = np.abs(a[i] - b[i])
        with np.errstate(divide="ignore", invalid="ignore"):
            rel = np.where(b[i] != 0, diff / np.abs(b[i]), np.where(diff == 0, 0.0, np.inf))
        j = int(np.argmax(diff))
        out[var] = (float(diff[j]), float(np.max(rel)), float(times[j]))
    return out


def _paper_values(config: RunConfig, times):
    coeffs = paper_coefficients(config.params, config.ics)
    return coeffs, evaluate_paper_series(coeffs, config.params, config.ics, times)


def run_compare(config: RunConfig, out: TextIO) -> ComparisonSummary:
    """Write the ten-column comparison CSV to ``out`` and return the summary."""
    times = config.times()
    traj = integrate(config.params, config.ics, config.t_end, config.step)
    num = sample(traj, times).T
    sol = solve(config.params, config.ics, config.order)
    hpm = sol(times)
    summary = ComparisonSummary(config.t_end, config.order)
    summary.warnings.extend(config.warnings)
    summary.engine_defect = tuple(
        float(abs(v - y0)) for v, y0 in zip(sol(0.0), (config.ics.S0, config.ics.I0, config.ics.P0))
    )
    try:
        coeffs, paper = _paper_values(config, times)
        summary.paper_defect = initial_defect(coeffs)
    except ResonantParameters as exc:
        paper = None
        summary.warnings.append(f"printed series omitted: {exc}")

    summary.stats["engine-oracle"] = _pair_stats(hpm, num, times)
    if paper is not None:
        summary.stats["paper-oracle"] = _pair_stats(paper, num, times)
        summary.stats["engine-paper"] = _pair_stats(hpm, paper, times)

    def rows():
        for j, t in enumerate(times):
            p = [None] * 3 if paper is None else list(paper[:, j])
            yield [t, *num[:, j], *hpm[:, j], *p]

    _write_csv(out, COMPARE_COLUMNS, rows())
    return summary


def run_audit(config: RunConfig, out: TextIO, records: TextIO | None = None) -> int:
    """Print the audit table; optionally stream JSON records.  Returns the exit status."""
    report = audit(config.params, config.ics)
    out.write(report.to_table())
    if records is not None:
        records.write(report.to_jsonl())
    return exit_status(report)


def run_simulate(config: RunConfig, method: str, out: TextIO) -> None:
    """Write ``t,S,I,P`` for one method.  Errors are raised before any output."""
    times = config.times()
    if method == "engine":
        values = solve(config.params, config.ics, config.order)(times)
    elif method == "paper":
        _, values = _paper_values(config, times)
    elif method == "oracle":
        traj = integrate(config.params, config.ics, config.t_end, config.step)
        values = sample(traj, times).T
    else:
        raise ValueError(f"unknown method {method!r}")
    _write_csv(out, ("t",) + VARIABLES, ([t, *values[:, j]] for j, t in enumerate(times)))


def gnuplot_script(csv_path: str, columns) -> str:
    """A gnuplot script overlaying every non-time column of ``csv_path``."""
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set xlabel 't'",
        "set ylabel 'population'",
        "set terminal pngcairo size 1000,600",
        f"set output '{Path(csv_path).with_suffix('.png').name}'",
    ]
    plots = [f"'{Path(csv_path).name}' using 1:{i + 1} with lines" for i in range(1, len(columns))]
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


class _Parser(argparse.ArgumentParser):
    # exit status 2 is reserved for audit mismatches
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hpm-ecoepi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_ in (
        ("simulate", "write t,S,I,P for one method"),
        ("compare", "oracle vs expansion vs printed series"),
        ("audit", "check the printed constants"),
        ("coeffs", "print the printed constants"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", required=True, help="key = value configuration file")
        p.add_argument("--order", type=int, help="truncation order N")
        p.add_argument("--t-end", type=float, dest="t_end")
        p.add_argument("--step", type=float, help="RK4 step")
        p.add_argument("--grid", type=int, help="number of output rows")
        p.add_argument("--out", help="output file (default: standard output)")
        if name == "simulate":
            p.add_argument("--method", choices=("engine", "paper", "oracle"), default="engine")
    return parser


def _load(args) -> RunConfig:
    config = parse_config(Path(args.config).read_text(encoding="utf-8"))
    overrides = {
        "order": args.order,
        "t_end": args.t_end,
        "step": args.step,
        "output_grid": args.grid,
    }
    return replace(config, **{k: v for k, v in overrides.items() if v is not None})


def _dispatch(args, config: RunConfig, buf: io.StringIO, side: TextIO) -> int:
    """Run one subcommand; primary output goes to ``buf``, summaries to ``side``."""
    to_file = args.out is not None
    if args.command == "audit":
        if to_file:
            # table on stdout, machine-readable records in the file
            return run_audit(config, side, records=buf)
        return run_audit(config, buf)
    if args.command == "coeffs":
        buf.write(paper_coefficients(config.params, config.ics).table() + "\n")
        return 0
    if args.command == "compare":
        summary = run_compare(config, buf)
        side.write(summary.format())
        return 0
    run_simulate(config, args.method, buf)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _load(args)
    except (OSError, ConfigError, InvalidModel) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.command != "compare":
        for w in config.warnings:
            print(f"warning: {w}", file=sys.stderr)

    to_file = args.out is not None
    buf = io.StringIO()
    side = io.StringIO()
    try:
        status = _dispatch(args, config, buf, side)
    except ResonantParameters as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if to_file:
        path = Path(args.out)
        path.write_text(buf.getvalue(), encoding="utf-8", newline="\n")
        if args.command == "compare":
            path.with_suffix(".gp").write_text(gnuplot_script(args.out, COMPARE_COLUMNS))
        elif args.command == "simulate":
            path.with_suffix(".gp").write_text(gnuplot_script(args.out, ("t",) + VARIABLES))
        sys.stdout.write(side.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
        sys.stderr.write(side.getvalue())
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Option parsing and reporting shared by the benchmark commands"""
from typing import List, Optional

import click
from omegaconf import OmegaConf
from omegaconf.errors import OmegaConfBaseException
from rich.table import Table

import bbbench
from bbbench import logger, task_stats
from bbbench.benchlogging import is_boring
from bbbench.benchmark import SummaryRow
from bbbench.config import BenchConfig, check_bench_config
from bbbench.emit import emit_summary
from bbbench.exceptions import BenchConfigError

# maps BenchConfig fields to the command-line flags that set them
FLAG_NAMES = dict(
    problem="--problem",
    methods="--methods",
    epsilons="--eps",
    max_iter="--max-iter",
    alpha0="--alpha0",
    safeguard="--safeguard",
    stop="--stop",
    out="--out",
    format="--format",
    trace_dir="--trace-dir",
    diag="--diag",
    shift="--shift",
    x0="--x0",
    jobs="--jobs",
)


def split_list(value: Optional[str]) -> Optional[List[str]]:
    if value is None:
        return None
    return [item.strip() for item in value.split(",") if item.strip()]


def float_list(ctx, param, value):
    items = split_list(value)
    if items is None:
        return None
    if not items:
        raise click.BadParameter("expected a comma-separated list of numbers")
    try:
        return [float(item) for item in items]
    except ValueError:
        raise click.BadParameter(f"expected a comma-separated list of numbers, got '{value}'")


def positive_float_list(ctx, param, value):
    values = float_list(ctx, param, value)
    if values is not None and not all(x > 0 for x in values):
        raise click.BadParameter(f"all values must be positive, got '{value}'")
    return values


def methods_list(ctx, param, value):
    items = split_list(value)
    if items is not None and not items:
        raise click.BadParameter("at least one method is required")
    return items and [item.lower() for item in items]


def build_bench_config(base: Optional[BenchConfig] = None, **params) -> BenchConfig:
    """Overlays the given (non-None) settings on base, or on the loaded config's bench section,
    and validates the result.

    Raises:
        click.BadParameter: naming the flag of the first invalid setting
    """
    if base is not None:
        conf = OmegaConf.structured(base)
    elif bbbench.CONFIG is not None:
        conf = bbbench.CONFIG.bench
    else:
        conf = OmegaConf.structured(BenchConfig)
    overrides = {key: value for key, value in params.items() if value is not None}
    try:
        config = OmegaConf.to_object(OmegaConf.merge(conf, overrides))
    except OmegaConfBaseException as exc:
        key = getattr(exc, "key", None)
        raise click.BadParameter(str(exc), param_hint=FLAG_NAMES.get(key, key))
    try:
        return check_bench_config(config)
    except BenchConfigError as exc:
        raise click.BadParameter(exc.reason, param_hint=FLAG_NAMES.get(exc.field, exc.field))


def _status_cell(row: SummaryRow) -> str:
    if row.status == "converged":
        return str(row.iterations)
    if row.status == "max-iter":
        return "--"
    return row.status


def report_rows(rows: List[SummaryRow], config: BenchConfig, title: Optional[str] = None):
    """Logs the summary, prints it as a table (unless boring), and writes config.out if set"""
    log = logger()
    for row in rows:
        distance = "n/a" if row.final_distance is None else f"{row.final_distance:.3e}"
        log.info(f"{row.method} eps={row.epsilon:g} alpha0={row.alpha0:g}: {row.status} "
                 f"after {row.iterations} iteration(s), distance {distance}")
    if not is_boring():
        table = Table(title=title)
        for column in ("method", "epsilon", "alpha0", "iterations", "status", "final distance"):
            table.add_column(column, justify="left" if column in ("method", "status") else "right")
        for row in rows:
            table.add_row(row.method, f"{row.epsilon:g}", f"{row.alpha0:g}", _status_cell(row), row.status,
                          "" if row.final_distance is None else f"{row.final_distance:.3e}")
        task_stats.get_console().print(table)
    if config.out:
        emit_summary(rows, config.format, config.out)
        log.info(f"wrote {config.format} summary to {config.out}")

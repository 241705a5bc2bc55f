import sys
from typing import Sequence

import click
from rich.markup import escape

from bbtls.exceptions import BBTLSBaseException
from bbtls.problems import PROBLEMS
from bbtls.descent import StopKind
from bbbench import logger, log_exception
from bbbench.benchmark import run_benchmark
from bbbench.config import BenchConfig
from bbbench.main import cli
from bbbench.commands.common import build_bench_config, float_list, methods_list, positive_float_list, report_rows


def parse_config(argv: Sequence[str]) -> BenchConfig:
    """Parses "run" command-line arguments into a BenchConfig. Unspecified flags take their defaults.

    Raises:
        click.UsageError: for unknown flags or invalid values, naming the flag
    """
    ctx = run.make_context("run", list(argv))
    return build_bench_config(**ctx.params)


@cli.command("run",
    help="""
    Runs the (method, epsilon, alpha0) benchmark grid on one problem.
    List options take comma-separated values, e.g. --eps 1e-1,1e-8.
    Options not given are taken from the bench section of the configuration.
    """,
    no_args_is_help=False)
@click.option("--problem", type=click.Choice(list(PROBLEMS)), default=None,
              help="Problem to minimize (default rosenbrock).")
@click.option("--methods", callback=methods_list, metavar="LIST", default=None,
              help="Steplength methods: bb1, bb2, bb3, fixed.")
@click.option("--eps", "epsilons", callback=positive_float_list, metavar="LIST", default=None,
              help="Stopping tolerances.")
@click.option("--max-iter", type=int, default=None,
              help="Iteration cap per run (default 5000).")
@click.option("--alpha0", callback=positive_float_list, metavar="LIST", default=None,
              help="Initial steplength(s). Several values sweep the grid.")
@click.option("--safeguard", metavar="none|fallback|clamp:MIN,MAX", default=None,
              help="Handling of unusable steplengths (default none).")
@click.option("--stop", type=click.Choice([kind.value for kind in StopKind]), default=None,
              help="Stopping rule: distance to the minimizer, or gradient norm.")
@click.option("--out", metavar="PATH", default=None,
              help="Write the summary to this file.")
@click.option("--format", type=click.Choice(["csv", "json", "md"]), default=None,
              help="Summary file format (default csv).")
@click.option("--trace-dir", metavar="DIR", default=None,
              help="Write per-run trace files to this directory.")
@click.option("--diag", callback=positive_float_list, metavar="LIST", default=None,
              help="Diagonal of the quadratic problem.")
@click.option("--shift", callback=float_list, metavar="LIST", default=None,
              help="Linear term of the quadratic problem.")
@click.option("--x0", callback=float_list, metavar="LIST", default=None,
              help="Start point, overriding the problem's default.")
@click.option("-j", "--jobs", type=int, default=None,
              help="Number of parallel runs, -1 for one per CPU.")
def run(**params):
    log = logger()
    config = build_bench_config(**params)
    log.debug(escape(f"benchmark settings: {config}"))
    try:
        rows = run_benchmark(config)
        report_rows(rows, config, title=config.problem)
    except BBTLSBaseException as exc:
        log_exception(exc)
        sys.exit(1)

import sys

import click
from rich.table import Table

from bbtls.exceptions import BBTLSBaseException
from bbbench import logger, log_exception, task_stats
from bbbench.benchlogging import declare_chapter, is_boring
from bbbench.benchmark import iterations_by_method, run_benchmark
from bbbench.config import BenchConfig
from bbbench.main import cli
from bbbench.presets import REFERENCE_ITERATIONS, TABLE1_EPSILONS, table1_config
from bbbench.commands.common import build_bench_config, positive_float_list, report_rows


def _count(value):
    return "--" if value is None else str(value)


def report_comparison(rows, config: BenchConfig):
    """Prints produced iteration counts next to the published ones, for each alpha0 of the sweep"""
    log = logger()
    methods = list(REFERENCE_ITERATIONS)
    log.info("iteration counts include the bootstrap step with alpha0; published counts follow "
             "an unstated initialization")
    for alpha0 in config.alpha0:
        produced = iterations_by_method(rows, alpha0)
        for method in methods:
            ours = " ".join(_count(produced.get(method, {}).get(eps)) for eps in TABLE1_EPSILONS)
            ref = " ".join(_count(REFERENCE_ITERATIONS[method][eps]) for eps in TABLE1_EPSILONS)
            log.info(f"alpha0={alpha0:g} {method}: produced {ours}, published {ref}")
        if not is_boring():
            table = Table(title=f"alpha0 = {alpha0:g}")
            table.add_column("epsilon", justify="right")
            for method in methods:
                table.add_column(method, justify="right")
                table.add_column(f"{method} (published)", justify="right", style="dim")
            for eps in TABLE1_EPSILONS:
                cells = [f"{eps:g}"]
                for method in methods:
                    cells += [_count(produced.get(method, {}).get(eps)), _count(REFERENCE_ITERATIONS[method][eps])]
                table.add_row(*cells)
            task_stats.get_console().print(table)


@cli.command("table1",
    help="""
    Reproduces the Rosenbrock comparison of the three BB steplengths: start (-1.2, 1),
    tolerances 1e-1, 1e-2, 1e-4, 1e-8 on the distance to (1, 1), at most 5000 iterations,
    no safeguard. Sweeps alpha0 over 1e-4, 1e-3, 1e-2, 1e-1 unless --alpha0 is given.
    """)
@click.option("--alpha0", callback=positive_float_list, metavar="LIST", default=None,
              help="Initial steplength(s) to sweep.")
@click.option("--out", metavar="PATH", default=None,
              help="Write the summary to this file.")
@click.option("--format", type=click.Choice(["csv", "json", "md"]), default=None,
              help="Summary file format (default csv).")
@click.option("--trace-dir", metavar="DIR", default=None,
              help="Write per-run trace files to this directory.")
@click.option("-j", "--jobs", type=int, default=None,
              help="Number of parallel runs, -1 for one per CPU.")
def table1(alpha0=None, out=None, format=None, trace_dir=None, jobs=None):
    log = logger()
    # output settings may come from the config; everything else is pinned
    base = build_bench_config(out=out, format=format, trace_dir=trace_dir, jobs=jobs)
    config = table1_config(base, alpha0=alpha0)
    declare_chapter("rosenbrock comparison")
    try:
        rows = run_benchmark(config)
        report_rows(rows, config, title="rosenbrock")
        report_comparison(rows, config)
    except BBTLSBaseException as exc:
        log_exception(exc)
        sys.exit(1)

import sys

import click

from bbtls.oracles import sweep_verify_bb3
from bbbench import logger
from bbbench.main import cli


@cli.command("verify",
    help="""
    Checks the closed-form bb3 steplength against a brute-force minimization of the TLS
    objective over seeded random secant pairs. Exits with an error if any pair disagrees.
    """)
@click.option("--pairs", type=click.IntRange(min=1), default=10000, show_default=True,
              help="Number of random pairs.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Random seed.")
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=1e-6, show_default=True,
              help="Relative tolerance.")
@click.option("--max-dim", type=click.IntRange(min=1), default=10, show_default=True,
              help="Pair dimensions are drawn from 1 to this value.")
def verify(pairs: int = 10000, seed: int = 0, tol: float = 1e-6, max_dim: int = 10):
    log = logger()
    log.info(f"verifying bb3 on {pairs} random pair(s), seed {seed}")
    report = sweep_verify_bb3(pairs, seed=seed, tol=tol, max_dim=max_dim)
    log.info(f"seed {report.seed}: max relative error {report.max_rel_error:.3e} (tolerance {report.tol:g})")
    if not report.all_agree:
        for failure in report.failures[:10]:
            log.error(f"closed form {failure.closed_form!r} vs. oracle {failure.oracle!r}")
        log.error(f"{len(report.failures)} of {report.count} pair(s) disagree")
        sys.exit(1)
    log.info(f"all {report.count} pair(s) agree")

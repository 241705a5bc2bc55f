import math
import os.path
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from typing import List, Optional, Tuple

import pydantic.dataclasses

import bbbench
from bbtls import descent
from bbtls.descent import RunResult, RunStatus, Safeguard, SolverConfig, StoppingRule, StopKind
from bbtls.problems import Problem, get_problem
from bbbench.config import BenchConfig, check_bench_config
from bbbench.exceptions import BenchRuntimeError
from bbbench import task_stats


@pydantic.dataclasses.dataclass
class SummaryRow:
    """One cell of the benchmark grid"""
    method: str
    epsilon: float
    status: str
    iterations: int
    final_distance: Optional[float]
    alpha0: float

    @property
    def sort_key(self):
        # epsilon from loose to tight
        return (self.method, -self.epsilon, self.alpha0)


@dataclass
class GridCell(object):
    method: str
    epsilon: float
    alpha0: float

    def trace_name(self, problem: Problem):
        return f"{problem.name}-{self.method}-eps{self.epsilon!r}-alpha0{self.alpha0!r}.csv"


def resolve_problem(config: BenchConfig) -> Problem:
    return get_problem(config.problem, diag=config.diag, shift=config.shift, start=config.x0)


def grid_cells(config: BenchConfig) -> List[GridCell]:
    return [GridCell(method, epsilon, alpha0)
            for method in config.methods for epsilon in config.epsilons for alpha0 in config.alpha0]


def _run_cell(problem: Problem, solver_config: SolverConfig) -> RunResult:
    # module-level so that it can be shipped to a process pool
    return descent.run(problem, solver_config)


def run_benchmark(config: BenchConfig, problem: Optional[Problem] = None) -> List[SummaryRow]:
    """Runs every (method, epsilon, alpha0) cell of the grid from the problem's start point.

    Target-distance stopping falls back to gradient-norm stopping when the problem has no
    known minimizer. Run failures are reported through the row status, never raised.
    If config.trace_dir is set, a trace file is written for each cell.

    Returns:
        List[SummaryRow]: rows sorted by method, then epsilon (descending), then alpha0
    """
    from bbbench.emit import emit_trace

    log = bbbench.logger()
    check_bench_config(config)
    problem = problem or resolve_problem(config)

    stop_kind = StopKind(config.stop)
    if stop_kind is StopKind.target and problem.minimizer is None:
        log.warning(f"problem '{problem.name}' has no known minimizer, using gradient-norm stopping")
        stop_kind = StopKind.gradnorm
    safeguard = Safeguard.parse(config.safeguard)

    cells = grid_cells(config)
    solver_configs = [SolverConfig(method=cell.method, alpha0=cell.alpha0, max_iter=config.max_iter,
                                   stopping=StoppingRule(stop_kind, cell.epsilon), safeguard=safeguard)
                      for cell in cells]
    num_workers = task_stats.resolve_num_workers(config.jobs, len(cells))
    log.info(f"running {len(cells)} cell(s) on '{problem.name}' with {num_workers} worker(s)")

    results: List[Tuple[GridCell, RunResult]] = []
    with task_stats.grid_progress(len(cells), problem.name) as advance:
        if num_workers > 1:
            with ProcessPoolExecutor(num_workers) as pool:
                futures = {pool.submit(_run_cell, problem, solver_config): cell
                           for cell, solver_config in zip(cells, solver_configs)}
                for future in as_completed(futures):
                    cell = futures[future]
                    try:
                        results.append((cell, future.result()))
                    except Exception as exc:
                        raise BenchRuntimeError(f"grid cell {cell} failed", exc)
                    advance(cell.method)
        else:
            for cell, solver_config in zip(cells, solver_configs):
                results.append((cell, _run_cell(problem, solver_config)))
                advance(cell.method)

    rows = []
    for cell, result in results:
        distance = problem.distance_to_minimizer(result.final_x)
        # not reported for diverged runs
        if result.status is RunStatus.diverged or distance is not None and not math.isfinite(distance):
            distance = None
        rows.append(SummaryRow(method=cell.method, epsilon=cell.epsilon, status=result.status.value,
                               iterations=result.iterations, final_distance=distance,
                               alpha0=cell.alpha0))
    rows.sort(key=lambda row: row.sort_key)

    if config.trace_dir:
        # traces are written by this process only, in grid order
        for cell, result in sorted(results, key=lambda item: (item[0].method, -item[0].epsilon, item[0].alpha0)):
            emit_trace(result, os.path.join(config.trace_dir, cell.trace_name(problem)))
        log.info(f"wrote {len(results)} trace(s) to {config.trace_dir}")

    return rows


def iterations_by_method(rows: List[SummaryRow], alpha0: float) -> dict:
    """Maps method -> {epsilon: iterations or None if not converged} for one alpha0"""
    table = {}
    for row in rows:
        if row.alpha0 == alpha0:
            table.setdefault(row.method, {})[row.epsilon] = \
                row.iterations if row.status == RunStatus.converged.value else None
    return table

"""The Rosenbrock comparison preset and its published iteration counts."""
from dataclasses import replace
from typing import Dict, List, Optional

from bbbench.config import BenchConfig

TABLE1_EPSILONS = [1e-1, 1e-2, 1e-4, 1e-8]

TABLE1_ALPHA0_SWEEP = [1e-4, 1e-3, 1e-2, 1e-1]

TABLE1_METHODS = ["bb1", "bb2", "bb3"]

# published iteration counts per method and epsilon; None marks "--" (iteration cap reached).
# The published runs do not state their first steplength or whether that step is counted,
# so these are for side-by-side comparison only.
REFERENCE_ITERATIONS: Dict[str, Dict[float, Optional[int]]] = {
    "bb1": {1e-1: 154, 1e-2: 160, 1e-4: 166, 1e-8: 172},
    "bb2": {1e-1: None, 1e-2: None, 1e-4: None, 1e-8: None},
    "bb3": {1e-1: 32, 1e-2: 38, 1e-4: 44, 1e-8: 46},
}


def table1_config(base: Optional[BenchConfig] = None, alpha0: Optional[List[float]] = None, **overrides) -> BenchConfig:
    """Pins the Rosenbrock comparison: all three BB methods, the four tolerances, 5000 iterations,
    raw steplengths and target-distance stopping. alpha0 defaults to the full sweep.
    Output settings (out, format, trace_dir, jobs) are taken from overrides or base."""
    base = base or BenchConfig()
    return replace(base,
                   problem="rosenbrock", diag=None, shift=None, x0=None,
                   methods=list(TABLE1_METHODS),
                   epsilons=list(TABLE1_EPSILONS),
                   max_iter=5000,
                   safeguard="none",
                   stop="target",
                   alpha0=list(alpha0 or TABLE1_ALPHA0_SWEEP),
                   **overrides)

"""
Gradient descent x_{k+1} = x_k - alpha_k g_k with Barzilai-Borwein steplengths.

A run records every iterate. Failure modes (divergence, degenerate steps, the
iteration cap) end the run with a status instead of raising.
"""
from __future__ import annotations
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Union

import numpy as np

import bbtls
from .basetypes import SecantPair, Steplength, Vector, EmptyClassDefault, EmptyListDefault
from .exceptions import ConfigError, DegeneratePair, DegenerateStep, DomainError, MissingMinimizer
from .problems import Problem
from . import steplengths


class Method(Enum):
    bb1 = "bb1"
    bb2 = "bb2"
    bb3 = "bb3"
    fixed = "fixed"

class SafeguardKind(Enum):
    none = "none"
    fallback = "fallback"
    clamp = "clamp"

class StopKind(Enum):
    target = "target"
    gradnorm = "gradnorm"

class RunStatus(Enum):
    converged = "converged"
    max_iter = "max-iter"
    diverged = "diverged"
    degenerate = "degenerate"


STEPLENGTH_FORMULAS: Dict[Method, Callable[[SecantPair], Steplength]] = {
    Method.bb1: steplengths.bb1,
    Method.bb2: steplengths.bb2,
    Method.bb3: steplengths.bb3,
}


def _as_enum(enum_class, value, what: str):
    if isinstance(value, enum_class):
        return value
    try:
        return enum_class(value)
    except ValueError:
        choices = ", ".join(member.value for member in enum_class)
        raise ConfigError(f"invalid {what} '{value}', expected one of: {choices}")


@dataclass
class Safeguard(object):
    """Policy for unusable steplengths.

    none:      raw formulas, negative steps applied as-is, undefined formulas end the run
    fallback:  degenerate, nonpositive or non-finite values are replaced by the previous steplength
    clamp:     the value is projected onto [alpha_min, alpha_max]; degenerate or NaN values
               are replaced by the previous steplength first
    """
    kind: SafeguardKind = SafeguardKind.none
    alpha_min: Optional[float] = None
    alpha_max: Optional[float] = None

    def __post_init__(self):
        self.kind = _as_enum(SafeguardKind, self.kind, "safeguard")
        if self.kind is SafeguardKind.clamp:
            if self.alpha_min is None or self.alpha_max is None or not 0 < self.alpha_min < self.alpha_max:
                raise ConfigError(f"clamp safeguard needs 0 < alpha_min < alpha_max, got {self.alpha_min}, {self.alpha_max}")

    @staticmethod
    def parse(value: str) -> "Safeguard":
        """Parses "none", "fallback" or "clamp:MIN,MAX" """
        match = re.fullmatch(r"clamp:([^,]+),([^,]+)", value.strip())
        if match:
            try:
                alpha_min, alpha_max = map(float, match.groups())
            except ValueError:
                raise ConfigError(f"invalid clamp bounds in '{value}'")
            return Safeguard(SafeguardKind.clamp, alpha_min, alpha_max)
        value = value.strip()
        if value == "fallback-on-degenerate":
            value = "fallback"
        return Safeguard(value)

    def __str__(self):
        if self.kind is SafeguardKind.clamp:
            return f"clamp:{self.alpha_min!r},{self.alpha_max!r}"
        return self.kind.value


@dataclass
class StoppingRule(object):
    kind: StopKind = StopKind.target
    epsilon: float = 1e-8

    def __post_init__(self):
        self.kind = _as_enum(StopKind, self.kind, "stopping rule")
        if not self.epsilon > 0:
            raise ConfigError(f"stopping tolerance must be positive, got {self.epsilon}")


@dataclass
class SolverConfig(object):
    method: Method = Method.bb3
    # steplength of the bootstrap step, and the fallback steplength
    alpha0: float = 1e-3
    max_iter: int = 5000
    stopping: StoppingRule = EmptyClassDefault(StoppingRule)
    safeguard: Safeguard = EmptyClassDefault(Safeguard)

    def __post_init__(self):
        self.method = _as_enum(Method, self.method, "method")
        if isinstance(self.safeguard, str):
            self.safeguard = Safeguard.parse(self.safeguard)
        if not self.alpha0 > 0 or not math.isfinite(self.alpha0):
            raise ConfigError(f"alpha0 must be positive, got {self.alpha0}")
        if self.max_iter < 1:
            raise ConfigError(f"max_iter must be at least 1, got {self.max_iter}")


@dataclass(frozen=True, eq=False)
class IterationRecord(object):
    k: int
    x: np.ndarray
    f_value: float
    grad_norm: float
    # steplength that produced x (None for the starting point)
    alpha: Optional[float] = None


@dataclass
class RunResult(object):
    status: RunStatus
    iterations: int
    trace: List[IterationRecord] = EmptyListDefault()
    final_x: Optional[np.ndarray] = None


def propose_steplength(method: Union[Method, str], pair: SecantPair, prev_alpha: Steplength,
                       config: SolverConfig) -> Steplength:
    """Computes the next steplength from the latest secant pair, applying the configured safeguard.

    Raises:
        DegenerateStep: if the safeguard is none and the formula is undefined for this pair
    """
    method = _as_enum(Method, method, "method")
    safeguard = config.safeguard
    if method is Method.fixed:
        alpha = config.alpha0
    else:
        try:
            alpha = STEPLENGTH_FORMULAS[method](pair)
        except DegeneratePair as exc:
            if safeguard.kind is SafeguardKind.none:
                raise DegenerateStep(f"{method.value} steplength undefined", exc)
            alpha = prev_alpha
        except ArithmeticError:
            # overflow in the formula itself
            alpha = math.inf
    if safeguard.kind is SafeguardKind.fallback:
        if not (alpha > 0 and math.isfinite(alpha)):
            alpha = prev_alpha
    elif safeguard.kind is SafeguardKind.clamp:
        if math.isnan(alpha):
            alpha = prev_alpha
        alpha = min(max(alpha, safeguard.alpha_min), safeguard.alpha_max)
    return alpha


def first_step(x0: Vector, g0: Vector, alpha0: float) -> np.ndarray:
    """Plain gradient step x0 - alpha0*g0 used before any secant pair exists"""
    if not alpha0 > 0:
        raise DomainError(f"alpha0 must be positive, got {alpha0}")
    return np.asarray(x0, dtype=np.float64) - alpha0 * np.asarray(g0, dtype=np.float64)


def check_stop(x: Vector, g: Vector, rule: StoppingRule, problem: Problem) -> bool:
    """Evaluates the stopping rule: |x - x*| <= eps (target) or |g| <= eps (gradnorm)"""
    if rule.kind is StopKind.target:
        if problem.minimizer is None:
            raise MissingMinimizer(f"target-distance stopping needs a known minimizer, '{problem.name}' has none")
        return bool(np.linalg.norm(np.asarray(x, dtype=np.float64) - problem.minimizer) <= rule.epsilon)
    return bool(np.linalg.norm(g) <= rule.epsilon)


def _is_finite(x: np.ndarray, f: float, g: np.ndarray) -> bool:
    return bool(np.isfinite(f) and np.all(np.isfinite(g)) and np.all(np.isfinite(x)))


def run(problem: Problem, config: SolverConfig, x0: Optional[Vector] = None) -> RunResult:
    """Runs gradient descent from x0 (default: the problem's start point).

    Iterations count x-updates; the bootstrap step with config.alpha0 is iteration 1.
    The stopping rule is checked at x0 and after every update.

    Raises:
        MissingMinimizer: if target-distance stopping is requested for a problem without a minimizer
        ConfigError: if no start point is available or its dimension is wrong
    """
    if config.stopping.kind is StopKind.target and problem.minimizer is None:
        raise MissingMinimizer(f"target-distance stopping needs a known minimizer, '{problem.name}' has none")
    if x0 is None:
        x0 = problem.start
    if x0 is None:
        raise ConfigError(f"no start point given, and problem '{problem.name}' has no default")
    x = np.array(x0, dtype=np.float64)
    if x.shape != (problem.dim,):
        raise ConfigError(f"start point has shape {x.shape}, problem '{problem.name}' has dimension {problem.dim}")

    trace = []

    def record(k, x, f, g, alpha):
        grad_norm = float(np.linalg.norm(g)) if np.all(np.isfinite(g)) else math.nan
        trace.append(IterationRecord(k=k, x=x, f_value=float(f), grad_norm=grad_norm, alpha=alpha))

    def finish(status, iterations, x):
        bbtls.log.debug(f"{problem.name}/{config.method.value}: {status.value} after {iterations} iteration(s)")
        return RunResult(status=status, iterations=iterations, trace=trace, final_x=x)

    with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
        f, g = problem.f(x), np.asarray(problem.grad(x), dtype=np.float64)
        record(0, x, f, g, None)
        if not _is_finite(x, f, g):
            return finish(RunStatus.diverged, 0, x)
        if check_stop(x, g, config.stopping, problem):
            return finish(RunStatus.converged, 0, x)

        alpha = config.alpha0
        x_new = first_step(x, g, alpha)
        iterations = 1

        while True:
            f_new, g_new = problem.f(x_new), np.asarray(problem.grad(x_new), dtype=np.float64)
            record(iterations, x_new, f_new, g_new, alpha)
            if not _is_finite(x_new, f_new, g_new):
                return finish(RunStatus.diverged, iterations, x_new)
            if check_stop(x_new, g_new, config.stopping, problem):
                return finish(RunStatus.converged, iterations, x_new)
            if iterations >= config.max_iter:
                return finish(RunStatus.max_iter, iterations, x_new)

            pair = SecantPair(x_new - x, g_new - g)
            try:
                alpha = propose_steplength(config.method, pair, alpha, config)
            except DegenerateStep as exc:
                bbtls.log.debug(f"{problem.name}/{config.method.value}: {exc}")
                return finish(RunStatus.degenerate, iterations, x_new)

            x, g = x_new, g_new
            x_new = x - alpha * g
            iterations += 1


def replay_trace(problem: Problem, result: RunResult) -> bool:
    """Checks that every recorded iterate equals x_{k-1} - alpha_k*grad(x_{k-1}) exactly"""
    for prev, rec in zip(result.trace, result.trace[1:]):
        expected = prev.x - rec.alpha * np.asarray(problem.grad(prev.x), dtype=np.float64)
        if not np.array_equal(expected, rec.x, equal_nan=True):
            return False
    return True

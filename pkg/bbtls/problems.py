"""Test problems with analytic gradients, and a finite-difference gradient checker."""
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Optional

import numpy as np

from .basetypes import Vector, as_vector
from .exceptions import InvalidSpec, DomainError, ConfigError

DEFAULT_FD_STEP = 1e-5


@dataclass(frozen=True, eq=False)
class Problem(object):
    """An objective with its gradient.

    f and grad must be deterministic and reentrant, and picklable if the problem is to be
    run in a process pool (module-level functions or bound methods of module-level classes).
    """
    name: str
    dim: int
    f: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    minimizer: Optional[np.ndarray] = None
    start: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidSpec(f"problem '{self.name}': dimension must be positive, got {self.dim}")
        for attr in 'minimizer', 'start':
            value = getattr(self, attr)
            if value is not None:
                value = as_vector(value, attr)
                if value.size != self.dim:
                    raise InvalidSpec(f"problem '{self.name}': {attr} has dimension {value.size}, expected {self.dim}")
                object.__setattr__(self, attr, value)

    def distance_to_minimizer(self, x: Vector) -> Optional[float]:
        if self.minimizer is None:
            return None
        return float(np.linalg.norm(np.asarray(x, dtype=np.float64) - self.minimizer))


## Rosenbrock's banana function in two variables

def _rosenbrock_f(x: np.ndarray) -> float:
    return 100.0 * (x[1] - x[0] ** 2) ** 2 + (1.0 - x[0]) ** 2

def _rosenbrock_grad(x: np.ndarray) -> np.ndarray:
    t = x[1] - x[0] ** 2
    return np.array([-400.0 * x[0] * t - 2.0 * (1.0 - x[0]), 200.0 * t])


def rosenbrock() -> Problem:
    """f(x) = 100(x2 - x1^2)^2 + (1 - x1)^2, minimizer (1, 1), canonical start (-1.2, 1)"""
    return Problem(name="rosenbrock", dim=2, f=_rosenbrock_f, grad=_rosenbrock_grad,
                   minimizer=np.array([1.0, 1.0]), start=np.array([-1.2, 1.0]))


@dataclass(frozen=True, eq=False)
class QuadraticSpec(object):
    """f(x) = 1/2 x'Ax - b'x with A = diag(diag) positive definite"""
    diag: np.ndarray
    shift: Optional[np.ndarray] = None

    def __post_init__(self):
        try:
            diag = as_vector(self.diag, "diag")
            shift = np.zeros_like(diag) if self.shift is None else as_vector(self.shift, "shift")
        except DomainError as exc:
            raise InvalidSpec("invalid quadratic", exc)
        if not np.all(diag > 0):
            raise InvalidSpec(f"quadratic diagonal must be positive, got {diag.tolist()}")
        if shift.shape != diag.shape:
            raise InvalidSpec(f"quadratic shift has dimension {shift.size}, expected {diag.size}")
        shift.flags.writeable = False
        object.__setattr__(self, 'diag', diag)
        object.__setattr__(self, 'shift', shift)

    def f(self, x: np.ndarray) -> float:
        return 0.5 * float(np.dot(self.diag * x, x)) - float(np.dot(self.shift, x))

    def grad(self, x: np.ndarray) -> np.ndarray:
        return self.diag * x - self.shift

    @property
    def minimizer(self) -> np.ndarray:
        return self.shift / self.diag


def quadratic(spec: QuadraticSpec, start: Optional[Vector] = None) -> Problem:
    """Diagonal SPD quadratic. The start point defaults to the all-ones vector."""
    dim = spec.diag.size
    return Problem(name="quadratic", dim=dim, f=spec.f, grad=spec.grad,
                   minimizer=spec.minimizer,
                   start=np.ones(dim) if start is None else start)


def finite_diff_grad(problem: Problem, x: Vector, h: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Central-difference gradient (f(x + h e_i) - f(x - h e_i)) / 2h"""
    if not h > 0:
        raise DomainError(f"finite-difference step must be positive, got {h}")
    x0 = np.array(x, dtype=np.float64)
    grad = np.zeros(x0.size)
    for i in range(x0.size):
        x = x0.copy()
        x[i] = x0[i] + h
        fplus = problem.f(x)
        x[i] = x0[i] - h
        fminus = problem.f(x)
        grad[i] = (fplus - fminus) / (2 * h)
    return grad


def check_gradient(problem: Problem, x: Vector, h: float = DEFAULT_FD_STEP, rtol: float = 1e-6) -> bool:
    """True if the analytic gradient matches central differences: |fd - g| <= rtol*max(1, |g|)"""
    g = np.asarray(problem.grad(np.asarray(x, dtype=np.float64)))
    fd = finite_diff_grad(problem, x, h)
    return bool(np.linalg.norm(fd - g) <= rtol * max(1.0, float(np.linalg.norm(g))))


def _quadratic_from_params(diag: Optional[Vector] = None, shift: Optional[Vector] = None,
                           start: Optional[Vector] = None) -> Problem:
    return quadratic(QuadraticSpec(np.asarray(diag if diag is not None else [1.0, 10.0]), shift), start)

def _rosenbrock_from_params(start: Optional[Vector] = None) -> Problem:
    problem = rosenbrock()
    return problem if start is None else replace(problem, start=start)

PROBLEMS: Dict[str, Callable[..., Problem]] = dict(
    rosenbrock=_rosenbrock_from_params,
    quadratic=_quadratic_from_params,
)


def get_problem(name: str, **params) -> Problem:
    """Looks up a built-in problem by name. Parameters that are None are ignored."""
    if name not in PROBLEMS:
        raise ConfigError(f"unknown problem '{name}', available: {', '.join(PROBLEMS)}")
    params = {key: value for key, value in params.items() if value is not None}
    try:
        return PROBLEMS[name](**params)
    except TypeError as exc:
        raise ConfigError(f"invalid parameters for problem '{name}'", exc)

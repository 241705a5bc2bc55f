"""
Brute-force verifiers for the closed-form steplengths.

These do not share any algebra with bbtls.steplengths: the TLS minimizer is found
by a grid scan followed by golden-section refinement.
"""
import math
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, List, Optional

import numpy as np

from .basetypes import SecantPair
from .exceptions import InvalidBracket, DomainError
from .steplengths import bb2, bb3

INV_PHI = (math.sqrt(5) - 1) / 2

DEFAULT_GRID_POINTS = 1001


def golden_section(fn: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    """Golden-section search for the minimum of a unimodal fn on [lo, hi].
    Returns the midpoint of the final bracket, which is narrower than tol."""
    a, b = lo, hi
    c = b - (b - a) * INV_PHI
    d = a + (b - a) * INV_PHI
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * INV_PHI
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * INV_PHI
            fd = fn(d)
        # bracket can no longer shrink in floating point
        if b - a <= 4 * np.spacing(max(abs(a), abs(b))):
            break
    return (a + b) / 2


def minimize_scalar(fn: Callable, lo: float, hi: float, tol: float,
                    npoints: int = DEFAULT_GRID_POINTS, vectorized: bool = False) -> float:
    """Minimizes fn over [lo, hi] by a coarse grid scan refined with golden-section search
    around the best grid cell.

    Args:
        fn (Callable): function of one real variable
        lo (float): lower end of the search interval
        hi (float): upper end of the search interval
        tol (float): absolute tolerance on the returned abscissa
        npoints (int): number of grid points, at least 1000 are used
        vectorized (bool): if True, fn is called once on the whole grid array

    Raises:
        InvalidBracket: if lo >= hi
        DomainError: if tol <= 0

    Returns:
        float: abscissa of the minimum
    """
    if not lo < hi:
        raise InvalidBracket(lo, hi)
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    npoints = max(npoints, 1000)
    grid = np.linspace(lo, hi, npoints)
    if vectorized:
        values = np.asarray(fn(grid), dtype=np.float64)
    else:
        values = np.array([fn(x) for x in grid], dtype=np.float64)
    best = int(np.nanargmin(values))
    a = float(grid[max(best - 1, 0)])
    b = float(grid[min(best + 1, npoints - 1)])
    return golden_section(lambda x: float(fn(x)), a, b, tol)


@dataclass
class BB3Verification(object):
    closed_form: float
    oracle: float
    agree: bool


def shifted_tls_objective(alpha, pair: SecantPair):
    """tls_objective(alpha, pair) - yy, i.e. (ss - yy - 2*alpha*sy) / (alpha^2 + 1).

    Same minimizer as the TLS objective. yy is the limit of q for large alpha; without it the
    rounding error of a value is relative to the value itself, also near a large minimizer.
    """
    return (pair.ss - pair.yy - 2 * alpha * pair.sy) / (alpha * alpha + 1)


def verify_bb3(pair: SecantPair, tol: float) -> BB3Verification:
    """Checks the bb3 closed form against a direct minimization of the TLS objective.

    The search interval is [0, 2*bb2(pair)], which contains the minimizer whenever sy > 0
    since bb3 never exceeds bb2 there.

    Raises:
        DegeneratePair: if sy == 0, propagated from bb3()
        DomainError: if sy < 0
    """
    if pair.sy < 0:
        raise DomainError(f"verify_bb3 needs sy > 0, got {pair.sy}")
    closed_form = bb3(pair)
    scale = max(1.0, abs(closed_form))
    oracle = minimize_scalar(partial(shifted_tls_objective, pair=pair), 0.0, 2 * bb2(pair),
                             tol=1e-3 * tol * scale, vectorized=True)
    return BB3Verification(closed_form=closed_form, oracle=oracle,
                           agree=abs(closed_form - oracle) <= tol * scale)


def random_secant_pair(rng: np.random.Generator, dim: int, positive: bool = True) -> SecantPair:
    """Draws a Gaussian secant pair; with positive=True, y is flipped as needed to make sy > 0"""
    s = rng.standard_normal(dim)
    y = rng.standard_normal(dim)
    if positive and np.dot(s, y) < 0:
        y = -y
    return SecantPair(s, y)


@dataclass
class SweepReport(object):
    seed: int
    count: int
    tol: float
    failures: List[BB3Verification] = field(default_factory=list)
    max_rel_error: float = 0.0

    @property
    def all_agree(self) -> bool:
        return not self.failures


def sweep_verify_bb3(count: int, seed: int = 0, tol: float = 1e-6, max_dim: int = 10,
                     rng: Optional[np.random.Generator] = None) -> SweepReport:
    """Runs verify_bb3() over count seeded random pairs of dimension 1..max_dim"""
    rng = rng or np.random.default_rng(seed)
    report = SweepReport(seed=seed, count=count, tol=tol)
    for _ in range(count):
        pair = random_secant_pair(rng, int(rng.integers(1, max_dim + 1)))
        # measure zero, but a draw with sy == 0 has no bb3 to verify
        if pair.sy == 0:
            continue
        result = verify_bb3(pair, tol)
        rel_error = abs(result.closed_form - result.oracle) / max(1.0, abs(result.closed_form))
        report.max_rel_error = max(report.max_rel_error, rel_error)
        if not result.agree:
            report.failures.append(result)
    return report

"""Closed-form Barzilai-Borwein steplengths and the scalar least-squares triad behind them.

The steplength approximates the inverse Hessian by alpha*I from the secant pair (s, y):

  * bb1 solves s ~ alpha*y by ordinary least squares,
  * bb2 solves beta*s ~ y by ordinary least squares (equivalently s ~ alpha*y by data least squares),
  * bb3 solves s ~ alpha*y by total least squares, i.e. minimizes q(alpha) = |alpha*y - s|^2 / (alpha^2 + 1).

All functions are pure and operate on the cached dot products of a SecantPair or ScalarLSInstance.
"""
import math

import numpy as np

from .basetypes import SecantPair, ScalarLSInstance, Steplength
from .exceptions import DegeneratePair, DegenerateData, DomainError


def _tls_solution(aa: float, bb: float, ab: float) -> float:
    """Minimizer of (x^2*aa - 2x*ab + bb)/(x^2 + 1) for ab != 0.

    Evaluates (bb - aa + sqrt((aa - bb)^2 + 4ab^2)) / (2ab) using whichever of its two
    algebraically equivalent forms avoids cancellation for the sign of bb - aa.
    """
    d = bb - aa
    root = math.hypot(d, 2 * ab)
    if d >= 0:
        return (d + root) / (2 * ab)
    return (2 * ab) / (root - d)


def bb1(pair: SecantPair) -> Steplength:
    """Short BB steplength sy/yy, the minimizer of |s - alpha*y|^2"""
    if pair.yy == 0 or pair.sy == 0:
        raise DegeneratePair(f"bb1 undefined for yy={pair.yy}, sy={pair.sy}", pair=pair)
    return pair.sy / pair.yy


def bb2(pair: SecantPair) -> Steplength:
    """Long BB steplength ss/sy, the reciprocal of the minimizer of |beta*s - y|^2"""
    if pair.ss == 0 or pair.sy == 0:
        raise DegeneratePair(f"bb2 undefined for ss={pair.ss}, sy={pair.sy}", pair=pair)
    return pair.ss / pair.sy


def bb3(pair: SecantPair) -> Steplength:
    """Total least squares steplength: the minimizer of tls_objective().

    For sy > 0 the result lies between bb1(pair) and bb2(pair); its sign always follows sy.

    Raises:
        DegeneratePair: if sy == 0, where the TLS minimizer is either 0 or unbounded
    """
    if pair.sy == 0:
        raise DegeneratePair(f"bb3 undefined for sy=0 (ss={pair.ss}, yy={pair.yy})", pair=pair)
    return _tls_solution(pair.yy, pair.ss, pair.sy)


def bb3_from_components(alpha_bb1: Steplength, alpha_bb2: Steplength) -> Steplength:
    """Computes bb3 from the two classical steplengths alone.

    Only positivity is checked: a pair of inputs that did not come from one secant pair
    still yields a number, but then nothing guarantees alpha_bb1 <= result <= alpha_bb2.
    """
    if not alpha_bb1 > 0 or not alpha_bb2 > 0:
        raise DomainError(f"bb3_from_components needs positive steplengths, got {alpha_bb1}, {alpha_bb2}")
    c = alpha_bb2 - 1 / alpha_bb1
    root = math.hypot(c, 2)
    if c >= 0:
        return (c + root) / 2
    return 2 / (root - c)


def tls_objective(alpha, pair: SecantPair):
    """q(alpha) = |alpha*y - s|^2 / (alpha^2 + 1). Accepts a scalar or an array of alphas."""
    value = (alpha * alpha * pair.yy - 2 * alpha * pair.sy + pair.ss) / (alpha * alpha + 1)
    # rounding can push an exact fit slightly below zero
    return np.maximum(value, 0.0)


def inverse_tls_objective(beta, pair: SecantPair):
    """|beta*s - y|^2 / (beta^2 + 1): the TLS objective of the inverse secant equation beta*s ~ y"""
    value = (beta * beta * pair.ss - 2 * beta * pair.sy + pair.yy) / (beta * beta + 1)
    return np.maximum(value, 0.0)


def bb3_inverse(pair: SecantPair) -> Steplength:
    """1/beta*, where beta* minimizes inverse_tls_objective(). Coincides with bb3(pair)."""
    try:
        beta = scalar_tls(ScalarLSInstance(pair.s, pair.y))
    except DegenerateData as exc:
        raise DegeneratePair("inverse TLS steplength undefined", exc, pair=pair)
    return 1 / beta


def scalar_ols(inst: ScalarLSInstance) -> float:
    """Ordinary least squares: argmin |a*x - b|^2 = ab/aa"""
    if inst.aa == 0:
        raise DegenerateData("OLS undefined for a zero data column", instance=inst)
    return inst.ab / inst.aa


def scalar_dls(inst: ScalarLSInstance) -> float:
    """Data least squares: argmin |a*x - b|^2 / x^2 = bb/ab"""
    if inst.ab == 0:
        raise DegenerateData("DLS has no finite stationary point when a'b = 0", instance=inst)
    return inst.bb / inst.ab


def scalar_tls(inst: ScalarLSInstance) -> float:
    """Total least squares: argmin |a*x - b|^2 / (x^2 + 1)"""
    if inst.ab == 0:
        raise DegenerateData("TLS minimizer degenerates when a'b = 0", instance=inst)
    return _tls_solution(inst.aa, inst.bb, inst.ab)

from __future__ import annotations
from dataclasses import field, dataclass
from collections import OrderedDict
from typing import Sequence, Union

import numpy as np

from .exceptions import DomainError

# a steplength is a plain float: the multiplier of the (negative) gradient
Steplength = float

Vector = Union[Sequence[float], np.ndarray]


def EmptyDictDefault():
    return field(default_factory=lambda:OrderedDict())

def EmptyListDefault():
    return field(default_factory=lambda:[])

def ListDefault(*args):
    return field(default_factory=lambda:list(args))

def EmptyClassDefault(obj):
    return field(default_factory=obj)


def as_vector(value: Vector, name: str = "vector") -> np.ndarray:
    """Converts value to a read-only 1D float64 array. Raises DomainError on empty or non-1D input."""
    vec = np.array(value, dtype=np.float64)
    if vec.ndim != 1 or vec.size < 1:
        raise DomainError(f"{name} must be a non-empty 1D vector, got shape {vec.shape}")
    vec.flags.writeable = False
    return vec


@dataclass(frozen=True, eq=False)
class SecantPair(object):
    """Displacement s = x_{k+1} - x_k and gradient change y = g_{k+1} - g_k.

    The dot products ss, yy and sy are computed once on construction and shared
    by every steplength formula, so that bb1/bb2/bb3 of one pair see identical inputs.
    """
    s: np.ndarray
    y: np.ndarray
    ss: float = field(init=False, repr=False)
    yy: float = field(init=False, repr=False)
    sy: float = field(init=False, repr=False)

    def __post_init__(self):
        s = as_vector(self.s, "s")
        y = as_vector(self.y, "y")
        if s.shape != y.shape:
            raise DomainError(f"s and y must have the same dimension, got {s.size} and {y.size}")
        object.__setattr__(self, 's', s)
        object.__setattr__(self, 'y', y)
        object.__setattr__(self, 'ss', float(np.dot(s, s)))
        object.__setattr__(self, 'yy', float(np.dot(y, y)))
        object.__setattr__(self, 'sy', float(np.dot(s, y)))

    @property
    def dim(self) -> int:
        return self.s.size

    @staticmethod
    def from_iterates(x0: Vector, x1: Vector, g0: Vector, g1: Vector) -> "SecantPair":
        """Builds the pair from two consecutive iterates and their gradients"""
        return SecantPair(np.asarray(x1, dtype=np.float64) - np.asarray(x0, dtype=np.float64),
                          np.asarray(g1, dtype=np.float64) - np.asarray(g0, dtype=np.float64))

    def swapped(self) -> "SecantPair":
        """Returns the pair with the roles of s and y exchanged (the inverse secant equation)"""
        return SecantPair(self.y, self.s)


@dataclass(frozen=True, eq=False)
class ScalarLSInstance(object):
    """Over-determined system a*x ~ b with a single data column a and a scalar unknown x"""
    a: np.ndarray
    b: np.ndarray
    aa: float = field(init=False, repr=False)
    bb: float = field(init=False, repr=False)
    ab: float = field(init=False, repr=False)

    def __post_init__(self):
        a = as_vector(self.a, "a")
        b = as_vector(self.b, "b")
        if a.shape != b.shape:
            raise DomainError(f"a and b must have the same dimension, got {a.size} and {b.size}")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)
        object.__setattr__(self, 'aa', float(np.dot(a, a)))
        object.__setattr__(self, 'bb', float(np.dot(b, b)))
        object.__setattr__(self, 'ab', float(np.dot(a, b)))

    def swapped(self) -> "ScalarLSInstance":
        return ScalarLSInstance(self.b, self.a)

    @staticmethod
    def from_pair(pair: SecantPair) -> "ScalarLSInstance":
        """The system y*alpha ~ s solved by the BB steplengths"""
        return ScalarLSInstance(pair.y, pair.s)

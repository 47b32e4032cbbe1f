"""Homogeneous self-similar measures and finite atomic measures on the line.

A homogeneous self-similar measure with ratio ``a``, translations ``t`` and
weights ``p`` is the law of ``sum_{n>=1} X_n a**n`` with ``X_n`` i.i.d.,
``P(X_n = t_j) = p_j``.  Its level-``N`` discrete approximation keeps the first
``N`` terms of the sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DegenerateAlphabetError, ResourceError, SSMError

MERGE_TOL = 1e-12
MAX_ATOMS = 2**26


@dataclass(frozen=True)
class HomogeneousSSM:
    a: float
    t: tuple[float, ...]
    p: tuple[float, ...]
    # (shift, scale): the alphabet map x -> (x - shift) / scale used by normalize()
    alphabet_map: tuple[float, float] = field(default=(0.0, 1.0), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "t", tuple(float(v) for v in self.t))
        object.__setattr__(self, "p", tuple(float(v) for v in self.p))
        if not 0.0 < self.a < 1.0:
            raise SSMError(f"contraction ratio must lie in (0, 1), got {self.a}")
        if len(self.t) < 2 or len(self.t) != len(self.p):
            raise SSMError("need at least two translations and one weight per translation")
        if len(set(self.t)) != len(self.t):
            raise DegenerateAlphabetError("translations must be pairwise distinct")
        if min(self.p) <= 0.0:
            raise SSMError("weights must be positive")
        if abs(sum(self.p) - 1.0) > 1e-12:
            raise SSMError(f"weights must sum to 1, got {sum(self.p)!r}")

    @property
    def m(self) -> int:
        return len(self.t)

    @property
    def is_normalized(self) -> bool:
        return self.t[0] == 0.0 and self.t[1] == 1.0

    @property
    def t_max(self) -> float:
        return max(abs(v) for v in self.t)


def bernoulli(a: float, p: float = 0.5) -> HomogeneousSSM:
    """Biased Bernoulli convolution in the normalized {0, 1} alphabet.

    The +/- signs map to 1 / 0 through x -> (x + 1) / 2, so ``P(+) = p`` becomes
    the weight on translation 1.  Dimensions and decay rates are unaffected.
    """
    return HomogeneousSSM(a, (0.0, 1.0), (1.0 - p, p))


def normalize(raw: HomogeneousSSM) -> HomogeneousSSM:
    t1, t2 = raw.t[0], raw.t[1]
    if t1 == t2:
        raise DegenerateAlphabetError("t1 == t2, cannot normalize")
    scale = t2 - t1
    t = [(v - t1) / scale for v in raw.t]
    t[0], t[1] = 0.0, 1.0
    return HomogeneousSSM(raw.a, tuple(t), raw.p, alphabet_map=(t1, scale))


def support_bounds(ssm: HomogeneousSSM) -> tuple[float, float]:
    k = ssm.a / (1.0 - ssm.a)
    return k * min(ssm.t), k * max(ssm.t)


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Finite atomic measure with sorted, merged atom positions."""

    positions: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        for arr in (self.positions, self.weights):
            arr.setflags(write=False)

    @classmethod
    def from_atoms(cls, positions, weights, merge_tol: float = MERGE_TOL) -> "DiscreteMeasure":
        x = np.asarray(positions, dtype=float).ravel()
        w = np.asarray(weights, dtype=float).ravel()
        if x.shape != w.shape:
            raise SSMError("positions and weights differ in length")
        if x.size == 0:
            raise SSMError("empty measure")
        return cls(*_merge(x, w, merge_tol))

    @classmethod
    def dirac(cls, x: float = 0.0) -> "DiscreteMeasure":
        return cls(np.array([float(x)]), np.array([1.0]))

    def __len__(self):
        return self.positions.size

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.positions.tolist(), self.weights.tolist()))

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    def fourier(self, xi) -> np.ndarray:
        """Evaluate sum_k w_k exp(2 pi i xi x_k) at each frequency in ``xi``."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        out = np.empty(xi.shape, dtype=complex)
        step = max(1, 2**22 // max(1, len(self)))
        for i in range(0, xi.size, step):
            ph = np.exp(2j * np.pi * np.outer(xi[i:i + step], self.positions))
            out[i:i + step] = ph @ self.weights
        return out


def _merge(x: np.ndarray, w: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(x, kind="stable")
    x, w = x[order], w[order]
    new_group = np.empty(x.size, dtype=bool)
    new_group[0] = True
    np.greater(np.diff(x), tol, out=new_group[1:])
    if new_group.all():
        return x, w
    gid = np.cumsum(new_group) - 1
    starts = x[new_group]
    mass = np.bincount(gid, weights=w)
    # offsets from the group's first point keep exact coincidences exact
    shift = np.bincount(gid, weights=w * (x - starts[gid]))
    return starts + shift / mass, mass


def _check_size(n: int) -> None:
    if n > MAX_ATOMS:
        raise ResourceError(f"{n} atoms exceeds the guard of {MAX_ATOMS}")


def discrete_approximation(ssm: HomogeneousSSM, N: int, merge_tol: float = MERGE_TOL) -> DiscreteMeasure:
    """Level-N approximation: the convolution of sum_j p_j delta(a**n t_j), n = 1..N."""
    if N < 0:
        raise SSMError("N must be non-negative")
    t = np.asarray(ssm.t)
    p = np.asarray(ssm.p)
    x, w = np.zeros(1), np.ones(1)
    for n in range(1, N + 1):
        _check_size(x.size * ssm.m)
        x = (x[:, None] + ssm.a**n * t[None, :]).ravel()
        w = (w[:, None] * p[None, :]).ravel()
        x, w = _merge(x, w, merge_tol)
    return DiscreteMeasure(x, w)


def convolve(x: DiscreteMeasure, y: DiscreteMeasure, merge_tol: float = MERGE_TOL) -> DiscreteMeasure:
    _check_size(len(x) * len(y))
    pos = np.add.outer(x.positions, y.positions).ravel()
    wts = np.multiply.outer(x.weights, y.weights).ravel()
    return DiscreteMeasure(*_merge(pos, wts, merge_tol))


def scale(x: DiscreteMeasure, c: float) -> DiscreteMeasure:
    """Push ``x`` forward under v -> c v.  ``c == 0`` collapses to a point mass at 0."""
    if c == 0:
        return DiscreteMeasure(np.zeros(1), np.array([x.mass]))
    pos = x.positions * c
    if c < 0:
        return DiscreteMeasure(pos[::-1].copy(), x.weights[::-1].copy())
    return DiscreteMeasure(pos, x.weights.copy())

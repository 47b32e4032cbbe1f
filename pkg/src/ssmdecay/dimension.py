"""Dyadic moment sums and finite-scale dimension estimates.

Cells of level n are [k 2**-n, (k+1) 2**-n).  Dimensions are least-squares
slopes over a range of levels; the liminf in their definitions is only
approximated by the asymptotic slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np
from scipy import stats

from .errors import ResourceError, SSMError
from .fourier import fourier_many
from .measure import (DiscreteMeasure, HomogeneousSSM, convolve, discrete_approximation,
                      support_bounds)

Target = Union[HomogeneousSSM, DiscreteMeasure]


def cell_masses(x: DiscreteMeasure, n: int) -> np.ndarray:
    """Masses of the non-empty level-n dyadic cells."""
    k = np.floor(x.positions * 2.0**n)
    starts = np.flatnonzero(np.r_[True, k[1:] != k[:-1]])
    return np.add.reduceat(x.weights, starts)


def _bracket_masses(x: DiscreteMeasure, n: int, h: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell lower/upper masses from cells eroded/dilated by h."""
    size = 2.0**-n
    k0 = math.floor((x.positions[0] - h) / size)
    k1 = math.floor((x.positions[-1] + h) / size)
    b = np.arange(k0, k1 + 2) * size
    cum = np.r_[0.0, np.cumsum(x.weights)]
    pos = x.positions
    upper = (cum[np.searchsorted(pos, b[1:] + h, side="right")]
             - cum[np.searchsorted(pos, b[:-1] - h, side="left")])
    lower = (cum[np.searchsorted(pos, b[1:] - h, side="left")]
             - cum[np.searchsorted(pos, b[:-1] + h, side="right")])
    return np.maximum(lower, 0.0), upper


@dataclass
class MomentTable:
    q: float
    levels: np.ndarray
    s_n: np.ndarray
    max_q: np.ndarray
    # certified brackets for the limit measure; None for a plain atomic measure
    s_lo: Optional[np.ndarray] = None
    s_hi: Optional[np.ndarray] = None
    max_lo: Optional[np.ndarray] = None
    max_hi: Optional[np.ndarray] = None

    def rows(self):
        return zip(self.levels, self.s_n, self.max_q)


def moment_sums(x: DiscreteMeasure, n_range: Iterable[int], q: float = 2.0,
                bracket: Optional[float] = None) -> MomentTable:
    """s_n = sum over level-n cells of mass**q, plus the largest cell mass.

    With ``bracket = h`` also record bounds valid for any measure obtained by
    moving every atom by at most h.
    """
    if q <= 1:
        raise SSMError("q must exceed 1")
    levels = np.array(sorted(n_range), dtype=int)
    s, mx = np.empty(levels.size), np.empty(levels.size)
    lo = hi = mlo = mhi = None
    if bracket is not None:
        lo, hi, mlo, mhi = (np.empty(levels.size) for _ in range(4))
    for i, n in enumerate(levels):
        cm = cell_masses(x, n)
        s[i] = np.sum(cm**q)
        mx[i] = cm.max()
        if bracket is not None:
            l, u = _bracket_masses(x, n, bracket)
            lo[i], hi[i] = np.sum(l**q), np.sum(u**q)
            mlo[i], mhi[i] = l.max(), u.max()
    return MomentTable(q, levels, s, mx, lo, hi, mlo, mhi)


@dataclass
class DimEstimate:
    value: float
    stderr: float
    levels: list[int]
    table: MomentTable
    sandwich_width: float = 0.0
    sandwich_ok: bool = True
    approx_level: Optional[int] = None

    def summary(self) -> dict:
        return {
            "value": self.value,
            "stderr": self.stderr,
            "levels": self.levels,
            "approx_level": self.approx_level,
            "sandwich_width": self.sandwich_width,
            "sandwich_ok": self.sandwich_ok,
        }


def _slope(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    if x.size < 2:
        raise SSMError("need at least two levels to fit a slope")
    if x.size == 2:
        return float((y[1] - y[0]) / (x[1] - x[0])), 0.0
    fit = stats.linregress(x, y)
    return float(fit.slope), float(fit.stderr)


def min_approx_level(ssm: HomogeneousSSM, n_max: int) -> int:
    """Smallest level whose atom displacement a**L diam stays below 2**-(n_max + 3)."""
    lo, hi = support_bounds(ssm)
    diam = hi - lo
    return max(1, math.floor(math.log(2.0 ** -(n_max + 3) / diam) / math.log(ssm.a)) + 1)


def _prepare(target: Target, n_max: int, approx_level: Optional[int]):
    if isinstance(target, DiscreteMeasure):
        return target, None, None
    lo, hi = support_bounds(target)
    diam = hi - lo
    need = min_approx_level(target, n_max)
    if approx_level is None:
        approx_level = need
    elif approx_level < need:
        raise ResourceError(f"approx_level {approx_level} too coarse for level {n_max}; need >= {need}")
    x = discrete_approximation(target, approx_level)
    return x, target.a**approx_level * diam, approx_level


def _estimate(target: Target, n_range, approx_level, skip: int, q: Optional[float]) -> DimEstimate:
    levels = sorted(n_range)
    used = levels[skip:] if len(levels) - skip >= 2 else levels
    x, h, L = _prepare(target, max(levels), approx_level)
    table = moment_sums(x, levels, 2.0 if q is None else q, bracket=h)
    sel = np.isin(table.levels, used)
    logcell = -table.levels[sel] * math.log(2.0)
    if q is None:
        y, ylo, yhi, denom = table.max_q, table.max_lo, table.max_hi, 1.0
    else:
        y, ylo, yhi, denom = table.s_n, table.s_lo, table.s_hi, q - 1.0
    value, err = _slope(logcell * denom, np.log(y[sel]))
    width = 0.0
    if h is not None:
        with np.errstate(divide="ignore"):
            gap = np.log(yhi[sel]) - np.log(ylo[sel])
        width = float(np.max(gap / (denom * -logcell)))
    return DimEstimate(value, err, [int(v) for v in used], table, width, bool(width <= 0.01), L)


def dim_q_estimate(target: Target, q: float = 2.0, n_range=range(8, 17),
                   approx_level: Optional[int] = None, skip: int = 2) -> DimEstimate:
    """L^q dimension as the slope of log s_n against (q - 1) log 2**-n.

    ``skip`` drops the coarsest levels from the fit.  ``sandwich_width`` is the
    largest per-level spread between the dimensions implied by the certified
    brackets; ``sandwich_ok`` is set when it stays below 0.01.
    """
    return _estimate(target, n_range, approx_level, skip, q)


def dim_inf_estimate(target: Target, n_range=range(8, 17), approx_level: Optional[int] = None,
                     skip: int = 2) -> DimEstimate:
    """Frostman exponent as the slope of log max cell mass against log 2**-n."""
    return _estimate(target, n_range, approx_level, skip, None)


def geometric_ladder(ratio: float, start: float, count: int) -> list[float]:
    return [start * ratio**k for k in range(count)]


def _modulus_sq(target: Target, xi: np.ndarray, tol: float) -> np.ndarray:
    if isinstance(target, DiscreteMeasure):
        return np.abs(target.fourier(xi)) ** 2
    out = np.empty(xi.size)
    for i in range(0, xi.size, 1 << 16):
        v, _ = fourier_many(target, xi[i:i + (1 << 16)], tol)
        out[i:i + (1 << 16)] = np.abs(v) ** 2
    return out


def _radius(target: Target) -> float:
    if isinstance(target, DiscreteMeasure):
        return float(np.max(np.abs(target.positions)))
    lo, hi = support_bounds(target)
    return max(abs(lo), abs(hi))


@dataclass
class Alpha2Estimate:
    alpha2: float
    dim2_via_fourier: float
    stderr: float
    T: list[float]
    energy: list[float]
    step: float = field(default=0.0)

    def summary(self) -> dict:
        return {"alpha2": self.alpha2, "dim2_via_fourier": self.dim2_via_fourier,
                "stderr": self.stderr, "T": self.T, "energy": self.energy, "step": self.step}


def fourier_energy(target: Target, T_list, tol: float = 1e-8,
                   step: Optional[float] = None, max_samples: int = 10**8) -> tuple[list[float], float]:
    """Trapezoid values of the integral of |mu_hat|**2 over [-T, T] for each T."""
    T_list = [float(v) for v in T_list]
    if any(b <= a for a, b in zip(T_list, T_list[1:])) or T_list[0] <= 0:
        raise SSMError("T_list must be positive and increasing")
    if step is None:
        r = _radius(target)
        step = 0.25 if r == 0 else min(0.25, 0.5 / (2 * math.pi * r))
    if T_list[-1] / step > max_samples:
        raise ResourceError("too many Fourier samples for the energy integral")
    energy, total, prev = [], 0.0, 0.0
    for T in T_list:
        n = max(1, math.ceil((T - prev) / step))
        xi = np.linspace(prev, T, n + 1)
        f = _modulus_sq(target, xi, tol)
        total += float(np.sum(f[1:] + f[:-1]) * (T - prev) / (2 * n))
        energy.append(2.0 * total)
        prev = T
    return energy, step


def alpha2_estimate(target: Target, T_list, tol: float = 1e-8,
                    step: Optional[float] = None) -> Alpha2Estimate:
    """Growth exponent of the Fourier energy and the matching correlation dimension 1 - alpha2."""
    if len(T_list) < 4:
        raise SSMError("need at least four values of T")
    energy, step = fourier_energy(target, T_list, tol, step)
    slope, err = _slope(np.log(T_list), np.log(energy))
    return Alpha2Estimate(slope, 1.0 - slope, err, [float(v) for v in T_list], energy, step)


@dataclass
class YoungCheck:
    lhs: float
    rhs: float

    @property
    def passed(self) -> bool:
        return self.lhs <= self.rhs


def young_check(x: DiscreteMeasure, y: DiscreteMeasure, n: int) -> YoungCheck:
    """max cell mass of x * y against 5 sqrt(s_n(x, 2) s_n(y, 2))."""
    lhs = float(cell_masses(convolve(x, y), n).max())
    sx = float(np.sum(cell_masses(x, n) ** 2))
    sy = float(np.sum(cell_masses(y, n) ** 2))
    return YoungCheck(lhs, 5.0 * math.sqrt(sx * sy))

"""Empirical side of the Erdos-Kahane covering argument.

Large values of |mu_hat| on [0, T] are located on a grid and covered by unit
intervals [k, k+1); the count is compared with T**delta.  The digit
decomposition a**-j t = r_j + eps_j and brute-force covers of the set
S(N, eps_tilde) expose the combinatorics behind the exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import constants
from .errors import ResourceError, SSMError
from .fourier import _CHUNK, fourier_many, scan_grid
from .measure import HomogeneousSSM


@dataclass
class CoveringReport:
    T: float
    eps: float
    threshold: float
    flagged: np.ndarray
    max_modulus: np.ndarray
    delta: float
    delta_conservative: float
    theory_count: float
    theory_count_conservative: float
    step: float
    tol: float

    @property
    def count(self) -> int:
        return int(self.flagged.size)

    @property
    def ratio(self) -> float:
        return self.count / self.theory_count

    def summary(self) -> dict:
        return {
            "T": self.T,
            "eps": self.eps,
            "threshold": self.threshold,
            "count": self.count,
            "delta": self.delta,
            "theory_count": self.theory_count,
            "ratio": self.ratio,
            "delta_conservative": self.delta_conservative,
            "theory_count_conservative": self.theory_count_conservative,
            "ratio_conservative": self.count / self.theory_count_conservative,
            "step": self.step,
            "tol": self.tol,
        }

    def rows(self):
        return zip(self.flagged, self.max_modulus)


def covering_report(ssm: HomogeneousSSM, T: float, eps: float, step: float = 0.25,
                    tol: float | None = None, mode: str | None = None) -> CoveringReport:
    """Unit intervals [k, k+1) in [0, T] where |mu_hat| (plus its error) reaches T**-eps."""
    threshold = T ** (-eps)
    if tol is None:
        tol = min(0.1, threshold / 10)
    if step > 0.25:
        raise SSMError("step must be at most 1/4")
    if tol > threshold / 10 * (1 + 1e-12):
        raise SSMError("tol must be at most T**-eps / 10")
    xi = scan_grid(T, step)
    kmax = int(math.ceil(T))
    best = np.zeros(kmax + 1)
    hit = np.zeros(kmax + 1, dtype=bool)
    for i in range(0, xi.size, _CHUNK):
        x = xi[i:i + _CHUNK]
        v, e = fourier_many(ssm, x, tol)
        mod = np.abs(v)
        k = np.floor(x).astype(np.int64)
        np.maximum.at(best, k, mod)
        hit[k[mod + e >= threshold]] = True
    flagged = np.flatnonzero(hit)
    mode = mode or constants.default_mode(ssm.p)
    et = constants.epsilon_tilde(ssm.a, ssm.p, eps, mode)
    d = constants.delta_from_eps_tilde(ssm.a, et, "stated")
    dc = constants.delta_from_eps_tilde(ssm.a, et, "conservative")
    return CoveringReport(T=float(T), eps=float(eps), threshold=threshold, flagged=flagged,
                          max_modulus=best[flagged], delta=d, delta_conservative=dc,
                          theory_count=T**d, theory_count_conservative=T**dc,
                          step=float(step), tol=float(tol))


@dataclass
class EKDecomposition:
    t: float
    a: float
    r: np.ndarray
    eps: np.ndarray

    @property
    def terms(self) -> list[tuple[int, float]]:
        return list(zip(self.r.tolist(), self.eps.tolist()))


def _digits(t: np.ndarray, a: float, N: int) -> tuple[np.ndarray, np.ndarray]:
    scale = (1.0 / a) ** np.arange(N, dtype=float)
    if not np.isfinite(scale[-1] if N else 0.0) or (N and scale[-1] > 2.0**52):
        raise ResourceError(f"a**-{N - 1} is beyond exact float range")
    x = np.multiply.outer(t, scale)
    r = np.floor(x + 0.5)
    return r, x - r


def decompose(t: float, a: float, N: int) -> EKDecomposition:
    """Nearest-integer split a**-j t = r_j + eps_j, eps_j in [-1/2, 1/2), j = 0..N-1."""
    r, e = _digits(np.array([float(t)]), a, N)
    return EKDecomposition(float(t), float(a), r[0].astype(np.int64), e[0])


def xi_of(a: float) -> float:
    return a / (2 * (a + 1))


def in_s_set(t, a: float, N: int, eps_tilde: float) -> np.ndarray:
    """Membership in S(N, eps_tilde): ||a**-j t|| < xi(a) for at least (1 - eps_tilde) N indices."""
    _, e = _digits(np.atleast_1d(np.asarray(t, dtype=float)), a, N)
    good = (np.abs(e) < xi_of(a)).sum(axis=1)
    return good >= (1.0 - eps_tilde) * N - 1e-12


def s_set_bound(a: float, N: int, eps_tilde: float) -> float:
    """Interval count bound ceil(1+1/a)**(2 eps_tilde N + 1) e**(h N) with (N + 1) binomial slack."""
    et = min(max(eps_tilde, 0.0), 1.0)
    return (constants.ceil_digits(a) ** (2 * et * N + 1)
            * math.exp(constants.entropy(et) * N) * (N + 1))


def s_set_cover_count(a: float, N: int, eps_tilde: float, grid: int | None = None,
                      max_grid: int = 10**8) -> tuple[int, float]:
    """Count length-a**N cells of [0, 1] meeting S(N, eps_tilde) on a midpoint grid."""
    if N < 1:
        raise SSMError("N must be positive")
    cell = a**N
    if grid is None:
        grid = int(math.ceil(10 / cell))
    if grid < 10 / cell * (1 - 1e-12):
        raise SSMError("grid must have at least 10 points per a**N cell")
    if grid > max_grid:
        raise ResourceError(f"grid of {grid} points exceeds the guard of {max_grid}")
    hit = set()
    chunk = max(1, 2**22 // N)
    for i in range(0, grid, chunk):
        t = (np.arange(i, min(grid, i + chunk)) + 0.5) / grid
        inside = in_s_set(t, a, N, eps_tilde)
        hit.update(np.floor(t[inside] / cell).astype(np.int64).tolist())
    return len(hit), s_set_bound(a, N, eps_tilde)

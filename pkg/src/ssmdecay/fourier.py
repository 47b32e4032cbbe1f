"""Fourier transforms of homogeneous self-similar measures.

Convention: ``mu_hat(u) = integral exp(2 pi i u x) dmu(x)``.  All reported
quantities are moduli, so the opposite sign convention gives the same numbers.

The transform is the infinite product ``prod_{n>=1} Phi(a**n u)``.  Truncating
after ``M`` factors leaves a tail whose distance from 1 is at most
``exp(2 pi t_max |u| a**(M+1) / (1 - a)) - 1`` because ``|Phi(v) - 1| <=
2 pi t_max |v|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceError, SSMError
from .measure import HomogeneousSSM, support_bounds

MAX_SCAN_SAMPLES = 10**8
_CHUNK = 1 << 16


def phi(ssm: HomogeneousSSM, u):
    """Characteristic polynomial sum_j p_j exp(2 pi i t_j u); scalar or array."""
    u_arr = np.asarray(u, dtype=float)
    t = np.asarray(ssm.t)
    p = np.asarray(ssm.p)
    val = np.exp(2j * np.pi * u_arr[..., None] * t) @ p
    return complex(val) if u_arr.ndim == 0 else val


def tail_bound(ssm: HomogeneousSSM, u, M):
    """Relative truncation error after keeping M factors of the product."""
    a = ssm.a
    x = 2 * np.pi * ssm.t_max * np.abs(u) * a ** (np.asarray(M) + 1.0) / (1.0 - a)
    return np.expm1(x)


def n_factors(ssm: HomogeneousSSM, u, tol: float) -> np.ndarray:
    """Smallest M >= 0 with tail_bound(u, M) <= tol, elementwise."""
    u = np.abs(np.atleast_1d(np.asarray(u, dtype=float)))
    a = ssm.a
    target = math.log1p(tol) * (1.0 - a) / (2 * np.pi * ssm.t_max)
    M = np.zeros(u.shape, dtype=np.int64)
    pos = u > 0
    with np.errstate(divide="ignore"):
        est = np.ceil(np.log(target / u[pos]) / math.log(a)) - 1
    M[pos] = np.maximum(est, 0).astype(np.int64)
    # the closed form can be off by one in floating point
    for _ in range(3):
        over = tail_bound(ssm, u, M) > tol
        M[over] += 1
        under = (M > 0) & (tail_bound(ssm, u, M - 1) <= tol)
        M[under] -= 1
    return M


def fourier_many(ssm: HomogeneousSSM, u, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized truncated product; returns (values, error bounds)."""
    if not 0 < tol <= 0.1:
        raise SSMError(f"tol must lie in (0, 0.1], got {tol}")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    M = n_factors(ssm, u, tol)
    err = np.where(M > 0, tail_bound(ssm, u, M), 0.0)
    err[u == 0] = 0.0
    val = np.ones(u.shape, dtype=complex)
    if u.size:
        for n in range(1, int(M.max()) + 1):
            live = M >= n
            val[live] *= phi(ssm, ssm.a**n * u[live])
    return val, err


def fourier_transform(ssm: HomogeneousSSM, u: float, tol: float = 1e-9) -> tuple[complex, float]:
    val, err = fourier_many(ssm, [u], tol)
    return complex(val[0]), float(err[0])


def recommended_step(ssm: HomogeneousSSM) -> float:
    """Grid spacing keeping the derivative-driven variation of mu_hat below half a unit of its bound."""
    lo, hi = support_bounds(ssm)
    return 0.5 / (2 * np.pi * max(abs(lo), abs(hi)))


@dataclass(frozen=True, eq=False)
class FrequencyScan:
    xi: np.ndarray
    modulus: np.ndarray
    err: np.ndarray
    T: float
    step: float
    tol: float

    def __len__(self):
        return self.xi.size

    def to_csv(self, path) -> None:
        from .io import write_csv

        write_csv(path, ["xi", "modulus", "err"], zip(self.xi, self.modulus, self.err))


def scan_grid(T: float, step: float) -> np.ndarray:
    if step <= 0:
        raise SSMError("step must be positive")
    if T < 0:
        raise SSMError("T must be non-negative")
    count = math.floor(T / step * (1 + 1e-12)) + 1
    if count > MAX_SCAN_SAMPLES:
        raise ResourceError(f"{count} samples exceeds the guard of {MAX_SCAN_SAMPLES}")
    return np.arange(count) * step


def scan(ssm: HomogeneousSSM, T: float, step: float, tol: float = 1e-9) -> FrequencyScan:
    """Sample |mu_hat| on xi = 0, step, ..., T.  |mu_hat(-xi)| = |mu_hat(xi)|."""
    xi = scan_grid(T, step)
    mod = np.empty(xi.size)
    err = np.empty(xi.size)
    for i in range(0, xi.size, _CHUNK):
        v, e = fourier_many(ssm, xi[i:i + _CHUNK], tol)
        mod[i:i + _CHUNK] = np.abs(v)
        err[i:i + _CHUNK] = e
    return FrequencyScan(xi, mod, err, float(T), float(step), float(tol))

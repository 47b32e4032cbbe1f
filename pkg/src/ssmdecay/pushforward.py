"""Fourier transforms of smooth images F(mu) and power-decay envelope fits.

``F(mu)^(u) = integral exp(2 pi i u F(x)) dmu(x)`` is evaluated on the level-M
atoms of mu.  Moving a point by y changes the phase by at most 2 pi |u| A |y|
with A = sup |F'|, and mu_M atoms sit within a**M diam(supp) of the true mass,
which bounds the error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import constants
from .errors import ResourceError, SSMError
from .mapexpr import SmoothMap
from .measure import HomogeneousSSM, discrete_approximation, support_bounds

MAX_ATOMS = 2**24
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
FIT_FROM_OCTAVE = 4


def _lipschitz(ssm: HomogeneousSSM, F: SmoothMap) -> tuple[float, float]:
    lo, hi = support_bounds(ssm)
    A = F.sup_abs_derivative(lo, hi)
    xs = np.linspace(lo, hi, 4097)
    A = max(A, float(np.max(np.abs(F.derivative()(xs)))))
    return A, hi - lo


def level_for(ssm: HomogeneousSSM, F: SmoothMap, u: float, tol: float) -> tuple[int, float]:
    """Smallest M with 2 pi |u| A a**M diam <= tol, and that error bound."""
    A, diam = _lipschitz(ssm, F)
    c = 2 * math.pi * abs(u) * A * diam
    if c <= tol:
        return 0, c
    M = max(0, math.ceil(math.log(tol / c) / math.log(ssm.a)))
    while c * ssm.a**M > tol:
        M += 1
    while M > 0 and c * ssm.a ** (M - 1) <= tol:
        M -= 1
    return M, c * ssm.a**M


def max_feasible_u(ssm: HomogeneousSSM, F: SmoothMap, tol: float, max_atoms: int = MAX_ATOMS) -> float:
    A, diam = _lipschitz(ssm, F)
    M = int(math.floor(math.log(max_atoms) / math.log(ssm.m) + 1e-9))
    return tol / (2 * math.pi * A * ssm.a**M * diam)


def pushforward_many(ssm: HomogeneousSSM, F: SmoothMap, u, tol: float = 1e-3,
                     max_atoms: int = MAX_ATOMS) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized F(mu)^(u); returns (values, error bounds)."""
    if not 0 < tol <= 0.1:
        raise SSMError(f"tol must lie in (0, 0.1], got {tol}")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    levels = np.empty(u.size, dtype=int)
    err = np.empty(u.size)
    for i, ui in enumerate(u):
        levels[i], err[i] = level_for(ssm, F, ui, tol)
    if u.size and ssm.m ** int(levels.max()) > max_atoms:
        raise ResourceError(
            f"level {levels.max()} needs {ssm.m}**{levels.max()} atoms; "
            f"largest feasible |u| is {max_feasible_u(ssm, F, tol, max_atoms):.6g}")
    out = np.empty(u.size, dtype=complex)
    for M in np.unique(levels):
        idx = np.flatnonzero(levels == M)
        mu = discrete_approximation(ssm, int(M))
        Fx = F(mu.positions)
        chunk = max(1, 2**22 // len(mu))
        for s in range(0, idx.size, chunk):
            j = idx[s:s + chunk]
            out[j] = np.exp(2j * np.pi * np.multiply.outer(u[j], Fx)) @ mu.weights
    return out, err


def pushforward_ft(ssm: HomogeneousSSM, F: SmoothMap, u: float, tol: float = 1e-3) -> tuple[complex, float]:
    v, e = pushforward_many(ssm, F, [u], tol)
    return complex(v[0]), float(e[0])


def ladder_points(a: float, u_max: float) -> np.ndarray:
    """Frequencies m a**-j (1 <= m < 1/a) up to u_max: the measure's own scaling ladder."""
    digits = np.arange(1, math.ceil(1.0 / a - 1e-9))
    pts = []
    j = 0
    while a**-j <= u_max:
        pts.append(digits * a**-j)
        j += 1
    pts = np.concatenate(pts) if pts else np.empty(0)
    return np.unique(pts[pts <= u_max])


@dataclass
class Octave:
    k: int
    u_lo: float
    u_hi: float
    envelope: float
    u_at_max: float


@dataclass
class DecayFit:
    octaves: list[Octave]
    sigma_emp: float
    c_fit: float
    residuals: list[float] = field(default_factory=list)
    fit_from: int = FIT_FROM_OCTAVE

    def rows(self):
        return ((o.k, o.u_lo, o.u_hi, o.envelope) for o in self.octaves)


def octave_points(u_lo: float, u_hi: float, n: int, seed: float = 0.5) -> np.ndarray:
    frac = np.modf(seed + GOLDEN * np.arange(n))[0]
    return u_lo + (u_hi - u_lo) * frac


def octave_envelopes(func: Callable[[np.ndarray], np.ndarray], u_max: float,
                     samples_per_octave: int = 128, extra_points: Sequence[float] = (),
                     seed: float = 0.5) -> list[Octave]:
    """Max of |func| over low-discrepancy samples (plus extra points) in each [2**k, 2**(k+1)).

    Only complete octaves with 2**(k+1) <= u_max are used.
    """
    extra = np.asarray(extra_points, dtype=float)
    bounds = []
    k = 0
    while 2.0 ** (k + 1) <= u_max:
        bounds.append((k, 2.0**k, 2.0 ** (k + 1)))
        k += 1
    pts = []
    for k, lo, hi in bounds:
        p = octave_points(lo, hi, samples_per_octave, seed)
        sel = extra[(extra >= lo) & (extra < hi)]
        pts.append(np.concatenate([p, sel]))
    allu = np.concatenate(pts)
    vals = np.abs(np.asarray(func(allu)))
    out, start = [], 0
    for (k, lo, hi), p in zip(bounds, pts):
        v = vals[start:start + p.size]
        i = int(np.argmax(v))
        out.append(Octave(k, lo, hi, float(v[i]), float(p[i])))
        start += p.size
    return out


def fit_envelope(octaves: list[Octave], fit_from: int = FIT_FROM_OCTAVE) -> DecayFit:
    """Least-squares fit of log envelope = log C - sigma log u over octaves k >= fit_from."""
    use = [o for o in octaves if o.k >= fit_from and o.envelope > 0]
    if len(use) < 2:
        raise SSMError("need at least two octaves beyond the transient range")
    x = np.log([o.u_at_max for o in use])
    y = np.log([o.envelope for o in use])
    slope, intercept = np.polyfit(x, y, 1)
    res = y - (slope * x + intercept)
    return DecayFit(octaves, float(-slope), float(math.exp(intercept)), res.tolist(), fit_from)


def decay_fit(ssm: HomogeneousSSM, F: SmoothMap, u_max: float = 1e5, samples_per_octave: int = 128,
              tol: float = 1e-3, ladder: bool = True) -> DecayFit:
    """Empirical decay exponent of |F(mu)^| from per-octave envelopes.

    With ``ladder`` the measure's scaling ladder m a**-j is added to the
    samples; it is where the transform of mu itself stays large.
    """
    if u_max < 2**8:
        raise SSMError("u_max must be at least 2**8")
    if samples_per_octave < 64:
        raise SSMError("need at least 64 samples per octave")
    extra = ladder_points(ssm.a, u_max) if ladder else ()
    octs = octave_envelopes(lambda u: pushforward_many(ssm, F, u, tol)[0], u_max,
                            samples_per_octave, extra)
    return fit_envelope(octs)


def kaufman_verify(ssm: HomogeneousSSM, F: SmoothMap, s: Optional[float] = None, u_max: float = 1e5,
                   mode: Optional[str] = None, samples_per_octave: int = 128, tol: float = 1e-3,
                   slack: float = 0.005, check_convex: bool = True) -> dict:
    """Compare the empirical decay of F(mu)^ with the effective exponent from kaufman_sigma.

    ``pass`` is set when sigma_emp >= sigma_theory - slack.  The fitted
    prefactor is a diagnostic only.
    """
    if check_convex:
        lo, hi = support_bounds(ssm)
        F.check_convex(lo, hi)
    mode = mode or constants.default_mode(ssm.p)
    if s is None:
        s, _ = constants.frostman_exponent_osc(ssm.a, ssm.p)
    eps_star, sigma_theory = constants.kaufman_sigma(ssm.a, ssm.p, s, mode)
    fit = decay_fit(ssm, F, u_max, samples_per_octave, tol)
    return {
        "sigma_emp": fit.sigma_emp,
        "c_fit": fit.c_fit,
        "sigma_theory": sigma_theory,
        "eps_star": eps_star,
        "s": s,
        "mode": mode,
        "pass": bool(fit.sigma_emp >= sigma_theory - slack),
        "fit": fit,
    }

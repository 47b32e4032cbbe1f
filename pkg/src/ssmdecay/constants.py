"""Closed-form effective constants of the Erdos-Kahane / Kaufman chain.

Natural logarithms throughout.  ``mode`` selects the decay constant ``eta``:

* ``"lemma"``  -- ``p1 + p2 - sqrt(p1**2 + 2 p1 p2 cos(pi c) + p2**2)``, valid for
  any normalized alphabet (t1 = 0, t2 = 1);
* ``"remark"`` -- ``1 - cos(pi c)``, the two-atom equal-weight shortcut.  It is
  larger than the lemma value for the normalized {0, 1} alphabet, and is the one
  behind the published Cantor constant sigma = 0.016.

``variant`` selects the coefficient of ``eps_tilde`` in ``delta``: ``"stated"``
uses ``log(ceil(1 + 1/a))``, ``"conservative"`` doubles it, matching the count of
admissible digit sequences ``ceil(1 + 1/a) ** (2 eps_tilde N + 1)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Callable, Optional

from .errors import InfeasibleError, ModeError, SSMError, ValidityError

BISECT_TOL = 1e-10
BISECT_MAXITER = 200
EPS_TILDE_MAX = 0.5
MODES = ("lemma", "remark")
VARIANTS = ("stated", "conservative")


def _weights(p) -> tuple[float, ...]:
    if isinstance(p, (int, float)):
        return (1.0 - float(p), float(p))
    return tuple(float(v) for v in p)


def default_mode(p) -> str:
    p = _weights(p)
    if len(p) == 2 and abs(p[0] - 0.5) < 1e-12 and abs(p[1] - 0.5) < 1e-12:
        return "remark"
    return "lemma"


def entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise SSMError(f"entropy needs x in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log(x) - (1.0 - x) * math.log1p(-x)


def eta(c: float, p, mode: str = "lemma") -> float:
    """Uniform gap 1 - sup|Phi(y)| over y at distance > c/2 from the integers."""
    p = _weights(p)
    if mode == "remark":
        if len(p) != 2 or abs(p[0] - 0.5) > 1e-12 or abs(p[1] - 0.5) > 1e-12:
            raise ModeError("remark mode needs p = (1/2, 1/2)")
        return 1.0 - math.cos(math.pi * c)
    if mode != "lemma":
        raise ModeError(f"unknown eta mode {mode!r}")
    p1, p2 = p[0], p[1]
    rad = p1 * p1 + 2 * p1 * p2 * math.cos(math.pi * c) + p2 * p2
    return p1 + p2 - math.sqrt(max(rad, 0.0))


def ceil_digits(a: float) -> int:
    """ceil(1 + 1/a), tolerant to a being a rounded decimal such as 0.333333333333."""
    x = 1.0 + 1.0 / a
    r = round(x)
    if abs(x - r) <= 1e-9 * x:
        return int(r)
    return math.ceil(x)


def eps_tilde_slope(a: float, p, mode: str) -> float:
    """The factor log(a) / log(1 - eta(a/(a+1), p))."""
    e = eta(a / (a + 1.0), p, mode)
    if not 0.0 < e < 1.0:
        raise ValidityError(f"eta = {e} gives no decay")
    return math.log(a) / math.log1p(-e)


def epsilon_tilde(a: float, p, eps: float, mode: str = "lemma") -> float:
    et = eps_tilde_slope(a, p, mode) * eps
    if et >= EPS_TILDE_MAX:
        raise ValidityError(f"eps_tilde = {et:.6g} is not below {EPS_TILDE_MAX}")
    return et


def delta_from_eps_tilde(a: float, et: float, variant: str = "stated") -> float:
    if variant not in VARIANTS:
        raise ModeError(f"unknown delta variant {variant!r}")
    coef = math.log(ceil_digits(a)) * (2.0 if variant == "conservative" else 1.0)
    return (coef * et + entropy(et)) / math.log(1.0 / a)


def delta(a: float, p, eps: float, mode: str = "lemma", variant: str = "stated") -> float:
    """Covering exponent: |mu_hat| >= T**-eps on [-T, T] needs ~T**delta unit intervals."""
    return delta_from_eps_tilde(a, epsilon_tilde(a, p, eps, mode), variant)


def eps_max(a: float, p, mode: str) -> float:
    """Supremum of eps for which eps_tilde stays below its validity bound."""
    return EPS_TILDE_MAX / eps_tilde_slope(a, p, mode)


def bisect_decreasing(f: Callable[[float], float], lo: float, hi: float,
                      tol: float = BISECT_TOL, maxiter: int = BISECT_MAXITER) -> float:
    """Root of a strictly decreasing f with f(lo) > 0 > f(hi)."""
    flo, fhi = f(lo), f(hi)
    if not (flo > 0 > fhi):
        raise InfeasibleError(f"no sign change on [{lo}, {hi}]: f = {flo:.6g}, {fhi:.6g}")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            break
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _upper(a, p, mode):
    # stay strictly inside the validity range so delta() never raises
    return eps_max(a, p, mode) * (1.0 - 1e-12)


def kaufman_sigma(a: float, p, s: float, mode: Optional[str] = None,
                  variant: str = "stated") -> tuple[float, float]:
    """Balance eps against s - delta(eps); returns (eps_star, eps_star / 3)."""
    mode = mode or default_mode(p)
    if not 0.0 < s <= 1.0:
        raise InfeasibleError(f"Frostman exponent must lie in (0, 1], got {s}")
    G = lambda e: s - delta(a, p, e, mode, variant) - e
    eps_star = bisect_decreasing(G, 0.0, _upper(a, p, mode))
    return eps_star, eps_star / 3.0


def flattening_sigma(a: float, p, kappa: float, mode: Optional[str] = None,
                     variant: str = "stated") -> tuple[float, float]:
    """Solve kappa - 2 eps = delta(eps); returns (eps, 2 eps)."""
    mode = mode or default_mode(p)
    if not 0.0 < kappa < 1.0:
        raise InfeasibleError(f"kappa must lie in (0, 1), got {kappa}")
    f = lambda e: kappa - 2 * e - delta(a, p, e, mode, variant)
    eps = bisect_decreasing(f, 0.0, _upper(a, p, mode))
    return eps, 2 * eps


def frostman_exponent_osc(a: float, p) -> tuple[float, bool]:
    """min_i log p_i / log a under the open set condition; returns (s, capped)."""
    s = min(math.log(pi) / math.log(a) for pi in _weights(p))
    if s > 1.0:
        warnings.warn(f"Frostman exponent {s:.6g} exceeds 1, capped", stacklevel=2)
        return 1.0, True
    return s, False


def n_a(a: float) -> int:
    """Smallest n >= 1 with a**n < 1/2."""
    if not 0.0 < a < 1.0:
        raise SSMError("a must lie in (0, 1)")
    n = max(1, math.ceil(math.log(0.5) / math.log(a)))
    while n > 1 and a ** (n - 1) < 0.5:
        n -= 1
    while a**n >= 0.5:
        n += 1
    return n


def _bernoulli_setup(a: float):
    if not 0.5 <= a < 1.0:
        raise ValidityError(f"Bernoulli bounds need 1/2 <= a < 1, got {a}")
    N = n_a(a)
    if N < 2:
        raise ValidityError("Bernoulli bounds need N_a >= 2")
    return N, a**N


def bernoulli_dim2_bound(a: float, p: float = 0.5, mode: Optional[str] = None,
                         variant: str = "stated") -> float:
    """Lower bound for dim_2 of the biased Bernoulli convolution nu_a^p.

    Splits nu_a^p into N_a scaled copies of nu_{a^N}^p and requires the
    flattening gain per copy to be 1/(N - 1); the matching kappa is
    2 eps + delta(a^N, eps) with eps = 1 / (2 (N - 1)).
    """
    w = _weights(p)
    mode = mode or default_mode(w)
    N, aN = _bernoulli_setup(a)
    eps = 1.0 / (2 * (N - 1))
    kappa = 2 * eps + delta(aN, w, eps, mode, variant)
    return max(0.0, 1.0 - kappa)


def bernoulli_dim2_bound_unbiased(a: float, mode: Optional[str] = None,
                                  variant: str = "stated") -> float:
    """Lower bound for dim_2 of the unbiased Bernoulli convolution.

    The copies now only need to close the gap log(1/a)/log(2/a) left by the
    open-set baseline, so the per-copy gain is that gap divided by N - 1.
    """
    return unbiased_details(a, mode, variant)["bound"]


def unbiased_details(a: float, mode: Optional[str] = None, variant: str = "stated") -> dict:
    w = (0.5, 0.5)
    mode = mode or default_mode(w)
    N, aN = _bernoulli_setup(a)
    gap = math.log(1.0 / a) / math.log(2.0 / a)
    sigma = gap / (N - 1)
    kappa = sigma + delta(aN, w, sigma / 2, mode, variant)
    return {
        "n_a": N,
        "a_n": aN,
        "baseline": math.log(0.5) / math.log(aN),
        "baseline_lower": 1.0 - gap,
        "sigma": sigma,
        "kappa": kappa,
        "bound": max(0.0, 1.0 - kappa),
    }


def bernoulli_diminf_bound(a: float, p: float = 0.5, mode: Optional[str] = None,
                           variant: str = "stated", unbiased: bool = False) -> float:
    """Frostman-exponent bound: nu_a = nu_{a^2} * S_a nu_{a^2} and Young's inequality."""
    if unbiased:
        return bernoulli_dim2_bound_unbiased(a * a, mode, variant)
    return bernoulli_dim2_bound(a * a, p, mode, variant)


@dataclass
class ConstantsReport:
    eta: float
    eps_tilde: float
    delta: float
    eps_star: float
    sigma: float
    kappa: Optional[float]
    s: float
    n_a: int
    mode: str
    variant: str
    flattening_eps: Optional[float] = None
    flattening_sigma: Optional[float] = None
    delta_conservative: Optional[float] = None

    def to_dict(self) -> dict:
        return asdict(self)


def constants_report(a: float, p, s: Optional[float] = None, kappa: Optional[float] = None,
                     mode: Optional[str] = None, variant: str = "stated") -> ConstantsReport:
    """All scalar constants for one parameter set; ``s=None`` uses the OSC formula."""
    w = _weights(p)
    mode = mode or default_mode(w)
    if s is None:
        s, _ = frostman_exponent_osc(a, w)
    eps_star, sigma = kaufman_sigma(a, w, s, mode, variant)
    et = epsilon_tilde(a, w, eps_star, mode)
    rep = ConstantsReport(
        eta=eta(a / (a + 1.0), w, mode),
        eps_tilde=et,
        delta=delta_from_eps_tilde(a, et, variant),
        eps_star=eps_star,
        sigma=sigma,
        kappa=kappa,
        s=s,
        n_a=n_a(a),
        mode=mode,
        variant=variant,
        delta_conservative=delta_from_eps_tilde(a, et, "conservative"),
    )
    if kappa is not None:
        rep.flattening_eps, rep.flattening_sigma = flattening_sigma(a, w, kappa, mode, variant)
    return rep

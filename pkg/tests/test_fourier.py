import math

import numpy as np
import pytest

from ssmdecay.errors import ResourceError, SSMError
from ssmdecay.fourier import fourier_many, fourier_transform, n_factors, phi, scan, tail_bound
from ssmdecay.measure import HomogeneousSSM, discrete_approximation

# infinite product of |cos(pi 3**-m)|, m = 1..50: the Cantor transform at powers of 3
CANTOR_NONDECAY = float(np.prod(np.cos(np.pi * 3.0 ** -np.arange(1, 51))))

SSMS = [
    HomogeneousSSM(1 / 3, (0, 1), (0.5, 0.5)),
    HomogeneousSSM(0.45, (0, 1, 3), (0.2, 0.5, 0.3)),
    HomogeneousSSM(0.7, (0, 1), (0.3, 0.7)),
]


def test_phi_values(cantor):
    assert phi(cantor, 0.0) == pytest.approx(1.0)
    assert abs(phi(cantor, 0.5)) < 1e-15
    rng = np.random.default_rng(0)
    u = rng.uniform(-1e3, 1e3, 10_000)
    for ssm in SSMS:
        assert np.all(np.abs(phi(ssm, u)) <= 1 + 1e-12)


def test_transform_at_zero(cantor):
    assert fourier_transform(cantor, 0.0, 1e-9) == (1.0, 0.0)


def test_cantor_nondecay(cantor):
    assert CANTOR_NONDECAY == pytest.approx(0.4663, abs=1e-4)
    for k in range(1, 11):
        v, err = fourier_transform(cantor, 3.0**k, 1e-12)
        assert abs(v) == pytest.approx(CANTOR_NONDECAY, abs=1e-9)


def test_tail_bound_is_minimal():
    ssm = SSMS[1]
    u = np.array([0.3, 5.0, 1e3, 1e6])
    tol = 1e-9
    M = n_factors(ssm, u, tol)
    assert np.all(tail_bound(ssm, u, M) <= tol)
    assert np.all(tail_bound(ssm, u, M - 1) > tol)


@pytest.mark.parametrize("ssm", SSMS)
def test_atom_sum_equals_finite_product(ssm):
    """mu_N is the convolution of N two-point layers, so its transform is the N-term product."""
    N = 12 if ssm.m == 2 else 8
    mu = discrete_approximation(ssm, N)
    u = np.array([0.7, 3.3, 12.0, 150.0])
    prod = np.ones(u.size, dtype=complex)
    for n in range(1, N + 1):
        prod *= phi(ssm, ssm.a**n * u)
    np.testing.assert_allclose(mu.fourier(u), prod, atol=1e-12)


@pytest.mark.parametrize("ssm", SSMS)
def test_truncation_bound_against_deep_product(ssm):
    u = np.array([0.7, 3.3, 12.0, 150.0, 4.1e4])
    tol = 1e-4
    vals, err = fourier_many(ssm, u, tol)
    deep = np.ones(u.size, dtype=complex)
    for n in range(1, 200):
        deep *= phi(ssm, ssm.a**n * u)
    assert np.all(err <= tol)
    assert np.all(np.abs(deep - vals) <= np.abs(vals) * err + 1e-15)


@pytest.mark.parametrize("ssm", SSMS)
def test_functional_equation_and_symmetry(ssm):
    rng = np.random.default_rng(1)
    u = rng.uniform(-1e6, 1e6, 1000)
    tol = 1e-9
    v, _ = fourier_many(ssm, u, tol)
    va, _ = fourier_many(ssm, ssm.a * u, tol)
    assert np.max(np.abs(v - phi(ssm, ssm.a * u) * va)) <= 3 * tol
    vm, _ = fourier_many(ssm, -u, tol)
    assert np.max(np.abs(vm - np.conj(v))) <= 2 * tol
    assert np.all(np.abs(v) <= 1 + tol)


def test_scan_contract(cantor):
    sc = scan(cantor, 10, 1, 1e-9)
    assert len(sc) == 11
    assert sc.modulus[0] == 1.0
    assert np.all(np.diff(sc.xi) > 0)
    assert np.all(sc.err <= sc.tol)


def test_scan_near_powers_of_three(cantor):
    sc = scan(cantor, 3.0**8 + 1, 0.25, 1e-9)
    for k in range(1, 9):
        win = (sc.xi >= 3**k - 0.5) & (sc.xi <= 3**k + 0.5)
        assert sc.modulus[win].max() >= 0.46


def test_scan_guards(cantor):
    with pytest.raises(ResourceError):
        scan(cantor, 1e9, 1e-2)
    with pytest.raises(SSMError):
        scan(cantor, 10, 0)
    with pytest.raises(SSMError):
        fourier_transform(cantor, 1.0, 0.5)


def test_scan_csv(tmp_path, uniform):
    path = tmp_path / "s.csv"
    scan(uniform, 4, 0.5, 1e-9).to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "xi,modulus,err"
    assert len(lines) == 10
    # sinc(pi xi) oracle for the uniform measure on [0, 1]
    xi, mod, _ = (float(v) for v in lines[2].split(","))
    assert mod == pytest.approx(abs(math.sin(math.pi * xi) / (math.pi * xi)), abs=1e-9)

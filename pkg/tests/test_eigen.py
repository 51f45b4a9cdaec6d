"""Dense and iterative eigensolvers against each other and closed forms."""

import numpy as np
import pytest

from igawave.assembly_1d import (
    assemble_mass,
    assemble_stiffness,
    build_penalties,
    kappa_variant,
    penalized_forms,
)
from igawave.eigen import full_spectrum, max_eigenvalue
from igawave.quadrature import gauss_legendre
from igawave.spline_basis import open_uniform_knots

ONE = kappa_variant("one")


def system(p, N, coeff=ONE, penalized=False):
    kv = open_uniform_knots(p, N)
    rule = gauss_legendre(p + 1 if coeff.smooth_polynomial else p + 3)
    M = assemble_mass(kv, rule)
    K = assemble_stiffness(kv, rule, coeff)
    if penalized:
        pen = build_penalties(kv, rule=rule)
        M, K = penalized_forms(M, K, pen, kv.h)
    return M, K


def power_on(M, K, **kw):
    solve = M.factor()
    return max_eigenvalue(K.matvec, solve, M.n, apply_M=M.matvec, **kw)


def test_diagonal_example():
    K = np.diag([1.0, 2.0, 3.0])
    M = np.eye(3)
    res = max_eigenvalue(
        lambda v: K @ v, lambda b: b, 3, apply_M=lambda v: v
    )
    assert res.value == pytest.approx(3.0, rel=1e-10)
    assert res.converged


def test_identical_pair_gives_one():
    rng = np.random.default_rng(12)
    a = rng.standard_normal((6, 6))
    spd = a @ a.T + 6 * np.eye(6)
    inv = np.linalg.inv(spd)
    res = max_eigenvalue(
        lambda v: spd @ v, lambda b: inv @ b, 6, apply_M=lambda v: spd @ v
    )
    assert res.value == pytest.approx(1.0, rel=1e-10)


def test_linear_dispersion_closed_form():
    """Hat-function eigenvalues follow the classical dispersion relation."""
    N = 20
    h = 1.0 / N
    M, K = system(1, N)
    vals = full_spectrum(K, M).eigenvalues
    k = np.arange(1, N)
    theta = k * np.pi * h
    exact = 12.0 * (1 - np.cos(theta)) / (h**2 * (4 + 2 * np.cos(theta)))
    np.testing.assert_allclose(vals, np.sort(exact), rtol=1e-10)
    assert abs(vals[-1] - 12.0 / h**2) / (12.0 / h**2) < 0.02


def test_cubic_five_elements_max():
    M, K = system(3, 5)
    assert full_spectrum(K, M).max == pytest.approx(402.8, rel=5e-3)


def test_dense_and_power_agree():
    for p, N, coeff, pen in [
        (3, 10, ONE, False),
        (4, 8, kappa_variant("exp"), False),
        (5, 10, ONE, True),
        (6, 10, ONE, True),
    ]:
        M, K = system(p, N, coeff, pen)
        lam = full_spectrum(K, M).max
        res = power_on(M, K, tol=1e-13, max_iter=200_000)
        assert abs(res.value - lam) / lam < 1e-8
        assert res.residual < 1e-6


def test_penalized_spectrum_dominated():
    for p in (3, 4, 5, 6):
        for N in (5, 10):
            M, K = system(p, N)
            Mt, Kt = system(p, N, penalized=True)
            lam = full_spectrum(K, M)
            lamt = full_spectrum(Kt, Mt)
            assert lamt.max <= lam.max * (1 + 1e-12)
            assert np.all(lamt.eigenvalues <= lamt.max * (1 + 1e-12))
            # penalization must leave the accurate low modes essentially
            # alone; the low third moves by under 1e-4 even at N=5
            n_low = max(1, len(lam.eigenvalues) // 3)
            np.testing.assert_allclose(
                lamt.eigenvalues[:n_low], lam.eigenvalues[:n_low], rtol=1e-4
            )


def test_deterministic_restarts():
    M, K = system(4, 10)
    r1 = power_on(M, K)
    r2 = power_on(M, K)
    assert r1.value == r2.value
    assert r1.iterations == r2.iterations


def test_nonconvergence_is_flagged():
    M, K = system(3, 10)
    res = power_on(M, K, tol=1e-15, max_iter=3)
    assert not res.converged
    assert res.iterations == 3


def test_single_vector_block_still_works():
    M, K = system(3, 8)
    lam = full_spectrum(K, M).max
    res = power_on(M, K, block=1, tol=1e-12, max_iter=200_000)
    assert abs(res.value - lam) / lam < 1e-6


def test_residual_reported_by_full_spectrum():
    M, K = system(3, 12)
    out = full_spectrum(K, M)
    assert out.top_residual < 1e-8
    assert out.frequencies[-1] == pytest.approx(np.sqrt(out.max))


def test_dense_size_limit():
    big = np.eye(2001)
    with pytest.raises(ValueError):
        full_spectrum(big, big)


def test_tolerance_validation():
    M, K = system(3, 5)
    with pytest.raises(ValueError):
        power_on(M, K, tol=0.0)

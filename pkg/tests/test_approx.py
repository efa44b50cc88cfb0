import numpy as np
import pytest

from whitham_cap.approx import (SolveConfig, W0_defect, approx_eigs, build_ANT, build_W0,
                                jacobian, kdv_seed, newton_refine, residual, spectral_matrix)
from whitham_cap.errors import AssumptionViolated


def l2(F):
    return float(np.sqrt(F[0] ** 2 + 2 * np.sum(F[1:] ** 2)))


def test_seed_is_positive_for_supercritical_gravity_waves():
    cfg = SolveConfig(50.0, 200, 0.0, 1.05)
    seed = kdv_seed(cfg)
    assert seed[0] > 0
    assert l2(residual(seed, cfg)) < 1.0


def test_zero_is_a_fixed_point():
    cfg = SolveConfig(10.0, 16, 0.0, 1.1)
    assert np.all(residual(np.zeros(17), cfg) == 0.0)


def test_newton_converges_quadratically():
    cfg = SolveConfig(30.0, 200, 0.0, 1.1, newton_tol=1e-13)
    U, rep = newton_refine(kdv_seed(cfg), cfg)
    assert rep.converged
    r = rep.residuals
    assert len(r) >= 4
    # r_{i+1} <= C r_i^2 with one constant over the last three steps
    for prev, nxt in zip(r[-4:-1], r[-3:]):
        assert nxt <= 1e3 * prev**2 + 1e-15


def test_inverse_of_zero_wave_is_diagonal():
    cfg = SolveConfig(10.0, 20, 0.5, 0.8)
    A = build_ANT(np.zeros(21), cfg)
    assert np.allclose(A, np.diag(1.0 / np.diag(jacobian(np.zeros(21), cfg))))


def test_W0_trivial_and_constant_cases():
    W = build_W0(np.zeros(10), 1.1)
    assert W[0] == pytest.approx(1.0) and np.allclose(W[1:], 0.0)
    k = 0.2
    U = np.zeros(10)
    U[0] = k
    W = build_W0(U, 1.1)
    assert W[0] == pytest.approx(1.0 / (1.0 - 2 * k / 1.1))


def test_W0_refuses_large_waves():
    U = np.zeros(10)
    U[0] = 0.6
    with pytest.raises(AssumptionViolated):
        build_W0(U, 1.1)


def test_spectral_matrix_is_symmetric_and_flips_sign():
    cfg = SolveConfig(20.0, 80, 0.0, 1.1)
    U, _ = newton_refine(kdv_seed(cfg), cfg)
    A = spectral_matrix(U, 0.0, 1.1, 20.0, 80)
    assert np.array_equal(A, A.T)
    # on even vectors the exponential matrix acts like the cosine Jacobian divided by -L_nu
    N = 80
    v = np.zeros(N + 1)
    v[3] = 1.0
    full = np.concatenate([v[::-1], v[1:]])
    out = (A @ full)[N:]
    xi = np.pi * np.arange(N + 1) / 20.0
    lnu = 1.0 + (4.0 / np.pi**2) * xi**2
    ref = -(jacobian(U, cfg) @ v) / lnu
    assert np.allclose(out, ref, atol=1e-13)


def test_spectrum_of_zero_wave_is_the_symbol():
    d, N, T, c = 10.0, 20, 0.5, 0.8
    pairs = approx_eigs(np.zeros(N + 1), T, c, d, N, count=3)
    xi = np.pi * np.arange(-N, N + 1) / d
    sym = np.sqrt(np.where(xi == 0, 1.0, np.tanh(xi) / np.where(xi == 0, 1, xi)) * (1 + T * xi**2)) - c
    assert pairs[0][0] == pytest.approx(np.sort(sym)[0])


def test_translation_mode_and_single_negative_eigenvalue():
    d, N, T, c = 30.0, 200, 0.0, 1.1
    cfg = SolveConfig(d, N, T, c)
    U, _ = newton_refine(kdv_seed(cfg), cfg)
    pairs = approx_eigs(U, T, c, d, N, count=3)
    lams = [p[0] for p in pairs]
    assert sum(lam < -0.01 for lam in lams) == 1
    lam0, v = pairs[1]
    assert abs(lam0) < 1e-8
    assert np.allclose(v, -v[::-1])
    assert W0_defect(build_W0(U, c), U, c) < 0.05

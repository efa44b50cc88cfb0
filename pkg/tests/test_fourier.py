import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from whitham_cap.errors import MissingStripCertificate
from whitham_cap.fourier import (CosineSeq, ExpSeq, apply_multiplier, boundary_derivative_sq,
                                 conv_even, conv_full, cosh_coeffs, cosh_inner,
                                 derivative_cos_to_exp, inner_weighted, trace_project,
                                 trace_project_exp, trace_values_cos, trace_values_exp,
                                 weighted_op_norm)
from whitham_cap.rigor import Interval
from whitham_cap.symbols import SymbolParams

coef = st.floats(-2.0, 2.0, allow_nan=False)


def cos_eval(a, d, x):
    n = np.arange(len(a))
    w = np.where(n == 0, 1.0, 2.0)
    return np.cos(np.pi * np.outer(x, n) / d) @ (w * a)


def test_identity_element():
    U = CosineSeq.from_floats(2.0, [0.3, -0.2, 0.1])
    E = CosineSeq.unit(2.0)
    P = conv_even(E, U)
    assert np.allclose(P.mid()[:3], U.mid())
    assert np.all(P.coeffs.contains(np.array([0.3, -0.2, 0.1])))


def test_two_mode_square():
    a0, a1 = 0.7, -0.3
    P = conv_even(CosineSeq.from_floats(1.0, [a0, a1]), CosineSeq.from_floats(1.0, [a0, a1]))
    expect = [a0 * a0 + 2 * a1 * a1, 2 * a0 * a1, a1 * a1]
    for k in range(3):
        assert P.coeffs[k].lo <= expect[k] <= P.coeffs[k].hi or abs(float(P.coeffs[k].mid()) - expect[k]) < 1e-16


@given(st.lists(coef, min_size=1, max_size=7), st.lists(coef, min_size=1, max_size=7),
       st.floats(1.0, 20.0))
def test_conv_even_matches_product_quadrature(a, b, d):
    a, b = np.array(a), np.array(b)
    P = conv_even(CosineSeq.from_floats(d, a), CosineSeq.from_floats(d, b))
    M = 64
    x = -d + 2 * d * np.arange(M) / M
    prod = cos_eval(a, d, x) * cos_eval(b, d, x)
    n = np.arange(len(P.coeffs))
    oracle = (np.cos(np.pi * np.outer(n, x) / d) @ prod) / M
    scale = 1e-12 * (1 + np.abs(a).sum() * np.abs(b).sum() * 4)
    assert np.all(P.coeffs.lo - scale <= oracle)
    assert np.all(oracle <= P.coeffs.hi + scale)


@given(st.lists(coef, min_size=1, max_size=7), st.floats(1.0, 20.0))
def test_parseval(a, d):
    a = np.array(a)
    U = CosineSeq.from_floats(d, a)
    M = 64
    x = -d + 2 * d * np.arange(M) / M
    l2sq = np.sum(cos_eval(a, d, x) ** 2) * (2 * d / M)
    lhs = 2 * d * U.norm2().sqr()
    tol = 1e-12 * (1 + l2sq)
    assert float(lhs.lo) - tol <= l2sq <= float(lhs.hi) + tol


def test_norms_of_small_sequences():
    assert inner_weighted(CosineSeq.unit(1.0), CosineSeq.unit(1.0)).contains(1.0)
    U = CosineSeq.from_floats(1.0, [1.0, 1.0])
    assert U.norm2().sqr().contains(3.0)


def test_conv_full_matches_even_case():
    U = CosineSeq.from_floats(3.0, [0.5, 0.25, -0.125])
    F = conv_full(U.full(), U.full())
    E = conv_even(U, U)
    assert np.allclose(F.mid()[F.N:], E.mid())


def test_cosh_coefficient_zero_mode():
    E = cosh_coeffs(1.0, 1.0, 4)
    val = Interval(np.exp(2.0)) * E.coeffs[0]
    assert abs(float(val.mid()) - float(mpmath.sinh(2) / 2)) < 1e-12


def test_cosh_coefficients_alternate_and_decay():
    E = cosh_coeffs(0.5, 10.0, 400).mid()
    assert np.all(np.sign(E[::2]) > 0) and np.all(np.sign(E[1::2]) < 0)
    assert abs(E[400] / E[200] - 0.25) < 1e-3


@given(st.floats(0.05, 1.5), st.floats(1.0, 8.0), st.integers(0, 30))
def test_cosh_coefficients_match_quadrature(beta, d, n):
    xi = np.pi * n / d
    tol = 1e-9 * np.exp(2 * beta * d) / d
    # even integrand; the cosine-weighted rule avoids cancellation at large n
    val, err = integrate.quad(lambda x: np.cosh(2 * beta * x), 0, d, weight="cos", wvar=xi,
                              limit=200, epsabs=1e-3 * tol * d, epsrel=1e-12)
    true = val / d
    assert err < 1e-2 * tol * d
    E = cosh_coeffs(beta, d, n).coeffs[n] * Interval(np.exp(2 * beta * d))
    assert float(E.lo) - tol <= true <= float(E.hi) + tol


def test_trace_projection_small_case():
    p = SymbolParams(0.0, 1.1)
    U = trace_project(CosineSeq.from_floats(np.pi, [1.0, 1.0] + [0.0] * 6), p)
    tv = trace_values_cos(U)
    assert np.all(tv.contains(0.0))
    assert np.all(np.abs(tv.mid()) < 1e-12)


def test_trace_projection_is_idempotent():
    p = SymbolParams(0.0, 1.1)
    U = trace_project(CosineSeq.from_floats(5.0, np.exp(-np.arange(20) / 3.0)), p)
    V = trace_project(CosineSeq.from_floats(5.0, U.mid()), p)
    assert np.max(np.abs(V.mid() - U.mid())) < 1e-13


@pytest.mark.parametrize("parity", [1.0, -1.0])
def test_exponential_trace_projection(parity):
    N = 12
    k = np.arange(-N, N + 1)
    v = np.exp(-np.abs(k) / 4.0) * np.where(k < 0, parity, 1.0)
    if parity < 0:
        v[N] = 0.0
    V = trace_project_exp(ExpSeq.from_floats(4.0, v), np.ones(2 * N + 1))
    assert np.all(trace_values_exp(V).contains(0.0))


def test_exponential_projection_rejects_mixed_parity():
    v = np.arange(9, dtype=float)
    with pytest.raises(ValueError):
        trace_project_exp(ExpSeq.from_floats(2.0, v), np.ones(9))


def test_multipliers():
    p = SymbolParams(0.0, 1.1)
    U = CosineSeq.from_floats(4.0, [0.3, 0.2, 0.1])
    back = apply_multiplier("Lnu", U, p)
    back = CosineSeq(4.0, back.coeffs / apply_multiplier("Lnu", CosineSeq.from_floats(4.0, [1.0] * 3), p).coeffs)
    assert np.all(back.coeffs.contains(U.mid()))
    Le = apply_multiplier("L", CosineSeq.unit(4.0), p)
    assert abs(float(Le.coeffs[0].mid()) + 0.1) < 1e-15
    D = derivative_cos_to_exp(CosineSeq.from_floats(4.0, [2.0, 0.0]))
    assert np.all(D.coeffs.mid() == 0.0)
    with pytest.raises(MissingStripCertificate):
        apply_multiplier("Linv", U, p)


def test_weighted_norm_identity():
    assert abs(float(weighted_op_norm(Interval(np.eye(6))).hi) - 1.0) < 1e-12


def _quad_weighted(a, d, beta):
    f = lambda x: cos_eval(a, d, np.array([x]))[0] ** 2 * np.cosh(2 * beta * x)
    val, _ = integrate.quad(f, -d, d, limit=400)
    return val


@given(st.lists(coef, min_size=3, max_size=6), st.floats(0.1, 0.8))
def test_cosh_inner_is_an_upper_bound(a, beta):
    d = 3.0
    a = np.array(a)
    U = CosineSeq.from_floats(d, a)
    # (U, E U) times 2d e^{2 beta d} is the weighted L2 integral
    true = _quad_weighted(a, d, beta)
    bound = float(cosh_inner(U, beta).hi) * 2 * d * np.exp(2 * beta * d)
    assert bound >= true * (1 - 1e-8) - 1e-12


def test_boundary_derivative_integral():
    d = 3.0
    a = np.array([0.2, -0.1, 0.05, 0.3])
    U = CosineSeq.from_floats(d, a)
    n = np.arange(len(a))
    w = np.where(n == 0, 1.0, 2.0)
    der = lambda x: (-(np.pi * n / d) * np.sin(np.pi * n * x / d)) @ (w * a)
    true, _ = integrate.quad(lambda x: der(x) ** 2, d - 1, d)
    b = float(boundary_derivative_sq(U).hi)
    assert true * (1 - 1e-10) <= b <= true * 1.01 + 1e-12

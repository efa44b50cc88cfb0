import math

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from whitham_cap.errors import BranchCutError, DomainError
from whitham_cap.rigor import (ComplexBox, Interval, cbox_sqrt, isum, ival_elem,
                               mat_norm2_upper)

mpmath.mp.prec = 200

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)


def inside(x: Interval, exact) -> bool:
    return mpmath.mpf(float(x.lo)) <= exact <= mpmath.mpf(float(x.hi))


@st.composite
def boxes(draw, lo=-1e3, hi=1e3):
    a = draw(st.floats(min_value=lo, max_value=hi, allow_nan=False))
    w = draw(st.floats(min_value=0.0, max_value=10.0, allow_nan=False))
    t = draw(st.floats(min_value=0.0, max_value=1.0))
    b = min(a + w, hi)
    point = a + t * (b - a)
    point = min(max(point, a), b)
    return Interval(a, b), point


def test_outward_rounding_contains_exact_sum():
    s = Interval(0.1) + Interval(0.2)
    assert inside(s, mpmath.mpf(0.1) + mpmath.mpf(0.2))
    assert s.lo < s.hi


def test_from_decimal_contains_the_decimal():
    x = Interval.from_decimal("1.1")
    assert inside(x, mpmath.mpf("1.1"))
    assert float(x.hi) - float(x.lo) <= 2.3e-16


def test_sqrt_of_exact_square():
    r = ival_elem("sqrt", Interval(4.0))
    assert r.lo <= 2.0 <= r.hi
    assert float(r.hi) - float(r.lo) <= 1e-15


def test_tanh_zero():
    r = ival_elem("tanh", Interval(0.0))
    assert float(r.lo) == 0.0 and float(r.hi) == 0.0


def test_cosh_one():
    assert inside(ival_elem("cosh", Interval(1.0)), mpmath.cosh(1))


def test_domain_errors():
    with pytest.raises(DomainError):
        ival_elem("sqrt", Interval(-1.0, 1.0))
    with pytest.raises(DomainError):
        ival_elem("ln", Interval(0.0, 1.0))
    with pytest.raises(DomainError):
        Interval(1.0) / Interval(-1.0, 1.0)


def test_sqr_and_sum_of_nonneg_terms_stay_nonneg():
    x = Interval(np.array([0.0, -1e-300]), np.array([1e-320, 1e-300]))
    assert np.all(x.sqr().lo >= 0)
    assert float(isum(Interval(np.array([0.0, 1e-17, 3.0]))).lo) >= 0


def test_json_round_trip_is_exact():
    x = Interval(1.0 / 3.0, 2.0 / 3.0)
    y = Interval.from_json(x.to_json())
    assert float(y.lo) == float(x.lo) and float(y.hi) == float(x.hi)


# complex square root

def test_cbox_sqrt_of_one():
    r = cbox_sqrt(ComplexBox(Interval(1.0), Interval(0.0)))
    assert r.re.lo <= 1.0 <= r.re.hi
    assert r.im.lo <= 0.0 <= r.im.hi


def test_cbox_sqrt_of_4i():
    r = cbox_sqrt(ComplexBox(Interval(0.0), Interval(4.0)))
    s = math.sqrt(2.0)
    assert inside(r.re, mpmath.sqrt(2)) and inside(r.im, mpmath.sqrt(2))
    assert float(r.re.hi) - s < 1e-14


def test_cbox_sqrt_branch_cut():
    with pytest.raises(BranchCutError):
        cbox_sqrt(ComplexBox(Interval(-1.0), Interval(0.0)))


@given(st.floats(0.01, 100), st.floats(-100, 100), st.floats(0, 0.5), st.floats(0, 0.5))
def test_cbox_sqrt_contains_principal_root(x, y, wx, wy):
    box = ComplexBox(Interval(x, x + wx), Interval(y, y + wy))
    r = cbox_sqrt(box)
    z = mpmath.sqrt(mpmath.mpc(x + 0.5 * wx, y + 0.5 * wy))
    assert inside(r.re, z.real) and inside(r.im, z.imag)


# containment against a high-precision oracle

ARITH = {
    "+": (lambda a, b: a + b, lambda a, b: a + b),
    "-": (lambda a, b: a - b, lambda a, b: a - b),
    "*": (lambda a, b: a * b, lambda a, b: a * b),
}


@given(boxes(), boxes(), st.sampled_from(sorted(ARITH)))
def test_arithmetic_containment(xa, xb, op):
    (A, a), (B, b) = xa, xb
    f_iv, f_mp = ARITH[op]
    assert inside(f_iv(A, B), f_mp(mpmath.mpf(a), mpmath.mpf(b)))


@given(boxes(), boxes())
def test_division_containment(xa, xb):
    (A, a), (B, b) = xa, xb
    assume(float(B.lo) > 1e-3 or float(B.hi) < -1e-3)
    assert inside(A / B, mpmath.mpf(a) / mpmath.mpf(b))


ELEM = {
    "exp": (mpmath.exp, (-50, 50)),
    "ln": (mpmath.log, (1e-6, 1e6)),
    "sqrt": (mpmath.sqrt, (0.0, 1e6)),
    "tanh": (mpmath.tanh, (-40, 40)),
    "sinh": (mpmath.sinh, (-40, 40)),
    "cosh": (mpmath.cosh, (-40, 40)),
    "atan": (mpmath.atan, (-1e3, 1e3)),
    "cos": (mpmath.cos, (-100, 100)),
    "sin": (mpmath.sin, (-100, 100)),
}


@given(st.sampled_from(sorted(ELEM)), st.data())
def test_elementary_containment(name, data):
    f, (lo, hi) = ELEM[name]
    X, x = data.draw(boxes(lo, hi))
    assert inside(ival_elem(name, X), f(mpmath.mpf(x)))


@given(boxes(-30, 30), st.integers(0, 6))
def test_power_containment(xb, n):
    X, x = xb
    assert inside(X ** n, mpmath.mpf(x) ** n)


# matrix norm bound

def test_norm_identity():
    u = float(mat_norm2_upper(Interval(np.eye(3))).hi)
    assert 1.0 <= u <= 1.0 + 1e-12


def test_norm_all_ones():
    assert float(mat_norm2_upper(Interval(np.ones((2, 2)))).hi) >= 2.0


def _power_iteration(A, iters=200, seed=0):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.shape[1])
    for _ in range(iters):
        w = A.T @ (A @ v)
        n = np.linalg.norm(w)
        if n == 0:
            return 0.0
        v = w / n
    return float(np.linalg.norm(A @ v))


@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**31 - 1), st.floats(0, 1e-3))
def test_norm_bound_dominates_power_iteration(m, n, seed, rad):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n)) * rng.uniform(0.1, 10)
    M = Interval.from_midrad(A, np.full(A.shape, rad))
    u = float(mat_norm2_upper(M).hi)
    for corner in (A, A + rad, A - rad * np.sign(A)):
        assert u >= _power_iteration(corner) * (1 - 1e-12)
        assert u >= np.linalg.norm(corner, 2) * (1 - 1e-12)

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from whitham_cap.errors import DomainError
from whitham_cap.rigor import ComplexBox, Interval
from whitham_cap.symbols import (SymbolParams, l_nu, l_sym, m_T, m_T_complex,
                                 tanh_over_id_complex)

mpmath.mp.prec = 120


def m_exact(T, x):
    x = mpmath.mpf(x)
    r = mpmath.mpf(1) if x == 0 else mpmath.tanh(x) / x
    return mpmath.sqrt(r * (1 + mpmath.mpf(T) * x * x))


def test_m_at_zero_is_one():
    for T in (0.0, 0.5):
        v = m_T(SymbolParams(T, 1.1), Interval(0.0))
        assert v.lo <= 1.0 <= v.hi


def test_m0_large_frequency_tail():
    v = m_T(SymbolParams(0.0, 1.1), Interval(100.0))
    assert 0.0 < float(v.lo) and float(v.hi) < 0.11


def test_strong_surface_tension_keeps_m_above_one():
    p = SymbolParams(0.5, 0.8)
    v = m_T(p, Interval(np.linspace(0, 50, 2001)))
    assert float(np.min(v.lo)) >= 1.0 - 1e-14


def test_l_values():
    p = SymbolParams(0.0, 1.1)
    v = l_sym(p, Interval(0.0))
    assert v.lo <= -0.1 <= v.hi or abs(float(v.mid()) + 0.1) < 1e-15
    one = l_nu(p, Interval(0.0))
    assert one.lo <= 1.0 <= one.hi
    q = SymbolParams(0.5, 0.8)
    x = Interval(10.0)
    l = l_sym(q, x)
    assert float(l.lo) > 0
    assert float(l.hi) >= float(((m_T(q, x) - 0.8) * 51.0).lo)


def test_speed_is_read_as_decimal():
    c = SymbolParams(0.0, 1.1).c_iv
    assert mpmath.mpf(float(c.lo)) <= mpmath.mpf("1.1") <= mpmath.mpf(float(c.hi))


def test_speed_span():
    p = SymbolParams(0.0, 1.1).with_speed_span(1.1, 1.3)
    assert float(p.c_iv.lo) == 1.1 and float(p.c_iv.hi) == 1.3


@given(st.sampled_from([0.0, 0.2, 0.5, 1.0]), st.floats(0, 60))
def test_m_contains_exact(T, x):
    v = m_T(SymbolParams(T, 1.0), Interval(x))
    e = m_exact(T, x)
    assert mpmath.mpf(float(v.lo)) <= e <= mpmath.mpf(float(v.hi))


def test_complex_agrees_with_real_axis():
    p = SymbolParams(0.5, 0.8)
    z = m_T_complex(p, ComplexBox(Interval(0.5), Interval(0.0)))
    r = m_T(p, Interval(0.5))
    assert z.re.overlaps(r)
    assert z.im.lo <= 0.0 <= z.im.hi


def test_complex_even_symmetry():
    p = SymbolParams(0.0, 1.1)
    a = m_T_complex(p, ComplexBox(Interval(1.3), Interval(0.2)))
    b = m_T_complex(p, ComplexBox(Interval(-1.3), Interval(0.2)))
    # m is even and real on the real axis, so m(-x + iy) = conj m(x + iy)
    assert a.re.overlaps(b.re)
    assert a.im.overlaps(-b.im)


def test_tanh_modulus_window():
    a = 0.3
    Ca = (1 + abs(np.cos(2 * a))) / (1 - abs(np.cos(2 * a)))
    t = complex(mpmath.tanh(mpmath.mpc(1.0, a)))
    assert 1 / Ca <= abs(t) ** 2 <= Ca


@given(st.floats(-20, 20), st.floats(0.0, 0.6))
def test_complex_tanh_ratio_contains_exact(x, y):
    if abs(x) < 1e-3 and y < 1e-3:
        return
    z = ComplexBox(Interval(x), Interval(y))
    r = tanh_over_id_complex(z)
    w = mpmath.mpc(x, y)
    e = mpmath.tanh(w) / w
    assert mpmath.mpf(float(r.re.lo)) <= e.real <= mpmath.mpf(float(r.re.hi))
    assert mpmath.mpf(float(r.im.lo)) <= e.imag <= mpmath.mpf(float(r.im.hi))


def test_strip_limit_enforced():
    p = SymbolParams(0.0, 1.1)
    with pytest.raises(DomainError):
        m_T_complex(p, ComplexBox(Interval(1.0), Interval(1.6)))

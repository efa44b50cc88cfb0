"""Fourier symbols of the capillary-gravity Whitham operator.

All evaluations take the angular frequency directly: on the periodic domain
(-d, d) mode ``n`` sits at ``xi_n = pi*n/d``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BranchCutError, DomainError, SubdivideRequest
from .rigor import (PI, ComplexBox, Interval, as_interval, cbox_sqrt, imin,
                    ival_elem, iv_where)


@dataclass(frozen=True)
class SymbolParams:
    """Bond number ``T`` and speed ``c``.

    Both are read as decimal numbers, so ``c=1.1`` means exactly 11/10.
    ``c_span`` replaces ``c`` by a whole interval of speeds; the spectral
    stage uses it to verify a strip once for every shifted speed.
    """

    T: float
    c: float
    c_span: tuple | None = None

    def __post_init__(self):
        if self.T < 0:
            raise ValueError("Bond number must be non-negative")

    @property
    def T_iv(self) -> Interval:
        return Interval.from_decimal(repr(float(self.T)))

    @property
    def c_iv(self) -> Interval:
        if self.c_span is not None:
            return Interval(float(self.c_span[0]), float(self.c_span[1]))
        return Interval.from_decimal(repr(float(self.c)))

    @property
    def nu(self) -> Interval:
        if self.T > 0:
            return self.T_iv
        return 4.0 / PI.sqr()

    @property
    def strip_limit(self) -> Interval:
        """min{1/sqrt(nu), pi/2}; the strip half-width must stay below it."""
        return imin(1.0 / ival_elem("sqrt", self.nu), PI * 0.5)

    def with_speed_span(self, lo, hi) -> "SymbolParams":
        return SymbolParams(self.T, self.c, (float(lo), float(hi)))


def xi_grid(d, n) -> Interval:
    """Enclosures of pi*n/d for integer (array) ``n``."""
    n = np.asarray(n, dtype=float)
    return PI * Interval(n) / float(d)


# real axis

def tanh_over_id(xi) -> Interval:
    """tanh(t)/t over an interval, with the value 1 at t = 0.

    The function is even and decreasing in |t|, so only the endpoints of
    |xi| matter and no interval division through zero occurs.
    """
    a = abs(as_interval(xi))

    def at(t):
        t = np.asarray(t, float)
        big = t > 1e-4
        ts = Interval(np.where(big, t, 1.0))
        q = ival_elem("tanh", ts) / ts
        # 1 - t^2/3 <= tanh(t)/t <= 1 for small t
        small = 1.0 - Interval(t).sqr() / 3.0
        return iv_where(big, q, Interval(small.lo, 1.0))

    lo = at(a.hi).lo
    hi = np.minimum(at(a.lo).hi, 1.0)
    return Interval(np.minimum(lo, hi), hi, _trusted=True)


def m_T(p: SymbolParams, xi) -> Interval:
    xi = as_interval(xi)
    radicand = tanh_over_id(xi)
    if p.T > 0:
        radicand = radicand * (1.0 + p.T_iv * xi.sqr())
    return ival_elem("sqrt", radicand)


def l_nu(p: SymbolParams, xi) -> Interval:
    return 1.0 + p.nu * as_interval(xi).sqr()


def l_sym(p: SymbolParams, xi) -> Interval:
    xi = as_interval(xi)
    return (m_T(p, xi) - p.c_iv) * l_nu(p, xi)


def m_grid(p, d, n):
    return m_T(p, xi_grid(d, n))


def l_grid(p, d, n):
    return l_sym(p, xi_grid(d, n))


def lnu_grid(p, d, n):
    return l_nu(p, xi_grid(d, n))


# complex strip

_SERIES = None


def _series_coeffs():
    global _SERIES
    if _SERIES is None:
        one = Interval(1.0)
        _SERIES = [one, -one / 3.0, Interval(2.0) / 15.0, -Interval(17.0) / 315.0,
                   Interval(62.0) / 2835.0]
    return _SERIES


def tanh_over_id_complex(z: ComplexBox) -> ComplexBox:
    """tanh(z)/z on a box.

    Near the origin (|z| <= 1/4) a degree-8 Taylor polynomial is used.  The
    partial fraction expansion tanh(z)/z = sum_k 2/(z^2 + ((k+1/2)pi)^2)
    shows the Taylor coefficient of z^(2j) is at most (2/pi)^(2j), which
    bounds the remainder by q^5/(1-q) with q = 4|z|^2/pi^2.
    """
    mag2 = z.abs2().hi
    near = mag2 <= 1.0 / 16.0
    if np.all(near):
        w = z.sqr()
        coeffs = _series_coeffs()
        acc = ComplexBox(coeffs[-1])
        for cf in coeffs[-2::-1]:
            acc = acc * w + ComplexBox(cf)
        q = (Interval(mag2) * 4.0 / PI.sqr()).hi
        rem = Interval(q) ** 5 / (1.0 - Interval(q))
        r = rem.hi
        tail = Interval(-r, r)
        return ComplexBox(acc.re + tail, acc.im + tail)
    if np.any(near):
        raise SubdivideRequest("mixed near-origin and far boxes in one call")
    x, y = z.re, z.im
    sech = 1.0 / ival_elem("cosh", 2.0 * x)
    den = 1.0 + ival_elem("cos", 2.0 * y) * sech
    if np.any(den.lo <= 0):
        raise SubdivideRequest("tanh denominator not bounded away from zero")
    th = ComplexBox(ival_elem("tanh", 2.0 * x) / den, ival_elem("sin", 2.0 * y) * sech / den)
    try:
        return th / z
    except DomainError as exc:
        raise SubdivideRequest("box contains the origin") from exc


def m_T_complex(p: SymbolParams, z: ComplexBox) -> ComplexBox:
    """Principal branch of m_T on a box inside the strip |Im| < min{1/sqrt(nu), pi/2}."""
    limit = p.strip_limit.lo
    if np.any(z.im.mag() >= limit):
        raise DomainError("box leaves the analyticity strip")
    radicand = tanh_over_id_complex(z)
    if p.T > 0:
        radicand = radicand * (ComplexBox(Interval(1.0)) + z.sqr() * p.T_iv)
    try:
        return cbox_sqrt(radicand)
    except BranchCutError as exc:
        raise SubdivideRequest("radicand box touches the branch cut") from exc

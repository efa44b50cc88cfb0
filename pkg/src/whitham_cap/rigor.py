"""Interval arithmetic over IEEE doubles.

Outward rounding is done without touching the FPU rounding mode: every
correctly rounded result (+, -, *, /, sqrt) is pushed one float outward with
``nextafter``.  libm transcendentals are not correctly rounded, so their
results get a relative guard of a few ulps before the push.

Intervals are vectorised: ``lo`` and ``hi`` are numpy arrays of any shape, so
a whole coefficient sequence or matrix is one ``Interval``.  Products of
interval matrices and convolutions use midpoint-radius arithmetic with an
a-priori bound on the floating point error of the midpoint product.
"""

from __future__ import annotations

from fractions import Fraction
from decimal import Decimal

import numpy as np

from .errors import BranchCutError, DomainError, SingularSystem

UNIT_ROUNDOFF = 2.0**-53
SMALLEST_SUBNORMAL = 2.0**-1074
SMALLEST_NORMAL = 2.0**-1022
LIBM_GUARD = 4 * UNIT_ROUNDOFF
DBL_MAX = np.finfo(float).max


def _down(x):
    return np.nextafter(x, -np.inf)


def _up(x):
    return np.nextafter(x, np.inf)


def _add_down(a, b):
    # a sum with an exact zero operand is exact
    s = a + b
    return np.where((a == 0) | (b == 0), s, _down(s))


def _add_up(a, b):
    s = a + b
    return np.where((a == 0) | (b == 0), s, _up(s))


def gamma(n):
    """Standard constant n*u/(1-n*u) bounding relative error of n-term sums."""
    nu = n * UNIT_ROUNDOFF
    if nu >= 0.5:
        raise ValueError("dimension too large for a-priori error bound")
    return float(_up(_up(nu) / _down(1.0 - nu)))


class Interval:
    """Array of closed real intervals [lo, hi]."""

    __slots__ = ("lo", "hi")
    __array_priority__ = 1000

    def __init__(self, lo, hi=None, _trusted=False):
        lo = np.array(lo, dtype=float)
        hi = lo.copy() if hi is None else np.array(hi, dtype=float)
        if lo.shape != hi.shape:
            lo, hi = np.broadcast_arrays(lo, hi)
            lo, hi = lo.copy(), hi.copy()
        if not _trusted:
            if np.isnan(lo).any() or np.isnan(hi).any():
                raise ValueError("NaN endpoint")
            if (lo > hi).any():
                raise ValueError("lower endpoint above upper endpoint")
        lo.setflags(write=False)
        hi.setflags(write=False)
        self.lo = lo
        self.hi = hi

    # construction helpers
    @classmethod
    def _make(cls, lo, hi):
        # NaN can only come from inf-inf or 0*inf; widen to the whole line
        bad = np.isnan(lo) | np.isnan(hi)
        if bad.any():
            lo = np.where(bad, -np.inf, lo)
            hi = np.where(bad, np.inf, hi)
        return cls(lo, hi, _trusted=True)

    @classmethod
    def from_midrad(cls, mid, rad):
        mid = np.asarray(mid, float)
        rad = np.asarray(rad, float)
        return cls._make(_down(mid - rad), _up(mid + rad))

    @classmethod
    def from_decimal(cls, text):
        """Tightest interval containing the decimal number written in ``text``."""
        return cls.from_fraction(Fraction(Decimal(str(text))))

    @classmethod
    def from_fraction(cls, exact):
        exact = Fraction(exact)
        x = float(exact)
        lo = x if Fraction(x) <= exact else float(_down(x))
        hi = x if Fraction(x) >= exact else float(_up(x))
        return cls(lo, hi)

    @classmethod
    def hull_of(cls, *values):
        los = [as_interval(v).lo for v in values]
        his = [as_interval(v).hi for v in values]
        return cls(np.minimum.reduce(los), np.maximum.reduce(his), _trusted=True)

    @staticmethod
    def concat(parts, axis=0):
        parts = [as_interval(p) for p in parts]
        return Interval(np.concatenate([p.lo for p in parts], axis=axis),
                        np.concatenate([p.hi for p in parts], axis=axis), _trusted=True)

    @staticmethod
    def zeros(shape):
        return Interval(np.zeros(shape))

    # array protocol
    @property
    def shape(self):
        return self.lo.shape

    @property
    def ndim(self):
        return self.lo.ndim

    @property
    def size(self):
        return self.lo.size

    def __len__(self):
        return len(self.lo)

    def __getitem__(self, key):
        return Interval(self.lo[key], self.hi[key], _trusted=True)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def T(self):
        return Interval(self.lo.T, self.hi.T, _trusted=True)

    def reshape(self, *shape):
        return Interval(self.lo.reshape(*shape), self.hi.reshape(*shape), _trusted=True)

    def copy_with(self, index, value):
        """Return a copy with ``self[index]`` replaced by ``value``."""
        value = as_interval(value)
        lo, hi = self.lo.copy(), self.hi.copy()
        lo[index] = value.lo
        hi[index] = value.hi
        return Interval(lo, hi, _trusted=True)

    def __repr__(self):
        if self.ndim == 0:
            return f"[{float(self.lo)!r}, {float(self.hi)!r}]"
        return f"Interval(shape={self.shape}, lo={self.lo!r}, hi={self.hi!r})"

    # scalar views
    def mid(self):
        m = 0.5 * self.lo + 0.5 * self.hi
        return np.where(np.isfinite(m), m, np.where(np.isinf(self.lo), self.hi, self.lo))

    def rad(self):
        m = self.mid()
        return np.maximum(_up(m - self.lo), _up(self.hi - m))

    def width(self):
        return _up(self.hi - self.lo)

    def mag(self):
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    def mig(self):
        straddle = (self.lo <= 0) & (self.hi >= 0)
        return np.where(straddle, 0.0, np.minimum(np.abs(self.lo), np.abs(self.hi)))

    def contains(self, x):
        x = as_interval(x)
        return (self.lo <= x.lo) & (x.hi <= self.hi)

    def overlaps(self, x):
        x = as_interval(x)
        return (self.lo <= x.hi) & (x.lo <= self.hi)

    def hull(self, x):
        x = as_interval(x)
        return Interval(np.minimum(self.lo, x.lo), np.maximum(self.hi, x.hi), _trusted=True)

    def intersect(self, x):
        x = as_interval(x)
        lo = np.maximum(self.lo, x.lo)
        hi = np.minimum(self.hi, x.hi)
        if (lo > hi).any():
            raise DomainError("empty intersection")
        return Interval(lo, hi, _trusted=True)

    def max_hi(self):
        return float(np.max(self.hi))

    def min_lo(self):
        return float(np.min(self.lo))

    # arithmetic
    def __neg__(self):
        return Interval(-self.hi, -self.lo, _trusted=True)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = as_interval(other)
        return Interval._make(_add_down(self.lo, o.lo), _add_up(self.hi, o.hi))

    __radd__ = __add__

    def __sub__(self, other):
        o = as_interval(other)
        return Interval._make(_add_down(self.lo, -o.hi), _add_up(self.hi, -o.lo))

    def __rsub__(self, other):
        return as_interval(other) - self

    def __mul__(self, other):
        o = as_interval(other)
        with np.errstate(invalid="ignore", over="ignore"):
            p = np.stack(np.broadcast_arrays(self.lo * o.lo, self.lo * o.hi,
                                             self.hi * o.lo, self.hi * o.hi))
        # 0 * inf only occurs when a factor is exactly zero
        p = np.where(np.isnan(p), 0.0, p)
        zl, zh, ol, oh = self.lo == 0, self.hi == 0, o.lo == 0, o.hi == 0
        exact = np.stack(np.broadcast_arrays(zl | ol, zl | oh, zh | ol, zh | oh))
        lo = np.where(exact, p, _down(p)).min(axis=0)
        hi = np.where(exact, p, _up(p)).max(axis=0)
        return Interval._make(lo, hi)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = as_interval(other)
        if ((o.lo <= 0) & (o.hi >= 0)).any():
            raise DomainError("division by an interval containing zero")
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            q = np.stack(np.broadcast_arrays(self.lo / o.lo, self.lo / o.hi,
                                             self.hi / o.lo, self.hi / o.hi))
        q = np.where(np.isnan(q), 0.0, q)
        zl, zh = self.lo == 0, self.hi == 0
        exact = np.stack(np.broadcast_arrays(zl, zl, zh, zh, o.lo))[:4].astype(bool)
        lo = np.where(exact, q, _down(q)).min(axis=0)
        hi = np.where(exact, q, _up(q)).max(axis=0)
        return Interval._make(lo, hi)

    def __rtruediv__(self, other):
        return as_interval(other) / self

    def __abs__(self):
        return Interval(self.mig(), self.mag(), _trusted=True)

    def sqr(self):
        a = self.mig()
        b = self.mag()
        return Interval._make(np.maximum(_down(a * a), 0.0), _up(b * b))

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise TypeError("only non-negative integer powers; use ival_elem for others")
        if n == 0:
            return Interval(np.ones(self.shape))
        if n % 2 == 0:
            base = abs(self)
            return _nonneg_power(base, n)
        # odd powers are monotone
        lo = _nonneg_power(Interval(np.abs(self.lo)), n)
        hi = _nonneg_power(Interval(np.abs(self.hi)), n)
        lo_v = np.where(self.lo >= 0, lo.lo, -lo.hi)
        hi_v = np.where(self.hi >= 0, hi.hi, -hi.lo)
        return Interval(lo_v, hi_v, _trusted=True)

    def __matmul__(self, other):
        return imatmul(self, other)

    def __rmatmul__(self, other):
        return imatmul(other, self)

    def sum(self, axis=None):
        return isum(self, axis=axis)

    def sqrt(self):
        return ival_elem("sqrt", self)

    def exp(self):
        return ival_elem("exp", self)

    # serialization
    def to_json(self):
        if self.ndim == 0:
            return {"lo": repr(float(self.lo)), "hi": repr(float(self.hi))}
        return [self[i].to_json() for i in range(len(self))]

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, dict):
            return cls(float(obj["lo"]), float(obj["hi"]))
        if not isinstance(obj, list):
            raise ValueError(f"not a serialized interval: {obj!r}")
        parts = [cls.from_json(o) for o in obj]
        return cls(np.array([p.lo for p in parts]), np.array([p.hi for p in parts]))


def _nonneg_power(x, n):
    result = Interval(np.ones(x.shape))
    base = x
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def as_interval(x):
    if isinstance(x, Interval):
        return x
    if type(x).__name__ == "ComplexBox":
        raise TypeError("cannot use a complex box as a real interval")
    return Interval(np.asarray(x, dtype=float), _trusted=False)


def iv_where(cond, a, b):
    a, b = as_interval(a), as_interval(b)
    return Interval(np.where(cond, a.lo, b.lo), np.where(cond, a.hi, b.hi), _trusted=True)


def imin(a, b):
    a, b = as_interval(a), as_interval(b)
    return Interval(np.minimum(a.lo, b.lo), np.minimum(a.hi, b.hi), _trusted=True)


def imax(a, b):
    a, b = as_interval(a), as_interval(b)
    return Interval(np.maximum(a.lo, b.lo), np.maximum(a.hi, b.hi), _trusted=True)


def upper_sum_nonneg(values, axis=None):
    """Upper bound for the exact sum of non-negative floats."""
    values = np.asarray(values, float)
    n = values.size if axis is None else values.shape[axis]
    s = np.sum(values, axis=axis)
    return _up(s * (1.0 + 2.0 * gamma(max(n, 1) + 1)))


def isum(x, axis=None):
    x = as_interval(x)
    n = x.size if axis is None else x.shape[axis]
    if n == 0:
        return Interval(np.zeros(np.sum(x.lo, axis=axis).shape))
    g = gamma(n + 1)
    with np.errstate(invalid="ignore", over="ignore"):
        s_lo = np.sum(x.lo, axis=axis)
        s_hi = np.sum(x.hi, axis=axis)
        e_lo = _up(g * np.sum(np.abs(x.lo), axis=axis))
        e_hi = _up(g * np.sum(np.abs(x.hi), axis=axis))
        lo = _down(s_lo - e_lo)
        # terms that are all non-negative sum to something non-negative
        lo = np.where(np.all(x.lo >= 0, axis=axis), np.maximum(lo, 0.0), lo)
    return Interval._make(lo, _up(s_hi + e_hi))


# midpoint-radius bilinear products

def _midrad_bilinear(op, a, b, inner):
    a, b = as_interval(a), as_interval(b)
    ma, ra = a.mid(), a.rad()
    mb, rb = b.mid(), b.rad()
    if not (np.isfinite(ma).all() and np.isfinite(mb).all()
            and np.isfinite(ra).all() and np.isfinite(rb).all()):
        shape = op(np.zeros(ma.shape), np.zeros(mb.shape)).shape
        return Interval(np.full(shape, -np.inf), np.full(shape, np.inf), _trusted=True)
    g = gamma(inner + 4)
    with np.errstate(over="ignore"):
        c = op(ma, mb)
        aa, ab = np.abs(ma), np.abs(mb)
        s = op(aa, ab)
        t = np.zeros_like(c)
        if rb.any():
            t = t + op(aa, rb)
        if ra.any():
            t = t + op(ra, ab + rb)
        rad = _up(_up(_up(g * s) + t) * (1.0 + 2.0 * g))
        rad = _up(rad + 3.0 * (inner + 1) * SMALLEST_SUBNORMAL)
    return Interval._make(_down(c - rad), _up(c + rad))


def imatmul(a, b):
    """Enclosure of every product of point matrices taken from ``a`` and ``b``."""
    a, b = as_interval(a), as_interval(b)
    inner = a.shape[-1]
    return _midrad_bilinear(np.matmul, a, b, inner)


def iconvolve(a, b):
    """Full linear convolution of two 1-D interval arrays (direct, no FFT)."""
    a, b = as_interval(a), as_interval(b)
    inner = max(1, min(a.size, b.size))
    return _midrad_bilinear(np.convolve, a, b, inner)


def idot(a, b):
    a, b = as_interval(a), as_interval(b)
    return imatmul(a.reshape(1, -1), b.reshape(-1, 1)).reshape(())


# constants

PI = Interval(np.pi, float(_up(np.pi)))  # float(pi) is below pi
TWO_PI = PI * 2.0
HALF_PI = PI * 0.5
LN2 = Interval.from_decimal("0.693147180559945309417232121458176568")
SQRT2 = None  # filled below once ival_elem exists


# elementary functions

def _guard_lo(v):
    with np.errstate(over="ignore", invalid="ignore"):
        w = v - (np.abs(v) * LIBM_GUARD + 4 * SMALLEST_SUBNORMAL)
    return _down(w)


def _guard_hi(v):
    with np.errstate(over="ignore", invalid="ignore"):
        w = v + (np.abs(v) * LIBM_GUARD + 4 * SMALLEST_SUBNORMAL)
    return _up(w)


def _monotone_inc(fn, x):
    with np.errstate(over="ignore"):
        lo = _guard_lo(fn(x.lo))
        hi = _guard_hi(fn(x.hi))
    return lo, hi


def _contains_integer(q):
    return np.floor(q.hi) >= np.ceil(q.lo)


def _cos(x):
    with np.errstate(invalid="ignore"):
        a, b = np.cos(x.lo), np.cos(x.hi)
    lo = _guard_lo(np.minimum(a, b))
    hi = _guard_hi(np.maximum(a, b))
    finite = np.isfinite(x.lo) & np.isfinite(x.hi)
    wide = ~finite | (x.hi - x.lo >= 6.0)
    xs = Interval(np.where(wide, 0.0, x.lo), np.where(wide, 0.0, x.hi), _trusted=True)
    has_max = _contains_integer(xs / TWO_PI)
    has_min = _contains_integer((xs - PI) / TWO_PI)
    hi = np.where(has_max | wide, 1.0, hi)
    lo = np.where(has_min | wide, -1.0, lo)
    return np.maximum(lo, -1.0), np.minimum(hi, 1.0)


def _sin(x):
    with np.errstate(invalid="ignore"):
        a, b = np.sin(x.lo), np.sin(x.hi)
    lo = _guard_lo(np.minimum(a, b))
    hi = _guard_hi(np.maximum(a, b))
    finite = np.isfinite(x.lo) & np.isfinite(x.hi)
    wide = ~finite | (x.hi - x.lo >= 6.0)
    xs = Interval(np.where(wide, 0.0, x.lo), np.where(wide, 0.0, x.hi), _trusted=True)
    has_max = _contains_integer((xs - HALF_PI) / TWO_PI)
    has_min = _contains_integer((xs + HALF_PI) / TWO_PI)
    hi = np.where(has_max | wide, 1.0, hi)
    lo = np.where(has_min | wide, -1.0, lo)
    return np.maximum(lo, -1.0), np.minimum(hi, 1.0)


def _odd_sign(x, lo, hi):
    """Increasing odd functions keep the sign of their argument."""
    return np.where(x.lo >= 0, np.maximum(lo, 0.0), lo), np.where(x.hi <= 0, np.minimum(hi, 0.0), hi)


def ival_elem(f, x):
    """Enclosure of ``f`` over every point of ``x``.

    ``f`` is one of sqrt, exp, ln, tanh, cosh, sinh, cos, sin, atan.
    """
    x = as_interval(x)
    if f == "sqrt":
        if (x.lo < 0).any():
            raise DomainError("sqrt of an interval reaching below zero")
        lo = np.maximum(_down(np.sqrt(x.lo)), 0.0)
        hi = _up(np.sqrt(x.hi))
        return Interval(lo, hi, _trusted=True)
    if f == "exp":
        lo, hi = _monotone_inc(np.exp, x)
        lo = np.minimum(np.maximum(lo, 0.0), DBL_MAX)
        return Interval(lo, hi, _trusted=True)
    if f == "ln":
        if (x.lo <= 0).any():
            raise DomainError("ln of an interval reaching zero")
        lo, hi = _monotone_inc(np.log, x)
        return Interval(lo, hi, _trusted=True)
    if f == "tanh":
        lo, hi = _odd_sign(x, *_monotone_inc(np.tanh, x))
        return Interval(np.maximum(lo, -1.0), np.minimum(hi, 1.0), _trusted=True)
    if f == "sinh":
        lo, hi = _odd_sign(x, *_monotone_inc(np.sinh, x))
        return Interval._make(lo, hi)
    if f == "atan":
        lo, hi = _odd_sign(x, *_monotone_inc(np.arctan, x))
        return Interval(lo, hi, _trusted=True)
    if f == "cosh":
        a = abs(x)
        with np.errstate(over="ignore"):
            lo = np.maximum(_guard_lo(np.cosh(a.lo)), 1.0)
            hi = _guard_hi(np.cosh(a.hi))
        return Interval(np.minimum(lo, DBL_MAX), hi, _trusted=True)
    if f == "cos":
        return Interval(*_cos(x), _trusted=True)
    if f == "sin":
        return Interval(*_sin(x), _trusted=True)
    raise ValueError(f"unknown elementary function {f!r}")


def ipow(x, p):
    """x**p for x > 0 and real p, via exp(p ln x)."""
    return ival_elem("exp", as_interval(p) * ival_elem("ln", x))


def isqrt(x):
    return ival_elem("sqrt", x)


def iexp(x):
    return ival_elem("exp", x)


SQRT2 = ival_elem("sqrt", Interval(2.0))


# complex boxes

class ComplexBox:
    """Rectangle re + i*im in the complex plane (vectorised like Interval)."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        re = as_interval(re)
        im = Interval(np.zeros(re.shape)) if im is None else as_interval(im)
        if re.shape != im.shape:
            shape = np.broadcast_shapes(re.shape, im.shape)
            re = Interval(np.broadcast_to(re.lo, shape), np.broadcast_to(re.hi, shape), _trusted=True)
            im = Interval(np.broadcast_to(im.lo, shape), np.broadcast_to(im.hi, shape), _trusted=True)
        self.re = re
        self.im = im

    @property
    def shape(self):
        return self.re.shape

    def __getitem__(self, key):
        return ComplexBox(self.re[key], self.im[key])

    def __repr__(self):
        return f"ComplexBox(re={self.re!r}, im={self.im!r})"

    def conj(self):
        return ComplexBox(self.re, -self.im)

    def __neg__(self):
        return ComplexBox(-self.re, -self.im)

    def __add__(self, other):
        o = as_box(other)
        return ComplexBox(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_box(other)
        return ComplexBox(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return as_box(other) - self

    def __mul__(self, other):
        if not isinstance(other, ComplexBox):
            o = as_interval(other)
            return ComplexBox(self.re * o, self.im * o)
        return ComplexBox(self.re * other.re - self.im * other.im,
                          self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def abs2(self):
        return self.re.sqr() + self.im.sqr()

    def abs(self):
        return ival_elem("sqrt", self.abs2())

    def __truediv__(self, other):
        if not isinstance(other, ComplexBox):
            o = as_interval(other)
            return ComplexBox(self.re / o, self.im / o)
        den = other.abs2()
        num = self * other.conj()
        return ComplexBox(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return as_box(other) / self

    def sqr(self):
        return ComplexBox(self.re.sqr() - self.im.sqr(), 2.0 * (self.re * self.im))

    def contains(self, z):
        z = complex(z)
        return self.re.contains(z.real) & self.im.contains(z.imag)


def as_box(x):
    if isinstance(x, ComplexBox):
        return x
    if isinstance(x, (complex, np.complexfloating)):
        return ComplexBox(Interval(x.real), Interval(x.imag))
    return ComplexBox(as_interval(x))


def _sqrt_parts_at(x, y):
    """Enclosures of (Re sqrt, |Im sqrt|) at exact points (x, y) given as floats."""
    xi, yi = Interval(x), Interval(np.abs(y))
    h = ival_elem("sqrt", xi.sqr() + yi.sqr())
    right = x >= 0
    zero = (x == 0) & (y == 0)
    # x >= 0: real part from (h + x)/2, imaginary part as |y|/(2 re)
    a = ival_elem("sqrt", imax((h + iv_where(right, xi, 0.0)) * 0.5, 0.0))
    # x < 0: imaginary part from (h - x)/2, real part as |y|/(2 im)
    b = ival_elem("sqrt", imax((h - iv_where(right, 0.0, xi)) * 0.5, 0.0))
    safe_a = iv_where(right & ~zero, a, 1.0)
    safe_b = iv_where(~right, b, 1.0)
    im_right = yi / (2.0 * safe_a)
    re_left = yi / (2.0 * safe_b)
    re = iv_where(right, a, re_left)
    im = iv_where(right, iv_where(zero, 0.0, im_right), b)
    return re, im


def cbox_sqrt(z):
    """Principal square root of every point of the box ``z``.

    Re sqrt is increasing in x and in |y|; |Im sqrt| is decreasing in x and
    increasing in |y|; Im sqrt is increasing in y.  Away from the cut the
    extremes therefore sit at known corners, which are evaluated as points.
    """
    z = as_box(z)
    x0, x1 = z.re.lo, z.re.hi
    y0, y1 = z.im.lo, z.im.hi
    if ((x0 < 0) & (y0 <= 0) & (y1 >= 0)).any():
        raise BranchCutError("box meets the branch cut of sqrt")
    ymin_abs = np.where((y0 <= 0) & (y1 >= 0), 0.0, np.minimum(np.abs(y0), np.abs(y1)))
    ymax_abs = np.maximum(np.abs(y0), np.abs(y1))
    re_lo, _ = _sqrt_parts_at(x0, ymin_abs)
    re_hi, _ = _sqrt_parts_at(x1, ymax_abs)

    # minimum of Im at y0, maximum at y1
    xa = np.where(y0 >= 0, x1, x0)
    _, m_lo = _sqrt_parts_at(xa, y0)
    im_lo_lo = np.where(y0 >= 0, m_lo.lo, -m_lo.hi)
    xb = np.where(y1 > 0, x0, np.where(y1 < 0, x1, x0))
    _, m_hi = _sqrt_parts_at(xb, y1)
    im_hi_hi = np.where(y1 >= 0, m_hi.hi, -m_hi.lo)
    re = Interval(np.maximum(re_lo.lo, 0.0), re_hi.hi, _trusted=True)
    im = Interval(im_lo_lo, im_hi_hi, _trusted=True)
    return ComplexBox(re, im)


# matrix norms

def _abs_upper(M):
    return as_interval(M).mag()


def norm_1_inf_upper(M):
    """Upper bounds of the induced 1- and inf-norms of every matrix in M."""
    A = _abs_upper(M)
    if A.size == 0:
        return 0.0, 0.0
    col = upper_sum_nonneg(A, axis=0)
    row = upper_sum_nonneg(A, axis=1)
    return float(np.max(col)), float(np.max(row))


def _gershgorin_upper(H):
    H = as_interval(H)
    n = H.shape[0]
    off = H.mag().copy()
    off[np.arange(n), np.arange(n)] = 0.0
    bounds = _up(H.hi.diagonal() + upper_sum_nonneg(off, axis=1))
    return float(np.max(bounds))


def mat_norm2_upper(M, sharpen=True, max_sharpen_dim=4000):
    """Certified upper bound u >= ||M~||_2 for every point matrix M~ in M.

    The default bound is sqrt(||M||_1 ||M||_inf).  With ``sharpen`` a second
    bound is formed: G = M^T M is enclosed, approximately diagonalised by a
    float orthogonal Q, and the largest eigenvalue of Q^T G Q is bounded by
    Gershgorin's theorem.  Since Q is only nearly orthogonal,
    lambda_max(G) <= gersh / (1 - ||Q^T Q - I||).  The smaller bound wins.
    """
    M = as_interval(M)
    if M.ndim != 2:
        raise ValueError("matrix expected")
    if M.size == 0:
        return Interval(0.0)
    n1, ninf = norm_1_inf_upper(M)
    best = float(_up(np.sqrt(_up(n1 * ninf))))
    small = min(M.shape)
    if sharpen and 1 < small <= max_sharpen_dim and np.isfinite(best) and best > 0:
        try:
            if M.shape[0] >= M.shape[1]:
                G = imatmul(M.T, M)
            else:
                G = imatmul(M, M.T)
            Gm = G.mid()
            Gm = 0.5 * (Gm + Gm.T)
            _, Q = np.linalg.eigh(Gm)
            H = imatmul(imatmul(Interval(Q.T), G), Interval(Q))
            gersh = _gershgorin_upper(H)
            E = imatmul(Interval(Q.T), Interval(Q)) - np.eye(Q.shape[0])
            e1, einf = norm_1_inf_upper(E)
            delta = float(_up(np.sqrt(_up(e1 * einf))))
            if delta < 0.5 and gersh >= 0:
                lam = _up(gersh / _down(1.0 - delta))
                sharp = float(_up(np.sqrt(lam)))
                best = min(best, sharp)
        except np.linalg.LinAlgError:
            pass
    return Interval(best)


def solve_small(G, b):
    """Enclose the solution of G x = b for a small interval system.

    Krawczyk-type residual correction: with R ~ inv(mid G) and x~ = R mid b,
    ||x - x~||_inf <= ||R (b - G x~)||_inf / (1 - ||I - R G||_inf).
    """
    G, b = as_interval(G), as_interval(b)
    n = G.shape[0]
    try:
        R = np.linalg.inv(G.mid())
    except np.linalg.LinAlgError as exc:
        raise SingularSystem("midpoint matrix is singular") from exc
    xt = R @ b.mid()
    Ri = Interval(R)
    E = Interval(np.eye(n)) - imatmul(Ri, G)
    delta = float(np.max(upper_sum_nonneg(E.mag(), axis=1)))
    if not delta < 1.0:
        raise SingularSystem(f"contraction check failed (||I - RG|| <= {delta})")
    res = b - imatmul(G, Interval(xt).reshape(-1, 1)).reshape(-1)
    corr = imatmul(Ri, res.reshape(-1, 1)).reshape(-1)
    beta = float(_up(np.max(corr.mag()) / _down(1.0 - delta)))
    return Interval.from_midrad(xt, np.full(n, beta))

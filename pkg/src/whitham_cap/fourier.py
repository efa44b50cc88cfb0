"""Fourier coefficient algebra on the periodic cell (-d, d).

Even functions are stored as cosine sequences ``a_n`` (n >= 0) meaning
``a_0 + 2 sum a_n cos(pi n x/d)``; the norms carry the weights alpha_0 = 1,
alpha_n = 2.  General functions are stored as exponential sequences indexed
-N..N.  Odd real functions have purely imaginary exponential coefficients;
those are stored with the factor i dropped, which every linear operation here
commutes with.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .errors import MissingStripCertificate, SingularTraceGram
from .rigor import (PI, SQRT2, Interval, as_interval, iconvolve, imatmul,
                    ival_elem, iv_where, mat_norm2_upper,
                    upper_sum_nonneg)
from .symbols import SymbolParams, l_nu, l_sym, m_T, xi_grid


@dataclass(frozen=True)
class CosineSeq:
    d: float
    coeffs: Interval

    @classmethod
    def from_floats(cls, d, values):
        return cls(float(d), Interval(np.asarray(values, float)))

    @classmethod
    def unit(cls, d, N=0):
        v = np.zeros(N + 1)
        v[0] = 1.0
        return cls.from_floats(d, v)

    @property
    def N(self):
        return len(self.coeffs) - 1

    def mid(self):
        return self.coeffs.mid()

    def padded(self, N):
        if N <= self.N:
            return CosineSeq(self.d, self.coeffs[: N + 1])
        extra = Interval(np.zeros(N - self.N))
        return CosineSeq(self.d, Interval.concat([self.coeffs, extra]))

    def _other(self, other):
        if isinstance(other, CosineSeq):
            if other.d != self.d:
                raise ValueError("sequences live on different domains")
            n = max(self.N, other.N)
            return self.padded(n).coeffs, other.padded(n).coeffs
        raise TypeError("expected a CosineSeq")

    def __add__(self, other):
        a, b = self._other(other)
        return CosineSeq(self.d, a + b)

    def __sub__(self, other):
        a, b = self._other(other)
        return CosineSeq(self.d, a - b)

    def __neg__(self):
        return CosineSeq(self.d, -self.coeffs)

    def scale(self, factor):
        return CosineSeq(self.d, self.coeffs * as_interval(factor))

    def alpha(self):
        return alpha_weights(self.N)

    def norm2(self) -> Interval:
        return ival_elem("sqrt", (self.coeffs.sqr() * self.alpha()).sum())

    def norm1(self) -> Interval:
        return (abs(self.coeffs) * self.alpha()).sum()

    def full(self) -> "ExpSeq":
        c = self.coeffs
        return ExpSeq(self.d, Interval.concat([c[::-1], c[1:]]))

    def xi(self):
        return xi_grid(self.d, np.arange(self.N + 1))

    def values(self, x) -> Interval:
        """Enclosure of the function at float points x."""
        x = np.atleast_1d(np.asarray(x, float))
        n = np.arange(self.N + 1)
        phase = PI * Interval(np.outer(x, n)) / self.d
        basis = ival_elem("cos", phase) * self.alpha()
        return imatmul(basis, self.coeffs.reshape(-1, 1)).reshape(-1)


@dataclass(frozen=True)
class ExpSeq:
    d: float
    coeffs: Interval

    @classmethod
    def from_floats(cls, d, values):
        values = np.asarray(values, float)
        if values.size % 2 != 1:
            raise ValueError("exponential sequence needs odd length")
        return cls(float(d), Interval(values))

    @property
    def N(self):
        return (len(self.coeffs) - 1) // 2

    def mid(self):
        return self.coeffs.mid()

    def k(self):
        return np.arange(-self.N, self.N + 1)

    def xi(self):
        return xi_grid(self.d, self.k())

    def padded(self, N):
        if N <= self.N:
            s = self.N - N
            return ExpSeq(self.d, self.coeffs[s: s + 2 * N + 1])
        z = Interval(np.zeros(N - self.N))
        return ExpSeq(self.d, Interval.concat([z, self.coeffs, z]))

    def __add__(self, other):
        n = max(self.N, other.N)
        return ExpSeq(self.d, self.padded(n).coeffs + other.padded(n).coeffs)

    def __sub__(self, other):
        n = max(self.N, other.N)
        return ExpSeq(self.d, self.padded(n).coeffs - other.padded(n).coeffs)

    def scale(self, factor):
        return ExpSeq(self.d, self.coeffs * as_interval(factor))

    def norm2(self) -> Interval:
        return ival_elem("sqrt", self.coeffs.sqr().sum())

    def norm1(self) -> Interval:
        return abs(self.coeffs).sum()

    def nonneg(self) -> CosineSeq:
        """Restriction to k >= 0 (an isometry on even sequences up to alpha)."""
        return CosineSeq(self.d, self.coeffs[self.N:])

    def even_odd(self):
        """Split into even part (cosine coefficients) and odd part (sine coefficients).

        The function is sum_k v_k e^{i xi_k x}.  For the odd part the stored
        values are imaginary parts, so it equals -2 sum_{n>=1} s_n sin(xi_n x)
        with s_n the odd coefficient; the returned sine sequence absorbs the sign.
        """
        c = self.coeffs
        pos = c[self.N:]
        neg = c[: self.N + 1][::-1]
        even = (pos + neg) * 0.5
        odd = (pos - neg) * 0.5
        odd = odd.copy_with(0, 0.0)
        return CosineSeq(self.d, even), CosineSeq(self.d, -odd)


def alpha_weights(N):
    w = np.full(N + 1, 2.0)
    w[0] = 1.0
    return w


# convolution

def conv_even(U: CosineSeq, V: CosineSeq) -> CosineSeq:
    """Coefficients of the pointwise product, exact on N_U + N_V + 1 modes."""
    if U.d != V.d:
        raise ValueError("sequences live on different domains")
    full = iconvolve(U.full().coeffs, V.full().coeffs)
    center = U.N + V.N
    return CosineSeq(U.d, full[center:])


def conv_full(X: ExpSeq, Y: ExpSeq) -> ExpSeq:
    if X.d != Y.d:
        raise ValueError("sequences live on different domains")
    return ExpSeq(X.d, iconvolve(X.coeffs, Y.coeffs))


def conv_matrix_even(W, rows, cols):
    """Matrix of V -> W*V restricted to output modes ``rows`` and input modes ``cols``.

    Entry (n, k) is w_{|n-k|} + w_{n+k} for k > 0 and w_n for k = 0.
    ``W`` may be a float array or an Interval (cosine coefficients).
    """
    rows = np.asarray(rows)[:, None]
    cols = np.asarray(cols)[None, :]
    interval = isinstance(W, (Interval, CosineSeq))
    if isinstance(W, CosineSeq):
        W = W.coeffs
    lo = W.lo if interval else np.asarray(W, float)
    hi = W.hi if interval else lo
    M = len(lo)

    def gather(arr, idx):
        ok = idx < M
        return np.where(ok, arr[np.minimum(idx, M - 1)], 0.0)

    i1 = np.abs(rows - cols)
    i2 = rows + cols
    second = cols > 0
    if not interval:
        return gather(lo, i1) + np.where(second, gather(lo, i2), 0.0)
    a = Interval(gather(lo, i1), gather(hi, i1), _trusted=True)
    b = Interval(np.where(second, gather(lo, i2), 0.0), np.where(second, gather(hi, i2), 0.0), _trusted=True)
    return a + b


def conv_matrix_full(W, N_out, N_in):
    """Matrix of X -> W*X on exponential modes, W an even cosine sequence."""
    j = np.arange(-N_out, N_out + 1)[:, None]
    k = np.arange(-N_in, N_in + 1)[None, :]
    idx = np.abs(j - k)
    interval = isinstance(W, (Interval, CosineSeq))
    if isinstance(W, CosineSeq):
        W = W.coeffs
    lo = W.lo if interval else np.asarray(W, float)
    hi = W.hi if interval else lo
    M = len(lo)
    ok = idx < M
    g_lo = np.where(ok, lo[np.minimum(idx, M - 1)], 0.0)
    if not interval:
        return g_lo
    g_hi = np.where(ok, hi[np.minimum(idx, M - 1)], 0.0)
    return Interval(g_lo, g_hi, _trusted=True)


# multipliers

_INVERSE_TAGS = {"Linv", "Mc_inv", "Llam_inv"}


def symbol_values(tag, p: SymbolParams, xi, lam=0.0):
    """Interval values of the symbol named ``tag`` at frequencies xi."""
    xi = as_interval(xi)
    if tag == "L":
        return l_sym(p, xi)
    if tag == "Linv":
        return 1.0 / l_sym(p, xi)
    if tag == "M":
        return m_T(p, xi)
    if tag == "Lnu":
        return l_nu(p, xi)
    if tag == "Lnu2":
        return l_nu(p, xi).sqr()
    if tag == "Mc_inv":
        return 1.0 / (m_T(p, xi) - p.c_iv)
    if tag in ("Llam", "Llam_inv"):
        val = spectral_symbol(p, xi) - as_interval(lam)
        return val if tag == "Llam" else 1.0 / val
    raise ValueError(f"unknown multiplier {tag!r}")


def spectral_symbol(p: SymbolParams, xi) -> Interval:
    """Symbol of the self-adjoint linear part: c - m_T for T = 0, m_T - c for T > 0."""
    m = m_T(p, xi)
    return p.c_iv - m if p.T == 0 else m - p.c_iv


def apply_multiplier(tag, U, p: SymbolParams, strip=None, lam=0.0):
    """Entrywise multiplication by a symbol on the grid of ``U``.

    Tag ``d`` is the derivative and acts on exponential sequences only; the
    factor i it produces is dropped as described in the module docstring.
    """
    if tag in _INVERSE_TAGS and not getattr(strip, "verified", False):
        raise MissingStripCertificate(f"multiplier {tag} needs a verified strip")
    xi = U.xi()
    if tag == "d":
        if not isinstance(U, ExpSeq):
            raise TypeError("derivative acts on exponential sequences")
        vals = xi
    else:
        vals = symbol_values(tag, p, xi, lam)
    return type(U)(U.d, U.coeffs * vals)


def derivative_cos_to_exp(U: CosineSeq) -> ExpSeq:
    """Exponential coefficients of u' (odd, i dropped)."""
    return apply_multiplier("d", U.full(), None)


def second_derivative(U: CosineSeq) -> CosineSeq:
    return CosineSeq(U.d, -(U.coeffs * U.xi().sqr()))


# inner products

def inner_weighted(U, V, weight=None) -> Interval:
    """(U, V) with alpha weights for cosine sequences, optionally times |weight|^2."""
    if isinstance(U, CosineSeq):
        n = min(U.N, V.N)
        terms = U.coeffs[: n + 1] * V.coeffs[: n + 1] * alpha_weights(n)
        if weight is not None:
            terms = terms * as_interval(weight)[: n + 1].sqr()
        return terms.sum()
    n = min(U.N, V.N)
    a = U.padded(n).coeffs
    b = V.padded(n).coeffs
    terms = a * b
    if weight is not None:
        terms = terms * as_interval(weight).sqr()
    return terms.sum()


# trace projection

def trace_matrix_cos(d, N, orders=(0, 2)):
    xi = xi_grid(d, np.arange(N + 1))
    sign = np.where(np.arange(N + 1) % 2 == 0, 1.0, -1.0)
    rows = [xi ** j * sign if j else Interval(sign) for j in orders]
    return Interval(np.stack([r.lo for r in rows]), np.stack([r.hi for r in rows]), _trusted=True)


def trace_matrix_exp(d, N, orders=(0, 1, 2, 3)):
    k = np.arange(-N, N + 1)
    xi = xi_grid(d, k)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    rows = [xi ** j * sign if j else Interval(sign) for j in orders]
    return Interval(np.stack([r.lo for r in rows]), np.stack([r.hi for r in rows]), _trusted=True)


def _float_project(coeffs, tmat, weights, dvals):
    """Float version of coeffs - D T^* (T D T^*)^{-1} T coeffs."""
    tw = tmat * weights
    gram = (tw * dvals) @ tmat.T
    rhs = tw @ coeffs
    try:
        y = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularTraceGram(str(exc)) from exc
    if not np.all(np.isfinite(y)):
        raise SingularTraceGram("trace Gram matrix is numerically singular")
    return coeffs - dvals * (tmat.T @ y)


def _solve_fractions(A, b):
    """Gaussian elimination over the rationals for a tiny square system."""
    n = len(b)
    M = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise SingularTraceGram("trace correction system is singular")
        M[col], M[piv] = M[piv], M[col]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col] / M[col][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] / M[i][i] for i in range(n)]


def _exact_null_traces(values, ks, weights, powers, fix):
    """Re-solve the entries at positions ``fix`` so that, exactly,

        sum_n weights_n (-1)^{k_n} k_n^j values_n = 0   for j in powers.

    The factors (pi/d)^j are common to each condition and drop out, so the
    conditions have integer coefficients and are solved in rationals.  The
    fixed entries come back as tight intervals around the exact solution;
    every other entry stays a thin float.  ``fix`` is a list of groups of
    positions sharing one unknown, with a sign per position.
    """
    values = np.asarray(values, float)
    fixed = {i for group in fix for i, _ in group}
    rest = [i for i in range(len(values)) if i not in fixed and values[i] != 0.0]

    def coef(i, j):
        k = int(ks[i])
        return int(weights[i]) * (-1 if k % 2 else 1) * k**j

    rhs = []
    for j in powers:
        total = Fraction(0)
        for i in rest:
            total += coef(i, j) * Fraction(float(values[i]))
        rhs.append(-total)
    A = [[sum(sgn * coef(i, j) for i, sgn in group) for group in fix] for j in powers]
    sol = _solve_fractions(A, rhs)
    lo = values.copy()
    hi = values.copy()
    for x, group in zip(sol, fix):
        for i, sgn in group:
            iv = Interval.from_fraction(sgn * x)
            lo[i], hi[i] = iv.lo, iv.hi
    return Interval(lo, hi)


def trace_project(U: CosineSeq, p: SymbolParams) -> CosineSeq:
    """Project onto sequences whose function and second derivative vanish at x = +-d.

    Even functions have vanishing odd derivatives there automatically, so the
    result extends by zero to an H^4 function on the line.  The projection
    D T^* (T D T^*)^{-1} T with D = diag(1/l) is applied in floats; whatever
    trace is left by rounding is then removed exactly through modes 0 and 1.
    """
    N = U.N
    n = np.arange(N + 1)
    w = alpha_weights(N)
    tmat = trace_matrix_cos(U.d, N).mid()
    dvals = (1.0 / l_sym(p, U.xi())).mid()
    proj = _float_project(U.mid(), tmat, w, dvals)
    return CosineSeq(U.d, _exact_null_traces(proj, n, w, (0, 2), [[(0, 1)], [(1, 1)]]))


def trace_project_exp(V: ExpSeq, dvals) -> ExpSeq:
    """Four-condition analogue (orders 0..3) for an even or odd exponential sequence.

    The float projection is followed by an exact correction that keeps the
    parity: modes 0 and +-1 for even input, +-1 and +-2 for odd input.
    """
    N = V.N
    k = V.k()
    tmat = trace_matrix_exp(V.d, N).mid()
    dvals = as_interval(dvals).mid()
    proj = _float_project(V.mid(), tmat, np.ones(2 * N + 1), dvals)
    rev = proj[::-1]
    if np.array_equal(V.mid(), V.mid()[::-1]):
        proj = 0.5 * (proj + rev)
        fix = [[(N, 1)], [(N - 1, 1), (N + 1, 1)]]
        powers = (0, 2)
    elif np.array_equal(V.mid(), -V.mid()[::-1]):
        proj = 0.5 * (proj - rev)
        fix = [[(N + 1, 1), (N - 1, -1)], [(N + 2, 1), (N - 2, -1)]]
        powers = (1, 3)
    else:
        raise ValueError("trace projection expects an even or odd sequence")
    ones = np.ones(2 * N + 1)
    return ExpSeq(V.d, _exact_null_traces(proj, k, ones, powers, fix))


def trace_values_cos(U: CosineSeq, orders=(0, 2)) -> Interval:
    tmat = trace_matrix_cos(U.d, U.N, orders)
    return imatmul(tmat * alpha_weights(U.N), U.coeffs.reshape(-1, 1)).reshape(-1)


def trace_values_exp(V: ExpSeq, orders=(0, 1, 2, 3)) -> Interval:
    tmat = trace_matrix_exp(V.d, V.N, orders)
    return imatmul(tmat, V.coeffs.reshape(-1, 1)).reshape(-1)


# cosh coefficients

def cosh_coeffs(beta, d, N) -> CosineSeq:
    """Scaled cosine coefficients of cosh(2 beta x) on (-d, d).

    Returns E_hat with e^{2 beta d} E_hat_n equal to the true coefficients,
    E_hat_n = beta (-1)^n (1 - e^{-4 beta d}) / (d (4 beta^2 + xi_n^2)).
    """
    beta = as_interval(beta)
    n = np.arange(N + 1)
    xi = xi_grid(d, n)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    top = beta * (1.0 - ival_elem("exp", -4.0 * beta * float(d))) / float(d)
    return CosineSeq(float(d), top * sign / (4.0 * beta.sqr() + xi.sqr()))


def cosh_coeffs_full(beta, d, N) -> ExpSeq:
    return cosh_coeffs(beta, d, N).full()


# operator norms on the weighted space

def weighted_op_norm(M, row_start=0, col_start=0) -> Interval:
    """Upper bound of the operator norm of M between alpha-weighted l^2 spaces.

    Rows are output modes row_start.., columns input modes col_start..
    """
    M = as_interval(M)
    r = np.ones(M.shape[0])
    c = np.ones(M.shape[1])
    if row_start == 0:
        r[0] = 0.0
    if col_start == 0:
        c[0] = 0.0
    # alpha^(1/2) on rows, alpha^(-1/2) on columns; only mode 0 differs
    rs = iv_where(r > 0, SQRT2, 1.0)
    cs = iv_where(c > 0, SQRT2, 1.0)
    scaled = M * rs.reshape(-1, 1) / cs.reshape(1, -1)
    return mat_norm2_upper(scaled)


# function-space bounds for trig polynomials

def _cell_grid(d, h):
    M = max(1, int(np.ceil(float(d) / h)))
    return M


def trig_cell_sups(coeffs: Interval, d, kind, M, deriv=0, K=12, cells=None):
    """Upper bounds of |v^(deriv)| on the cells [d i/M, d (i+1)/M].

    v = c_0 + 2 sum c_n cos(xi_n x) for kind 'cos', v = 2 sum c_n sin(xi_n x)
    for kind 'sin'.  Each bound comes from a Taylor expansion of order K at
    the cell midpoint with a crude Lagrange remainder.  Midpoints are placed
    at rational multiples of d so the phases xi_n * m reduce exactly.
    """
    coeffs = as_interval(coeffs)
    N = len(coeffs) - 1
    n = np.arange(N + 1)
    if cells is None:
        cells = np.arange(M)
    cells = np.asarray(cells)
    # phase pi * n * (2i+1) / (2M), reduced mod 2 pi
    j = (np.outer(2 * cells + 1, n)) % (4 * M)
    phase = PI * Interval(j.astype(float)) / float(2 * M)
    C = ival_elem("cos", phase)
    S = ival_elem("sin", phase)
    xi = xi_grid(d, n)
    mag = abs(coeffs)
    weights = np.full(N + 1, 2.0)
    if kind == "cos":
        weights[0] = 1.0
    else:
        weights[0] = 0.0
    orders = deriv + np.arange(K + 1)
    P = []
    for o in orders:
        if o == 0:
            P.append(coeffs * weights)
        else:
            P.append(coeffs * weights * xi ** int(o))
    P = Interval(np.stack([p.lo for p in P], axis=1), np.stack([p.hi for p in P], axis=1), _trusted=True)
    A = imatmul(C, P)
    B = imatmul(S, P)
    h2 = Interval(float(d)) / float(2 * M)
    total = Interval(np.zeros(len(cells)))
    for idx in range(K):
        o = int(orders[idx])
        if kind == "cos":
            val = (A, -B, -A, B)[o % 4][:, idx]
        else:
            val = (B, A, -B, -A)[o % 4][:, idx]
        total = total + abs(val) * (h2 ** idx / float(factorial(idx)))
    oK = int(orders[K])
    top = (mag * weights * (xi ** oK if oK else Interval(np.ones(N + 1)))).sum()
    rem = top * (h2 ** K) / float(factorial(K))
    return (total + rem).hi


def _trig_parts(V):
    if isinstance(V, CosineSeq):
        return [("cos", V.coeffs)]
    even, odd = V.even_odd()
    parts = []
    if np.any(even.coeffs.mag() > 0):
        parts.append(("cos", even.coeffs))
    if np.any(odd.coeffs.mag() > 0):
        parts.append(("sin", odd.coeffs))
    return parts or [("cos", even.coeffs)]


def sup_on_cells(V, M, deriv=0, K=12, cells=None):
    """Upper bounds of |v^(deriv)| on cells of width d/M covering [0, d]."""
    total = None
    for kind, c in _trig_parts(V):
        s = trig_cell_sups(c, V.d, kind, M, deriv=deriv, K=K, cells=cells)
        total = s if total is None else np.asarray(upper_sum_nonneg(np.stack([total, s]), axis=0))
    return np.asarray(total)


def cosh_inner_function(V, beta, h=0.1, K=12) -> Interval:
    """Upper bound of (V, E_hat * V) = (1/2d) int v^2 cosh(2 beta x) e^{-2 beta d} dx.

    v^2 is even, so the integral is twice the one over [0, d]; the weight is
    increasing there and its cell maximum sits at the right edge.
    """
    d = float(V.d)
    M = _cell_grid(d, h)
    sups = sup_on_cells(V, M, K=K)
    beta = as_interval(beta)
    right = Interval(d * (np.arange(M) + 1) / M)
    right = Interval(np.minimum(right.hi, d))
    w = (ival_elem("exp", 2.0 * beta * (right - d)) + ival_elem("exp", -2.0 * beta * (right + d))) * 0.5
    cell = Interval(d) / float(M)
    integral = (Interval(sups).sqr() * w).sum() * cell * 2.0
    return Interval(0.0, (integral / (2.0 * d)).hi)


def cosh_inner_coeff(V, beta) -> Interval:
    """(V, E_hat * V) evaluated in coefficient space (exact up to rounding)."""
    if isinstance(V, CosineSeq):
        E = cosh_coeffs(beta, V.d, 2 * V.N)
        return inner_weighted(V, conv_even(E, V))
    E = cosh_coeffs(beta, V.d, 2 * V.N).full()
    EV = conv_full(E, V)
    return inner_weighted(V, EV)


def cosh_inner(V, beta, h=0.1, K=12) -> Interval:
    """Best of the coefficient and function-space enclosures; both are upper bounds."""
    a = cosh_inner_coeff(V, beta)
    b = cosh_inner_function(V, beta, h=h, K=K)
    hi = min(a.hi.item(), b.hi.item())
    return Interval(0.0, max(hi, 0.0))


def boundary_derivative_sq_function(V, h=0.02, K=12) -> Interval:
    """Upper bound of the integral of |v'|^2 over [d-1, d] from cell sups."""
    d = float(V.d)
    M = _cell_grid(d, h)
    edges_left = d * np.arange(M) / M
    edges_right = d * (np.arange(M) + 1) / M
    cells = np.nonzero(edges_right > d - 1.0)[0]
    sups = sup_on_cells(V, M, deriv=1, K=K, cells=cells)
    cell = Interval(d) / float(M)
    return Interval(0.0, ((Interval(sups).sqr()).sum() * cell).hi)


def _sinc(x: Interval) -> Interval:
    small = x.mag() < 1e-3
    xs = iv_where(small, 1.0, x)
    direct = ival_elem("sin", xs) / xs
    # |sinc(x) - (1 - x^2/6)| <= x^4/120
    x2 = x.sqr()
    series = 1.0 - x2 / 6.0 + Interval(-1.0, 1.0) * x2.sqr() / 120.0
    return iv_where(small, series, direct)


def boundary_derivative_sq_coeff(V) -> Interval:
    """Exact quadratic form for the integral of |v'|^2 over [d-1, d].

    Mixed parity is handled by Minkowski's inequality over the two parts.
    """
    roots = [ival_elem("sqrt", _boundary_form(kind, c, float(V.d))) for kind, c in _trig_parts(V)]
    total = roots[0]
    for r in roots[1:]:
        total = total + r
    return Interval(0.0, total.sqr().hi.item())


def _boundary_form(kind, c, d):
    N = len(c) - 1
    n = np.arange(1, N + 1)
    w = c[1:] * xi_grid(d, n)
    diff = xi_grid(d, (n[:, None] - n[None, :]).astype(float))
    summ = xi_grid(d, (n[:, None] + n[None, :]).astype(float))
    sign = np.where((n[:, None] + n[None, :]) % 2 == 0, 1.0, -1.0)
    # sin*sin for a cosine series derivative, cos*cos for a sine series
    if kind == "cos":
        G = (_sinc(diff) - _sinc(summ)) * sign * 0.5
    else:
        G = (_sinc(diff) + _sinc(summ)) * sign * 0.5
    q = imatmul(w.reshape(1, -1), imatmul(G, w.reshape(-1, 1))).reshape(())
    return Interval(0.0, max(q.hi.item(), 0.0)) * 4.0


def boundary_derivative_sq(V) -> Interval:
    a = boundary_derivative_sq_coeff(V)
    b = boundary_derivative_sq_function(V)
    return Interval(0.0, min(a.hi.item(), b.hi.item()))

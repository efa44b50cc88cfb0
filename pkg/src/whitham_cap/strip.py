"""Certified strip of analyticity and the kernel decay constants.

A strip |Im z| <= a is verified by covering the rectangle [0, x] x [0, a]
with boxes (evenness and conjugate symmetry of m_T give the other three
quadrants) and checking |m_T - c| on each box.  Outside Re z = x an explicit
inequality takes over, which is what fixes x.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ThresholdUnsatisfied, VerificationFailed
from .rigor import (PI, SQRT2, ComplexBox, Interval, as_interval, cbox_sqrt,
                    imax, ival_elem, iv_where, ipow)
from .symbols import SymbolParams, m_T, tanh_over_id_complex

log = logging.getLogger(__name__)

MAX_DEPTH = 20
BOX_BUDGET = 1_000_000
BATCH = 40_000


@dataclass
class StripData:
    params: SymbolParams
    a: float
    sigma0: float
    x: float
    sigma_real: float
    sigma1: float | None = None
    x_sigma1: float | None = None
    verified: bool = False
    sigma1_verified: bool = False
    boxes: int = 0
    max_depth: int = 0

    def to_json(self):
        return {
            "a": repr(self.a), "sigma0": repr(self.sigma0), "x": repr(self.x),
            "sigma_real": repr(self.sigma_real),
            "sigma1": None if self.sigma1 is None else repr(self.sigma1),
            "x_sigma1": None if self.x_sigma1 is None else repr(self.x_sigma1),
            "verified": self.verified, "sigma1_verified": self.sigma1_verified,
            "boxes": self.boxes, "max_depth": self.max_depth,
        }


@dataclass
class DecayConstants:
    a0: Interval
    C_Y0: Interval
    C0: Interval
    C1: Interval
    K1: Interval
    K2: Interval
    C2: Interval
    kappa: Interval
    sup_embed: Interval
    xi0: float
    extras: dict = field(default_factory=dict)

    def to_json(self):
        out = {k: getattr(self, k).to_json() for k in
               ("a0", "C_Y0", "C0", "C1", "K1", "K2", "C2", "kappa", "sup_embed")}
        out["xi0"] = repr(self.xi0)
        return out


# box evaluation

def _mc_lower(p: SymbolParams, xl, xh, yl, yh):
    """Lower bounds of |m_T(z) - c| on boxes; NaN marks boxes that must be split."""
    n = len(xl)
    out = np.full(n, np.nan)
    z = ComplexBox(Interval(xl, xh), Interval(yl, yh))
    near = z.abs2().hi <= 1.0 / 16.0
    vals_re_lo = np.zeros(n)
    vals_re_hi = np.zeros(n)
    vals_im_lo = np.zeros(n)
    vals_im_hi = np.zeros(n)
    good = np.zeros(n, bool)
    for mask, is_near in ((near, True), (~near, False)):
        idx = np.nonzero(mask)[0]
        if idx.size == 0:
            continue
        zs = z[idx]
        if is_near:
            t = tanh_over_id_complex(zs)
            ok = np.ones(idx.size, bool)
        else:
            x, y = zs.re, zs.im
            sech = 1.0 / ival_elem("cosh", 2.0 * x)
            den = 1.0 + ival_elem("cos", 2.0 * y) * sech
            has_zero = (x.lo <= 0) & (x.hi >= 0) & (y.lo <= 0) & (y.hi >= 0)
            ok = (den.lo > 0) & ~has_zero
            den = iv_where(ok, den, 1.0)
            th = ComplexBox(ival_elem("tanh", 2.0 * x) / den, ival_elem("sin", 2.0 * y) * sech / den)
            zsafe = ComplexBox(iv_where(ok, x, 1.0), iv_where(ok, y, 0.0))
            t = th / zsafe
        if p.T > 0:
            t = t * (ComplexBox(Interval(1.0)) + zs.sqr() * p.T_iv)
        cut = (t.re.lo < 0) & (t.im.lo <= 0) & (t.im.hi >= 0)
        ok &= ~cut
        t = ComplexBox(iv_where(ok, t.re, 1.0), iv_where(ok, t.im, 0.0))
        s = cbox_sqrt(t)
        w_re = s.re - p.c_iv
        w_im = s.im
        vals_re_lo[idx], vals_re_hi[idx] = w_re.lo, w_re.hi
        vals_im_lo[idx], vals_im_hi[idx] = w_im.lo, w_im.hi
        good[idx] = ok
    w = ComplexBox(Interval(vals_re_lo, vals_re_hi), Interval(vals_im_lo, vals_im_hi))
    low = Interval(w.re.mig()).sqr() + Interval(w.im.mig()).sqr()
    lower = ival_elem("sqrt", Interval(np.maximum(low.lo, 0.0))).lo
    out[good] = lower[good]
    return out


def _cover(p, boxes, required, label, max_depth=MAX_DEPTH, budget=BOX_BUDGET):
    """Breadth-first certification that lower(|m_T - c|) meets ``required`` on all boxes.

    ``boxes`` is an (n, 4) array of [xl, xh, yl, yh]; ``required(boxes)``
    returns the per-box threshold (strict positivity when it is 0).
    """
    queue = np.asarray(boxes, float)
    depth = np.zeros(len(queue), int)
    total = len(queue)
    deepest = 0
    while len(queue):
        batch, queue = queue[:BATCH], queue[BATCH:]
        bdepth, depth = depth[:BATCH], depth[BATCH:]
        lower = _mc_lower(p, batch[:, 0], batch[:, 1], batch[:, 2], batch[:, 3])
        need = required(batch)
        ok = np.where(need > 0, lower >= need, lower > 0)
        ok &= ~np.isnan(lower)
        bad = np.nonzero(~ok)[0]
        if bad.size == 0:
            continue
        if np.any(bdepth[bad] >= max_depth):
            j = bad[np.argmax(bdepth[bad])]
            raise VerificationFailed(f"{label}: depth limit reached", box=tuple(batch[j]))
        kids = []
        for j in bad:
            xl, xh, yl, yh = batch[j]
            wx, wy = xh - xl, yh - yl
            if wx >= wy:
                xm = 0.5 * (xl + xh)
                kids += [(xl, xm, yl, yh), (xm, xh, yl, yh)]
            else:
                ym = 0.5 * (yl + yh)
                kids += [(xl, xh, yl, ym), (xl, xh, ym, yh)]
        kids = np.array(kids)
        kdepth = np.repeat(bdepth[bad] + 1, 2)
        deepest = max(deepest, int(kdepth.max()))
        total += len(kids)
        if total > budget:
            raise VerificationFailed(f"{label}: box budget exhausted")
        queue = np.concatenate([queue, kids]) if len(queue) else kids
        depth = np.concatenate([depth, kdepth]) if len(depth) else kdepth
    return total, deepest


def _segments(x, n):
    e = np.linspace(0.0, x, n + 1)
    return e[:-1], e[1:]


# thresholds

def tanh_sq(x) -> Interval:
    """(cosh 2x - 1)/(cosh 2x + 1) = tanh(x)^2."""
    return ival_elem("tanh", Interval(x)).sqr()


def threshold_holds(p: SymbolParams, a, sigma0, x) -> bool:
    x_iv = Interval(x)
    c = p.c_iv
    if p.T > 0:
        rhs = ival_elem("sqrt", (x_iv.sqr() + Interval(a).sqr()) / (p.T_iv.sqr() * tanh_sq(x))) * (abs(c) + sigma0).sqr()
    else:
        r = abs(ival_elem("cos", 2.0 * Interval(a))) / ival_elem("cosh", 2.0 * x_iv)
        rhs = (1.0 + r) / ((c - sigma0) ** 4 * (1.0 - r))
    return bool(x_iv.sqr().lo > rhs.hi)


def choose_x(p, a, sigma0, start=0.5, limit=1e4):
    x = start
    while x <= limit:
        if threshold_holds(p, a, sigma0, x):
            return x
        x *= 1.25
    raise VerificationFailed("no real cutoff x satisfies the tail inequality")


def sigma1_tail_holds(p, a, x) -> bool:
    if x < a:
        return False
    xi = Interval(x)
    q = tanh_sq(x) * p.T_iv.sqr() * xi ** 4 / (xi.sqr() + Interval(a).sqr())
    return bool((0.5 * ival_elem("sqrt", ival_elem("sqrt", q)) - abs(p.c_iv)).lo >= 0)


# verification

def verify_strip(p: SymbolParams, a, sigma0, x=None, n_init=64, max_depth=MAX_DEPTH,
                 budget=BOX_BUDGET) -> StripData:
    """Certify |m_T - c| > 0 on the strip of half-width a and >= sigma0 on its edges."""
    a = float(a)
    sigma0 = float(sigma0)
    if not (0 < a < p.strip_limit.lo):
        raise VerificationFailed(f"strip half-width {a} outside (0, min(1/sqrt(nu), pi/2))")
    if sigma0 <= 0:
        raise VerificationFailed("sigma0 must be positive")
    if p.T == 0 and not (p.c_iv.lo > sigma0):
        raise VerificationFailed("sigma0 must stay below c when T = 0")
    if x is None:
        x = choose_x(p, a, sigma0)
    elif not threshold_holds(p, a, sigma0, x):
        raise VerificationFailed("given x violates the tail inequality")
    lo, hi = _segments(x, n_init)
    lines = np.concatenate([np.stack([lo, hi, np.zeros_like(lo), np.zeros_like(lo)], 1),
                            np.stack([lo, hi, np.full_like(lo, a), np.full_like(lo, a)], 1)])
    n1, d1 = _cover(p, lines, lambda b: np.full(len(b), sigma0), "edge lines", max_depth, budget)
    ny = max(2, int(np.ceil(n_init * a / x)))
    ye = np.linspace(0.0, a, ny + 1)
    xs = np.repeat(np.stack([lo, hi], 1), ny, axis=0)
    ys = np.tile(np.stack([ye[:-1], ye[1:]], 1), (len(lo), 1))
    area = np.concatenate([xs, ys], 1)
    n2, d2 = _cover(p, area, lambda b: np.zeros(len(b)), "strip interior", max_depth, budget - n1)
    sreal = sigma_real(p)
    if sreal < sigma0:
        raise VerificationFailed("real-axis bound below sigma0")
    return StripData(p, a, sigma0, float(x), sreal, verified=True, boxes=n1 + n2,
                     max_depth=max(d1, d2))


def verify_sigma1(p: SymbolParams, s: StripData, sigma1=None, n_init=64) -> StripData:
    """Certify |m_T(xi + ia) - c| >= sigma1 sqrt(T |xi|) (T > 0 only)."""
    if p.T == 0:
        return s
    if not s.verified:
        raise VerificationFailed("strip must be verified first")
    a = s.a
    x = max(a, 1.0)
    while not sigma1_tail_holds(p, a, x):
        x *= 1.25
        if x > 1e6:
            raise VerificationFailed("no cutoff for the sigma1 tail")
    cap = ival_elem("sqrt", ival_elem("sqrt", tanh_sq(x) / 32.0)).lo
    if sigma1 is None:
        xs = np.linspace(1e-3, x, 20000)
        vals = np.abs(_m_float_complex(p, xs + 1j * a) - p.c) / np.sqrt(p.T * xs)
        sigma1 = 0.9 * float(np.min(vals))
    sigma1 = float(min(sigma1, cap))
    lo, hi = _segments(x, n_init)
    line = np.stack([lo, hi, np.full_like(lo, a), np.full_like(lo, a)], 1)

    def need(b):
        return (sigma1 * ival_elem("sqrt", p.T_iv * Interval(b[:, 1]))).hi

    try:
        _cover(p, line, need, "sigma1 line")
    except VerificationFailed:
        raise
    s.sigma1 = sigma1
    s.x_sigma1 = float(x)
    s.sigma1_verified = True
    return s


def sigma_real(p: SymbolParams, X=None, n_init=256) -> float:
    """Certified lower bound of |m_T - c| on the real line."""
    c = p.c_iv
    if p.T == 0:
        # m_0 <= 1 everywhere
        val = (c - 1.0).lo
        if val <= 0:
            raise VerificationFailed("c <= 1 with T = 0: symbol reaches the speed")
        return float(val)
    if X is None:
        X = 2.0
        while True:
            tail = (ival_elem("sqrt", ival_elem("tanh", Interval(X)) * p.T_iv * X) - abs(c)).lo
            if tail > 0.5:
                break
            X *= 2.0
    tail = float((ival_elem("sqrt", ival_elem("tanh", Interval(X)) * p.T_iv * X) - abs(c)).lo)
    xs = np.linspace(0.0, X, 20001)
    cand = float(np.min(np.abs(_m_float_real(p, xs) - p.c)))
    target = min(cand * (1 - 1e-3), tail)
    if target <= 0:
        raise VerificationFailed("real-axis symbol touches the speed")
    lo, hi = _segments(X, n_init)
    queue = [(l, h, 0) for l, h in zip(lo, hi)]
    while queue:
        arr = np.array([(q[0], q[1]) for q in queue])
        depth = np.array([q[2] for q in queue])
        vals = abs(m_T(p, Interval(arr[:, 0], arr[:, 1])) - c).lo
        bad = np.nonzero(vals < target)[0]
        queue = []
        for j in bad:
            if depth[j] >= 40:
                raise VerificationFailed("real-axis bound failed", box=tuple(arr[j]))
            m = 0.5 * (arr[j, 0] + arr[j, 1])
            queue += [(arr[j, 0], m, depth[j] + 1), (m, arr[j, 1], depth[j] + 1)]
    return float(target)


# float pre-scan

def _m_float_complex(p, z):
    z = np.asarray(z, complex)
    with np.errstate(all="ignore"):
        r = np.where(np.abs(z) > 1e-8, np.tanh(z) / np.where(np.abs(z) > 1e-8, z, 1.0), 1.0)
    return np.sqrt(r * (1.0 + p.T * z**2))


def _m_float_real(p, x):
    return _m_float_complex(p, np.asarray(x, float) + 0j).real


def prescan(p: SymbolParams, X=40.0, n=8000, n_a=60):
    """Float scan: candidate strip widths with the minimum of |m_T - c| on each edge line."""
    xs = np.linspace(0.0, X, n)
    limit = float(p.strip_limit.lo)
    c = p.c if p.c_span is None else None
    cs = [p.c] if c is not None else [p.c_span[0], p.c_span[1]]
    real_min = min(float(np.min(np.abs(_m_float_real(p, xs) - cc))) for cc in cs)
    a_grid = np.linspace(0.02, 0.95 * limit, n_a)
    line_min = np.array([min(float(np.min(np.abs(_m_float_complex(p, xs + 1j * a) - cc))) for cc in cs)
                         for a in a_grid])
    return real_min, a_grid, line_min


def strip_candidates(p: SymbolParams):
    """Candidate (a, sigma0) pairs, widest strip first."""
    real_min, a_grid, line_min = prescan(p)
    # the edge-line minimum can recover after the strip has swallowed a zero
    # of m_T - c, so only the contiguous run of good widths from 0 counts
    out = []
    for a, lm in zip(a_grid, line_min):
        if lm < 0.5 * real_min:
            break
        out.append((float(a), 0.9 * min(real_min, float(lm))))
    return out[::-1]


def auto_strip(p: SymbolParams, tries=6) -> StripData:
    """Verify the widest candidate strip that passes, then sigma1 when T > 0."""
    cands = strip_candidates(p)
    if not cands:
        raise VerificationFailed("pre-scan found no admissible strip")
    step = max(1, len(cands) // tries)
    last = None
    for a, s0 in cands[::step][:tries]:
        try:
            s = verify_strip(p, a, s0)
            if p.T > 0:
                s = verify_sigma1(p, s)
            return s
        except VerificationFailed as exc:
            last = exc
            log.info("strip candidate a=%g sigma0=%g rejected: %s", a, s0, exc)
    raise last


# decay constants

def _S_constant(n=4000, s_max=8.0) -> Interval:
    """Upper bound of max_{s>0} min{sqrt(s) + sqrt(2), sqrt(2)/(1 - e^{-pi s})}.

    The first branch increases and the second decreases, so on a cell
    [s_i, s_{i+1}] the minimum is at most min{f(s_{i+1}), g(s_i)}.
    """
    e = np.linspace(0.0, s_max, n + 1)
    right = Interval(e[1:])
    left = Interval(e[1:-1])
    f = ival_elem("sqrt", right) + SQRT2
    g_inner = SQRT2 / (1.0 - ival_elem("exp", -PI * left))
    f_hi = f.hi
    g_hi = np.concatenate([[np.inf], g_inner.hi])
    # beyond s_max only the decreasing branch matters
    tail = (SQRT2 / (1.0 - ival_elem("exp", -PI * s_max))).hi
    return Interval(max(float(np.max(np.minimum(f_hi, g_hi))), float(tail)))


def C_a(a) -> Interval:
    k = abs(ival_elem("cos", 2.0 * as_interval(a)))
    return (1.0 + k) / (1.0 - k)


def xi0_conditions(p: SymbolParams, a, xi0) -> bool:
    if p.T == 0:
        return xi0 >= 1
    T, c = p.T_iv, abs(p.c_iv)
    x = Interval(xi0)
    th = ival_elem("tanh", x)
    ok = (0.5 * ival_elem("sqrt", th * T * x) - c).lo >= 0
    ok &= bool(x.lo >= max(1.0, (1.0 / ival_elem("sqrt", T)).hi))
    ok &= (2.0 * th * x / (3.0 * T)).lo >= 1.0
    ok &= (0.5 * ival_elem("sqrt", 1.0 / C_a(a)) * ival_elem("sqrt", T * x) - c).lo >= 0
    return bool(ok)


def _K1(p, s, sigma0, xi0):
    x = Interval(xi0)
    c = p.c_iv
    cabs = abs(c)
    if p.T > 0:
        T = p.T_iv
        sT = ival_elem("sqrt", T)
        return (2.0 * x / (PI * sigma0)
                + 2.0 * ival_elem("sqrt", x) * (1.0 + cabs) / (PI * sigma0 * sT)
                + 2.0 * (1.0 / (3.0 * T) + cabs / (4.0 * T * sT) + 2.0 * c.sqr() / T)
                / (PI * ival_elem("sqrt", ival_elem("tanh", x) * T) * ival_elem("sqrt", x))
                + cabs / (T * PI) * (2.0 + 3.0 * ival_elem("ln", x))
                + 1.0 / ival_elem("sqrt", 2.0 * PI * T))
    cube = cabs ** 3
    mn = Interval(np.minimum(1.0, cube.lo), np.minimum(1.0, cube.hi))
    return ((2.0 + 4.0 * ival_elem("exp", -2.0 * x)) / (PI * mn * ival_elem("sqrt", x) * sigma0)
            + 1.0 / (PI * sigma0 * cabs) + 2.0 / (PI * c.sqr())
            + (2.0 + 3.0 * ival_elem("ln", x)) / (PI * cube)
            + 1.0 / (c.sqr() * ival_elem("sqrt", 2.0 * PI)))


def _K2(p, a, sigma0, xi0):
    a = as_interval(a)
    Ca = C_a(a)
    if p.T > 0:
        T = p.T_iv
        x = Interval(xi0)
        r = ival_elem("sqrt", x.sqr() + a.sqr())
        first = Ca * r / (2.0 * PI * sigma0.sqr() * (1.0 - T * a.sqr()).sqr()) * (
            (1.0 + T * a.sqr() + a * Ca) / a.sqr() + Ca * T * r)
        second = 2.0 * Ca.sqr() / PI * (2.0 * (1.0 + T) / ival_elem("sqrt", T * x)
                                        + (2.0 + a) / 2.0 * ival_elem("exp", -2.0 * x))
        return first + second
    k = abs(ival_elem("cos", 2.0 * a))
    q = ival_elem("sqrt", ival_elem("sqrt", Ca))
    return q / PI * (1.0 / (2.0 * sigma0.sqr()) * (1.0 / (a * ival_elem("sqrt", a)) + 2.0)
                     + 1.0 / (4.0 * sigma0.sqr() * (1.0 - k).sqr() * ival_elem("sqrt", a)))


def decay_constants(p: SymbolParams, s: StripData, xi0=None) -> DecayConstants:
    """Every decay and embedding constant as an interval whose hi is the bound."""
    if not s.verified:
        raise VerificationFailed("decay constants need a verified strip")
    if p.T > 0 and not s.sigma1_verified:
        raise VerificationFailed("decay constants need a verified sigma1 when T > 0")
    a = Interval(s.a)
    sigma0 = Interval(s.sigma0)
    nu = p.nu
    c = p.c_iv
    Ca = C_a(a)
    S = _S_constant()
    if p.T > 0:
        T = p.T_iv
        a0 = imin_iv(PI * 0.5, 1.0 / ival_elem("sqrt", T))
        CY0 = S / (ival_elem("sqrt", PI) * ival_elem("sqrt", ival_elem("sqrt", T))) * (
            2.0 / ival_elem("sqrt", 1.0 + a0 * ival_elem("sqrt", T)) + 1.0 / SQRT2)
        C1 = (2.0 * (1.0 + a) / (sigma0 * (1.0 - nu * a.sqr()))
              + 4.0 * (1.0 + a) / (Interval(s.sigma1) * ival_elem("sqrt", T) * nu)) / (2.0 * PI)
    else:
        a0 = Interval(1.0)
        CY0 = S
        C1 = (1.0 / (2.0 * c * nu)
              + (1.0 + ival_elem("sqrt", a)) * ival_elem("sqrt", ival_elem("sqrt", Ca)) / (PI * c * sigma0)
              * (1.0 / (1.0 - nu * a.sqr()) + 2.0 / nu))
    C0 = 1.0 / (PI * sigma0 * (1.0 - nu * a.sqr())) + 1.0 / (PI * nu * sigma0)

    ladder = [2.0**k for k in range(0, 16)]
    certified = [x for x in ladder if xi0_conditions(p, s.a, x)] if xi0 is None else [float(xi0)]
    if not certified or not xi0_conditions(p, s.a, certified[0]):
        raise ThresholdUnsatisfied("no tail threshold xi0 satisfies the side conditions")
    best = None
    for x in certified[:8]:
        K1 = _K1(p, s, sigma0, x)
        K2 = _K2(p, s.a, sigma0, x)
        C2 = imax(K2, K1 * ival_elem("exp", a))
        if best is None or C2.hi < best[3].hi:
            best = (x, K1, K2, C2)
    x0, K1, K2, C2 = best
    sr = Interval(s.sigma_real)
    nu4 = ival_elem("sqrt", ival_elem("sqrt", nu))
    kappa = 2.0 / (sr.sqr() * nu4)
    embed = 1.0 / (2.0 * nu4 * sr)
    return DecayConstants(a0=a0, C_Y0=CY0, C0=C0, C1=C1, K1=K1, K2=K2, C2=C2,
                          kappa=kappa, sup_embed=embed, xi0=x0, extras={"S": S, "C_a": Ca})


def imin_iv(a, b):
    a, b = as_interval(a), as_interval(b)
    return Interval(np.minimum(a.lo, b.lo), np.minimum(a.hi, b.hi), _trusted=True)

"""Interval bounds for the fixed-point argument of the existence proof.

Three numbers are produced: a residual bound Y0, a defect bound Z1 for
the approximate inverse and a Lipschitz constant Z2 for the derivative.
Each is the sum of a periodic part computed from finite matrices and an
exponentially small part that accounts for the unbounded line.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import MissingStripCertificate, TailMinimumUnverified
from .fourier import (CosineSeq, ExpSeq, boundary_derivative_sq, conv_even, conv_full,
                      conv_matrix_even, cosh_inner, derivative_cos_to_exp, weighted_op_norm)
from .inverse import ApproxInverse
from .rigor import LN2, PI, Interval, as_interval, imin, ival_elem
from .strip import DecayConstants, StripData
from .symbols import SymbolParams, l_grid, l_nu, lnu_grid, m_T, xi_grid

log = logging.getLogger(__name__)


@dataclass
class ProofBounds:
    Y0: Interval
    Z1: Interval
    Z2: Interval
    Y0_finite: Interval
    Yu: Interval
    Z11: Interval
    Z12: Interval
    Z13: Interval
    Z14: Interval
    Z1_finite: Interval
    Zu: Interval
    Zu_by_component: list
    tail_minima: dict = field(default_factory=dict)

    def to_json(self):
        out = {k: getattr(self, k).to_json() for k in
               ("Y0", "Z1", "Z2", "Y0_finite", "Yu", "Z11", "Z12", "Z13", "Z14", "Z1_finite", "Zu")}
        out["Zu_by_component"] = [c.to_json() for c in self.Zu_by_component]
        out["tail_minima"] = {k: v.to_json() for k, v in self.tail_minima.items()}
        return out

    def table(self):
        rows = [("Y0", self.Y0), ("  Y0 finite", self.Y0_finite), ("  Yu", self.Yu),
                ("Z1", self.Z1), ("  Z1 finite", self.Z1_finite), ("    Z11", self.Z11),
                ("    Z12", self.Z12), ("    Z13", self.Z13), ("    Z14", self.Z14), ("  Zu", self.Zu)]
        rows += [(f"    Zu[{k}]", c) for k, c in enumerate(self.Zu_by_component)]
        rows.append(("Z2", self.Z2))
        return "\n".join(f"{name:<14s} {float(v.hi):.6e}" for name, v in rows)


def _hi(x) -> Interval:
    """Collapse to the upper endpoint, keeping zero as the lower one."""
    x = as_interval(x)
    return Interval(0.0, max(float(x.hi), 0.0))


# e^{-2 beta d}-scaled constants

def C_d(d, beta, beta_mid=None) -> Interval:
    """e^{-2 b d}(4d + 4 e^{-b d}/(b'(1 - e^{-3 b d/2})) + 2/(b(1 - e^{-2 b d})))."""
    b = as_interval(beta)
    bm = b if beta_mid is None else as_interval(beta_mid)
    d = float(d)
    e = lambda t: ival_elem("exp", t)
    inner = (4.0 * d + 4.0 * e(-b * d) / (bm * (1.0 - e(-1.5 * b * d)))
             + 2.0 / (b * (1.0 - e(-2.0 * b * d))))
    return e(-2.0 * b * d) * inner


def C1_d(d, a) -> Interval:
    """2 sqrt(pi) e^{-2ad}/(sqrt(4ad)(1 - e^{-2ad})) + 4 e^{-2ad}/(1 - e^{-2ad})."""
    a = as_interval(a)
    d = float(d)
    q = ival_elem("exp", -2.0 * a * d)
    return (2.0 * ival_elem("sqrt", PI) * q / (ival_elem("sqrt", 4.0 * a * d) * (1.0 - q))
            + 4.0 * q / (1.0 - q))


# the residual

def residual(p: SymbolParams, U0: CosineSeq) -> CosineSeq:
    """F(U0) = L U0 + L_nu (U0 * U0), exact on 2N+1 cosine modes."""
    N = U0.N
    sq = conv_even(U0, U0)
    lin = U0.padded(2 * N)
    n = np.arange(2 * N + 1)
    vals = lin.coeffs * l_grid(p, U0.d, n) + sq.coeffs * lnu_grid(p, U0.d, n)
    return CosineSeq(U0.d, vals)


def _tail_norm2(C: CosineSeq, start) -> Interval:
    tail = C.coeffs[start:]
    return ival_elem("sqrt", (tail.sqr() * 2.0).sum())


def bound_Y0(p: SymbolParams, U0: CosineSeq, inv: ApproxInverse, dc: DecayConstants, s: StripData):
    """(Y0_finite, Yu)."""
    d = U0.d
    N = inv.N
    F = residual(p, U0)
    head = CosineSeq(d, inv.BN @ F.coeffs[: N + 1])
    WF = conv_even(inv.WT, F)
    total = head.norm2().sqr() + _tail_norm2(WF, N + 1).sqr()
    Y0_finite = ival_elem("sqrt", 2.0 * Interval(d)) * ival_elem("sqrt", total)

    V = CosineSeq(d, U0.coeffs * lnu_grid(p, d, np.arange(U0.N + 1)).sqr())
    inner = cosh_inner(V, dc.a0)
    a0 = dc.a0
    factor = 1.0 + inv.normB.sqr() * (1.0 + C_d(d, a0, imin(a0, Interval(s.a))))
    Yu = 2.0 * Interval(d) * dc.C_Y0 * ival_elem("sqrt", inner * factor)
    return _hi(Y0_finite), _hi(Yu)


# tail minima of the symbol ratios

def tail_minima(p: SymbolParams, d, N):
    """Lower bounds of |l|, |l|/xi and the tail-multiplier ratio over modes n > N.

    Past the frequency 1/sqrt(nu) each ratio is increasing, so the minimum
    over n > N is attained within a finite window that reaches it.
    """
    nu = p.nu
    threshold = (1.0 / ival_elem("sqrt", nu)).hi
    nw = max(N + 1, int(np.ceil(float(threshold) * d / np.pi)) + 1)
    n = np.arange(N + 1, nw + 1)
    xi = xi_grid(d, n)
    if float(xi[len(n) - 1].lo) < float(threshold):
        raise TailMinimumUnverified("tail window does not reach the monotone regime")
    m = m_T(p, xi)
    c = p.c_iv
    lnu = l_nu(p, xi)
    gap = c - m if p.T == 0 else m - c
    if np.any(gap.lo <= 0):
        raise TailMinimumUnverified("symbol minus speed changes sign in the tail")
    l0 = gap * lnu
    l1 = l0 / xi
    l2 = c * gap / m if p.T == 0 else gap
    out = {}
    for name, v in (("l0", l0), ("l1", l1), ("l2", l2)):
        low = float(np.min(v.lo))
        if not low > 0:
            raise TailMinimumUnverified(f"{name} not bounded away from zero")
        out[name] = Interval(low)
    return out


def tail_parts(p: SymbolParams, U0: CosineSeq):
    """V0 = -2 nu u0'' (cosine), V1 = -4 nu u0' (exponential, odd), V2 = 2 u0."""
    nu = p.nu
    V0 = CosineSeq(U0.d, U0.coeffs * U0.xi().sqr() * (2.0 * nu))
    V1 = derivative_cos_to_exp(U0).scale(-4.0 * nu)
    V2 = U0.scale(2.0)
    return V0, V1, V2


def bound_Z1_finite(p: SymbolParams, U0: CosineSeq, inv: ApproxInverse, s: StripData | None = None):
    """(Z11, Z12, Z13, Z14) for the periodic part of the defect."""
    if s is not None and not s.verified:
        raise MissingStripCertificate("Z1 needs a verified strip")
    d = U0.d
    N = inv.N
    n2 = np.arange(2 * N + 1)
    Linv = 1.0 / l_grid(p, d, n2)
    Lnu = lnu_grid(p, d, n2)
    U = U0.padded(N)
    CU = conv_matrix_even(U.coeffs, n2, n2)
    DGL = CU * (2.0 * Lnu).reshape(-1, 1) * Linv.reshape(1, -1)

    DFL = DGL[:, : N + 1]
    eye = np.zeros((2 * N + 1, N + 1))
    eye[np.arange(N + 1), np.arange(N + 1)] = 1.0
    DFL = DFL + eye
    first = Interval(np.eye(N + 1)) - inv.BN @ DFL[: N + 1]
    z_a = weighted_op_norm(first)
    if p.T > 0:
        z_b = weighted_op_norm(DFL[N + 1:], row_start=N + 1)
    else:
        CW = conv_matrix_even(inv.WT, np.arange(N + 1, 3 * N + 1), n2)
        z_b = weighted_op_norm(CW @ DFL, row_start=N + 1)
    Z11 = ival_elem("sqrt", z_a.sqr() + z_b.sqr())

    Z12 = weighted_op_norm(inv.BN @ DGL[: N + 1, N + 1:], row_start=0, col_start=N + 1)

    mins = tail_minima(p, d, N)
    V0, V1, V2 = tail_parts(p, U)
    W = inv.WT
    Z13 = (conv_even(W, V0).norm1() / mins["l0"]
           + conv_full(W.full(), V1).norm1() / mins["l1"]
           + conv_even(W, V2).norm1() / mins["l2"])
    Z14 = inv.defect1 if p.T == 0 else Interval(0.0)
    return _hi(Z11), _hi(Z12), _hi(Z13), _hi(Z14), mins


def bound_Zu(p: SymbolParams, U0: CosineSeq, inv: ApproxInverse, s: StripData, dc: DecayConstants):
    """Three components sqrt(Zu1^2 + Zu2^2), one per part of DG(u0) L^{-1}."""
    d = U0.d
    a = Interval(s.a)
    V0, V1, V2 = tail_parts(p, U0)
    two_d = 2.0 * Interval(d)
    Cd = C_d(d, a)
    C1d = C1_d(d, a)
    comp0 = two_d * dc.C0.sqr() * cosh_inner(V0, a) * (2.0 / a + Cd)
    comp1 = two_d * dc.C1.sqr() * cosh_inner(V1, a) * (2.0 / a + Cd)
    comp2 = (two_d * dc.C2.sqr() * cosh_inner(V2, a) * (2.0 / a + C1d)
             + 8.0 * dc.C2.sqr() * LN2 * boundary_derivative_sq(V2))
    return [_hi(ival_elem("sqrt", _hi(c))) for c in (comp0, comp1, comp2)]


def bound_Z2(inv: ApproxInverse, dc: DecayConstants) -> Interval:
    return _hi(2.0 * dc.kappa * inv.normB)


def compute_bounds(p: SymbolParams, U0: CosineSeq, inv: ApproxInverse, s: StripData,
                   dc: DecayConstants) -> ProofBounds:
    if not s.verified:
        raise MissingStripCertificate("bounds need a verified strip")
    Y0f, Yu = bound_Y0(p, U0, inv, dc, s)
    Z11, Z12, Z13, Z14, mins = bound_Z1_finite(p, U0, inv, s)
    Z1f = _hi(ival_elem("sqrt", Z11.sqr() + Z12.sqr() + (Z13 + Z14).sqr()))
    comps = bound_Zu(p, U0, inv, s, dc)
    Zu = _hi(inv.normB * (comps[0] + comps[1] + comps[2]))
    Z2 = bound_Z2(inv, dc)
    return ProofBounds(Y0=_hi(Y0f + Yu), Z1=_hi(Z1f + Zu), Z2=Z2, Y0_finite=Y0f, Yu=Yu,
                       Z11=Z11, Z12=Z12, Z13=Z13, Z14=Z14, Z1_finite=Z1f, Zu=Zu,
                       Zu_by_component=comps, tail_minima=mins)

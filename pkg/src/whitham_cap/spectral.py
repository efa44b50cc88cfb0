"""Spectral stage: eigenpair enclosures, exclusion radii, injectivity sweep, verdict.

The linearisation DF~(u) = L~ -+ 2u (minus for T = 0) is self-adjoint on
L^2(R).  Everything here works on exponential sequences over modes -N..N so
that odd eigenfunctions (the translation mode u0') are represented too.

Eigenpairs are enclosed through the augmented unknown (nu, U) with the
normalisation row 2d (psi0 - U, psi0).  Norms on the augmented space are
(|nu|^2 + 2d |U|^2)^(1/2); numerically the U-block is rescaled by sqrt(2d)
so that plain l^2 operator norms apply.

Between and below the enclosed eigenvalues a lower bound C(lambda*) for
|(DF~(u~) - lambda) v| / |v| is computed at a chain of shifts lambda*,
each certifying that no eigenvalue lies in (lambda* - C, lambda* + C).
"""

from __future__ import annotations

import csv
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .approx import (AssumptionViolated, approx_eigs, bordered_matrix, build_shift_inverse,
                     build_W0, newton_eig, spectral_matrix)
from .bounds import C1_d, C_d, _hi, tail_minima
from .errors import (CoverageStalled, EnclosureFailed, FloorNonpositive, NoAdmissibleRadius,
                     SingularJacobian, VerificationFailed)
from .fourier import (CosineSeq, ExpSeq, boundary_derivative_sq, conv_even, conv_full,
                      conv_matrix_full, cosh_inner, spectral_symbol, trace_project_exp)
from .inverse import combine_norm, tail_defect
from .rigor import LN2, Interval, as_interval, imax, imin, ival_elem, mat_norm2_upper
from .strip import DecayConstants, StripData, auto_strip, decay_constants, verify_sigma1
from .symbols import SymbolParams, l_nu, xi_grid

log = logging.getLogger(__name__)

STRIDE = 1.9
MIN_STRIDE = 1e-7


# shared data of one spectral run

@dataclass
class SpectralSetup:
    params: SymbolParams
    d: float
    N: int
    U0: CosineSeq
    r0: Interval
    strip: StripData
    constants: DecayConstants
    sigma: Interval
    embed: Interval
    lambda_max: Interval
    lambda_min: Interval
    span_params: SymbolParams | None = None
    span_strip: StripData | None = None
    span_constants: DecayConstants | None = None
    Zu_u0: Interval | None = None

    @property
    def sgn(self):
        return -1.0 if self.params.T == 0 else 1.0

    @property
    def pert(self) -> Interval:
        """Sup-norm bound 2 |u~ - u0|_inf <= 2 r0 embed."""
        return 2.0 * self.r0 * self.embed


def lambda_windows(U0: CosineSeq, r0, s: StripData, dc: DecayConstants, T, c):
    """(lambda_max, lambda_min) as intervals; use lambda_max.lo and lambda_min.lo.

    Below lambda_min no eigenvalue can exist, and (P1)-(P3) only concern the
    part of the spectrum below lambda_max.  The sup-norm perturbation of the
    exact wave enters with the safe embedding constant and a factor 2.
    """
    sigma = Interval(s.sigma_real)
    shift = 2.0 * (U0.norm1() + as_interval(r0) * dc.sup_embed)
    lam_min = sigma - shift
    if T > 0:
        lam_max = sigma
    else:
        lam_max = imin(sigma, as_interval(c) - shift)
    return lam_max, lam_min


def _shifted_speed(p: SymbolParams, lam) -> Interval:
    lam = as_interval(lam)
    return p.c_iv - lam if p.T == 0 else p.c_iv + lam


def prepare(p: SymbolParams, d, U0: CosineSeq, r0, s: StripData, dc: DecayConstants,
            span_strip: StripData | None = None) -> SpectralSetup:
    """Windows plus a strip and decay constants valid for every shifted speed.

    The speed c -+ lambda ranges over an interval as lambda runs through
    [lambda_min, 0]; one verification with that interval as the speed covers
    every shift at once.
    """
    lam_max, lam_min = lambda_windows(U0, r0, s, dc, p.T, p.c_iv)
    shifted = _shifted_speed(p, Interval(min(float(lam_min.lo), 0.0), 0.0))
    span = p.with_speed_span(float(shifted.lo), float(shifted.hi))
    if span_strip is None:
        span_strip = auto_strip(span)
    if p.T > 0 and not span_strip.sigma1_verified:
        span_strip = verify_sigma1(span, span_strip)
    span_dc = decay_constants(span, span_strip)
    setup = SpectralSetup(p, float(d), U0.N, U0, as_interval(r0), s, dc, Interval(s.sigma_real),
                          dc.sup_embed, lam_max, lam_min, span, span_strip, span_dc)
    setup.Zu_u0 = Zu_lambda(setup, U0.scale(2.0))
    return setup


def Zu_lambda(setup: SpectralSetup, v) -> Interval:
    """Exponentially small part for a multiplication by v, with e^{-2ad} absorbed."""
    a = Interval(setup.span_strip.a)
    d = setup.d
    C = setup.span_constants.C2
    val = (2.0 * Interval(d) * C.sqr() * cosh_inner(v, a) * (2.0 / a + C1_d(d, a))
           + 8.0 * C.sqr() * LN2 * boundary_derivative_sq(v))
    return _hi(ival_elem("sqrt", _hi(val)))


# rigorous defect of a shifted inverse, optionally bordered

@dataclass
class ShiftedBounds:
    lam: float
    Z11: Interval
    Z12: Interval
    Z13: Interval
    Z14: Interval
    Z1_finite: Interval
    normB: Interval
    normBN: Interval
    normW1: Interval
    cross: Interval
    BN: Interval = field(repr=False, default=None)
    W: CosineSeq | None = field(repr=False, default=None)

    def to_json(self):
        out = {k: getattr(self, k).to_json() for k in
               ("Z11", "Z12", "Z13", "Z14", "Z1_finite", "normB", "normBN", "normW1", "cross")}
        out["lam"] = repr(self.lam)
        return out


def _exp_center(N_big, N):
    """Slice of modes -N..N inside an array over -N_big..N_big."""
    return slice(N_big - N, N_big + N + 1)


def _outer_rows(N_big, N):
    """Positions of modes with N < |k| <= N_big."""
    k = np.arange(-N_big, N_big + 1)
    return np.nonzero(np.abs(k) > N)[0]


def shifted_bounds(setup: SpectralSetup, lam, AN, W=None, psi: ExpSeq | None = None) -> ShiftedBounds:
    """Z_{lambda,1} pieces and the norm of B for DF~(U0) - lam, bordered when psi is given.

    Columns split into modes |k| <= N (plus the scalar) and the tail; the tail
    block of B is W* for T = 0 and the identity for T > 0.
    """
    p = setup.params
    d = setup.d
    N = setup.N
    lam_iv = Interval(float(lam))
    k2 = np.arange(-2 * N, 2 * N + 1)
    Ll = spectral_symbol(p, xi_grid(d, k2)) - lam_iv
    if not float(np.min(Ll.lo)) > 0:
        raise FloorNonpositive("shifted symbol is not positive")
    Lc = Ll[_exp_center(2 * N, N)]
    n = 2 * N + 1
    b = 1 if psi is not None else 0
    s = ival_elem("sqrt", Interval(2.0 * d))

    CU = conv_matrix_full(setup.U0, 2 * N, N) * (2.0 * setup.sgn)
    DGL = CU / Lc.reshape(1, -1)
    MU = DGL + np.pad(np.eye(n), ((N, N), (0, 0)))
    if b:
        col0 = Interval(np.zeros(4 * N + 1)).copy_with(slice(N, 3 * N + 1), -psi.coeffs)
        row0 = (psi.coeffs / Lc) * (-2.0 * d)
        top = Interval.concat([Interval(np.zeros(1)), row0]).reshape(1, -1)
        M = Interval.concat([top, Interval.concat([col0.reshape(-1, 1), MU], axis=1)], axis=0)
        Lbar = Interval.concat([Interval(np.ones(1)), Lc])
        # U-rows carry sqrt(2d), U-columns 1/sqrt(2d)
        w = Interval.concat([Interval(np.ones(1)), Interval(np.full(n, 1.0)) * s])
    else:
        M = MU
        Lbar = Lc
        w = Interval(np.ones(n))
    BN = Interval(np.asarray(AN, float)) * Lbar.reshape(-1, 1)
    head_rows = np.concatenate([np.arange(b), b + np.arange(N, 3 * N + 1)])

    def scaled(X, rows_w, cols_w):
        return X * rows_w.reshape(-1, 1) / cols_w.reshape(1, -1)

    first = Interval(np.eye(n + b)) - BN @ M[head_rows]
    z_a = mat_norm2_upper(scaled(first, w, w))
    outer = _outer_rows(3 * N, N) if p.T == 0 else _outer_rows(2 * N, N)
    if p.T == 0:
        CW = conv_matrix_full(W, 3 * N, 2 * N)[outer]
        tail = CW @ M[b:]
    else:
        tail = M[b:][outer]
    # rows are U-modes (weight s); columns as in M
    z_b = mat_norm2_upper(scaled(tail, Interval(np.ones(tail.shape[0])) * s, w))
    Z11 = ival_elem("sqrt", z_a.sqr() + z_b.sqr())

    out_cols = _outer_rows(2 * N, N)
    CUt = conv_matrix_full(setup.U0, N, 2 * N)[:, out_cols] * (2.0 * setup.sgn)
    DGt = CUt / Ll[out_cols].reshape(1, -1)
    Z12 = mat_norm2_upper(scaled(BN[:, b:] @ DGt, w, Interval(np.ones(len(out_cols))) * s))

    cl = _shifted_speed(p, lam_iv)
    pshift = p.with_speed_span(float(cl.lo), float(cl.hi))
    l2 = tail_minima(pshift, d, N)["l2"]
    V2 = setup.U0.scale(2.0)
    if p.T == 0:
        Z13 = conv_even(W, V2).norm1() / l2
        Z14 = tail_defect(W, setup.U0, cl)
        normW1 = W.norm1()
        CWc = conv_matrix_full(W, 2 * N, N)[_outer_rows(2 * N, N)]
        cross = mat_norm2_upper(CWc)
    else:
        Z13 = V2.norm1() / l2
        Z14 = Interval(0.0)
        normW1 = Interval(1.0)
        cross = Interval(0.0)
    normBN = mat_norm2_upper(scaled(BN, w, w))
    Z1f = ival_elem("sqrt", Z11.sqr() + _hi(Z12).sqr() + (_hi(Z13) + _hi(Z14)).sqr())
    return ShiftedBounds(float(lam), _hi(Z11), _hi(Z12), _hi(Z13), _hi(Z14), _hi(Z1f),
                         combine_norm(normBN, normW1, cross), normBN, normW1, cross, BN, W)


def _tail_W(setup: SpectralSetup, lam):
    if setup.params.T > 0:
        return None
    w = build_W0(setup.U0.mid(), setup.params.c, lam=float(lam))
    return CosineSeq.from_floats(setup.d, w)


# eigenpair enclosure

@dataclass
class EigenEnclosure:
    lambda0: float
    r: Interval | None
    R: Interval | None
    simple: bool
    psi0: ExpSeq
    side_bounds: dict
    parity: str = "even"

    @property
    def interval(self) -> Interval:
        return Interval(self.lambda0) + Interval(-1.0, 1.0) * self.r

    def to_json(self):
        return {
            "lambda0": repr(self.lambda0),
            "r": None if self.r is None else self.r.to_json(),
            "R": None if self.R is None else self.R.to_json(),
            "simple": self.simple, "parity": self.parity,
            "side_bounds": {k: v.to_json() if isinstance(v, Interval) else v
                            for k, v in self.side_bounds.items()},
        }


def eigen_residual(setup: SpectralSetup, lam0, psi: ExpSeq) -> ExpSeq:
    """(DF~(U0) - lam0) psi on modes -2N..2N."""
    p = setup.params
    N2 = 2 * psi.N
    P = psi.padded(N2)
    lin = P.coeffs * (spectral_symbol(p, P.xi()) - Interval(float(lam0)))
    quad = conv_full(setup.U0.full(), psi).padded(N2).coeffs * (2.0 * setup.sgn)
    return ExpSeq(psi.d, lin + quad)


def prepare_eigenvector(setup: SpectralSetup, lam0, v) -> ExpSeq:
    """Exact parity, then the four-condition trace projection."""
    v = np.asarray(v, float)
    rev = v[::-1]
    if np.linalg.norm(v + rev) >= np.linalg.norm(v - rev):
        v = 0.5 * (v + rev)
    else:
        v = 0.5 * (v - rev)
    V = ExpSeq.from_floats(setup.d, v)
    dvals = 1.0 / (spectral_symbol(setup.params, V.xi()) - Interval(float(lam0)))
    return trace_project_exp(V, dvals)


def enclose_eig(setup: SpectralSetup, lam0, psi: ExpSeq) -> EigenEnclosure:
    """Radii check for the augmented system at (lam0, psi), plus the exclusion radius."""
    p = setup.params
    d = setup.d
    N = setup.N
    lam0 = float(lam0)
    if lam0 > 0:
        raise EnclosureFailed("eigenvalue centre must be non-positive")
    gap = setup.sigma - Interval(lam0)
    pm = psi.mid()
    J = bordered_matrix(setup.U0.mid(), p.T, p.c, d, N, lam0, pm)
    try:
        AN = np.linalg.inv(J)
    except np.linalg.LinAlgError as exc:
        raise EnclosureFailed(f"bordered matrix is singular: {exc}") from exc
    W = _tail_W(setup, lam0)
    sb = shifted_bounds(setup, lam0, AN, W, psi)
    nB = sb.normB
    s = ival_elem("sqrt", Interval(2.0 * d))

    F = eigen_residual(setup, lam0, psi)
    head = sb.BN[:, 1:] @ F.coeffs[_exp_center(2 * N, N)]
    if p.T == 0:
        WF = conv_full(W.full(), F)
        tail = WF.coeffs[_outer_rows(3 * N, N)]
    else:
        tail = F.coeffs[_outer_rows(2 * N, N)]
    x2 = head[0].sqr() + 2.0 * Interval(d) * (head[1:].sqr().sum() + tail.sqr().sum())
    Y0_finite = s * ival_elem("sqrt", x2)

    dc = setup.constants
    a0 = dc.a0
    LnuPsi = ExpSeq(d, psi.coeffs * l_nu(p, psi.xi()))
    factor = 1.0 + (1.0 + C_d(d, a0, imin(a0, Interval(setup.strip.a)))) * nB.sqr()
    Yu = 2.0 * Interval(d) * dc.C_Y0 * ival_elem("sqrt", cosh_inner(LnuPsi, a0) * factor)
    Y_pert = 2.0 * setup.r0 / setup.sigma * nB * psi.norm1()
    Y0 = _hi(Y0_finite + Yu + Y_pert)

    Zu_psi = Zu_lambda(setup, psi)
    Zu = imax(setup.Zu_u0, s * Zu_psi) * nB
    Z_pert = setup.pert * nB / gap
    Z1 = _hi(sb.Z1_finite + Zu + Z_pert)
    Z2 = _hi(2.0 * nB / gap)

    side = {"Y0": Y0, "Y0_finite": _hi(Y0_finite), "Yu": _hi(Yu), "Y_pert": _hi(Y_pert),
            "Z1": Z1, "Z1_finite": sb.Z1_finite, "Zu": _hi(Zu), "Z_pert": _hi(Z_pert),
            "Z2": Z2, "normB": nB, "gap": gap}
    side.update({k: getattr(sb, k) for k in ("Z11", "Z12", "Z13", "Z14")})
    parity = "even" if np.array_equal(pm, pm[::-1]) else "odd"
    try:
        from .certify import check_radii
        radii = check_radii(Y0, Z1, Z2)
    except NoAdmissibleRadius as exc:
        raise EnclosureFailed(f"no radius for the eigenpair at {lam0:.6g}: {exc}") from exc
    if not radii.ok:
        raise EnclosureFailed("radii polynomial not negative at the chosen radius")
    r = radii.r
    R, simple = exclusion_radius(Z1, Z2, nB, gap, r, lam0, setup.lambda_max)
    side["radii_value"] = radii.value
    return EigenEnclosure(lam0, r, R, simple, psi, side, parity)


def exclusion_radius(Z1, Z2, normB, gap, r, lam0, lam_max):
    """(R, simple).  The r-term is the larger of r |B|/gap^2 and Z2 r."""
    Z1, Z2, normB, gap, r = (as_interval(x) for x in (Z1, Z2, normB, gap, r))
    t1 = r * normB / gap.sqr()
    t2 = Z2 * r
    margin = 1.0 - Z1 - imax(t1, t2)
    R = gap * margin / normB
    ok = float(margin.lo) > 0 and float((Interval(lam0) + r).hi) < float(as_interval(lam_max).lo)
    return Interval(max(float(R.lo), 0.0)), bool(ok)


# injectivity sweep

@dataclass
class FloorResult:
    lam: float
    C: Interval
    Z_lam1: Interval
    Z_lamu: Interval
    normB: Interval

    def to_json(self):
        return {"lam": repr(self.lam), "C": self.C.to_json(), "Z_lam1": self.Z_lam1.to_json(),
                "Z_lamu": self.Z_lamu.to_json(), "normB": self.normB.to_json()}


def floor_value(Z_lam1, Z_lamu, normB, sigma, lam, pert) -> Interval:
    """((1 - |B| Z_{lam,u} - Z_{lam,1})/|B|)(sigma - lam) - pert."""
    Z_lam1, Z_lamu, normB, sigma, pert = (as_interval(x) for x in (Z_lam1, Z_lamu, normB, sigma, pert))
    return (1.0 - normB * Z_lamu - Z_lam1) / normB * (sigma - Interval(float(lam))) - pert


def inverse_floor(setup: SpectralSetup, lam) -> FloorResult:
    """Certified lower bound C with |(DF~(u~) - lambda) v| >= C |v| for |lambda - lam| < C."""
    lam = float(lam)
    if lam > 0:
        raise ValueError("shift must be non-positive")
    p = setup.params
    try:
        AN = build_shift_inverse(setup.U0.mid(), p.T, p.c, setup.d, setup.N, lam)
        W = _tail_W(setup, lam)
    except (SingularJacobian, AssumptionViolated) as exc:
        raise FloorNonpositive(f"no shifted inverse at {lam:.6g}: {exc}") from exc
    sb = shifted_bounds(setup, lam, AN, W)
    C = floor_value(sb.Z1_finite, setup.Zu_u0, sb.normB, setup.sigma, lam, setup.pert)
    res = FloorResult(lam, C, sb.Z1_finite, setup.Zu_u0, sb.normB)
    if not float(C.lo) > 0:
        raise FloorNonpositive(f"C = {float(C.lo):.3e} at lambda* = {lam:.6g}")
    return res


@dataclass
class SweepLog:
    lo: float
    hi: float
    entries: list = field(default_factory=list)
    complete: bool = False
    gap: tuple | None = None

    def covered(self):
        return [(e.lam - float(e.C.lo), e.lam + float(e.C.lo)) for e in self.entries]

    def to_json(self):
        return {"lo": repr(self.lo), "hi": repr(self.hi), "complete": self.complete,
                "gap": None if self.gap is None else [repr(x) for x in self.gap],
                "entries": [e.to_json() for e in self.entries]}


def coverage_ok(lo, hi, pieces) -> bool:
    """Open intervals (a_i, b_i) in order cover [lo, hi], consecutive ones overlapping."""
    if hi < lo:
        return True
    if not pieces:
        return False
    if not pieces[0][0] < lo:
        return False
    for (a0, b0), (a1, b1) in zip(pieces, pieces[1:]):
        if not a1 < b0:
            return False
    return pieces[-1][1] > hi


def sweep(setup: SpectralSetup, lo, hi, stride=STRIDE, min_stride=MIN_STRIDE,
          progress=None) -> SweepLog:
    """Greedy cover of the closed interval [lo, hi] by exclusion intervals.

    Starting at ``lo`` the next shift sits ``stride * C.lo`` further right;
    when the new interval would not overlap the previous one the step is
    halved.
    """
    lo, hi = float(lo), float(hi)
    out = SweepLog(lo, hi)
    if hi < lo:
        out.complete = True
        return out
    cur = inverse_floor(setup, lo)
    out.entries.append(cur)
    step = stride * float(cur.C.lo)
    while cur.lam + float(cur.C.lo) <= hi:
        reach = cur.lam + float(cur.C.lo)
        cand = min(cur.lam + step, hi)
        try:
            nxt = inverse_floor(setup, cand)
            ok = nxt.lam - float(nxt.C.lo) < reach
        except FloorNonpositive:
            ok = False
        if not ok:
            step *= 0.5
            if step < min_stride:
                out.gap = (reach, hi)
                raise CoverageStalled(f"sweep stalled at {reach:.6g}", gap=out.gap)
            continue
        out.entries.append(nxt)
        if progress is not None:
            progress(nxt)
        cur = nxt
        step = stride * float(cur.C.lo)
    out.complete = coverage_ok(lo, hi, out.covered())
    return out


def write_sweep_csv(logs, path):
    path = Path(path)
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["segment", "lambda_star", "C_lo", "C_hi", "covered_lo", "covered_hi"])
        for i, lg in enumerate(logs):
            for e in lg.entries:
                wr.writerow([i, repr(e.lam), repr(float(e.C.lo)), repr(float(e.C.hi)),
                             repr(e.lam - float(e.C.lo)), repr(e.lam + float(e.C.lo))])
    return path


# verdict

@dataclass
class StabilityVerdict:
    P1: bool
    P2: bool
    P3: bool
    negative: list
    zero: EigenEnclosure | None
    sweeps: list
    lambda_max: Interval
    lambda_min: Interval
    notes: list = field(default_factory=list)

    @property
    def verdict(self):
        return "stable" if (self.P1 and self.P2 and self.P3) else "undetermined"

    def to_json(self):
        return {
            "P1": self.P1, "P2": self.P2, "P3": self.P3, "verdict": self.verdict,
            "negative": [e.to_json() for e in self.negative],
            "zero": None if self.zero is None else self.zero.to_json(),
            "sweeps": [s.to_json() for s in self.sweeps],
            "lambda_max": self.lambda_max.to_json(), "lambda_min": self.lambda_min.to_json(),
            "notes": self.notes,
        }


def sweep_targets(neg: EigenEnclosure, zero: EigenEnclosure, lam_min):
    """[lam_min, lam- - R1] and [lam- + R1, lam0 - R0]."""
    lm = float(as_interval(lam_min).lo)
    R1 = float(neg.R.lo)
    R0 = float(zero.R.lo)
    first = (lm, float((Interval(neg.lambda0) - R1).hi))
    second = (float((Interval(neg.lambda0) + R1).lo), float((Interval(zero.lambda0) - R0).hi))
    return [first, second]


def verdict(setup: SpectralSetup, negative, zero, sweeps) -> StabilityVerdict:
    notes = []
    simple_neg = [e for e in negative if e.simple and float(e.interval.hi) < 0]
    P1 = len(simple_neg) >= 1
    if not P1:
        notes.append("no certified simple negative eigenvalue")
    P3 = False
    if zero is not None and zero.simple:
        # uniqueness in (lam0 - R0, lam0 + R0) with 0 a known eigenvalue
        P3 = abs(zero.lambda0) < float(zero.R.lo)
    if not P3:
        notes.append("zero eigenvalue not certified simple")
    P2 = P1 and len(simple_neg) == 1 and len(negative) == 1 and bool(sweeps) and all(s.complete for s in sweeps)
    if len(simple_neg) > 1:
        notes.append("more than one negative eigenvalue enclosed")
    for s in sweeps:
        if not s.complete:
            notes.append(f"sweep over [{s.lo:.6g}, {s.hi:.6g}] incomplete, gap {s.gap}")
    return StabilityVerdict(P1, P2, P3, list(negative), zero, list(sweeps),
                            setup.lambda_max, setup.lambda_min, notes)


# whole pipeline

@dataclass
class StabilityRun:
    setup: SpectralSetup
    verdict: StabilityVerdict
    float_eigs: list
    seconds: float

    def to_json(self, existence=None):
        s = self.setup
        return {
            "kind": "stability",
            "version": __version__,
            "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
            "params": {"T": repr(float(s.params.T)), "c": repr(float(s.params.c)),
                       "d": repr(s.d), "N": s.N},
            "r0": s.r0.to_json(), "sigma": s.sigma.to_json(), "embed": s.embed.to_json(),
            "span_strip": s.span_strip.to_json(), "span_constants": s.span_constants.to_json(),
            "Zu_u0": s.Zu_u0.to_json(),
            "float_eigs": [repr(x) for x in self.float_eigs],
            "stability": self.verdict.to_json(),
            "existence": existence,
        }


def _enclose_float_pair(setup: SpectralSetup, lam, v, zero=False):
    p = setup.params
    lam, v = newton_eig(setup.U0.mid(), p.T, p.c, setup.d, setup.N, lam, v)
    if zero:
        # translation mode: the exact eigenvalue is 0
        lam = 0.0
    psi = prepare_eigenvector(setup, lam, v)
    return enclose_eig(setup, min(lam, 0.0), psi)


def prove_stability(p: SymbolParams, d, U0: CosineSeq, r0, s: StripData, dc: DecayConstants,
                    count=3, zero_tol=1e-6, stride=STRIDE, progress=None) -> StabilityRun:
    """Enclose the negative and zero eigenvalues, then sweep the gaps."""
    t0 = time.time()
    setup = prepare(p, d, U0, r0, s, dc)
    pairs = approx_eigs(U0.mid(), p.T, p.c, float(d), U0.N, count=count)
    floats = [lam for lam, _ in pairs]
    log.info("float eigenvalues %s; windows [%g, %g]", floats, float(setup.lambda_min.lo),
             float(setup.lambda_max.lo))
    negative, zero = [], None
    for lam, v in pairs:
        if lam < float(setup.lambda_min.lo) or lam >= float(setup.lambda_max.lo):
            continue
        if abs(lam) < zero_tol:
            zero = _enclose_float_pair(setup, lam, v, zero=True)
        elif lam < 0:
            negative.append(_enclose_float_pair(setup, lam, v))
    sweeps = []
    if len(negative) == 1 and zero is not None:
        for lo, hi in sweep_targets(negative[0], zero, setup.lambda_min):
            try:
                sweeps.append(sweep(setup, lo, hi, stride=stride, progress=progress))
            except CoverageStalled as exc:
                lg = SweepLog(lo, hi, gap=exc.gap)
                sweeps.append(lg)
    v = verdict(setup, negative, zero, sweeps)
    return StabilityRun(setup, v, floats, time.time() - t0)


def write_certificate(run: StabilityRun, path, existence=None) -> Path:
    if run.verdict.verdict != "stable":
        raise VerificationFailed("refusing to emit: stability not certified")
    path = Path(path)
    path.write_text(json.dumps(run.to_json(existence), indent=1, sort_keys=True) + "\n")
    return path


# re-check from stored numbers

def recheck_verdict(doc):
    """Re-evaluate the stability inequalities from a stored document."""
    from .certify import RecheckReport, radii_value
    iv = Interval.from_json
    st = doc["stability"]
    checks = {}
    sigma = iv(doc["sigma"])
    pert = 2.0 * iv(doc["r0"]) * iv(doc["embed"])
    lam_max = iv(st["lambda_max"])
    lam_min = iv(st["lambda_min"])
    encl = {}
    for name, e in [("negative", x) for x in st["negative"]] + [("zero", st["zero"])]:
        if e is None:
            checks[f"{name} enclosure present"] = False
            continue
        sb = e["side_bounds"]
        lam0 = float(e["lambda0"])
        r = iv(e["r"])
        Y0, Z1, Z2, nB = iv(sb["Y0"]), iv(sb["Z1"]), iv(sb["Z2"]), iv(sb["normB"])
        gap = sigma - Interval(lam0)
        checks[f"{name} radii polynomial < 0"] = float(radii_value(Y0, Z1, Z2, r).hi) < 0
        R, simple = exclusion_radius(Z1, Z2, nB, gap, r, lam0, lam_max)
        checks[f"{name} simple"] = simple and float(R.lo) >= float(iv(e["R"]).lo)
        encl[name] = (lam0, r, iv(e["R"]))
    if "negative" in encl:
        lam0, r, _ = encl["negative"]
        checks["negative eigenvalue < 0"] = float((Interval(lam0) + r).hi) < 0
        checks["single negative enclosure"] = len(st["negative"]) == 1
    if "zero" in encl:
        lam0, _, R0 = encl["zero"]
        checks["zero inside exclusion window"] = abs(lam0) < float(R0.lo)
    if "negative" in encl and "zero" in encl:
        lm = float(lam_min.lo)
        l1, _, R1 = encl["negative"]
        l0, _, R0 = encl["zero"]
        targets = [(lm, float((Interval(l1) - R1).hi)), (float((Interval(l1) + R1).lo),
                                                          float((Interval(l0) - R0).hi))]
        sweeps = st["sweeps"]
        checks["sweep count"] = len(sweeps) == 2
        for i, (sw, (lo, hi)) in enumerate(zip(sweeps, targets)):
            pieces = []
            ok = True
            for e in sw["entries"]:
                lam = float(e["lam"])
                C = floor_value(iv(e["Z_lam1"]), iv(e["Z_lamu"]), iv(e["normB"]), sigma, lam, pert)
                ok = ok and float(C.lo) >= float(iv(e["C"]).lo) and float(C.lo) > 0
                ok = ok and lm <= lam <= 0
                pieces.append((lam - float(iv(e["C"]).lo), lam + float(iv(e["C"]).lo)))
            checks[f"sweep {i} floors"] = ok
            checks[f"sweep {i} coverage"] = coverage_ok(lo, hi, pieces)
    return RecheckReport(all(checks.values()), checks)

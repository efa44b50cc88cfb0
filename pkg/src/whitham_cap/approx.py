"""Floating point construction of the candidate data.

Nothing here is rigorous.  The outputs are plain float arrays that the
interval layer later promotes to thin intervals exactly once.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sfft
from scipy import linalg as sla

from .errors import AssumptionViolated, NoConvergence, SingularJacobian

log = logging.getLogger(__name__)


@dataclass
class SolveConfig:
    d: float
    N: int
    T: float
    c: float
    continuation_steps: int = 6
    newton_tol: float = 1e-11
    max_iter: int = 30

    def __post_init__(self):
        if self.N < 8:
            raise ValueError("N must be at least 8")
        if not self.d > 1:
            raise ValueError("half-period d must exceed 1")

    @property
    def nu(self):
        return self.T if self.T > 0 else 4.0 / np.pi**2


@dataclass
class NewtonReport:
    residuals: list = field(default_factory=list)
    converged: bool = False


# float symbols

def xi_float(d, n):
    return np.pi * np.asarray(n, float) / d


def m_float(T, xi):
    xi = np.abs(np.asarray(xi, float))
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.where(xi > 1e-8, np.tanh(xi) / np.where(xi > 1e-8, xi, 1.0), 1.0 - xi**2 / 3)
    return np.sqrt(r * (1.0 + T * xi**2))


def l_float(T, c, nu, xi):
    return (m_float(T, xi) - c) * (1.0 + nu * np.asarray(xi) ** 2)


def full_from_cos(a):
    a = np.asarray(a)
    return np.concatenate([a[::-1], a[1:]])


def conv_cos_float(a, b):
    full = np.convolve(full_from_cos(a), full_from_cos(b))
    return full[len(a) + len(b) - 2:]


def conv_matrix_cos_float(w, N_rows, N_cols):
    rows = np.arange(N_rows + 1)[:, None]
    cols = np.arange(N_cols + 1)[None, :]
    w = np.asarray(w)
    M = len(w)

    def g(idx):
        return np.where(idx < M, w[np.minimum(idx, M - 1)], 0.0)

    return g(np.abs(rows - cols)) + np.where(cols > 0, g(rows + cols), 0.0)


def conv_matrix_exp_float(w, N):
    k = np.arange(-N, N + 1)
    idx = np.abs(k[:, None] - k[None, :])
    w = np.asarray(w)
    return np.where(idx < len(w), w[np.minimum(idx, len(w) - 1)], 0.0)


# existence problem

def residual(U, cfg: SolveConfig):
    """pi^N F(U) with F(U) = L U + L_nu (U*U)."""
    N = len(U) - 1
    xi = xi_float(cfg.d, np.arange(N + 1))
    lnu = 1.0 + cfg.nu * xi**2
    return l_float(cfg.T, cfg.c, cfg.nu, xi) * U + lnu * conv_cos_float(U, U)[: N + 1]


def jacobian(U, cfg: SolveConfig):
    N = len(U) - 1
    xi = xi_float(cfg.d, np.arange(N + 1))
    lnu = 1.0 + cfg.nu * xi**2
    J = 2.0 * lnu[:, None] * conv_matrix_cos_float(U, N, N)
    J[np.diag_indices(N + 1)] += l_float(cfg.T, cfg.c, cfg.nu, xi)
    return J


def kdv_seed(cfg: SolveConfig, c=None):
    """Cosine coefficients of A sech^2(Bx), the weakly nonlinear long-wave profile.

    Near c = 1 the symbol is m_T(xi) ~ 1 + beta xi^2 with beta = (T - 1/3)/2,
    which turns the profile equation into (1-c)u - beta u'' + u^2 = 0.
    """
    c = cfg.c if c is None else c
    beta = (cfg.T - 1.0 / 3.0) / 2.0
    B = np.sqrt((1.0 - c) / beta) / 2.0
    A = -6.0 * beta * B**2
    xi = xi_float(cfg.d, np.arange(cfg.N + 1))
    s = np.pi * xi / (2.0 * B)
    with np.errstate(over="ignore"):
        ratio = np.where(xi > 0, np.pi * xi / np.where(s > 0, np.sinh(np.minimum(s, 700)), 1.0), 2.0 * B)
    return A * ratio / (B**2 * 2.0 * cfg.d)


def newton_refine(U, cfg: SolveConfig, report: NewtonReport | None = None):
    report = NewtonReport() if report is None else report
    U = np.array(U, float)
    for _ in range(cfg.max_iter):
        F = residual(U, cfg)
        res = float(np.sqrt(F[0] ** 2 + 2 * np.sum(F[1:] ** 2)))
        report.residuals.append(res)
        if not np.isfinite(res):
            break
        if res <= cfg.newton_tol:
            report.converged = True
            return U, report
        try:
            step = sla.solve(jacobian(U, cfg), F)
        except (sla.LinAlgError, ValueError) as exc:
            raise SingularJacobian(str(exc)) from exc
        U = U - step
    raise NoConvergence(f"Newton stalled at residual {report.residuals[-1]:.3e}")


def continuation(cfg: SolveConfig, c_start=None):
    """Natural-parameter continuation in c from the long-wave regime to cfg.c."""
    if c_start is None:
        c_start = 1.0 + 0.25 * (cfg.c - 1.0)
    cs = list(np.linspace(c_start, cfg.c, cfg.continuation_steps + 1))
    sub = SolveConfig(cfg.d, cfg.N, cfg.T, cs[0], newton_tol=cfg.newton_tol, max_iter=cfg.max_iter)
    U, _ = newton_refine(kdv_seed(sub), sub)
    cur = cs[0]
    target = cfg.c
    step = cs[1] - cs[0] if len(cs) > 1 else 0.0
    while cur != target:
        nxt = cur + step
        if (step > 0 and nxt > target) or (step < 0 and nxt < target):
            nxt = target
        sub = SolveConfig(cfg.d, cfg.N, cfg.T, nxt, newton_tol=cfg.newton_tol, max_iter=cfg.max_iter)
        try:
            U, _ = newton_refine(U, sub)
            cur = nxt
        except (NoConvergence, SingularJacobian):
            step /= 2.0
            if abs(step) < 1e-6:
                raise
    return U


def solve(cfg: SolveConfig):
    """Approximate solitary wave: KdV seed, then Newton, falling back to continuation."""
    try:
        U, rep = newton_refine(kdv_seed(cfg), cfg)
    except (NoConvergence, SingularJacobian):
        U = continuation(cfg)
    if np.max(np.abs(U)) < 1e-8:
        U = continuation(cfg)
    return U


def build_ANT(U0, cfg: SolveConfig):
    """Float inverse of the (N+1)x(N+1) Jacobian of pi^N F at U0."""
    J = jacobian(U0, cfg)
    try:
        A = sla.inv(J)
    except (sla.LinAlgError, ValueError) as exc:
        raise SingularJacobian(str(exc)) from exc
    if not np.all(np.isfinite(A)):
        raise SingularJacobian("non-finite inverse")
    return A


def cos_samples(a, M):
    """Values of a0 + 2 sum a_n cos(pi n x/d) at x = d j/M, j = 0..M."""
    pad = np.zeros(M + 1)
    pad[: len(a)] = a
    return sfft.dct(pad, type=1)


def cos_coeffs_from_samples(f):
    M = len(f) - 1
    return sfft.dct(np.asarray(f, float), type=1) / (2.0 * M)


def build_W0(U0, c, lam=0.0, N=None, oversample=4):
    """Cosine coefficients of 1/(1 - 2 u0/(c - lam)), truncated to N+1 modes.

    Requires u0 < (c - lam)/2 on the sample grid.
    """
    U0 = np.asarray(U0, float)
    N = len(U0) - 1 if N is None else N
    M = oversample * max(N, len(U0))
    u = cos_samples(U0, M)
    speed = c - lam
    margin = speed / 2.0 - u
    if np.min(margin) <= 0:
        raise AssumptionViolated(f"max u0 = {np.max(u):.6g} reaches half the speed {speed / 2:.6g}")
    W = cos_coeffs_from_samples(1.0 / (1.0 - 2.0 * u / speed))[: N + 1]
    return W


def W0_defect(W, U0, c, lam=0.0):
    """||e0 - W*(e0 - 2 U0/(c-lam))||_1 in floats (diagnostic only)."""
    g = -2.0 * np.asarray(U0) / (c - lam)
    g[0] += 1.0
    r = -conv_cos_float(W, g)
    r[0] += 1.0
    return float(abs(r[0]) + 2 * np.sum(np.abs(r[1:])))


# spectral problem

def spectral_symbol_float(T, c, xi):
    m = m_float(T, xi)
    return c - m if T == 0 else m - c


def spectral_matrix(U0, T, c, d, N):
    """DF~(U0) on exponential modes -N..N; symmetric by construction."""
    k = np.arange(-N, N + 1)
    xi = xi_float(d, k)
    sgn = -1.0 if T == 0 else 1.0
    A = sgn * 2.0 * conv_matrix_exp_float(np.asarray(U0)[: N + 1], N)
    A[np.diag_indices(2 * N + 1)] += spectral_symbol_float(T, c, xi)
    return A


def approx_eigs(U0, T, c, d, N, count=3):
    """Smallest eigenpairs of DF~(U0), each eigenvector made exactly even or odd.

    Vectors are normalised so that sqrt(2d) times their l^2 norm is one.
    """
    A = spectral_matrix(U0, T, c, d, N)
    vals, vecs = sla.eigh(A, subset_by_index=[0, count - 1])
    out = []
    for lam, v in zip(vals, vecs.T):
        rev = v[::-1]
        even = 0.5 * (v + rev)
        odd = 0.5 * (v - rev)
        v = even if np.linalg.norm(even) >= np.linalg.norm(odd) else odd
        v = v / (np.linalg.norm(v) * np.sqrt(2.0 * d))
        # fix the sign for reproducibility
        j = int(np.argmax(np.abs(v)))
        if v[j] < 0:
            v = -v
        out.append((float(lam), v))
    return out


def build_shift_inverse(U0, T, c, d, N, lam):
    """Float inverse of DF~(U0) - lam on exponential modes -N..N."""
    A = spectral_matrix(U0, T, c, d, N)
    A[np.diag_indices(2 * N + 1)] -= lam
    try:
        return sla.inv(A)
    except (sla.LinAlgError, ValueError) as exc:
        raise SingularJacobian(str(exc)) from exc


def bordered_matrix(U0, T, c, d, N, lam0, psi0):
    """Jacobian of (nu, U) -> (2d (psi0 - U, psi0); DF~ U - nu U) at (lam0, psi0)."""
    A = spectral_matrix(U0, T, c, d, N)
    A[np.diag_indices(2 * N + 1)] -= lam0
    n = 2 * N + 1
    J = np.zeros((n + 1, n + 1))
    J[0, 1:] = -2.0 * d * psi0
    J[1:, 0] = -psi0
    J[1:, 1:] = A
    return J


def newton_eig(U0, T, c, d, N, lam0, psi0, tol=1e-13, max_iter=20):
    """Refine an eigenpair by Newton on the bordered system."""
    lam, psi = float(lam0), np.array(psi0, float)
    A0 = spectral_matrix(U0, T, c, d, N)
    anchor = psi.copy()
    for _ in range(max_iter):
        r0 = 2.0 * d * np.dot(anchor - psi, anchor)
        r1 = A0 @ psi - lam * psi
        if np.sqrt(r0**2 + np.dot(r1, r1)) < tol:
            break
        J = bordered_matrix(U0, T, c, d, N, lam, psi)
        J[0, 1:] = -2.0 * d * anchor
        step = sla.solve(J, np.concatenate([[r0], r1]))
        lam -= step[0]
        psi -= step[1:]
    return lam, psi

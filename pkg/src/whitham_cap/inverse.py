"""Rigorous approximate inverse of the linearised existence operator.

The operator acts on cosine sequences.  Modes 0..N are handled by the
matrix ``B^N = diag(l) A^N`` and modes above N by the multiplication
operator ``W * .`` restricted to those modes:

    B V = B^N (pi^N V) + pi_{>N} (W * V).

``A = L^{-1} B`` is then the approximate inverse of DF(U0).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fourier import CosineSeq, conv_even, conv_matrix_even, weighted_op_norm
from .rigor import Interval, as_interval, imax
from .symbols import SymbolParams, l_grid


@dataclass
class ApproxInverse:
    BN: Interval
    WT: CosineSeq
    normB: Interval
    normBN: Interval
    normW1: Interval
    cross: Interval
    defect1: Interval

    @property
    def N(self):
        return self.BN.shape[0] - 1

    def to_json(self):
        return {k: getattr(self, k).to_json() for k in ("normB", "normBN", "normW1", "cross", "defect1")}


def tail_defect(W: CosineSeq, U0: CosineSeq, c) -> Interval:
    """||e0 - W*(e0 - 2 U0/c)||_1, how well W inverts 1 - 2u0/c."""
    g = U0.scale(-2.0 / as_interval(c))
    g = CosineSeq(g.d, g.coeffs.copy_with(0, g.coeffs[0] + 1.0))
    r = -conv_even(W, g)
    r = CosineSeq(r.d, r.coeffs.copy_with(0, r.coeffs[0] + 1.0))
    return r.norm1()


def combine_norm(normBN, normW1, cross) -> Interval:
    """max{1, max{|B^N|, |W|_1} + |cross block|} as an upper bound."""
    inner = imax(as_interval(normBN), as_interval(normW1)) + cross
    return Interval(max(1.0, float(inner.hi)))


def assemble(p: SymbolParams, U0: CosineSeq, AN, W=None) -> ApproxInverse:
    """Promote the float data and bound the norm of B.

    ``W`` holds float cosine coefficients of the tail inverse (T = 0 only);
    for T > 0 the tail is the identity and ``W`` is ignored.
    """
    AN = np.asarray(AN, float)
    N = AN.shape[0] - 1
    d = U0.d
    L = l_grid(p, d, np.arange(N + 1))
    BN = Interval(AN) * L.reshape(-1, 1)
    normBN = weighted_op_norm(BN)
    if p.T > 0 or W is None:
        if p.T == 0:
            raise ValueError("T = 0 needs the tail inverse W")
        WT = CosineSeq.unit(d, N)
        normW1 = Interval(1.0)
        cross = Interval(0.0)
        defect1 = Interval(0.0)
    else:
        w = np.zeros(N + 1)
        w[: min(N + 1, len(W))] = np.asarray(W, float)[: N + 1]
        WT = CosineSeq.from_floats(d, w)
        normW1 = WT.norm1()
        block = conv_matrix_even(WT, np.arange(N + 1, 2 * N + 1), np.arange(N + 1))
        cross = weighted_op_norm(block, row_start=N + 1, col_start=0)
        defect1 = tail_defect(WT, U0, p.c_iv)
    return ApproxInverse(BN=BN, WT=WT, normB=combine_norm(normBN, normW1, cross), normBN=normBN,
                         normW1=normW1, cross=cross, defect1=defect1)


@dataclass
class InjectivityNote:
    injective: bool
    Z1: float
    inverse_factor: float

    def to_json(self):
        return {"injective": self.injective, "Z1": repr(self.Z1),
                "inverse_factor": repr(self.inverse_factor)}


def injectivity_note(Z1) -> InjectivityNote:
    """Z1 < 1 makes A injective and bounds |DF(u0)^{-1}| by |A|/(1 - Z1)."""
    z = float(as_interval(Z1).hi)
    if z < 1.0:
        factor = float((1.0 / (1.0 - Interval(z))).hi)
        return InjectivityNote(True, z, factor)
    return InjectivityNote(False, z, float("inf"))

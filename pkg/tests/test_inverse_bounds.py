import numpy as np
import pytest

from whitham_cap.approx import SolveConfig, build_ANT, build_W0, solve
from whitham_cap.bounds import C_d, C1_d, compute_bounds, residual
from whitham_cap.errors import MissingStripCertificate
from whitham_cap.fourier import CosineSeq, trace_project
from whitham_cap.inverse import assemble, combine_norm, injectivity_note, tail_defect
from whitham_cap.rigor import Interval
from whitham_cap.strip import auto_strip, decay_constants, verify_sigma1
from whitham_cap.symbols import SymbolParams, l_grid


def _flat_capillary(d=10.0, N=20):
    p = SymbolParams(0.5, 0.8)
    U0 = CosineSeq.from_floats(d, np.zeros(N + 1))
    L = l_grid(p, d, np.arange(N + 1)).mid()
    return p, U0, np.diag(1.0 / L)


def test_trivial_wave_inverse_has_unit_norm():
    p, U0, AN = _flat_capillary()
    inv = assemble(p, U0, AN)
    assert float(inv.normB.hi) == pytest.approx(1.0, abs=1e-10)
    assert float(inv.cross.hi) == 0.0


def test_trivial_wave_has_no_Z_terms():
    p, U0, AN = _flat_capillary()
    s = verify_sigma1(p, auto_strip(p))
    dc = decay_constants(p, s)
    pb = compute_bounds(p, U0, assemble(p, U0, AN), s, dc)
    assert float(pb.Y0.hi) < 1e-150
    assert float(pb.Z1_finite.hi) < 1e-12
    assert float(pb.Zu.hi) < 1e-12
    # with |B| = 1 the quadratic term is twice the embedding constant
    assert float(pb.Z2.hi) >= float((2.0 * dc.kappa).hi)
    assert float(pb.Z2.hi) <= float((2.0 * dc.kappa).hi) * (1 + 1e-9)


def test_gravity_needs_tail_inverse():
    p = SymbolParams(0.0, 1.1)
    U0 = CosineSeq.from_floats(10.0, np.zeros(9))
    with pytest.raises(ValueError):
        assemble(p, U0, np.eye(9))


def test_tail_defect_zero_wave():
    U0 = CosineSeq.from_floats(10.0, np.zeros(5))
    W = CosineSeq.unit(10.0, 4)
    assert float(tail_defect(W, U0, Interval(1.1)).hi) < 1e-14


def test_combine_norm_floor_at_one():
    assert float(combine_norm(Interval(0.2), Interval(0.3), Interval(0.1)).hi) == 1.0
    big = float(combine_norm(Interval(2.0), Interval(0.3), Interval(0.5)).hi)
    assert 2.5 <= big <= 2.5 * (1 + 1e-15)


def test_injectivity_note():
    ok = injectivity_note(0.078)
    assert ok.injective and ok.inverse_factor >= 1 / (1 - 0.078)
    assert not injectivity_note(1.2).injective
    near = injectivity_note(0.999)
    assert near.injective and near.inverse_factor == pytest.approx(1000, rel=1e-6)


def test_C_d_decreases_in_d():
    vals = [float(C_d(d, 0.5).hi) for d in (10, 20, 40, 80)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    vals1 = [float(C1_d(d, 0.5).hi) for d in (10, 20, 40, 80)]
    assert all(a > b for a, b in zip(vals1, vals1[1:]))


@pytest.fixture(scope="module")
def gravity_case():
    d, N = 30.0, 300
    cfg = SolveConfig(d, N, 0.0, 1.1)
    p = SymbolParams(0.0, 1.1)
    U0 = trace_project(CosineSeq.from_floats(d, solve(cfg)), p)
    um = U0.mid()
    inv = assemble(p, U0, build_ANT(um, cfg), build_W0(um, 1.1))
    s = auto_strip(p)
    return p, U0, inv, s, decay_constants(p, s)


def test_residual_is_small(gravity_case):
    p, U0, *_ = gravity_case
    assert float(residual(p, U0).norm2().hi) < 1e-8


def test_gravity_bounds_close_the_argument(gravity_case):
    p, U0, inv, s, dc = gravity_case
    pb = compute_bounds(p, U0, inv, s, dc)
    assert float(pb.Z1.hi) < 0.5
    assert float(pb.Y0.hi) < 1e-4
    assert 1 - float(pb.Z1.hi) > 2 * np.sqrt(float(pb.Z2.hi) * float(pb.Y0.hi))
    assert float(pb.Y0.hi) >= float((pb.Y0_finite + pb.Yu).hi) * (1 - 1e-15)
    assert float(inv.defect1.hi) < 0.5


def test_bounds_refuse_unverified_strip(gravity_case):
    p, U0, inv, s, dc = gravity_case
    bad = type(s)(**{**s.__dict__, "verified": False})
    with pytest.raises(MissingStripCertificate):
        compute_bounds(p, U0, inv, bad, dc)

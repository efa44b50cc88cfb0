import csv
import json

import numpy as np
import pytest

from whitham_cap.certify import recheck
from whitham_cap.fourier import CosineSeq
from whitham_cap.rigor import Interval
from whitham_cap.spectral import (coverage_ok, exclusion_radius, floor_value, inverse_floor,
                                  lambda_windows, prepare, recheck_verdict)
from whitham_cap.strip import auto_strip, decay_constants, verify_sigma1
from whitham_cap.symbols import SymbolParams


def _capillary_flat(N=24, d=10.0):
    p = SymbolParams(0.5, 0.8)
    s = verify_sigma1(p, auto_strip(p))
    return p, s, decay_constants(p, s), CosineSeq.from_floats(d, np.zeros(N + 1))


def test_windows_for_flat_wave():
    p, s, dc, U0 = _capillary_flat()
    lam_max, lam_min = lambda_windows(U0, 0.0, s, dc, p.T, p.c_iv)
    assert float(lam_min.lo) == pytest.approx(s.sigma_real, rel=1e-14)
    assert float(lam_max.lo) == pytest.approx(s.sigma_real, rel=1e-14)


def test_gravity_window_capped_by_speed():
    p = SymbolParams(0.0, 1.1)
    s = auto_strip(p)
    dc = decay_constants(p, s)
    U0 = CosineSeq.from_floats(10.0, [0.3] + [0.0] * 8)
    lam_max, lam_min = lambda_windows(U0, 1e-6, s, dc, p.T, p.c_iv)
    assert float(lam_max.hi) <= min(s.sigma_real, 1.1 - 0.6) + 1e-12
    assert float(lam_min.hi) < s.sigma_real - 0.6


def test_floor_formula_without_coupling():
    C = floor_value(0.0, 0.0, 1.0, 0.5, -1.0, 0.1)
    assert float(C.lo) <= 1.4 <= float(C.hi)


def test_flat_wave_floor_is_distance_to_sigma():
    p, s, dc, U0 = _capillary_flat()
    setup = prepare(p, U0.d, U0, Interval(0.0), s, dc)
    res = inverse_floor(setup, -1.0)
    gap = s.sigma_real + 1.0
    assert gap * (1 - 1e-9) <= float(res.C.lo) <= gap * (1 + 1e-9)


def test_exclusion_radius_cases():
    R, simple = exclusion_radius(0.1, 2.0, 2.0, 0.2, 1e-4, -0.1, 0.05)
    # r |B| / gap^2 = 5e-3 beats Z2 r = 2e-4
    assert simple and float(R.lo) == pytest.approx(0.2 * (1 - 0.1 - 5e-3) / 2.0, rel=1e-12)
    # Z1 too large
    assert not exclusion_radius(0.99, 2.0, 2.0, 0.2, 0.1, -0.1, 0.05)[1]
    # enclosure reaches past the window
    assert not exclusion_radius(0.1, 2.0, 2.0, 0.2, 1e-4, 0.0499, 0.05)[1]


def test_coverage():
    assert coverage_ok(0.0, 1.0, [(-0.1, 0.5), (0.4, 1.1)])
    assert not coverage_ok(0.0, 1.0, [(-0.1, 0.5), (0.5, 1.1)])
    assert not coverage_ok(0.0, 1.0, [(0.0, 1.1)])
    assert not coverage_ok(0.0, 1.0, [(-0.1, 1.0)])
    assert not coverage_ok(0.0, 1.0, [])
    assert coverage_ok(1.0, 0.0, [])


# the shared small run


def test_small_run_is_stable(small_pipeline):
    work, codes = small_pipeline
    assert codes == {"prove": 0, "stability": 0}
    doc = json.loads((work / "stability.json").read_text())
    st = doc["stability"]
    assert st["verdict"] == "stable" and st["P1"] and st["P2"] and st["P3"]
    neg = st["negative"][0]
    assert float(neg["lambda0"]) < 0 and neg["parity"] == "even"
    assert st["zero"]["parity"] == "odd"
    assert recheck(work / "stability.json").ok


def test_sweep_csv_covers_targets(small_pipeline):
    work, _ = small_pipeline
    rows = list(csv.DictReader((work / "sweep.csv").open()))
    assert rows
    for r in rows:
        assert float(r["C_lo"]) > 0
        assert float(r["covered_lo"]) < float(r["lambda_star"]) < float(r["covered_hi"])


def test_tampered_floor_fails_recheck(small_pipeline):
    work, _ = small_pipeline
    doc = json.loads((work / "stability.json").read_text())
    e = doc["stability"]["sweeps"][0]["entries"][0]
    e["C"] = Interval(10.0).to_json()
    assert not recheck_verdict(doc).ok


def test_dropped_sweep_fails_recheck(small_pipeline):
    work, _ = small_pipeline
    doc = json.loads((work / "stability.json").read_text())
    doc["stability"]["sweeps"][1]["entries"] = doc["stability"]["sweeps"][1]["entries"][:-1]
    assert not recheck_verdict(doc).ok

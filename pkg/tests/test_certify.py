import json

import numpy as np
import pytest

from whitham_cap.certify import (admissible_range, check_radii, check_regularity_T0,
                                 coefficient_digest, emit, prove_existence, radii_value, recheck)
from whitham_cap.errors import (MissingStripCertificate, NoAdmissibleRadius,
                                RegularityUnverified)
from whitham_cap.rigor import Interval

REFERENCE = [(5.24e-9, 0.078, 1990.0, 5.72e-9), (7.13e-9, 0.162, 1508.0, 8.63e-9)]


@pytest.mark.parametrize("Y0,Z1,Z2,r", REFERENCE)
def test_reference_numbers_close(Y0, Z1, Z2, r):
    res = check_radii(Y0, Z1, Z2, r)
    assert res.ok
    lo, hi = res.r_range
    assert lo < r < hi


@pytest.mark.parametrize("Y0,Z1,Z2,r", REFERENCE)
def test_inflated_residual_breaks_the_reference_radius(Y0, Z1, Z2, r):
    # the margin at r is tiny; ten times that margin added to Y0 must fail
    gap = -float(radii_value(Y0, Z1, Z2, r).lo)
    assert not check_radii(Y0 + 10 * gap, Z1, Z2, r).ok


def test_no_radius_when_Z1_too_big():
    with pytest.raises(NoAdmissibleRadius):
        check_radii(1.0, 0.9, 1.0)
    with pytest.raises(NoAdmissibleRadius):
        admissible_range(1e-9, 1.0, 1.0)


def test_linear_case_has_unbounded_range():
    lo, hi = admissible_range(1e-3, 0.5, 0.0)
    assert lo >= 2e-3 and hi == np.inf


def test_chosen_radius_inside_range():
    res = check_radii(1e-6, 0.2, 100.0)
    assert res.ok
    assert res.r_range[0] <= float(res.r.lo) <= res.r_range[1]


@pytest.fixture(scope="module")
def run():
    return prove_existence(0.0, 1.1, 30.0, 300)


def test_regularity_edges(run):
    dc = run.constants
    check_regularity_T0(run.U0, 0.01, 0.0, Interval(1.1), dc)
    with pytest.raises(RegularityUnverified):
        check_regularity_T0(run.U0, 0.55, 0.0, Interval(1.1), dc)
    with pytest.raises(RegularityUnverified):
        check_regularity_T0(run.U0, 0.01, 1.0, Interval(1.1), dc)


def test_certificate_round_trip(run, tmp_path):
    cert = run.certificate
    assert cert.radii.ok and cert.injective and cert.regularity_ok
    path = emit(cert, tmp_path / "cert.json")
    doc = json.loads(path.read_text())
    assert doc["kind"] == "existence"
    assert doc["digests"]["U0"] == coefficient_digest(run.U_float)
    assert Interval.from_json(doc["radii"]["r"]).hi == cert.r.hi
    rep = recheck(path)
    assert rep.ok, str(rep)


def test_tampered_certificate_fails_recheck(run, tmp_path):
    path = emit(run.certificate, tmp_path / "cert.json")
    doc = json.loads(path.read_text())
    doc["bounds"]["Z1"] = Interval(1.5).to_json()
    path.write_text(json.dumps(doc))
    assert not recheck(path).ok


def test_emit_refuses_unverified_strip(run, tmp_path):
    cert = run.certificate
    s = cert.strip
    bad = type(s)(**{**s.__dict__, "verified": False})
    saved = cert.strip
    cert.strip = bad
    try:
        with pytest.raises(MissingStripCertificate):
            emit(cert, tmp_path / "no.json")
    finally:
        cert.strip = saved
    assert not (tmp_path / "no.json").exists()

"""Radii polynomial check, regularity check and certificate files.

A certificate stores every interval as a pair of decimal strings (Python
``repr`` of the endpoint doubles), so reading it back reproduces the exact
endpoints.  ``recheck`` re-evaluates the final inequalities from the stored
numbers alone.
"""

from __future__ import annotations

import hashlib
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .approx import SolveConfig, build_ANT, build_W0, solve
from .bounds import ProofBounds, compute_bounds
from .errors import (MissingStripCertificate, NoAdmissibleRadius, RegularityUnverified,
                     VerificationFailed)
from .fourier import CosineSeq, trace_project
from .inverse import assemble, injectivity_note
from .rigor import Interval, as_interval, ival_elem
from .strip import DecayConstants, StripData, auto_strip, decay_constants, verify_sigma1
from .symbols import SymbolParams

log = logging.getLogger(__name__)


# radii polynomial

@dataclass
class RadiiResult:
    ok: bool
    r: Interval | None
    value: Interval | None
    r_range: tuple

    def to_json(self):
        return {"ok": self.ok, "r": None if self.r is None else self.r.to_json(),
                "value": None if self.value is None else self.value.to_json(),
                "r_range": [repr(float(x)) for x in self.r_range]}


def radii_value(Y0, Z1, Z2, r) -> Interval:
    """Z2 r^2 - (1 - Z1) r + Y0 with every bound taken at its upper end."""
    Y0, Z1, Z2 = (Interval(float(as_interval(x).hi)) for x in (Y0, Z1, Z2))
    r = as_interval(r)
    return Z2 * r.sqr() - (1.0 - Z1) * r + Y0


def admissible_range(Y0, Z1, Z2):
    """Certified sub-interval (lo, hi) of radii where the polynomial is negative."""
    Y0, Z1, Z2 = (Interval(float(as_interval(x).hi)) for x in (Y0, Z1, Z2))
    if not float(Z1.hi) < 1.0:
        raise NoAdmissibleRadius(f"Z1 = {float(Z1.hi):.6g} is not below 1")
    b = 1.0 - Z1
    disc = b.sqr() - 4.0 * Z2 * Y0
    if not float(disc.lo) > 0.0:
        raise NoAdmissibleRadius("discriminant is not certified positive")
    root = ival_elem("sqrt", disc)
    if float(Z2.hi) == 0.0:
        return float((Y0 / b).hi), float("inf")
    # the small root in the cancellation-free form 2 Y0 / (b + sqrt(disc))
    small = 2.0 * Y0 / (b + root)
    large = (b + root) / (2.0 * Z2)
    lo, hi = float(small.hi), float(large.lo)
    if not lo < hi:
        raise NoAdmissibleRadius("root enclosures overlap")
    return lo, hi


def check_radii(Y0, Z1, Z2, r=None) -> RadiiResult:
    """Evaluate the polynomial at ``r`` (or at a chosen radius) and return the admissible range."""
    lo, hi = admissible_range(Y0, Z1, Z2)
    if r is None:
        r = choose_radius(lo, hi)
    r = as_interval(r)
    val = radii_value(Y0, Z1, Z2, r)
    return RadiiResult(ok=bool(float(val.hi) < 0.0), r=r, value=val, r_range=(lo, hi))


def choose_radius(lo, hi) -> Interval:
    """min{midpoint of the range, 1.1 times its lower end}, rounded up."""
    mid = (Interval(lo) + Interval(hi)) * 0.5 if np.isfinite(hi) else Interval(np.inf)
    cand = Interval(lo) * 1.1
    pick = mid if float(mid.hi) < float(cand.hi) else cand
    return Interval(float(pick.hi))


# regularity for T = 0

@dataclass
class RegularityResult:
    ok: bool
    epsilon: float
    norm1_U0: Interval
    r_limit: Interval

    def to_json(self):
        return {"ok": self.ok, "epsilon": repr(self.epsilon),
                "norm1_U0": self.norm1_U0.to_json(), "r_limit": self.r_limit.to_json()}


def default_epsilon(U0: CosineSeq, c) -> float:
    """A margin slightly inside c/2 - |U0|_1, rounded down to two digits."""
    room = float((as_interval(c) * 0.5 - U0.norm1()).lo)
    return float(np.floor(room * 100.0) / 100.0) if room > 0.01 else room * 0.5


def check_regularity_T0(U0: CosineSeq, eps, r, c, dc: DecayConstants) -> RegularityResult:
    """Certify |U0|_1 + eps < c/2 and r <= eps / sup_embed."""
    eps = float(eps)
    n1 = U0.norm1()
    first = float((n1 + eps).hi) < float((as_interval(c) * 0.5).lo)
    limit = Interval(eps) / dc.sup_embed
    second = float(as_interval(r).hi) <= float(limit.lo)
    res = RegularityResult(ok=bool(first and second and eps > 0), epsilon=eps, norm1_U0=n1,
                           r_limit=limit)
    if not res.ok:
        raise RegularityUnverified(
            f"eps={eps}: |U0|_1 + eps < c/2 is {first}, r <= eps/embed is {second}")
    return res


# certificates

@dataclass
class Certificate:
    params: dict
    strip: StripData
    constants: DecayConstants
    bounds: ProofBounds
    radii: RadiiResult
    normB: Interval
    injective: bool
    regularity: RegularityResult | None = None
    digests: dict = field(default_factory=dict)
    config: str = ""
    timestamp: str = ""
    version: str = __version__

    @property
    def r(self):
        return self.radii.r

    @property
    def regularity_ok(self):
        return self.params["T"] > 0 or (self.regularity is not None and self.regularity.ok)

    def to_json(self):
        return {
            "kind": "existence",
            "version": self.version,
            "timestamp": self.timestamp,
            "params": {k: repr(v) if isinstance(v, float) else v for k, v in self.params.items()},
            "strip": self.strip.to_json(),
            "constants": self.constants.to_json(),
            "bounds": self.bounds.to_json(),
            "radii": self.radii.to_json(),
            "normB": self.normB.to_json(),
            "injective": self.injective,
            "regularity": None if self.regularity is None else self.regularity.to_json(),
            "regularity_ok": self.regularity_ok,
            "digests": self.digests,
            "config": self.config,
        }


def coefficient_digest(values) -> str:
    text = "\n".join(repr(float(v)) for v in np.asarray(values, float))
    return hashlib.sha256(text.encode()).hexdigest()


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def emit(cert: Certificate, path) -> Path:
    """Write the certificate as JSON; refuses anything not fully verified."""
    if not cert.strip.verified:
        raise MissingStripCertificate("refusing to emit: strip not verified")
    if cert.params["T"] > 0 and not cert.strip.sigma1_verified:
        raise MissingStripCertificate("refusing to emit: sigma1 not verified")
    if not (cert.radii.ok and cert.injective):
        raise VerificationFailed("refusing to emit: radii condition not certified")
    if not cert.regularity_ok:
        raise RegularityUnverified("refusing to emit: regularity not certified")
    path = Path(path)
    path.write_text(json.dumps(cert.to_json(), indent=1, sort_keys=True) + "\n")
    return path


@dataclass
class RecheckReport:
    ok: bool
    checks: dict

    def __str__(self):
        return "\n".join(f"{k:<22s} {'ok' if v else 'FAILED'}" for k, v in self.checks.items())


def _iv(obj) -> Interval:
    return Interval.from_json(obj)


def recheck(path) -> RecheckReport:
    """Re-evaluate the certificate's inequalities from its stored numbers."""
    doc = json.loads(Path(path).read_text())
    checks = {}
    if doc.get("kind") == "stability":
        return recheck_stability(doc)
    b = doc["bounds"]
    Y0, Z1, Z2 = _iv(b["Y0"]), _iv(b["Z1"]), _iv(b["Z2"])
    checks["Y0 = Y0f + Yu"] = float(Y0.hi) >= float((_iv(b["Y0_finite"]) + _iv(b["Yu"])).hi) * (1 - 1e-15)
    checks["Z1 = Z1f + Zu"] = float(Z1.hi) >= float((_iv(b["Z1_finite"]) + _iv(b["Zu"])).hi) * (1 - 1e-15)
    checks["Z1 < 1"] = float(Z1.hi) < 1.0
    r = _iv(doc["radii"]["r"])
    checks["radii polynomial < 0"] = float(radii_value(Y0, Z1, Z2, r).hi) < 0.0
    checks["strip verified"] = bool(doc["strip"]["verified"])
    T = float(doc["params"]["T"])
    if T == 0:
        reg = doc["regularity"]
        ok = reg is not None
        if ok:
            eps = float(reg["epsilon"])
            c = Interval.from_decimal(doc["params"]["c"])
            embed = _iv(doc["constants"]["sup_embed"])
            n1 = _iv(reg["norm1_U0"])
            ok = (float((n1 + eps).hi) < float((c * 0.5).lo)
                  and float(r.hi) <= float((Interval(eps) / embed).lo))
        checks["regularity"] = bool(ok)
    return RecheckReport(all(checks.values()), checks)


def recheck_stability(doc) -> RecheckReport:
    from .spectral import recheck_verdict
    return recheck_verdict(doc)


# the whole existence pipeline

@dataclass
class ExistenceRun:
    params: SymbolParams
    d: float
    N: int
    U_float: np.ndarray
    U0: CosineSeq
    strip: StripData
    constants: DecayConstants
    certificate: Certificate


def prove_existence(T, c, d, N, U=None, strip: StripData | None = None, config_text="",
                    coeff_path=None, eps=None) -> ExistenceRun:
    """Approximate solution, strip, constants, bounds, radius and (T = 0) regularity."""
    p = SymbolParams(float(T), float(c))
    cfg = SolveConfig(float(d), int(N), float(T), float(c))
    if U is None:
        U = solve(cfg)
    U = np.asarray(U, float)
    if len(U) != N + 1:
        raise ValueError(f"expected {N + 1} coefficients, got {len(U)}")
    U0 = trace_project(CosineSeq.from_floats(d, U), p)
    um = U0.mid()
    AN = build_ANT(um, cfg)
    W = build_W0(um, float(c)) if T == 0 else None
    if strip is None:
        strip = auto_strip(p)
    if T > 0 and not strip.sigma1_verified:
        strip = verify_sigma1(p, strip)
    dc = decay_constants(p, strip)
    inv = assemble(p, U0, AN, W)
    pb = compute_bounds(p, U0, inv, strip, dc)
    log.info("bounds\n%s", pb.table())
    note = injectivity_note(pb.Z1)
    if not note.injective:
        raise NoAdmissibleRadius(f"Z1 = {note.Z1:.6g} is not below 1")
    radii = check_radii(pb.Y0, pb.Z1, pb.Z2)
    if not radii.ok:
        raise NoAdmissibleRadius("chosen radius fails the polynomial check")
    reg = None
    if T == 0:
        e = default_epsilon(U0, p.c_iv) if eps is None else eps
        reg = check_regularity_T0(U0, e, radii.r, p.c_iv, dc)
    digests = {"U0": coefficient_digest(U)}
    if coeff_path is not None:
        digests["input_file"] = file_digest(coeff_path)
    cert = Certificate(
        params={"T": float(T), "c": float(c), "d": float(d), "N": int(N)},
        strip=strip, constants=dc, bounds=pb, radii=radii, normB=inv.normB,
        injective=note.injective, regularity=reg, digests=digests, config=config_text,
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%S"),
    )
    return ExistenceRun(p, float(d), int(N), U, U0, strip, dc, cert)

"""Command line front-end.

    whitham-cap --preset whitham-small --mode prove
    whitham-cap --config run.cfg --mode stability --threads 4

The configuration is a flat ``key = value`` file; command line flags win
over it, and it wins over the preset.  Stages form a chain: ``prove``
writes the coefficients and the existence certificate, ``stability`` reads
both back and refuses to run when they do not match.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VERIFY = 4
EXIT_IO = 5
EXIT_CODES = {"ok": EXIT_OK, "config": EXIT_CONFIG, "numeric": EXIT_NUMERIC,
              "verification": EXIT_VERIFY, "io": EXIT_IO}

MODES = ("solve", "constants", "prove", "spectrum", "stability", "recheck", "export")
THREADS_ENV = "WHITHAM_CAP_THREADS"

PRESETS = {
    "whitham-small": {"T": "0", "c": "1.1", "d": "30", "N": "300"},
    "gravity-full": {"T": "0", "c": "1.1", "d": "50", "N": "800"},
    "capillary-full": {"T": "0.5", "c": "0.8", "d": "40", "N": "800"},
}

log = logging.getLogger("whitham_cap")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    mode: str = "prove"
    T: float = 0.0
    c: float = 1.1
    d: float = 30.0
    N: int = 300
    workdir: str = "."
    coeff_in: str = ""
    coeff_out: str = "coefficients.txt"
    cert_in: str = ""
    cert_out: str = "certificate.json"
    stability_out: str = "stability.json"
    sweep_csv: str = "sweep.csv"
    profile_csv: str = "profile.csv"
    export_points: int = 601
    newton_tol: float = 1e-11
    stride: float = 1.9
    eps: float = -1.0
    threads: int = 0
    source: str = field(default="", repr=False)

    def path(self, name) -> Path:
        p = Path(getattr(self, name))
        return p if p.is_absolute() else Path(self.workdir) / p


def parse_config_text(text: str) -> dict:
    out = {}
    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {num}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {num}: empty key")
        out[key] = val
    return out


def build_config(values: dict, source="") -> RunConfig:
    types = {f.name: f.type for f in fields(RunConfig)}
    kw = {}
    for key, val in values.items():
        if key not in types or key == "source":
            raise ConfigError(f"unknown key {key!r}")
        kind = types[key]
        try:
            kw[key] = int(val) if kind == "int" else float(val) if kind == "float" else str(val)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {val!r}") from exc
    cfg = RunConfig(**kw, source=source)
    if cfg.mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}")
    if cfg.T < 0 or cfg.d <= 1 or cfg.N < 8:
        raise ConfigError("need T >= 0, d > 1 and N >= 8")
    if not 0 < cfg.stride < 2:
        raise ConfigError("stride factor must lie in (0, 2)")
    return cfg


# coefficient files

def write_coefficients(path, values, d, N, T, c):
    lines = [f"# d={d!r} N={int(N)} T={T!r} c={c!r}"] + [repr(float(v)) for v in values]
    Path(path).write_text("\n".join(lines) + "\n")
    return Path(path)


def read_coefficients(path):
    """(values, header dict)."""
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("#"):
        raise ConfigError(f"{path}: missing header line")
    head = dict(item.split("=", 1) for item in text[0][1:].split())
    vals = [float(s) for s in text[1:] if s.strip()]
    return vals, head


def _check_header(head, cfg: RunConfig):
    for key in ("d", "T", "c"):
        if float(head[key]) != float(getattr(cfg, key)):
            raise ConfigError(f"coefficient file has {key}={head[key]}, config says {getattr(cfg, key)}")
    if int(head["N"]) != cfg.N:
        raise ConfigError(f"coefficient file has N={head['N']}, config says {cfg.N}")


# stages

def _solve(cfg: RunConfig):
    import numpy as np
    from .approx import SolveConfig, solve
    if cfg.coeff_in:
        vals, head = read_coefficients(cfg.path("coeff_in"))
        _check_header(head, cfg)
        return np.asarray(vals), str(cfg.path("coeff_in"))
    U = solve(SolveConfig(cfg.d, cfg.N, cfg.T, cfg.c, newton_tol=cfg.newton_tol))
    out = write_coefficients(cfg.path("coeff_out"), U, cfg.d, cfg.N, cfg.T, cfg.c)
    return U, str(out)


def run_solve(cfg):
    U, path = _solve(cfg)
    print(f"coefficients: {path}")
    print(f"max |U_n| = {max(abs(x) for x in U):.6e}, U_0 = {U[0]:.6e}")
    return EXIT_OK


def run_constants(cfg):
    from .strip import auto_strip, decay_constants, verify_sigma1
    from .symbols import SymbolParams
    p = SymbolParams(cfg.T, cfg.c)
    s = auto_strip(p)
    if p.T > 0 and not s.sigma1_verified:
        s = verify_sigma1(p, s)
    dc = decay_constants(p, s)
    print(f"strip a = {s.a:.6g}, sigma0 = {s.sigma0:.6g}, x = {s.x:.6g}, real-axis bound = {s.sigma_real:.6g}")
    if s.sigma1 is not None:
        print(f"sigma1 = {s.sigma1:.6g}")
    for k, v in dc.to_json().items():
        val = float(v["hi"]) if isinstance(v, dict) else float(v)
        print(f"{k:<10s} {val:.6e}")
    return EXIT_OK


def run_prove(cfg):
    from .certify import emit, prove_existence
    U, path = _solve(cfg)
    eps = None if cfg.eps < 0 else cfg.eps
    run = prove_existence(cfg.T, cfg.c, cfg.d, cfg.N, U=U, config_text=cfg.source,
                          coeff_path=path, eps=eps)
    cert = run.certificate
    print(cert.bounds.table())
    print(f"{'normB':<14s} {float(cert.normB.hi):.6e}")
    print(f"{'r':<14s} {float(cert.r.hi):.6e}   admissible ({cert.radii.r_range[0]:.3e}, {cert.radii.r_range[1]:.3e})")
    if cert.regularity is not None:
        print(f"{'epsilon':<14s} {cert.regularity.epsilon}")
    out = emit(cert, cfg.path("cert_out"))
    print(f"certificate: {out}")
    return EXIT_OK


def run_spectrum(cfg):
    from .approx import approx_eigs
    U, _ = _solve(cfg)
    for lam, v in approx_eigs(U, cfg.T, cfg.c, cfg.d, cfg.N, count=4):
        kind = "even" if abs(v[0] - v[-1]) <= abs(v[0] + v[-1]) else "odd"
        print(f"{lam: .10e}  {kind}")
    return EXIT_OK


def _load_existence(cfg):
    """Existence certificate plus matching coefficients, or ConfigError."""
    import numpy as np
    from .certify import coefficient_digest, recheck
    if not cfg.cert_in or not cfg.coeff_in:
        raise ConfigError("stability needs cert_in and coeff_in from a prove run")
    cpath = cfg.path("cert_in")
    rep = recheck(cpath)
    if not rep.ok:
        raise _Verify(f"existence certificate fails its recheck:\n{rep}")
    doc = json.loads(cpath.read_text())
    if doc.get("kind") != "existence":
        raise ConfigError("cert_in is not an existence certificate")
    vals, head = read_coefficients(cfg.path("coeff_in"))
    _check_header(head, cfg)
    if coefficient_digest(vals) != doc["digests"]["U0"]:
        raise ConfigError("coefficients do not match the certificate digest")
    return doc, np.asarray(vals)


class _Verify(Exception):
    pass


def run_stability(cfg):
    from .fourier import CosineSeq, trace_project
    from .rigor import Interval
    from .spectral import prove_stability, write_certificate, write_sweep_csv
    from .strip import decay_constants, verify_sigma1, verify_strip
    from .symbols import SymbolParams
    doc, U = _load_existence(cfg)
    p = SymbolParams(cfg.T, cfg.c)
    st = doc["strip"]
    s = verify_strip(p, float(st["a"]), float(st["sigma0"]), float(st["x"]))
    if p.T > 0:
        s = verify_sigma1(p, s, float(st["sigma1"]))
    dc = decay_constants(p, s)
    U0 = trace_project(CosineSeq.from_floats(cfg.d, U), p)
    r0 = Interval.from_json(doc["radii"]["r"])

    def progress(e):
        log.info("shift %.8f  C = %.3e", e.lam, float(e.C.lo))

    run = prove_stability(p, cfg.d, U0, r0, s, dc, stride=cfg.stride, progress=progress)
    v = run.verdict
    print(f"lambda window [{float(v.lambda_min.lo):.6g}, {float(v.lambda_max.lo):.6g}]")
    for name, e in [("negative", x) for x in v.negative] + [("zero", v.zero)]:
        if e is None:
            continue
        sb = e.side_bounds
        print(f"{name:<9s} lambda0 = {e.lambda0: .10e}  r = {float(e.r.hi):.3e}  R = {float(e.R.lo):.3e}"
              f"  Y0 = {float(sb['Y0'].hi):.3e}  Z1 = {float(sb['Z1'].hi):.3e}  Z2 = {float(sb['Z2'].hi):.3e}"
              f"  simple = {e.simple}")
    for sw in v.sweeps:
        print(f"sweep [{sw.lo:.6g}, {sw.hi:.6g}]: {len(sw.entries)} shifts, complete = {sw.complete}")
    print(f"P1 = {v.P1}  P2 = {v.P2}  P3 = {v.P3}  verdict: {v.verdict}")
    for note in v.notes:
        print(f"note: {note}")
    write_sweep_csv(v.sweeps, cfg.path("sweep_csv"))
    if v.verdict != "stable":
        return EXIT_VERIFY
    out = write_certificate(run, cfg.path("stability_out"), existence=doc)
    print(f"certificate: {out}")
    return EXIT_OK


def run_recheck(cfg):
    from .certify import recheck
    if not cfg.cert_in:
        raise ConfigError("recheck needs cert_in")
    try:
        rep = recheck(cfg.path("cert_in"))
    except (ValueError, KeyError, TypeError) as exc:
        # json.JSONDecodeError is a ValueError
        print(f"malformed certificate: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    print(rep)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def run_export(cfg):
    import csv
    import numpy as np
    from .fourier import CosineSeq, trace_project
    from .symbols import SymbolParams
    U, _ = _solve(cfg)
    # the projected sequence is the one the certificate speaks about
    seq = trace_project(CosineSeq.from_floats(cfg.d, U), SymbolParams(cfg.T, cfg.c))
    x = np.linspace(-cfg.d, cfg.d, max(2, cfg.export_points))
    vals = seq.values(x)
    with cfg.path("profile_csv").open("w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["x", "u_lo", "u_hi"])
        for xi, lo, hi in zip(x, vals.lo, vals.hi):
            wr.writerow([repr(float(xi)), repr(float(lo)), repr(float(hi))])
    print(f"profile: {cfg.path('profile_csv')}")
    return EXIT_OK


RUNNERS = {"solve": run_solve, "constants": run_constants, "prove": run_prove,
           "spectrum": run_spectrum, "stability": run_stability, "recheck": run_recheck,
           "export": run_export}


def _thread_limit(k):
    """Context capping BLAS threads; numpy may already be loaded, so env vars alone are too late."""
    from contextlib import nullcontext
    if not k or k <= 0:
        return nullcontext()
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        os.environ[var] = str(k)
    from threadpoolctl import threadpool_limits
    return threadpool_limits(limits=k)


def parse_args(argv=None):
    ap = argparse.ArgumentParser(prog="whitham-cap", description=__doc__.split("\n\n")[0])
    ap.add_argument("--config", help="flat key = value file")
    ap.add_argument("--mode", choices=MODES)
    ap.add_argument("--threads", type=int, help=f"BLAS threads (default from ${THREADS_ENV})")
    ap.add_argument("--preset", choices=sorted(PRESETS))
    ap.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="override one configuration key")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap.parse_args(argv)


def load_config(args) -> RunConfig:
    values = dict(PRESETS[args.preset]) if args.preset else {}
    source = ""
    if args.config:
        try:
            source = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        values.update(parse_config_text(source))
    values.update(parse_config_text("\n".join(args.set)))
    if args.mode:
        values["mode"] = args.mode
    if args.threads is not None:
        values["threads"] = str(args.threads)
    elif "threads" not in values and os.environ.get(THREADS_ENV):
        values["threads"] = os.environ[THREADS_ENV]
    if not source:
        source = "\n".join(f"{k} = {v}" for k, v in sorted(values.items())) + "\n"
    return build_config(values, source)


def main(argv=None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    from .errors import (AssumptionViolated, NoConvergence, SingularJacobian, WhithamCapError)
    try:
        with _thread_limit(cfg.threads):
            return RUNNERS[cfg.mode](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NoConvergence, SingularJacobian, AssumptionViolated) as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (WhithamCapError, _Verify) as exc:
        print(f"verification failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

"""Reduced-scale stability run (T=0, c=1.1, d=30, N=300) with progress output."""

import logging

from whitham_cap.certify import prove_existence
from whitham_cap.spectral import prove_stability, write_sweep_csv


def main():
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    ex = prove_existence(0.0, 1.1, 30.0, 300)
    cert = ex.certificate
    print(f"existence r0 = {float(cert.r.hi):.4e}")
    run = prove_stability(ex.params, ex.d, ex.U0, cert.r, ex.strip, ex.constants,
                          progress=lambda e: print(f"  shift {e.lam:+.6f}  C = {float(e.C.lo):.4e}"))
    v = run.verdict
    print("float eigenvalues:", ", ".join(f"{x:.6g}" for x in run.float_eigs))
    for e in v.negative + [v.zero]:
        if e is not None:
            print(f"lambda0 = {e.lambda0:+.8f}  r = {float(e.r.hi):.3e}  R = {float(e.R.lo):.3e}  simple = {e.simple}")
    write_sweep_csv(v.sweeps, "sweep.csv")
    print(f"P1={v.P1} P2={v.P2} P3={v.P3} -> {v.verdict}  ({run.seconds:.0f}s)")


if __name__ == "__main__":
    main()

"""Certify the two full-scale solitary waves and print their bound tables.

    python scripts/run_existence.py            # both cases
    python scripts/run_existence.py gravity
"""

import sys
import time

from whitham_cap.certify import prove_existence

CASES = {
    "gravity": (0.0, 1.1, 50.0, 800),
    "capillary": (0.5, 0.8, 40.0, 800),
}


def main(names):
    for name in names or CASES:
        T, c, d, N = CASES[name]
        t0 = time.time()
        run = prove_existence(T, c, d, N)
        cert = run.certificate
        print(f"== {name}: T={T} c={c} d={d} N={N}  ({time.time() - t0:.0f}s)")
        print(cert.bounds.table())
        lo, hi = cert.radii.r_range
        print(f"r = {float(cert.r.hi):.4e} in ({lo:.3e}, {hi:.3e})")
        if cert.regularity is not None:
            print(f"eps = {cert.regularity.epsilon}")


if __name__ == "__main__":
    main(sys.argv[1:])

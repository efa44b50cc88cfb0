"""Compare the certified decay envelopes with inverse-Fourier quadrature.

Prints |f_i(x)| / envelope_i(x) on a grid; every ratio should stay below 1.
"""

import warnings

import numpy as np
from scipy import integrate

from whitham_cap.approx import m_float
from whitham_cap.strip import auto_strip, decay_constants, verify_sigma1
from whitham_cap.symbols import SymbolParams


def transform(g, x, kind):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return abs(integrate.quad(g, 0, np.inf, weight=kind, wvar=x, limlst=200)[0]) / np.pi


def ratios(p, xs):
    s = auto_strip(p)
    if p.T > 0:
        s = verify_sigma1(p, s)
    dc = decay_constants(p, s)
    T, c = p.T, p.c
    nu = T if T > 0 else 4 / np.pi**2
    den = lambda z: m_float(T, z) - c
    g0 = lambda z: 1 / (den(z) * (1 + nu * z * z))
    g1 = lambda z: z / (den(z) * (1 + nu * z * z))
    g2 = (lambda z: 1 / den(z) + 1 / c) if T == 0 else (lambda z: 1 / den(z))
    print(f"T={T} c={c}: a={s.a:.4g} C0={float(dc.C0.hi):.4g} C1={float(dc.C1.hi):.4g} C2={float(dc.C2.hi):.4g}")
    for x in xs:
        e = np.exp(-s.a * x)
        r0 = transform(g0, x, "cos") / (float(dc.C0.hi) * e)
        r1 = transform(g1, x, "sin") / (float(dc.C1.hi) * e)
        r2 = transform(g2, x, "cos") / (float(dc.C2.hi) * e / np.sqrt(x))
        print(f"  x={x:6.2f}  {r0:.3e}  {r1:.3e}  {r2:.3e}")


if __name__ == "__main__":
    xs = [0.5, 1.0, 3.0, 7.3, 10.0]
    ratios(SymbolParams(0.0, 1.1), xs)
    ratios(SymbolParams(0.5, 0.8), xs)

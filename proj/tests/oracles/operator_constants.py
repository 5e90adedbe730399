"""Arbitrary-precision oracle values for the operator tests.

Run with mpmath installed; the printed numbers are frozen in
tests/test_fractional_laplacian.cpp and tests/test_diagnostics.cpp.
`python3 operator_constants.py golden > ../golden/G_lambda.csv` rewrites the G table.
"""
import sys

import mpmath as mp

mp.mp.dps = 40


def G(lam):
    lam = mp.mpf(lam)
    return lam * mp.gamma((1 + lam) / 2) / (2 * mp.pi ** (mp.mpf(1) / 2 + lam) * mp.gamma(1 - lam / 2))


def gaussian_at_zero(lam):
    # L_lam exp(-pi x^2) at 0 = int |xi|^lam exp(-pi xi^2) dxi
    lam = mp.mpf(lam)
    return mp.gamma((1 + lam) / 2) / mp.pi ** ((1 + lam) / 2)


def weight(lam, h, j):
    lam, h = mp.mpf(lam), mp.mpf(h)
    return G(lam) / lam * (((j - mp.mpf(1) / 2) * h) ** (-lam) - ((j + mp.mpf(1) / 2) * h) ** (-lam))


def c_lambda(lam):
    lam = mp.mpf(lam)
    f = lambda s: 4 * mp.sin(mp.pi * s) ** 2 / s ** lam
    s = mp.findroot(lambda s: mp.diff(f, s), 0.45)
    return s, f(s)


def golden_G():
    print("#source,tests/oracles/operator_constants.py (mpmath 40 digits)")
    print("lambda,G")
    for lam in ["0.1", "0.25", "0.5", "0.75", "0.9", "0.999"]:
        print(lam + "," + mp.nstr(G(lam), 20))


if __name__ == "__main__" and sys.argv[1:] == ["golden"]:
    golden_G()
elif __name__ == "__main__":
    for lam in ["0.25", "0.5", "0.75", "0.999"]:
        print("G", lam, mp.nstr(G(lam), 30))
    for lam in ["0.25", "0.5", "0.75", "0.999"]:
        print("gauss0", lam, mp.nstr(gaussian_at_zero(lam), 30))
    for j in [1, 2, 5, 16]:
        print("w", "0.5", "0.125", j, mp.nstr(weight("0.5", "0.125", j), 30))
    for lam in ["0.25", "0.5", "0.75"]:
        s, c = c_lambda(lam)
        print("c_lambda", lam, mp.nstr(s, 20), mp.nstr(c, 30))

#!/usr/bin/env python3
"""Frozen reference data for the lattice, propagator and interval tests.

Every value is computed here without the C++ library, in mpmath or with a
plain O(n^2) DFT, and written to tests/data. Run from the repository root.
"""
import csv
import os
import sys

import mpmath as mp

sys.path.insert(0, os.path.dirname(__file__))
from ml_oracle import ml_series  # noqa: E402

DATA = os.path.join(os.path.dirname(__file__), "..", "data")


def dft_propagate(n, L, sigma, alpha, beta, t):
    """Gaussian datum propagated by E_{alpha,1}(-|xi|^beta t^alpha) on [-L, L)."""
    dx = mp.mpf(2 * L) / n
    xs = [-L + j * dx for j in range(n)]
    f = [mp.exp(-x * x / (2 * sigma * sigma)) for x in xs]
    out = [mp.mpc(0)] * n
    for k in range(-n // 2, n // 2):
        xi = mp.mpf(k) / (2 * L)
        coef = sum(f[j] * mp.expj(-2 * mp.pi * xi * xs[j]) for j in range(n)) / n
        mult = ml_series(alpha, 1.0, -(abs(xi) ** beta) * mp.mpf(t) ** alpha).real
        for j in range(n):
            out[j] += coef * mult * mp.expj(2 * mp.pi * xi * xs[j])
    return xs, out


def write_propagator():
    # doubled-resolution grid, restricted to the coarse points
    alpha, beta, t, sigma, L = 0.5, 1.5, 1.0, 1.0, 10
    xs, u = dft_propagate(128, L, sigma, alpha, beta, t)
    with open(os.path.join(DATA, "free_propagate_gaussian.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "re_u", "im_u"])
        for j in range(0, 128, 2):
            w.writerow([mp.nstr(xs[j], 17), mp.nstr(u[j].real, 20), mp.nstr(u[j].imag, 20)])


def sobolev_gaussian(sigma, gamma):
    # inhomogeneous norm of exp(-x^2 / (2 sigma^2)) from its continuous transform
    mp.mp.dps = 30
    F2 = lambda xi: 2 * mp.pi * sigma**2 * mp.exp(-4 * mp.pi**2 * sigma**2 * xi**2)
    val = mp.quad(lambda xi: (1 + xi * xi) ** gamma * F2(xi), [-mp.inf, 0, mp.inf])
    return mp.sqrt(val)


def interval_matrix(L, N, beta):
    mp.mp.dps = 30
    p = lambda x: -1 - mp.sin(mp.pi * x / L)
    M = [[mp.mpf(0)] * N for _ in range(N)]
    for m in range(1, N + 1):
        for n in range(m, N + 1):
            f = lambda x: p(x) * mp.sin(m * mp.pi * x / L) * mp.sin(n * mp.pi * x / L)
            P = 2 / mp.mpf(L) * mp.quad(f, mp.linspace(0, L, 9))
            v = -P + ((m * mp.pi / L) ** beta if m == n else 0)
            M[m - 1][n - 1] = M[n - 1][m - 1] = v
    return M


def main():
    os.makedirs(DATA, exist_ok=True)
    write_propagator()
    with open(os.path.join(DATA, "interval_reference.csv"), "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["kind", "i", "j", "value"])
        w.writerow(["sobolev_gaussian", 0, 0, mp.nstr(sobolev_gaussian(1.0, 0.75), 20)])
        M = interval_matrix(2.0, 8, 1.0)
        for i in range(8):
            for j in range(8):
                w.writerow(["matrix", i, j, mp.nstr(M[i][j], 20)])
        a = [1.0, -0.5, 0.25, 0.0, 0.1, -0.05]
        for n, an in enumerate(a, start=1):
            lam = mp.mpf(n) ** 1.5 + 1
            w.writerow(["evolve", n, 0, mp.nstr(an * ml_series(0.5, 1.0, -lam).real, 20)])


if __name__ == "__main__":
    main()

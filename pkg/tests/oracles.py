"""Slow, independent reference implementations used only by the tests."""

import cmath
import math
from fractions import Fraction

import numpy as np


def naive_dft_1d(f):
    """``F(k) = (1/n) sum_x f(x) exp(-2 pi i k x / n)`` by direct summation, numpy FFT order."""
    n = len(f)
    out = np.zeros(n, dtype=complex)
    for k in range(n):
        out[k] = sum(f[x] * cmath.exp(-2j * math.pi * k * x / n) for x in range(n)) / n
    return out


def slope_annulus(slope, lam):
    """All ``i`` in a generous range with ``lam**(i+1) < slope <= lam**i``, by scanning."""
    hits = []
    for i in range(-60, 200):
        hi = lam**i
        lo = lam ** (i + 1)
        if lo < slope <= hi * (1 + 1e-12):
            hits.append(i)
    return hits


def sector_by_arcs(angles, theta):
    """Index of the arc ``[a_k, a_{k-1})`` (counterclockwise from member k) containing ``theta``."""
    N = len(angles)
    for k in range(N):
        start = angles[k]
        end = angles[k - 1] if N > 1 else angles[k] + 2 * math.pi
        span = (end - start) % (2 * math.pi)
        if N == 1:
            span = 2 * math.pi
        rel = (theta - start) % (2 * math.pi)
        if rel > 2 * math.pi - 1e-12:
            rel = 0.0
        if rel < span or (span == 0 and rel == 0):
            return k
    raise AssertionError("angle not covered by any arc")


def dyadic_radii(n):
    out, m = [0], 1
    while m <= n // 2:
        out.append(m)
        m *= 2
    return out


def max_axis_exact(values, radii):
    """1D centred maximal function in exact rational arithmetic, periodic."""
    n = len(values)
    vals = [Fraction(abs(v)) for v in values]
    out = []
    for x in range(n):
        best = None
        for m in radii:
            avg = sum(vals[(x - j) % n] for j in range(-m, m + 1)) / (2 * m + 1)
            best = avg if best is None or avg > best else best
        out.append(best)
    return out


def bilinear(a, p):
    """Periodic bilinear interpolation of a 2D array at lattice coordinates ``p``."""
    n0, n1 = a.shape
    x0, x1 = math.floor(p[0]), math.floor(p[1])
    t0, t1 = p[0] - x0, p[1] - x1
    v = 0.0
    for c0, w0 in ((0, 1 - t0), (1, t0)):
        for c1, w1 in ((0, 1 - t1), (1, t1)):
            v += w0 * w1 * a[(x0 + c0) % n0, (x1 + c1) % n1]
    return v


def max_directional_point(f, omega, x, radii):
    """Maximal average of ``|f|`` along ``omega`` at lattice site ``x`` (2D)."""
    a = np.abs(f)
    best = -1.0
    for m in radii:
        s = sum(bilinear(a, (x[0] - j * omega[0], x[1] - j * omega[1])) for j in range(-m, m + 1))
        best = max(best, s / (2 * m + 1))
    return best

"""Frequency-side symbols: cones, polygons, sectors, half-spaces, directional
Hilbert transforms and smooth Littlewood-Paley rectangles.

Every symbol is a callable taking integer frequency vectors of shape
``(..., d)`` and returning values of shape ``(...)``. Characteristic symbols
use closed inequalities throughout.
"""

import math

import numpy as np

from . import spectral_grid as grid
from .directions import polygon_halfplanes, sector_indices
from .validation import check_direction, check_field, check_lambda


class Symbol:
    kind = "symbol"

    def __call__(self, xi):
        raise NotImplementedError

    def __mul__(self, other):
        return ProductSymbol([self, other])

    def __add__(self, other):
        return SumSymbol([self, other])

    def __repr__(self):
        return f"{type(self).__name__}({self.describe()})"

    def describe(self):
        return self.kind


class ConstantSymbol(Symbol):
    kind = "constant"

    def __init__(self, value=1.0):
        self.value = value

    def __call__(self, xi):
        xi = np.asarray(xi)
        return np.full(xi.shape[:-1], self.value, dtype=complex)

    def describe(self):
        return f"constant={self.value}"


class ProductSymbol(Symbol):
    kind = "product"

    def __init__(self, factors):
        self.factors = list(factors)

    def __call__(self, xi):
        out = np.ones(np.asarray(xi).shape[:-1], dtype=complex)
        for s in self.factors:
            out = out * s(xi)
        return out

    def describe(self):
        return " * ".join(s.describe() for s in self.factors)


class SumSymbol(Symbol):
    kind = "sum"

    def __init__(self, terms):
        self.terms = list(terms)

    def __call__(self, xi):
        out = np.zeros(np.asarray(xi).shape[:-1], dtype=complex)
        for s in self.terms:
            out = out + s(xi)
        return out

    def describe(self):
        return " + ".join(s.describe() for s in self.terms)


class ConeSymbol(Symbol):
    """Indicator of ``{xi : (xi1, xi2) / |xi3| in aperture * P}``, zero on ``xi3 = 0``."""

    kind = "cone"

    def __init__(self, dirs, aperture=1.0):
        if dirs.dim != 2:
            raise ValueError("cone symbols are built from planar direction sets")
        if aperture <= 0:
            raise ValueError("aperture must be positive")
        self.dirs = dirs
        self.aperture = float(aperture)
        self._planes = polygon_halfplanes(dirs)

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-1] != 3:
            raise ValueError("cone symbols act on 3D frequencies")
        h = np.abs(xi[..., 2])
        off = h != 0
        pts = np.zeros(xi.shape[:-1] + (2,))
        pts[off] = xi[off][:, :2] / h[off][:, None]
        inside = self._planes.contains(pts, self.aperture) & off
        return inside.astype(complex)

    def describe(self):
        return f"cone(|dirs|={len(self.dirs)}, aperture={self.aperture})"


class PolygonSymbol(Symbol):
    """Indicator of the dilated polygon ``{xi : w . xi <= rho for all w}``."""

    kind = "polygon"

    def __init__(self, dirs, rho):
        if dirs.dim != 2:
            raise ValueError("polygon symbols are built from planar direction sets")
        if not rho > 0:
            raise ValueError(f"dilation rho must be positive, got {rho!r}")
        self.dirs = dirs
        self.rho = float(rho)
        self._planes = polygon_halfplanes(dirs)

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-1] != 2:
            raise ValueError("polygon symbols act on 2D frequencies")
        return self._planes.contains(xi, self.rho).astype(complex)

    def describe(self):
        return f"polygon(|dirs|={len(self.dirs)}, rho={self.rho})"


class SectorSymbol(Symbol):
    """Indicator of the angular sector ``A_w`` of member ``index``; reads only ``(xi1, xi2)``."""

    kind = "sector"

    def __init__(self, dirs, index):
        if not 0 <= index < len(dirs):
            raise ValueError(f"sector index {index} out of range for {len(dirs)} directions")
        self.dirs = dirs
        self.index = int(index)

    def __call__(self, xi):
        xi = np.asarray(xi)
        if xi.shape[-1] < 2:
            raise ValueError("sector symbols need at least two frequency components")
        return (sector_indices(self.dirs, xi[..., 0], xi[..., 1]) == self.index).astype(complex)

    def describe(self):
        return f"sector({self.index})"


class HalfspaceSymbol(Symbol):
    """Indicator of ``w . xi <= 0``."""

    kind = "halfspace"

    def __init__(self, omega):
        self.omega = check_direction(omega)

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        return (xi @ self.omega <= 0).astype(complex)

    def describe(self):
        return "halfspace(" + ",".join(f"{c:.6g}" for c in self.omega) + ")"


class HilbertSymbol(Symbol):
    """``-i sign(w . xi)``, the multiplier of the directional Hilbert transform."""

    kind = "hilbert"

    def __init__(self, omega):
        self.omega = check_direction(omega)

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        return -1j * np.sign(xi @ self.omega)

    def describe(self):
        return "hilbert(" + ",".join(f"{c:.6g}" for c in self.omega) + ")"


def _bump(s):
    out = np.zeros_like(s)
    inside = np.abs(s) < 1
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


class PhiProfile:
    """Even profile with ``sum_i phi(lam**(i/8) t)**2 == 1`` for ``t != 0``.

    Built as ``phi = psi / sqrt(sum_k psi(. - k)**2)`` in the logarithmic
    variable ``s = log|t| / log(lam**(-1/8))``, with ``psi`` a smooth bump on
    ``(-1, 1)``; so ``phi`` vanishes outside ``lam**(1/8) <= |t| <= lam**(-1/8)``
    and at most two dilates overlap at any ``t``.
    """

    def __init__(self, lam):
        self.lam = check_lambda(lam)
        self._log_step = -math.log(self.lam) / 8.0

    def log_position(self, t):
        return np.log(np.abs(t)) / self._log_step

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        nz = t != 0
        s = self.log_position(t[nz])
        fl = np.floor(s)
        norm = _bump(s - fl) ** 2 + _bump(s - fl - 1.0) ** 2
        out[nz] = _bump(s) / np.sqrt(norm)
        return out

    def dilate(self, i):
        return self.lam ** (i / 8.0)

    def active_indices(self, n):
        """Scales ``i`` whose dilate ``phi(lam**(i/8) .)`` is nonzero somewhere on ``1..n/2``."""
        m = np.arange(1, n // 2 + 1, dtype=float)
        s = self.log_position(m)
        lo = int(math.floor(s.min())) - 1
        hi = int(math.ceil(s.max())) + 1
        return [i for i in range(lo, hi + 1) if np.any(self(self.dilate(i) * m) != 0)]


def build_phi(lam):
    return PhiProfile(lam)


class LPSymbol(Symbol):
    """``phi(lam**(i/8) xi1) * phi(lam**(j/8) xi2)``."""

    kind = "lp"

    def __init__(self, i, j, phi):
        self.i, self.j, self.phi = int(i), int(j), phi

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        a = self.phi(self.phi.dilate(self.i) * xi[..., 0])
        b = self.phi(self.phi.dilate(self.j) * xi[..., 1])
        return (a * b).astype(complex)

    def describe(self):
        return f"lp({self.i},{self.j},lambda={self.phi.lam:.6g})"


def cone_symbol(dirs, aperture=1.0):
    return ConeSymbol(dirs, aperture)


def polygon_symbol(dirs, rho):
    return PolygonSymbol(dirs, rho)


def sector_symbol(dirs, index):
    return SectorSymbol(dirs, index)


def halfspace_symbol(omega):
    return HalfspaceSymbol(omega)


def hilbert_symbol(omega):
    return HilbertSymbol(omega)


def lp_symbol(i, j, phi):
    return LPSymbol(i, j, phi)


def lp_projection(field, i, j, phi):
    return grid.apply_symbol(field, LPSymbol(i, j, phi))


def angular_decompose(dirs, field):
    """``[S_w f for w in dirs]``; axis modes ``xi1 = xi2 = 0`` land in no sector."""
    f = check_field(field)
    if f.ndim < 2:
        raise ValueError("angular decomposition needs a 2D or 3D field")
    xi = grid.frequencies(f.shape[0], f.ndim)
    idx = sector_indices(dirs, xi[..., 0], xi[..., 1])
    F = grid.forward(f)
    return [grid.inverse(np.where(idx == k, F, 0)) for k in range(len(dirs))]


def axis_part(field):
    """The component of ``field`` carried by frequencies with ``xi1 = xi2 = 0``."""
    f = check_field(field)
    xi = grid.frequencies(f.shape[0], f.ndim)
    on_axis = (xi[..., 0] == 0) & (xi[..., 1] == 0)
    return grid.inverse(np.where(on_axis, grid.forward(f), 0))


def lifted_halfspace_pair(dirs, index, sign):
    """``H_{(w + sign e3)/sqrt2} H_{(w_prev + sign e3)/sqrt2}`` for member ``index``."""
    s = 1.0 / math.sqrt(2.0)
    w = dirs.members[index]
    wp = dirs.prev(index)
    a = np.array([w[0] * s, w[1] * s, sign * s])
    b = np.array([wp[0] * s, wp[1] * s, sign * s])
    return HalfspaceSymbol(a) * HalfspaceSymbol(b)


def sector_cone_decomposition(dirs, index):
    """Symbol of the four half-space splitting of ``S_w T_Omega`` for member ``index``."""
    sector = SectorSymbol(dirs, index)
    return lifted_halfspace_pair(dirs, index, -1.0) * sector + lifted_halfspace_pair(dirs, index, 1.0) * sector

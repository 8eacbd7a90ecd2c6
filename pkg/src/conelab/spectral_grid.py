"""Periodic unit-torus grids and their integer frequency lattices.

Fields are plain complex ndarrays with ``d`` equal power-of-two axes. The
transform pair uses Fourier-coefficient normalisation,

    F(xi) = h^d sum_x f(x) exp(-2 pi i xi.x),     f(x) = sum_xi F(xi) exp(2 pi i xi.x),

with ``h = 1/n``, which is unitary from the Riemann-sum ``L^2`` of the torus
onto ``l^2`` of the lattice, so Plancherel reads ``lp_norm(f, 2) ==
||F||_2`` and a pure mode ``exp(2 pi i xi0.x)`` has coefficient exactly 1.
Spectra are stored in numpy FFT order; :func:`frequencies` gives the integer
frequency of every slot, in ``[-n/2, n/2)`` with the Nyquist row at ``-n/2``.
"""

from functools import lru_cache

import numpy as np

from .validation import GridShapeError, check_field, check_weight


@lru_cache(maxsize=32)
def _freq_grid(n, d):
    k = np.fft.fftfreq(n, 1.0 / n).astype(np.int64)
    grids = np.meshgrid(*([k] * d), indexing="ij")
    out = np.stack(grids, axis=-1)
    out.setflags(write=False)
    return out


def frequencies(n, d):
    """Integer frequency vectors, shape ``(n,)*d + (d,)``, matching spectrum slots."""
    return _freq_grid(int(n), int(d))


def positions(n, d):
    """Lattice sites ``x = k h`` as an array of shape ``(n,)*d + (d,)``."""
    k = np.arange(n) / n
    return np.stack(np.meshgrid(*([k] * d), indexing="ij"), axis=-1)


def forward(field):
    f = check_field(field)
    return np.fft.fftn(f) / f.size


def inverse(spectrum):
    F = check_field(spectrum)
    return np.fft.ifftn(F) * F.size


def symbol_values(symbol, shape):
    """Evaluate a symbol on every lattice frequency of a grid of ``shape``."""
    n, d = shape[0], len(shape)
    return np.asarray(symbol(frequencies(n, d)))


def apply_symbol(field, symbol):
    """``inverse(symbol * forward(field))``."""
    f = check_field(field)
    return inverse(symbol_values(symbol, f.shape) * forward(f))


def single_mode(n, xi0):
    """The pure mode ``exp(2 pi i xi0 . x)`` on an ``n``-grid."""
    xi0 = np.asarray(xi0, dtype=float)
    x = positions(n, len(xi0))
    return np.exp(2j * np.pi * (x @ xi0))


def lp_norm(field, p):
    p = float(p)
    if p < 1:
        raise ValueError("p must be >= 1")
    f = np.abs(check_field(field))
    # scale by the peak so |f|**p neither underflows into subnormals nor overflows
    top = f.max()
    if top == 0:
        return 0.0
    return float(top * (np.sum((f / top) ** p) / f.size) ** (1.0 / p))


def weighted_energy(field, weight):
    f = check_field(field)
    w = check_weight(weight, f.shape)
    return float(np.sum(np.abs(f) ** 2 * w) / f.size)


def sup_norm(field):
    return float(np.max(np.abs(check_field(field))))


def reduce(field, kind, **params):
    """Dispatch on ``kind`` in ``{"lp_norm", "weighted_energy", "sup"}``."""
    if kind == "lp_norm":
        return lp_norm(field, params.get("p", 2.0))
    if kind == "weighted_energy":
        if "w" not in params:
            raise GridShapeError("weighted_energy needs a weight w")
        return weighted_energy(field, params["w"])
    if kind == "sup":
        return sup_norm(field)
    raise ValueError(f"unknown reduction {kind!r}")

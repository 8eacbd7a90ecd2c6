"""Input checks shared by the operators and the estimator wrappers."""

import numpy as np


class GridShapeError(ValueError):
    pass


def check_lambda(lam):
    lam = float(lam)
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0, 1), got {lam!r}")
    return lam


def check_grid_size(n):
    n = int(n)
    if n < 2 or n & (n - 1):
        raise GridShapeError(f"grid size must be a power of two >= 2, got {n}")
    return n


def check_field(X, *, dtype=complex, dims=None):
    """Validate a periodic grid field: 1 to 3 equal power-of-two axes, finite values."""
    X = np.asarray(X)
    if X.ndim not in (1, 2, 3):
        raise GridShapeError(f"fields are 1-, 2- or 3-dimensional, got ndim={X.ndim}")
    if dims is not None and X.ndim != dims:
        raise GridShapeError(f"expected a {dims}-dimensional field, got ndim={X.ndim}")
    if len(set(X.shape)) != 1:
        raise GridShapeError(f"all axes must have equal length, got shape {X.shape}")
    check_grid_size(X.shape[0])
    X = X.astype(dtype, copy=False)
    if not np.all(np.isfinite(X)):
        raise ValueError("field contains non-finite values")
    return X


def check_weight(w, shape=None):
    w = check_field(w, dtype=float)
    if shape is not None and w.shape != tuple(shape):
        raise GridShapeError(f"weight shape {w.shape} does not match field shape {tuple(shape)}")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    return w


def check_direction(omega, d=None):
    omega = np.asarray(omega, dtype=float).reshape(-1)
    if d is not None and omega.size != d:
        raise ValueError(f"direction has {omega.size} components, expected {d}")
    if abs(np.linalg.norm(omega) - 1.0) > 1e-12:
        raise ValueError(f"direction {omega} is not a unit vector")
    return omega

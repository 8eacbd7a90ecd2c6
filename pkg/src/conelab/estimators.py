"""scikit-learn style wrappers: ``fit`` records the grid and tabulates the
symbol, ``transform`` applies the operator to a field of that grid."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import spectral_grid as grid
from .directions import sector_indices
from .maximal import run_spec
from .multipliers import (
    ConeSymbol,
    HalfspaceSymbol,
    HilbertSymbol,
    LPSymbol,
    PolygonSymbol,
    build_phi,
)
from .validation import GridShapeError, check_field


class FourierMultiplier(TransformerMixin, BaseEstimator):
    """``f -> inverse(symbol * forward(f))`` for an arbitrary symbol."""

    def __init__(self, symbol=None):
        self.symbol = symbol

    def _make_symbol(self, shape):
        if self.symbol is None:
            raise ValueError("no symbol given")
        return self.symbol

    def fit(self, X, y=None):
        X = check_field(X)
        self.shape_ = X.shape
        self.symbol_ = self._make_symbol(X.shape)
        self.values_ = grid.symbol_values(self.symbol_, X.shape)
        return self

    def _check_shape(self, X):
        check_is_fitted(self, "values_")
        X = check_field(X)
        if X.shape != self.shape_:
            raise GridShapeError(f"fitted on shape {self.shape_}, got {X.shape}")
        return X

    def transform(self, X):
        X = self._check_shape(X)
        return grid.inverse(self.values_ * grid.forward(X))


class ConeMultiplier(FourierMultiplier):
    def __init__(self, directions=None, aperture=1.0):
        self.directions = directions
        self.aperture = aperture

    def _make_symbol(self, shape):
        if len(shape) != 3:
            raise GridShapeError("cone multipliers act on 3D fields")
        return ConeSymbol(self.directions, self.aperture)


class PolygonMultiplier(FourierMultiplier):
    """Dilated polygon ``rho * P``; ``rho=None`` becomes ``n / 4`` at fit time."""

    def __init__(self, directions=None, rho=None):
        self.directions = directions
        self.rho = rho

    def _make_symbol(self, shape):
        if len(shape) != 2:
            raise GridShapeError("polygon multipliers act on 2D fields")
        self.rho_ = shape[0] / 4 if self.rho is None else float(self.rho)
        return PolygonSymbol(self.directions, self.rho_)


class HalfspaceProjection(FourierMultiplier):
    def __init__(self, omega=None):
        self.omega = omega

    def _make_symbol(self, shape):
        return HalfspaceSymbol(np.asarray(self.omega, dtype=float))


class DirectionalHilbert(FourierMultiplier):
    def __init__(self, omega=None):
        self.omega = omega

    def _make_symbol(self, shape):
        return HilbertSymbol(np.asarray(self.omega, dtype=float))


class LittlewoodPaleyProjection(FourierMultiplier):
    def __init__(self, i=0, j=0, lam=0.5):
        self.i = i
        self.j = j
        self.lam = lam

    def _make_symbol(self, shape):
        if len(shape) < 2:
            raise GridShapeError("rectangular projections need at least two axes")
        return LPSymbol(self.i, self.j, build_phi(self.lam))


class AngularDecomposition(TransformerMixin, BaseEstimator):
    """Split a field into its sector pieces ``S_w f``, stacked on a new axis 0."""

    def __init__(self, directions=None):
        self.directions = directions

    def fit(self, X, y=None):
        X = check_field(X)
        if X.ndim < 2:
            raise GridShapeError("angular decomposition needs a 2D or 3D field")
        self.shape_ = X.shape
        xi = grid.frequencies(X.shape[0], X.ndim)
        self.labels_ = sector_indices(self.directions, xi[..., 0], xi[..., 1])
        return self

    def transform(self, X):
        check_is_fitted(self, "labels_")
        X = check_field(X)
        if X.shape != self.shape_:
            raise GridShapeError(f"fitted on shape {self.shape_}, got {X.shape}")
        F = grid.forward(X)
        return np.stack([grid.inverse(np.where(self.labels_ == k, F, 0)) for k in range(len(self.directions))])

    def inverse_transform(self, Xt):
        """Sum of the pieces; equals the input minus its axis modes."""
        return np.sum(np.asarray(Xt), axis=0)


class MaximalOperator(TransformerMixin, BaseEstimator):
    """Apply a :class:`~conelab.maximal.MaximalSpec` to nonnegative weights."""

    def __init__(self, spec=None):
        self.spec = spec

    def fit(self, X, y=None):
        self.shape_ = check_field(X, dtype=float).shape
        return self

    def transform(self, X):
        check_is_fitted(self, "shape_")
        return run_spec(X, self.spec)

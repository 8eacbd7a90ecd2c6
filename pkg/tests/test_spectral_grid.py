import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conelab import spectral_grid as grid
from conelab.multipliers import ConstantSymbol, HalfspaceSymbol, SectorSymbol
from conelab.directions import equispaced
from conelab.validation import GridShapeError
from conftest import random_field
from oracles import naive_dft_1d

finite = st.floats(-1e3, 1e3, allow_nan=False)


def complex_fields(n, d):
    return arrays(np.float64, (2,) + (n,) * d, elements=finite).map(lambda a: a[0] + 1j * a[1])


class TestTransforms:
    def test_constant_is_dc(self):
        F = grid.forward(np.ones((8, 8)))
        assert F[0, 0] == 1
        F[0, 0] = 0
        assert np.max(np.abs(F)) < 1e-15

    @pytest.mark.parametrize("xi0", [(3,), (-2, 5), (1, -4, 0)])
    def test_single_mode_unit_coefficient(self, xi0):
        n = 16
        F = grid.forward(grid.single_mode(n, xi0))
        idx = tuple(k % n for k in xi0)
        assert abs(F[idx] - 1) < 1e-12
        F[idx] = 0
        assert np.max(np.abs(F)) < 1e-12

    def test_matches_naive_dft(self, rng):
        f = random_field(rng, 8, 1)
        assert np.max(np.abs(grid.forward(f) - naive_dft_1d(f))) < 1e-12

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_roundtrip(self, rng, d):
        f = random_field(rng, 16, d)
        g = grid.inverse(grid.forward(f))
        assert np.max(np.abs(g - f)) <= 1e-10 * np.max(np.abs(f))

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_plancherel_100(self, rng, d):
        for _ in range(100):
            f = random_field(rng, 8, d)
            a = grid.lp_norm(f, 2)
            b = np.linalg.norm(grid.forward(f).ravel())
            assert abs(a - b) <= 1e-12 * b

    @given(complex_fields(8, 2))
    def test_plancherel_property(self, f):
        F = np.abs(grid.forward(f))
        top = F.max()
        # np.linalg.norm squares complex entries unscaled and loses digits to underflow
        b = top * np.linalg.norm(F / top) if top > 0 else 0.0
        assert abs(grid.lp_norm(f, 2) - b) <= 1e-12 * max(b, 1e-300)

    def test_norm_tiny_and_huge(self):
        for c in (2.7e-161, 1e-300, 1e150):
            f = np.full((8, 8), c * (1 + 1j))
            assert grid.lp_norm(f, 2) == pytest.approx(c * np.sqrt(2), rel=1e-15)
            assert grid.lp_norm(f, 4) == pytest.approx(c * np.sqrt(2), rel=1e-15)

    @pytest.mark.parametrize("shape", [(6,), (8, 4), (3, 3, 3), (2, 2, 2, 2)])
    def test_rejects_bad_shapes(self, shape):
        with pytest.raises(GridShapeError):
            grid.forward(np.zeros(shape))

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            grid.forward(np.array([1.0, np.nan]))

    def test_frequency_convention(self):
        xi = grid.frequencies(8, 1)[..., 0]
        assert list(xi) == [0, 1, 2, 3, -4, -3, -2, -1]
        assert xi.min() == -4 and xi.max() == 3


class TestApplySymbol:
    def test_identity(self, rng):
        f = random_field(rng, 16, 2)
        assert np.max(np.abs(grid.apply_symbol(f, ConstantSymbol(1.0)) - f)) < 1e-10

    def test_zero(self, rng):
        f = random_field(rng, 16, 2)
        assert np.all(grid.apply_symbol(f, ConstantSymbol(0.0)) == 0)

    def test_halfspace_kills_mode(self):
        f = grid.single_mode(16, (3, 1))
        out = grid.apply_symbol(f, HalfspaceSymbol([1.0, 0.0]))
        assert np.max(np.abs(out)) < 1e-12

    @given(a=finite, b=finite)
    def test_linearity(self, a, b):
        rng = np.random.default_rng(1)
        f, g = random_field(rng, 16, 2), random_field(rng, 16, 2)
        s = SectorSymbol(equispaced(5), 2)
        lhs = grid.apply_symbol(a * f + b * g, s)
        rhs = a * grid.apply_symbol(f, s) + b * grid.apply_symbol(g, s)
        scale = max(1.0, abs(a), abs(b)) * max(np.max(np.abs(f)), np.max(np.abs(g)))
        assert np.max(np.abs(lhs - rhs)) <= 1e-10 * scale

    def test_composition(self, rng):
        f = random_field(rng, 16, 3)
        s1 = SectorSymbol(equispaced(3), 0)
        s2 = HalfspaceSymbol([0.6, 0.0, 0.8])
        lhs = grid.apply_symbol(grid.apply_symbol(f, s1), s2)
        rhs = grid.apply_symbol(f, s1 * s2)
        assert np.max(np.abs(lhs - rhs)) < 1e-10


class TestReduce:
    @pytest.mark.parametrize("p", [1, 2, 3.5, 8])
    def test_constant_norm(self, p):
        assert grid.reduce(np.ones((8, 8)), "lp_norm", p=p) == pytest.approx(1.0, abs=1e-15)

    def test_weighted_energy_w1(self, rng):
        f = random_field(rng, 16, 2)
        e = grid.reduce(f, "weighted_energy", w=np.ones((16, 16)))
        assert abs(e - grid.lp_norm(f, 2) ** 2) <= 1e-12 * e

    def test_single_cell(self):
        assert grid.lp_norm(np.array([1.0, 0, 0, 0]), 2) == 0.5

    def test_sup(self):
        assert grid.reduce(np.array([1.0, -3.0, 2j, 0]), "sup") == 3.0

    def test_errors(self):
        with pytest.raises(GridShapeError):
            grid.reduce(np.ones(8), "weighted_energy")
        with pytest.raises(GridShapeError):
            grid.weighted_energy(np.ones(8), np.ones(4))
        with pytest.raises(ValueError):
            grid.weighted_energy(np.ones(4), -np.ones(4))
        with pytest.raises(ValueError):
            grid.lp_norm(np.ones(4), 0.5)
        with pytest.raises(ValueError):
            grid.reduce(np.ones(4), "median")

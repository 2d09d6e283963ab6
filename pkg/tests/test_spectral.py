import numpy as np
import pytest

from src.models.errors import (
    DimensionMismatchError,
    FrequencyOutOfRangeError,
    SizeMismatchError,
)
from src.models.grid import ScalarField, SpectralGrid
from src.services import spectral_service as spectral


@pytest.fixture
def box():
    """16 x 16 nodes on [0, 1)^2."""
    return SpectralGrid(sizes=(16, 16), lengths=(1.0, 1.0))


class TestGrid:
    def test_geometry(self, unit_grid):
        assert unit_grid.dim == 2
        assert unit_grid.spacing == (1.0 / 32, 1.0 / 32)
        assert unit_grid.n_nodes == 1024
        assert unit_grid.cell_volume == pytest.approx(1.0 / 1024)
        assert unit_grid.origin == (-0.5, -0.5)

    def test_node_coordinates(self, unit_grid):
        x, y = unit_grid.node_coordinates()
        assert x[3, 0] == pytest.approx(-0.5 + 3.0 / 32)
        assert y[0, 5] == pytest.approx(-0.5 + 5.0 / 32)
        assert unit_grid.points().shape == (32, 32, 2)

    def test_frequencies_cover_the_box(self):
        k = SpectralGrid(sizes=(8, 8), lengths=(1.0, 1.0)).frequencies(0)
        assert sorted(k.tolist()) == [-4, -3, -2, -1, 0, 1, 2, 3]

    def test_dimension_must_be_two_or_three(self):
        with pytest.raises(DimensionMismatchError):
            SpectralGrid(sizes=(8,), lengths=(1.0,))

    def test_scalar_field_checks_shape(self, box):
        with pytest.raises(SizeMismatchError):
            ScalarField(grid=box, values=np.zeros((4, 4)))
        with pytest.raises(SizeMismatchError):
            ScalarField.from_flat(box, np.zeros(10))


class TestLaplacianSymbol:
    def test_zero_frequency(self, box):
        assert spectral.laplacian_symbol(box, (0, 0)) == 0.0

    def test_single_modes(self, box):
        assert spectral.laplacian_symbol(box, (1, 0)) == pytest.approx(-4 * np.pi ** 2)
        assert spectral.laplacian_symbol(box, (1, 1)) == pytest.approx(-8 * np.pi ** 2)

    def test_box_lengths(self):
        grid = SpectralGrid(sizes=(16, 16), lengths=(2.0, 1.0))
        assert spectral.laplacian_symbol(grid, (2, 0)) == pytest.approx(-4 * np.pi ** 2)

    @pytest.mark.parametrize('k', [(8, 0), (-9, 0), (0, 0, 0), (0.5, 0)])
    def test_out_of_range(self, box, k):
        with pytest.raises(FrequencyOutOfRangeError):
            spectral.laplacian_symbol(box, k)


class TestTransform:
    def test_constant_field(self, box):
        coeffs = spectral.transform(ScalarField.constant(box, 3.0))
        assert coeffs[0, 0] == pytest.approx(3.0)
        coeffs[0, 0] = 0.0
        assert np.max(np.abs(coeffs)) < 1e-14

    def test_cosine_has_two_conjugate_modes(self, box):
        x, _ = box.node_coordinates()
        coeffs = spectral.transform(ScalarField(grid=box, values=np.cos(2 * np.pi * x)))
        assert coeffs[1, 0] == pytest.approx(0.5)
        assert coeffs[-1, 0] == pytest.approx(0.5)
        coeffs[1, 0] = coeffs[-1, 0] = 0.0
        assert np.max(np.abs(coeffs)) < 1e-14

    def test_round_trip(self, box):
        values = np.random.default_rng(3).normal(size=box.sizes)
        field = ScalarField(grid=box, values=values)
        back = spectral.inverse_transform(spectral.transform(field), box)
        assert back.max_norm(field) < 1e-12

    def test_inverse_checks_shape(self, box):
        with pytest.raises(SizeMismatchError):
            spectral.inverse_transform(np.zeros((8, 8), dtype=complex), box)


class TestHelmholtz:
    def test_constant_is_unchanged(self, box):
        field = ScalarField.constant(box, 1.0)
        result = spectral.apply_helmholtz_inverse(field, 0.7)
        np.testing.assert_allclose(result.values, 1.0, atol=1e-14)

    def test_single_mode(self, box):
        x, _ = box.node_coordinates()
        field = ScalarField(grid=box, values=np.cos(2 * np.pi * x))
        result = spectral.apply_helmholtz_inverse(field, 1.0)
        np.testing.assert_allclose(result.values, np.cos(2 * np.pi * x) / (1 + 4 * np.pi ** 2),
                                   atol=1e-14)

    def test_shift(self, box):
        field = ScalarField.constant(box, 2.0)
        result = spectral.apply_helmholtz_inverse(field, 0.5, c=2.0)
        np.testing.assert_allclose(result.values, 1.0, atol=1e-14)

    def test_zero_weight_is_identity(self, box):
        values = np.random.default_rng(5).normal(size=box.sizes)
        result = spectral.apply_helmholtz_inverse(ScalarField(grid=box, values=values), 0.0)
        np.testing.assert_array_equal(result.values, values)

    def test_is_a_max_norm_contraction(self, box):
        values = np.random.default_rng(6).normal(size=box.sizes)
        result = spectral.apply_helmholtz_inverse(ScalarField(grid=box, values=values), 0.01)
        assert np.max(np.abs(result.values)) <= np.max(np.abs(values)) + 1e-14

    def test_negative_weight(self, box):
        with pytest.raises(ValueError):
            spectral.apply_helmholtz_inverse(ScalarField.constant(box, 1.0), -1.0)


def test_spectral_gradient_of_a_sine(box):
    x, y = box.node_coordinates()
    values = np.sin(2 * np.pi * x) * np.cos(4 * np.pi * y)
    dx, dy = spectral.spectral_gradient(values, box)
    np.testing.assert_allclose(dx, 2 * np.pi * np.cos(2 * np.pi * x) * np.cos(4 * np.pi * y),
                               atol=1e-11)
    np.testing.assert_allclose(dy, -4 * np.pi * np.sin(2 * np.pi * x) * np.sin(4 * np.pi * y),
                               atol=1e-11)

import imageio.v3 as iio
import numpy as np
import pytest

from src.models.errors import SizeMismatchError
from src.models.time_series import DiagnosticRow, TimeSeries
from src.services import output_service


class TestRawFields:
    def test_write_and_read_with_sidecar(self, tmp_path, unit_grid):
        values = np.random.default_rng(7).uniform(size=unit_grid.sizes)
        path = str(tmp_path / 'fields_000010_2.raw')
        output_service.write_raw_field(
            path, values, output_service.snapshot_sidecar(unit_grid, 0.125, 10, 2))

        assert (tmp_path / 'fields_000010_2.raw').stat().st_size == 8 * unit_grid.n_nodes
        back, meta = output_service.read_raw_field(path)
        np.testing.assert_array_equal(back, values)
        assert meta['time'] == 0.125
        assert meta['step'] == 10
        assert meta['phase'] == 2
        assert meta['dtype'] == 'float64-le'

    def test_little_endian_row_major(self, tmp_path):
        values = np.arange(6, dtype=float).reshape(2, 3)
        path = str(tmp_path / 'f.raw')
        output_service.write_raw_field(path, values, {'sizes': [2, 3]})
        flat = np.frombuffer((tmp_path / 'f.raw').read_bytes(), dtype='<f8')
        np.testing.assert_array_equal(flat, [0, 1, 2, 3, 4, 5])

    def test_truncated_file(self, tmp_path):
        path = str(tmp_path / 'f.raw')
        output_service.write_raw_field(path, np.zeros((4, 4)), {'sizes': [4, 4]})
        (tmp_path / 'f.raw').write_bytes(b'\x00' * 8)
        with pytest.raises(SizeMismatchError):
            output_service.read_raw_field(path)

    def test_sidecar_path(self):
        assert output_service.sidecar_path('out/fields_000010_1.raw') == 'out/fields_000010_1.json'


class TestImages:
    def test_pgm_header_and_pixels(self, tmp_path):
        image = np.array([[0, 128, 255], [1, 2, 3]], dtype=np.uint8)
        path = str(tmp_path / 'img.pgm')
        output_service.write_image(path, image)
        data = (tmp_path / 'img.pgm').read_bytes()
        assert data.startswith(b'P5')
        assert data.endswith(image.tobytes())
        np.testing.assert_array_equal(output_service.read_image(path), image)

    def test_comments_are_skipped(self, tmp_path):
        path = tmp_path / 'img.pgm'
        path.write_bytes(b'P5\n# made by hand\n2 1\n255\n' + bytes([7, 9]))
        np.testing.assert_array_equal(output_service.read_image(str(path)), [[7, 9]])

    def test_png_is_read_too(self, tmp_path):
        image = np.arange(12, dtype=np.uint8).reshape(3, 4)
        path = str(tmp_path / 'img.png')
        output_service.write_image(path, image)
        np.testing.assert_array_equal(output_service.read_image(path), image)

    def test_color_images_are_rejected(self, tmp_path):
        path = str(tmp_path / 'rgb.png')
        iio.imwrite(path, np.zeros((2, 2, 3), dtype=np.uint8))
        with pytest.raises(ValueError, match='single-channel'):
            output_service.read_image(path)

    def test_only_2d_images(self, tmp_path):
        with pytest.raises(ValueError):
            output_service.write_image(str(tmp_path / 'img.pgm'), np.zeros((2, 2, 2)))


class TestComposite:
    def test_pure_phases_map_to_the_extremes(self):
        fields = np.zeros((3, 1, 3))
        fields[0, 0, 0] = fields[1, 0, 1] = fields[2, 0, 2] = 1.0
        image = output_service.composite_image(fields, [0.0, 1.0, 0.5])
        np.testing.assert_array_equal(image, [[0, 255, 128]])

    def test_equal_weights_do_not_divide_by_zero(self):
        image = output_service.composite_image(np.ones((2, 2, 2)) * 0.5, [1.0, 1.0])
        assert image.dtype == np.uint8
        assert np.all(image == 255)

    def test_range_is_anchored_at_zero(self):
        image = output_service.composite_image(np.full((2, 1, 2), 0.25), [2.0, 2.0])
        np.testing.assert_array_equal(image, [[128, 128]])
        image = output_service.composite_image(np.full((2, 1, 1), 0.5), [-1.0, 1.0])
        np.testing.assert_array_equal(image, [[128]])


class TestTimeSeries:
    def test_csv_layout(self, tmp_path):
        series = TimeSeries(n_phases=2)
        series.append(DiagnosticRow(0.0, (0.2, 0.3), (0.1, 0.9), 0.0, 0.5))
        series.append(DiagnosticRow(0.1, (0.1, 0.3), (0.05, 0.95), 1e-16, 0.25))
        path = str(tmp_path / 'diagnostics.csv')
        output_service.write_time_series(path, series)

        lines = (tmp_path / 'diagnostics.csv').read_text().splitlines()
        assert lines[0] == 'time,R_1,R_2,mass_1,mass_2,constraint_err,energy'
        assert lines[2] == '0.1,0.1,0.3,0.05,0.95,1e-16,0.25'

        columns = output_service.read_time_series_columns(path)
        np.testing.assert_array_equal(columns['time'], [0.0, 0.1])
        np.testing.assert_array_equal(columns['energy'], [0.5, 0.25])


def test_iter_files_is_sorted(tmp_path):
    for name in ['fields_000002_1.raw', 'fields_000001_1.raw', 'composite_000000.pgm']:
        (tmp_path / name).write_bytes(b'')
    assert list(output_service.iter_files(str(tmp_path), 'fields_')) == [
        'fields_000001_1.raw', 'fields_000002_1.raw']

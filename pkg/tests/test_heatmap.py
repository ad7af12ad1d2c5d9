import numpy as np
import pytest
from PIL import Image

from src.graphon.hypercube import build
from src.graphon.kernels import constant, half_graphon
from src.tools.heatmap import part_boundaries, render_heatmap, write_heatmap


def test_render_intensities():
    image = render_heatmap(constant(1), 64)
    assert image.dtype == np.uint8 and image.shape == (64, 64)
    assert image.max() == 0
    assert render_heatmap(constant(0), 64).min() == 255


def test_half_graphon_raster_is_triangular():
    image = render_heatmap(half_graphon(), 64)
    assert image[0, 0] == 255
    assert image[63, 63] == 0
    np.testing.assert_array_equal(image, image.T)


def test_resolution_floor():
    with pytest.raises(ValueError):
        render_heatmap(constant(0.5), 32)


def test_part_boundaries_of_hypercube():
    lines = part_boundaries(build(), 270)
    rows = [line.split() for line in lines if not line.startswith("#")]
    assert [r[0] for r in rows][:2] == ["A0", "A1"]
    assert len(rows) == 14
    assert float(rows[0][1]) == 0.0 and int(rows[0][3]) == 0
    assert int(rows[1][3]) == 10


@pytest.mark.parametrize("suffix", [".png", ".pgm"])
def test_write_heatmap(tmp_path, suffix):
    path = str(tmp_path / f"w{suffix}")
    sidecar = write_heatmap(half_graphon(), path, 64)
    assert sidecar == path + ".parts.txt"
    with Image.open(path) as image:
        assert image.size == (64, 64)
        assert image.mode == "L"
    with open(sidecar) as handle:
        assert "# no part layout" in handle.read()


def test_write_heatmap_with_preview(tmp_path):
    path = str(tmp_path / "w.png")
    preview = str(tmp_path / "preview.png")
    write_heatmap(build(), path, 64, preview=preview)
    with Image.open(preview) as image:
        assert image.size[0] > 64


def test_unknown_format(tmp_path):
    with pytest.raises(ValueError):
        write_heatmap(constant(0.5), str(tmp_path / "w.bmp"), 64)

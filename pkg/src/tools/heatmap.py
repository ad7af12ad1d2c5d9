"""
Grayscale rasters of graphons.
"""
import io
import logging
import os
from typing import List, Optional

import numpy as np
from PIL import Image

from src.geometry.dyadic import snap
from src.graphon.core import Graphon
from src.tools.file_utils import write_bytes, write_file

logger = logging.getLogger(__name__)

MIN_RESOLUTION = 64
ROWS_PER_CHUNK = 64
_FORMATS = {".png": "PNG", ".pgm": "PPM"}


def render_heatmap(graphon: Graphon, resolution: int) -> np.ndarray:
    """
    Sample W at pixel centres; row i is x = (i + 1/2) / resolution, column j is y.

    Args:
        graphon (Graphon): The graphon.
        resolution (int): Pixels per side, at least 64.

    Returns:
        np.ndarray: uint8 image with intensity 255 (1 - W), so W = 1 is black.
    """
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"heatmap resolution must be at least {MIN_RESOLUTION}")
    centres = snap((np.arange(resolution) + 0.5) / resolution)
    image = np.empty((resolution, resolution), dtype=np.uint8)
    for lo in range(0, resolution, ROWS_PER_CHUNK):
        rows = centres[lo:lo + ROWS_PER_CHUNK]
        xs, ys = np.meshgrid(rows, centres, indexing="ij")
        values = graphon.evaluate(xs.ravel(), ys.ravel()).reshape(rows.size, resolution)
        image[lo:lo + rows.size] = np.rint(255.0 * (1.0 - np.clip(values, 0.0, 1.0))).astype(np.uint8)
    return image


def part_boundaries(graphon: Graphon, resolution: int) -> List[str]:
    """Sidecar lines: one per part with its interval and the pixel index where it starts."""
    lines = [f"# graphon: {graphon.name}", f"# resolution: {resolution}"]
    if graphon.layout is None:
        lines.append("# no part layout")
        return lines
    lines.append("# part start end first_pixel")
    for name in graphon.layout.names:
        interval = graphon.layout.interval(name)
        first = int(np.ceil(interval.start * resolution - 0.5))
        lines.append(f"{name} {interval.start:.12g} {interval.end:.12g} {first}")
    return lines


def encode_image(image: np.ndarray, path: str) -> bytes:
    suffix = os.path.splitext(path)[1].lower()
    if suffix not in _FORMATS:
        raise ValueError(f"heatmaps are written as .png or .pgm, not '{suffix}'")
    buffer = io.BytesIO()
    Image.fromarray(image).save(buffer, format=_FORMATS[suffix])
    return buffer.getvalue()


def write_heatmap(graphon: Graphon, path: str, resolution: int, preview: Optional[str] = None) -> str:
    """
    Write the raster, its part-boundary sidecar (path + '.parts.txt') and optionally a preview figure.

    Returns:
        str: The sidecar path.
    """
    image = render_heatmap(graphon, resolution)
    write_bytes(path, encode_image(image, path))
    sidecar = path + ".parts.txt"
    write_file(sidecar, "\n".join(part_boundaries(graphon, resolution)) + "\n")
    if preview:
        save_preview(graphon, image, preview)
    logger.info("Wrote %dx%d heatmap of %s to %s", resolution, resolution, graphon.name, path)
    return sidecar


def save_preview(graphon: Graphon, image: np.ndarray, path: str) -> None:
    """Annotated matplotlib figure with the part boundaries drawn over the raster."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    ax.imshow(image, cmap="gray", vmin=0, vmax=255, extent=(0.0, 1.0, 1.0, 0.0))
    if graphon.layout is not None:
        for name, start in zip(graphon.layout.names, graphon.layout.starts):
            ax.axhline(start, color="tab:red", linewidth=0.4)
            ax.axvline(start, color="tab:red", linewidth=0.4)
            ax.text(-0.01, start + 0.5 * graphon.layout.measures[graphon.layout.index(name)], name,
                    ha="right", va="center", fontsize=5)
    ax.set_title(graphon.name, fontsize=9)
    ax.set_xlabel("y")
    ax.set_ylabel("x")
    buffer = io.BytesIO()
    fig.savefig(buffer, dpi=200, bbox_inches="tight", format=os.path.splitext(path)[1].lstrip(".") or "png")
    plt.close(fig)
    write_bytes(path, buffer.getvalue())

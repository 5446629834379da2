"""Parameter-plane rasters and the binary PPM writer.

A raster is a rectangular grid over a complex region; cell (i, j) has its
center at origin + (i + 1/2) s + (j + 1/2) s i, stored row-major with
j = 0 first (lowest imaginary part).  Slice rasters classify each pixel
center by the primitive-trace scan; point rasters mark cells hit by a
sample.  The PPM output is bit-exact P6 and independent of the number of
worker threads (rows are assembled positionally).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import IoFailure, ZeroResolution
from .kleinian import BQ_TOL, markov_third_trace

PASS, FAIL, ERROR = 0, 1, 2

DEFAULT_PALETTE = {
    PASS: (255, 255, 255),   # candidate region in white
    FAIL: (0, 0, 0),
    ERROR: (255, 0, 0),
}


@dataclass
class Raster:
    origin: complex
    size: float
    width: int
    height: int
    cells: np.ndarray                  # int8, row-major, length width*height
    scalar: np.ndarray | None = None   # optional per-cell witness data

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ZeroResolution(f"raster {self.width}x{self.height}")
        if self.size <= 0:
            raise ZeroResolution("pixel size must be positive")
        if len(self.cells) != self.width * self.height:
            raise ValueError("cell count does not match the grid")

    def center(self, i: int, j: int) -> complex:
        return self.origin + (i + 0.5) * self.size + (j + 0.5) * self.size * 1j

    def cell(self, i: int, j: int) -> int:
        return int(self.cells[j * self.width + i])

    def counts(self):
        return {
            "pass": int(np.sum(self.cells == PASS)),
            "fail": int(np.sum(self.cells == FAIL)),
            "error": int(np.sum(self.cells == ERROR)),
        }

    def text_grid(self) -> str:
        """Plain-text dump, one row per line, 0/1/2 per cell."""
        lines = []
        for j in range(self.height):
            row = self.cells[j * self.width:(j + 1) * self.width]
            lines.append("".join(str(int(v)) for v in row))
        return "\n".join(lines) + "\n"


def raster_slice(origin: complex, size: float, width: int, height: int,
                 fixed_y: complex, depth: int = 8, root: str = "minus",
                 threads: int = 1, tol: float = BQ_TOL) -> Raster:
    """Classify every pixel center x by the trace scan of (x, fixed_y).

    Pixels where the third trace cannot be built (zero traces, degenerate
    roots) are marked ERROR.
    """
    if width < 1 or height < 1:
        raise ZeroResolution(f"raster {width}x{height}")
    if size <= 0:
        raise ZeroResolution("pixel size must be positive")
    fixed_y = complex(fixed_y)

    def z_of(x):
        if x == 0 or fixed_y == 0:
            return complex(float("nan"), 0.0)
        try:
            return markov_third_trace(x, fixed_y, root)
        except Exception:
            return complex(float("nan"), 0.0)

    def run_row(j):
        xs = np.array([origin + (i + 0.5) * size + (j + 0.5) * size * 1j
                       for i in range(width)], dtype=complex)
        zs = np.array([z_of(x) for x in xs], dtype=complex)
        return _kernels.active.bq_row(xs, fixed_y, zs, int(depth), float(tol))

    cells = np.zeros(width * height, dtype=np.int8)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for j, row in enumerate(pool.map(run_row, range(height))):
                cells[j * width:(j + 1) * width] = row
    else:
        for j in range(height):
            cells[j * width:(j + 1) * width] = run_row(j)
    return Raster(origin, size, width, height, cells)


def raster_slice_region(center: complex, span: float, res: int,
                        fixed_y: complex, depth: int = 8, root: str = "minus",
                        threads: int = 1) -> Raster:
    """Square slice raster: res x res pixels covering span x span at center."""
    if res < 1:
        raise ZeroResolution("resolution must be >= 1")
    size = span / res
    origin = center - complex(span / 2.0, span / 2.0)
    return raster_slice(origin, size, res, res, fixed_y, depth, root, threads)


def render_points(points, origin: complex, size: float, width: int,
                  height: int):
    """Binary occupancy raster of a point sample.

    Returns (raster, dropped): dropped counts points outside the viewport
    (the point at infinity always falls outside).
    """
    if width < 1 or height < 1:
        raise ZeroResolution(f"raster {width}x{height}")
    if size <= 0:
        raise ZeroResolution("pixel size must be positive")
    cells = np.zeros(width * height, dtype=np.int8)
    cells[:] = FAIL  # empty cell renders dark
    dropped = 0
    for z in points:
        if isinstance(z, float) and math.isinf(z):
            dropped += 1
            continue
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            dropped += 1
            continue
        i = int(math.floor((z.real - origin.real) / size))
        j = int(math.floor((z.imag - origin.imag) / size))
        if 0 <= i < width and 0 <= j < height:
            cells[j * width + i] = PASS
        else:
            dropped += 1
    return Raster(origin, size, width, height, cells), dropped


def write_ppm(raster: Raster, stream, palette=None) -> int:
    """Binary P6 image; returns the byte count written.

    Bit-exact: header `P6\\n<w> <h>\\n255\\n`, then RGB triples row-major.
    """
    palette = palette or DEFAULT_PALETTE
    header = f"P6\n{raster.width} {raster.height}\n255\n".encode("ascii")
    body = bytearray()
    for v in raster.cells:
        body.extend(bytes(palette[int(v)]))
    data = header + bytes(body)
    try:
        stream.write(data)
    except OSError as exc:
        raise IoFailure(f"could not write image: {exc}") from exc
    return len(data)

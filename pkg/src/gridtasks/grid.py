"""Grids, rendering to RGB, decoding back, and the JSON codec.

A grid is a 2-D ``numpy.uint8`` array of cell values in ``0..15``. An image
is a ``(height, width, 3)`` ``uint8`` array. Both are plain numpy arrays so
they slot into whatever array code a caller already has.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np
from PIL import Image as PILImage

from .errors import (
    AmbiguousCell,
    DimensionMismatch,
    GridOutOfBounds,
    PaletteError,
    ParseError,
    RaggedRows,
    UnmappedCellValue,
    ValueOutOfRange,
)

MAX_SIDE = 64
MAX_VALUE = 15

Grid = np.ndarray
Image = np.ndarray
RGB = tuple[int, int, int]


def as_grid(obj, max_side: int = MAX_SIDE, max_value: int = MAX_VALUE) -> Grid:
    """Validate ``obj`` as a grid and return it as a fresh uint8 array."""
    if isinstance(obj, np.ndarray):
        arr = obj
    else:
        rows = list(obj)
        if rows and all(isinstance(r, (list, tuple, np.ndarray)) for r in rows):
            for i, r in enumerate(rows):
                if len(r) != len(rows[0]):
                    raise RaggedRows(i)
        arr = np.asarray(rows)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionMismatch(f"expected a non-empty 2-D grid, got shape {arr.shape}")
    if arr.shape[0] > max_side or arr.shape[1] > max_side:
        raise GridOutOfBounds(f"grid {arr.shape[0]}x{arr.shape[1]} exceeds {max_side}x{max_side}")
    if arr.dtype.kind not in "iu":
        if arr.dtype.kind == "f" and np.all(np.mod(arr, 1) == 0):
            arr = arr.astype(np.int64)
        else:
            raise ValueOutOfRange(f"grid cells must be integers, got dtype {arr.dtype}")
    if arr.min() < 0 or arr.max() > max_value:
        bad = int(arr.max()) if arr.max() > max_value else int(arr.min())
        raise ValueOutOfRange(f"cell value {bad} outside 0..{max_value}")
    return arr.astype(np.uint8, copy=True)


def grids_equal(a, b) -> bool:
    """Exact match: same shape and every cell equal."""
    if a is None or b is None:
        return False
    a = np.asarray(a)
    b = np.asarray(b)
    return a.shape == b.shape and bool(np.array_equal(a, b))


# -- palettes and render specs -------------------------------------------------


@dataclass(frozen=True)
class Palette:
    name: str
    entries: Mapping[int, RGB]

    def __post_init__(self):
        clean = {}
        for value, rgb in self.entries.items():
            value = int(value)
            if not 0 <= value <= MAX_VALUE:
                raise PaletteError(f"palette {self.name!r}: value {value} outside 0..{MAX_VALUE}")
            rgb = tuple(int(c) for c in rgb)
            if len(rgb) != 3 or any(not 0 <= c <= 255 for c in rgb):
                raise PaletteError(f"palette {self.name!r}: bad RGB {rgb} for value {value}")
            clean[value] = rgb
        if len(set(clean.values())) != len(clean):
            raise PaletteError(f"palette {self.name!r} maps two values to the same colour")
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @property
    def values(self) -> list[int]:
        return list(self.entries)

    def colors(self) -> np.ndarray:
        return np.array(list(self.entries.values()), dtype=np.float64)

    def min_distance(self) -> float:
        """Smallest Euclidean RGB distance between two entries (inf if < 2)."""
        c = self.colors()
        if len(c) < 2:
            return float("inf")
        d = np.sqrt(((c[:, None, :] - c[None, :, :]) ** 2).sum(-1))
        d[np.diag_indices(len(c))] = np.inf
        return float(d.min())

    def lut(self) -> tuple[np.ndarray, np.ndarray]:
        """(value -> rgb table, value -> present mask), both of length 16."""
        table = np.zeros((MAX_VALUE + 1, 3), dtype=np.uint8)
        present = np.zeros(MAX_VALUE + 1, dtype=bool)
        for value, rgb in self.entries.items():
            table[value] = rgb
            present[value] = True
        return table, present


@dataclass(frozen=True)
class RenderSpec:
    cell_px: int = 16
    gridline_px: int = 1
    gridline_rgb: RGB = (64, 64, 64)

    def __post_init__(self):
        if self.cell_px < 1:
            raise ValueError("cell_px must be positive")
        if self.gridline_px < 0:
            raise ValueError("gridline_px must be >= 0")
        object.__setattr__(self, "gridline_rgb", tuple(int(c) for c in self.gridline_rgb))

    def image_shape(self, rows: int, cols: int) -> tuple[int, int]:
        g = self.gridline_px
        return rows * self.cell_px + (rows + 1) * g, cols * self.cell_px + (cols + 1) * g

    def cell_origins(self, n: int) -> np.ndarray:
        return self.gridline_px + np.arange(n) * (self.cell_px + self.gridline_px)

    def to_dict(self) -> dict:
        return {"cell_px": self.cell_px, "gridline_px": self.gridline_px,
                "gridline_rgb": list(self.gridline_rgb)}


def render_grid(grid, palette: Palette, spec: RenderSpec = RenderSpec()) -> Image:
    grid = as_grid(grid)
    table, present = palette.lut()
    missing = np.unique(grid[~present[grid]])
    if missing.size:
        raise UnmappedCellValue(int(missing[0]))
    rows, cols = grid.shape
    h, w = spec.image_shape(rows, cols)
    img = np.empty((h, w, 3), dtype=np.uint8)
    img[:] = spec.gridline_rgb
    # each cell becomes a cell_px x cell_px block
    blocks = np.repeat(np.repeat(table[grid], spec.cell_px, axis=0), spec.cell_px, axis=1)
    if spec.gridline_px == 0:
        img[:] = blocks
        return img
    ys = _pixel_index(rows, spec)
    xs = _pixel_index(cols, spec)
    img[np.ix_(ys, xs)] = blocks
    return img


def _pixel_index(n: int, spec: RenderSpec) -> np.ndarray:
    """Image coordinates of every non-gridline pixel along one axis."""
    return (spec.cell_origins(n)[:, None] + np.arange(spec.cell_px)[None, :]).ravel()


def decode_image(
    image: Image,
    palette: Palette,
    spec: RenderSpec,
    rows: int,
    cols: int,
    tolerance: float | None = None,
) -> Grid:
    """Map each cell region of ``image`` to its nearest palette value.

    The region's per-channel mean is compared against every palette colour.
    A cell whose nearest colour is not strictly within ``tolerance`` (default:
    half the minimum inter-palette distance), or which sits exactly between
    two colours, raises :class:`AmbiguousCell`.
    """
    image = np.asarray(image)
    expected = spec.image_shape(rows, cols)
    if image.ndim != 3 or image.shape[2] != 3 or image.shape[:2] != expected:
        raise DimensionMismatch(
            f"image shape {image.shape} does not match {rows}x{cols} grid "
            f"(expected {expected[0]}x{expected[1]}x3)"
        )
    if tolerance is None:
        tolerance = palette.min_distance() / 2
    ys = _pixel_index(rows, spec)
    xs = _pixel_index(cols, spec)
    cells = image[np.ix_(ys, xs)].astype(np.float64)
    cells = cells.reshape(rows, spec.cell_px, cols, spec.cell_px, 3)
    means = cells.mean(axis=(1, 3))
    colors = palette.colors()
    dist = np.sqrt(((means[:, :, None, :] - colors[None, None, :, :]) ** 2).sum(-1))
    order = np.argsort(dist, axis=-1, kind="stable")
    nearest = np.take_along_axis(dist, order[..., :1], axis=-1)[..., 0]
    bad = nearest >= tolerance
    if len(colors) > 1:
        second = np.take_along_axis(dist, order[..., 1:2], axis=-1)[..., 0]
        bad |= np.isclose(nearest, second)
    if bad.any():
        r, c = (int(i) for i in np.argwhere(bad)[0])
        raise AmbiguousCell(r, c, f"nearest palette distance {nearest[r, c]:.2f}, tolerance {tolerance:.2f}")
    values = np.array(palette.values, dtype=np.uint8)
    return values[order[..., 0]]


# -- JSON codec -----------------------------------------------------------------


def to_json(grid, display: bool = False) -> str:
    """Serialize a grid as a nested integer array.

    Canonical output has no whitespace at all. ``display=True`` gives the
    human layout: one row per line, a space after each comma.
    """
    rows = np.asarray(grid).tolist()
    if not display:
        return json.dumps(rows, separators=(",", ":"))
    lines = ["[" + ", ".join(str(v) for v in row) + "]" for row in rows]
    return "[\n " + ",\n ".join(lines) + "\n]"


_TRAILING_COMMA = re.compile(r",(\s*\])")


def from_json(text: str, allow_trailing_comma: bool = False, max_value: int = MAX_VALUE) -> Grid:
    """Parse a nested integer array; any whitespace is accepted.

    Trailing commas are rejected unless ``allow_trailing_comma`` is set,
    which is needed for hand-typed blocks like ``[[1, 2],\\n]``.
    """
    if allow_trailing_comma:
        text = _TRAILING_COMMA.sub(r"\1", text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.pos) from None
    return grid_from_nested(data, max_value=max_value)


def grid_from_nested(data, max_value: int = MAX_VALUE, max_side: int = MAX_SIDE) -> Grid:
    """Validate an already-decoded nested list (e.g. from an ARC file)."""
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ParseError("expected a non-empty array of arrays")
    width = len(data[0])
    for i, row in enumerate(data):
        if len(row) != width:
            raise RaggedRows(i)
        for v in row:
            if isinstance(v, bool) or not isinstance(v, int):
                raise ParseError(f"non-integer cell {v!r} in row {i}")
    if width == 0:
        raise ParseError("grid rows are empty")
    return as_grid(data, max_side=max_side, max_value=max_value)


# -- PNG ------------------------------------------------------------------------


def write_png(path, image: Image) -> None:
    image = np.asarray(image, dtype=np.uint8)
    if image.ndim != 3 or image.shape[2] != 3:
        raise DimensionMismatch(f"expected an RGB image, got shape {image.shape}")
    PILImage.fromarray(image).save(Path(path), format="PNG")


def read_png(path) -> Image:
    with PILImage.open(Path(path)) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8).copy()


def random_grids(rng: np.random.Generator, values: Iterable[int], count: int,
                 max_side: int = 30) -> list[Grid]:
    """Random grids over ``values`` with random shapes; handy for roundtrip audits."""
    vals = np.array(sorted(values), dtype=np.uint8)
    out = []
    for _ in range(count):
        r, c = rng.integers(1, max_side + 1, size=2)
        out.append(vals[rng.integers(0, len(vals), size=(r, c))])
    return out

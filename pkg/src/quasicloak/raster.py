"""Grid sampling, CSV and PNG serialization, threshold contours.

Grids are cell-centered: cell (j, i) covers x in [xmin + i dx, xmin + (i+1) dx]
and its sample sits at the cell center. Row j = 0 is the bottom row (ymin).
"""

from __future__ import annotations

import os
import struct
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from skimage import measure

# blue -> light green -> red anchors, position in [0, 1] and RGB
_ANCHORS = np.array([
    (0.00, 0, 0, 139),
    (0.25, 30, 144, 255),
    (0.50, 144, 238, 144),
    (0.75, 255, 165, 0),
    (1.00, 139, 0, 0),
], dtype=float)


@dataclass(frozen=True)
class FieldGrid:
    xmin: float
    xmax: float
    ymin: float
    ymax: float
    values: np.ndarray  # shape (ny, nx); NaN marks masked cells

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("grid bounds must satisfy xmax > xmin and ymax > ymin")
        if np.ndim(self.values) != 2:
            raise ValueError("values must be a 2D array (ny, nx)")

    @property
    def nx(self) -> int:
        return self.values.shape[1]

    @property
    def ny(self) -> int:
        return self.values.shape[0]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / self.nx

    @property
    def dy(self) -> float:
        return (self.ymax - self.ymin) / self.ny

    @property
    def x(self) -> np.ndarray:
        return cell_centers(self.xmin, self.xmax, self.nx)

    @property
    def y(self) -> np.ndarray:
        return cell_centers(self.ymin, self.ymax, self.ny)

    def points(self) -> np.ndarray:
        return self.x[None, :] + 1j * self.y[:, None]

    @property
    def mask(self) -> np.ndarray:
        return np.isnan(self.values)

    def map(self, fn: Callable) -> "FieldGrid":
        return FieldGrid(self.xmin, self.xmax, self.ymin, self.ymax, fn(self.values))


def cell_centers(lo: float, hi: float, n: int) -> np.ndarray:
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


def resolve_threads(threads: int | None = None) -> int:
    """Worker count from the argument, else QUASICLOAK_THREADS; 0 means auto."""
    if threads is None:
        threads = int(os.environ.get("QUASICLOAK_THREADS", "1") or 1)
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


def sample_grid(evaluator: Callable, bounds: Sequence[float], nx: int, ny: int,
                mask_radius: float = 0.0, singularities: Iterable[complex] = (0j,),
                threads: int | None = None, dtype=float) -> FieldGrid:
    """Evaluate ``evaluator`` (vectorized over complex points) at cell centers.

    Cells within ``mask_radius`` of a singularity are masked (NaN) and never
    evaluated. Rows are dispatched to a thread pool; results do not depend
    on the worker count.
    """
    if nx < 2 or ny < 2:
        raise ValueError("nx and ny must be at least 2")
    xmin, xmax, ymin, ymax = map(float, bounds)
    pts = cell_centers(xmin, xmax, nx)[None, :] + 1j * cell_centers(ymin, ymax, ny)[:, None]
    masked = np.zeros(pts.shape, dtype=bool)
    if mask_radius > 0:
        for s in singularities:
            masked |= np.abs(pts - complex(s)) <= mask_radius
    values = np.full(pts.shape, np.nan, dtype=dtype)

    def row(j):
        keep = ~masked[j]
        if keep.any():
            values[j, keep] = np.asarray(evaluator(pts[j, keep]))

    workers = resolve_threads(threads)
    if workers == 1:
        for j in range(ny):
            row(j)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(row, range(ny)))
    return FieldGrid(xmin, xmax, ymin, ymax, values)


def _fmt(v: float) -> str:
    return "nan" if np.isnan(v) else format(float(v), ".17g")


def write_csv(grid: FieldGrid, path) -> None:
    """Header '# xmin xmax ymin ymax nx ny', then one line per grid row.

    Values carry 17 significant digits so that reading back is bit-exact;
    masked cells are 'nan'. Complex grids append the token 'complex' to the
    header and write each cell as 're,im'.
    """
    path = Path(path)
    head = [format(v, ".17g") for v in (grid.xmin, grid.xmax, grid.ymin, grid.ymax)]
    head += [str(grid.nx), str(grid.ny)]
    if grid.is_complex:
        head.append("complex")
    lines = ["# " + " ".join(head)]
    for row in grid.values:
        if grid.is_complex:
            cells = [f"{_fmt(v.real)},{_fmt(v.imag)}" for v in row]
        else:
            cells = [_fmt(v) for v in row]
        lines.append(",".join(cells))
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write grid CSV {path}: {exc}") from exc


def read_csv(path) -> FieldGrid:
    path = Path(path)
    try:
        text = path.read_text().splitlines()
    except OSError as exc:
        raise OSError(f"cannot read grid CSV {path}: {exc}") from exc
    head = text[0].lstrip("#").split()
    xmin, xmax, ymin, ymax = map(float, head[:4])
    nx, ny = int(head[4]), int(head[5])
    is_complex = len(head) > 6 and head[6] == "complex"
    data = np.array([[float(v) for v in line.split(",")] for line in text[1:1 + ny]])
    if is_complex:
        data = data[:, 0::2] + 1j * data[:, 1::2]
    if data.shape != (ny, nx):
        raise ValueError(f"{path}: expected {ny}x{nx} values, found {data.shape}")
    return FieldGrid(xmin, xmax, ymin, ymax, data)


@dataclass(frozen=True)
class ColorScale:
    kind: str  # "log" or "linear"
    lo: float
    hi: float

    def __post_init__(self):
        if self.kind not in ("log", "linear"):
            raise ValueError(f"scale kind must be 'log' or 'linear', got {self.kind!r}")
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got {self.lo}, {self.hi}")
        if self.kind == "log" and not self.lo > 0:
            raise ValueError("log scale needs lo > 0")

    @classmethod
    def parse(cls, text: str) -> "ColorScale":
        """'log:0.01:100' or 'linear:-10:10'."""
        kind, lo, hi = text.split(":")
        return cls(kind, float(lo), float(hi))

    def position(self, values: np.ndarray) -> np.ndarray:
        v = np.asarray(values, dtype=float)
        if self.kind == "log":
            if np.any(v[np.isfinite(v)] < 0):
                raise ValueError("log color scale needs nonnegative data; pass |values|")
            with np.errstate(divide="ignore"):
                s = (np.log10(v) - np.log10(self.lo)) / (np.log10(self.hi) - np.log10(self.lo))
        else:
            s = (v - self.lo) / (self.hi - self.lo)
        return np.clip(s, 0.0, 1.0)


def colormap_rgb(s: np.ndarray) -> np.ndarray:
    """Map positions in [0, 1] to uint8 RGB on the blue-green-red ramp."""
    s = np.asarray(s, dtype=float)
    rgb = np.stack([np.interp(s, _ANCHORS[:, 0], _ANCHORS[:, c]) for c in (1, 2, 3)], axis=-1)
    return np.rint(rgb).astype(np.uint8)


def pixel_colors(values: np.ndarray, scale: ColorScale) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    masked = np.isnan(values)
    rgb = colormap_rgb(np.where(masked, 0.0, scale.position(np.where(masked, scale.hi, values))))
    rgb[masked] = 0
    return rgb


def _png_chunk(tag: bytes, data: bytes) -> bytes:
    return struct.pack(">I", len(data)) + tag + data + struct.pack(">I", zlib.crc32(tag + data) & 0xFFFFFFFF)


def write_png(path, rgb: np.ndarray) -> None:
    """Write an 8-bit RGB array (height, width, 3) as PNG, top row first."""
    rgb = np.ascontiguousarray(rgb, dtype=np.uint8)
    h, w, _ = rgb.shape
    raw = b"".join(b"\x00" + rgb[j].tobytes() for j in range(h))
    png = (b"\x89PNG\r\n\x1a\n"
           + _png_chunk(b"IHDR", struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0))
           + _png_chunk(b"IDAT", zlib.compress(raw, 9))
           + _png_chunk(b"IEND", b""))
    try:
        Path(path).write_bytes(png)
    except OSError as exc:
        raise OSError(f"cannot write image {path}: {exc}") from exc


def read_png(path) -> np.ndarray:
    """Decode PNGs produced by ``write_png`` (8-bit RGB, filter 0 only)."""
    data = Path(path).read_bytes()
    pos = 8
    idat = b""
    w = h = 0
    while pos < len(data):
        (length,) = struct.unpack(">I", data[pos:pos + 4])
        tag = data[pos + 4:pos + 8]
        body = data[pos + 8:pos + 8 + length]
        if tag == b"IHDR":
            w, h = struct.unpack(">II", body[:8])
        elif tag == b"IDAT":
            idat += body
        pos += 12 + length
    raw = np.frombuffer(zlib.decompress(idat), dtype=np.uint8).reshape(h, 1 + 3 * w)
    return raw[:, 1:].reshape(h, w, 3)


def write_heatmap(grid: FieldGrid, path, scale: ColorScale) -> None:
    """One pixel per cell, y increasing upward, masked cells black."""
    values = grid.values
    if grid.is_complex:
        raise ValueError("heatmaps need real data; map the grid through abs or real first")
    write_png(path, pixel_colors(values, scale)[::-1])


def threshold_contour(grid: FieldGrid, level: float) -> list[np.ndarray]:
    """Isolines |value| = level as (k, 2) arrays of (x, y) vertices.

    Marching squares with linear interpolation along cell edges; masked
    cells break the lines.
    """
    if not np.isfinite(level):
        raise ValueError("contour level must be finite")
    mag = np.abs(grid.values)
    finite = np.isfinite(mag)
    if not finite.any():
        return []
    data = np.where(finite, mag, 0.0)
    lines = measure.find_contours(data, level, mask=finite if not finite.all() else None)
    out = []
    for rc in lines:
        x = grid.xmin + (rc[:, 1] + 0.5) * grid.dx
        y = grid.ymin + (rc[:, 0] + 0.5) * grid.dy
        out.append(np.column_stack([x, y]))
    return out


def write_polylines_csv(polylines: Sequence[np.ndarray], path, header: str = "") -> None:
    """Rows 'line,x,y' with 17 significant digits."""
    lines = [f"# {header}".rstrip(), "line,x,y"]
    for k, pl in enumerate(polylines):
        for x, y in pl:
            lines.append(f"{k},{x:.17g},{y:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_coeff_csv(coeffs: Sequence[complex], path, header: str) -> None:
    """Rows (degree, re, im) under a '# header' line."""
    lines = [f"# {header}", "degree,re,im"]
    for k, c in enumerate(np.asarray(coeffs, dtype=complex)):
        lines.append(f"{k},{c.real:.17g},{c.imag:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_coeff_csv(path) -> tuple[str, np.ndarray]:
    text = Path(path).read_text().splitlines()
    header = text[0].lstrip("#").strip()
    rows = [line.split(",") for line in text[2:] if line]
    c = np.array([complex(float(r[1]), float(r[2])) for r in rows])
    return header, c

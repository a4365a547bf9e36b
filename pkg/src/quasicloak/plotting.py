"""Matplotlib report figures.

These are annotated companions to the raw one-pixel-per-cell heatmaps of
``raster``. Rendering goes through the Agg canvas directly (no pyplot
state) and strips the software tag from the PNG metadata, so repeated runs
give identical bytes.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.colors import LinearSegmentedColormap, LogNorm, Normalize
from matplotlib.figure import Figure

from .raster import _ANCHORS, ColorScale, FieldGrid

PNG_METADATA = {"Software": None}


def report_colormap() -> LinearSegmentedColormap:
    cmap = LinearSegmentedColormap.from_list(
        "quasicloak", [(a[0], a[1:] / 255.0) for a in _ANCHORS])
    cmap.set_bad("black")
    return cmap


def _norm(scale: ColorScale):
    if scale.kind == "log":
        return LogNorm(scale.lo, scale.hi, clip=True)
    return Normalize(scale.lo, scale.hi, clip=True)


def _show(ax, grid: FieldGrid, scale: ColorScale):
    data = np.ma.masked_invalid(grid.values)
    return ax.imshow(data, origin="lower", extent=(grid.xmin, grid.xmax, grid.ymin, grid.ymax),
                     cmap=report_colormap(), norm=_norm(scale), interpolation="nearest")


def _circle(ax, center: complex, radius: float, **style):
    t = np.linspace(0, 2 * np.pi, 361)
    z = center + radius * np.exp(1j * t)
    ax.plot(z.real, z.imag, **style)


def _finish(fig: Figure, path, dpi: int = 100) -> None:
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=dpi, metadata=PNG_METADATA)


def _clip_to(ax, grid: FieldGrid):
    ax.set_xlim(grid.xmin, grid.xmax)
    ax.set_ylim(grid.ymin, grid.ymax)
    ax.set_aspect("equal")


def render_lagrange(nodes_left: np.ndarray, targets_left: np.ndarray, grid: FieldGrid,
                    nodes_right: np.ndarray, targets_right: np.ndarray, scale: ColorScale,
                    path, titles: Sequence[str] = ("", "")) -> None:
    """Node pattern on the left, |p| heatmap with labelled nodes on the right."""
    fig = Figure(figsize=(11, 4.5))
    ax0, ax1 = fig.subplots(1, 2, gridspec_kw={"width_ratios": [1, 1.4]})
    for z, v in zip(nodes_left, targets_left):
        ax0.plot(z.real, z.imag, "o", color="tab:blue" if v == 1 else "tab:red")
        ax0.annotate(f"{v:g}", (z.real, z.imag), textcoords="offset points", xytext=(5, 5))
    ax0.set_aspect("equal")
    ax0.grid(True, lw=0.3)
    ax0.set_title(titles[0])
    im = _show(ax1, grid, scale)
    for z, v in zip(nodes_right, targets_right):
        ax1.text(z.real, z.imag, f"{v:g}", ha="center", va="center", fontsize=7, color="white")
    _clip_to(ax1, grid)
    ax1.set_title(titles[1])
    fig.colorbar(im, ax=ax1, shrink=0.85)
    _finish(fig, path)


def render_ensemble(grid: FieldGrid, scale: ColorScale, peanut: np.ndarray, beta: float,
                    r_one: float, r_zero: float, path, title: str = "") -> None:
    """|p̄| with the flat-region circles and the boundary of the convergence region."""
    fig = Figure(figsize=(6.5, 5.5))
    ax = fig.subplots()
    im = _show(ax, grid, scale)
    half = len(peanut) // 2
    for lobe in (peanut[:half], peanut[half:]):
        ax.plot(lobe.real, lobe.imag, color="red", lw=1.2)
    _circle(ax, 0.0, r_one, color="white", ls="--", lw=1.2)
    _circle(ax, beta, r_zero, color="white", ls="-", lw=1.2)
    _clip_to(ax, grid)
    ax.set_title(title)
    fig.colorbar(im, ax=ax, shrink=0.85)
    _finish(fig, path)


def render_cloak(grid_off: FieldGrid, grid_on: FieldGrid, scale: ColorScale,
                 contours_off: Sequence[np.ndarray], contours_on: Sequence[np.ndarray],
                 overlays: dict, scatterer: tuple[complex, float], path) -> None:
    """Device off (left) and on (right) with contour and Kelvin-mapped overlays.

    ``overlays`` maps 'peanut' to a closed curve (array of complex points)
    and 'one'/'zero' to (center, radius) circles.
    """
    fig = Figure(figsize=(12, 5.5))
    axes = fig.subplots(1, 2)
    im = None
    for ax, grid, contours, title in ((axes[0], grid_off, contours_off, "device off"),
                                      (axes[1], grid_on, contours_on, "device on")):
        im = _show(ax, grid, scale)
        curve = overlays.get("peanut")
        if curve is not None:
            half = len(curve) // 2
            for lobe in (curve[:half], curve[half:]):
                ax.plot(lobe.real, lobe.imag, color="red", lw=1.0)
        if "one" in overlays:
            _circle(ax, *overlays["one"], color="white", ls="--", lw=1.0)
        if "zero" in overlays:
            _circle(ax, *overlays["zero"], color="white", ls="-", lw=1.0)
        for pl in contours:
            ax.plot(pl[:, 0], pl[:, 1], color="black", lw=1.2)
        c, r = scatterer
        t = np.linspace(0, 2 * np.pi, 181)
        ax.fill((c + r * np.exp(1j * t)).real, (c + r * np.exp(1j * t)).imag, color="black")
        _clip_to(ax, grid)
        ax.set_title(title)
    fig.colorbar(im, ax=list(axes), shrink=0.85)
    _finish(fig, path)

"""Canonical figure recipes.

Each ``figure*`` function computes its data, writes CSV grids, raw
heatmaps, overlay curves, a JSON summary and an annotated report image
into ``out_dir`` under fixed names, and returns the written paths in
order. Nothing depends on a random seed, so reruns are byte-identical.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Optional

import numpy as np

from . import plotting
from .ensemble import flat_radius, pbar_factorial
from .geometry import CloakGeometry, invert_geometry, physical_from_inverted
from .lagrange import NodeFamily, p_phi_psi
from .raster import (ColorScale, FieldGrid, sample_grid, threshold_contour, write_coeff_csv,
                     write_csv, write_heatmap, write_polylines_csv)
from .region import peanut_curve
from .scatterer import ScattererSpec, solve_scattering
from .synthesis import IncidentField, build_device, cloak_errors
from .supnorm import circle_max

LOG_SCALE = ColorScale("log", 0.01, 100.0)
LINEAR_SCALE = ColorScale("linear", -10.0, 10.0)
FLAT_TOL = 0.01
CONTOUR_LEVEL = 100.0

FIG2_NODES = dict(n=5, phi=0.0, psi=np.pi / 3, beta=4.0)
FIG2_FIELD = dict(n=10, phi=np.pi / 10, psi=-np.pi / 10, beta=4.0)
FIG2_BOUNDS = (-2.0, 6.0, -3.0, 3.0)
FIG2_SHAPE = (400, 300)

FIG3_N, FIG3_BETA = 12, 1.0
FIG3_BOUNDS = (-0.5, 1.5, -1.0, 1.0)
FIG3_SHAPE = (400, 400)

FIG4_N, FIG4_BETA, FIG4_DELTA = 12, 1.0, 0.1
FIG4_SCATTERER = ScattererSpec(1.05, 0.1, -1 + 1e-3)
FIG4_BOUNDS = (-5.0, 5.0, -5.0, 5.0)
FIG4_SHAPE = (500, 500)
FIG4_MASK = 0.05
FIG4_OBS_SAMPLES = 512


def default_window(beta: float, kind: str) -> tuple[float, float, float, float]:
    """Plot window framing the node circles (lagrange) or D_beta (ensemble)."""
    if kind == "lagrange":
        return (-2.0, beta + 2.0, -(beta + 4.0) * 3 / 8, (beta + 4.0) * 3 / 8)
    return (-0.5 * beta, 1.5 * beta, -beta, beta)


def _grid_assets(grid: FieldGrid, out: Path, stem: str, scale: ColorScale) -> list[Path]:
    csv, png = out / f"{stem}.csv", out / f"{stem}.png"
    write_csv(grid, csv)
    write_heatmap(grid, png, scale)
    return [csv, png]


def _write_json(obj, path: Path) -> Path:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def _fmt_header(kind: str, **params) -> str:
    return " ".join([kind] + [f"{k}={v:.17g}" if isinstance(v, float) else f"{k}={v}"
                              for k, v in params.items()])


def lagrange_assets(n: int, phi: float, psi: float, beta: float, out_dir, stem: str,
                    bounds=None, shape=(400, 300),
                    threads: Optional[int] = None) -> tuple[list[Path], FieldGrid]:
    """Coefficient CSV, nodes CSV, |p| grid and heatmap for one node family."""
    out = Path(out_dir)
    f = NodeFamily(n, phi, psi, beta)
    poly = p_phi_psi(f)
    header = _fmt_header("lagrange", n=n, phi=phi, psi=psi, beta=beta)
    written = [out / f"{stem}_coeffs.csv"]
    write_coeff_csv(poly.coeffs, written[0], header)
    written.append(out / f"{stem}_nodes.csv")
    rows = ["index,re,im,value"] + [f"{k},{z.real:.17g},{z.imag:.17g},{v:g}"
                                    for k, (z, v) in enumerate(zip(f.nodes(), f.targets()))]
    written[-1].write_text(f"# {header}\n" + "\n".join(rows) + "\n")
    bounds = bounds or default_window(beta, "lagrange")
    grid = sample_grid(lambda z: np.abs(poly(z)), bounds, *shape, threads=threads)
    written += _grid_assets(grid, out, f"{stem}_modulus", LOG_SCALE)
    return written, grid


def ensemble_assets(n: int, beta: float, out_dir, stem: str, bounds=None, shape=(400, 400),
                    threads: Optional[int] = None) -> tuple[list[Path], FieldGrid]:
    out = Path(out_dir)
    ep = pbar_factorial(n, beta)
    written = [out / f"{stem}_coeffs.csv"]
    write_coeff_csv(ep.coeffs.coeffs, written[0], _fmt_header("pbar", n=n, beta=beta))
    bounds = bounds or default_window(beta, "ensemble")
    grid = sample_grid(lambda z: np.abs(ep(z)), bounds, *shape, threads=threads)
    written += _grid_assets(grid, out, f"{stem}_modulus", LOG_SCALE)
    return written, grid


def write_peanut_csv(beta: float, path: Path, n_theta: int = 720, kelvin: bool = False) -> np.ndarray:
    """Rows (lobe, theta, re, im); with ``kelvin`` the points are mapped by 1/z."""
    theta, z = peanut_curve(beta, n_theta)
    if kelvin:
        z = 1.0 / z
    lobe = np.repeat([0, 1], n_theta)
    lines = [f"# peanut beta={beta!r} kelvin={kelvin}", "lobe,theta,re,im"]
    lines += [f"{l},{t:.17g},{p.real:.17g},{p.imag:.17g}" for l, t, p in zip(lobe, theta, z)]
    path.write_text("\n".join(lines) + "\n")
    return z


def figure2(out_dir, threads: Optional[int] = None) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    left = NodeFamily(**FIG2_NODES)
    written = [out / "fig2_left_nodes.csv"]
    rows = ["index,re,im,value"] + [f"{k},{z.real:.17g},{z.imag:.17g},{v:g}"
                                    for k, (z, v) in enumerate(zip(left.nodes(), left.targets()))]
    written[0].write_text(f"# {_fmt_header('lagrange', **FIG2_NODES)}\n" + "\n".join(rows) + "\n")
    files, grid = lagrange_assets(**FIG2_FIELD, out_dir=out, stem="fig2_right",
                                  bounds=FIG2_BOUNDS, shape=FIG2_SHAPE, threads=threads)
    written += files
    right = NodeFamily(**FIG2_FIELD)
    report = out / "fig2_report.png"
    plotting.render_lagrange(left.nodes(), left.targets(), grid, right.nodes(), right.targets(),
                             LOG_SCALE, report,
                             titles=("nodes, n=5, phi=0, psi=pi/3",
                                     "|p|, n=10, phi=-psi=pi/10, beta=4"))
    written.append(report)
    return written


def figure3(out_dir, threads: Optional[int] = None) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written, grid = ensemble_assets(FIG3_N, FIG3_BETA, out, "fig3", FIG3_BOUNDS, FIG3_SHAPE, threads)
    peanut_path = out / "fig3_peanut.csv"
    peanut = write_peanut_csv(FIG3_BETA, peanut_path)
    written.append(peanut_path)
    r_one = flat_radius(FIG3_N, FIG3_BETA, FLAT_TOL, "origin")
    r_zero = flat_radius(FIG3_N, FIG3_BETA, FLAT_TOL, "beta")
    written.append(_write_json({"n": FIG3_N, "beta": FIG3_BETA, "tol": FLAT_TOL,
                                "r_star_origin": r_one, "r_star_beta": r_zero},
                               out / "fig3_summary.json"))
    report = out / "fig3_report.png"
    plotting.render_ensemble(grid, LOG_SCALE, peanut, FIG3_BETA, r_one, r_zero, report,
                             title=f"|p̄|, n={FIG3_N}, beta={FIG3_BETA:g}")
    written.append(report)
    return written


def figure4_geometry(n: int = FIG4_N, beta: float = FIG4_BETA, delta: float = FIG4_DELTA,
                     tol: float = FLAT_TOL) -> tuple[CloakGeometry, float]:
    """Physical geometry whose inverted disks are the 1% flat circles of p̄.

    The mapped cloaked disk is B(beta, r*) and the mapped observation disk
    is B(0, r*), r* being the radius where p̄ departs from its limit by tol.
    """
    r = flat_radius(n, beta, tol, "origin")
    return physical_from_inverted(r, beta, r, delta), r


def cloaking_run(geometry: CloakGeometry, scatterer: ScattererSpec, n: int,
                 incident: Optional[IncidentField] = None, exact: bool = False,
                 n_samples: int = FIG4_OBS_SAMPLES):
    """Scatterer solved in the incident field alone and with the device on.

    Returns (device, off, on, summary).
    """
    incident = incident or IncidentField.from_coeffs([0, 1])
    df = build_device(geometry, incident, n, exact=exact)
    off = solve_scattering(incident.complex_potential, scatterer)
    on = solve_scattering(df.total_potential, scatterer, singularities=(0,))
    amp_off = circle_max(lambda z: off.scattered(z).real, 0.0, geometry.R, n_samples)[0]
    amp_on = circle_max(lambda z: on.scattered(z).real, 0.0, geometry.R, n_samples)[0]
    errs = cloak_errors(df, n_samples)
    summary = {
        "n": n,
        "geometry": geometry.to_dict(),
        "inverted": invert_geometry(geometry)._asdict(),
        "margins": list(df.margins),
        "scatterer": {"center": [scatterer.center.real, scatterer.center.imag],
                      "radius": scatterer.radius, "eps": scatterer.eps,
                      "n_mult_off": off.spec.n_mult, "n_mult_on": on.spec.n_mult},
        "amplification": abs(scatterer.contrast),
        "scattered_max_off": amp_off,
        "scattered_max_on": amp_on,
        "cloaking_factor": amp_off / amp_on if amp_on > 0 else float("inf"),
        "e_obs": errs.e_obs,
        "e_clk": errs.e_clk,
        "exact_q0": exact,
    }
    return df, off, on, summary


def figure4(out_dir, threads: Optional[int] = None) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    g, r = figure4_geometry()
    # u0 = z inverts to 1/w, and (1 - p̄(w)) / w is itself a polynomial, so the
    # exact path stays polynomial; the Taylor path is kept for comparison
    df, off, on, summary = cloaking_run(g, FIG4_SCATTERER, FIG4_N, exact=True)
    taylor = cloaking_run(g, FIG4_SCATTERER, FIG4_N, exact=False)[3]
    summary["taylor_path"] = {k: taylor[k] for k in ("e_obs", "e_clk", "cloaking_factor")}
    summary["r_star"] = r
    kw = dict(mask_radius=FIG4_MASK, singularities=(0j,), threads=threads)
    grid_off = sample_grid(off, FIG4_BOUNDS, *FIG4_SHAPE, **kw)
    grid_on = sample_grid(on, FIG4_BOUNDS, *FIG4_SHAPE, **kw)
    written = _grid_assets(grid_off, out, "fig4_off", LINEAR_SCALE)
    written += _grid_assets(grid_on, out, "fig4_on", LINEAR_SCALE)
    contours = {}
    for tag, grid in (("off", grid_off), ("on", grid_on)):
        contours[tag] = threshold_contour(grid, CONTOUR_LEVEL)
        path = out / f"fig4_contour_{tag}.csv"
        write_polylines_csv(contours[tag], path, f"|u|={CONTOUR_LEVEL:g} device {tag}")
        written.append(path)
    peanut_path = out / "fig4_peanut_kelvin.csv"
    peanut = write_peanut_csv(FIG4_BETA, peanut_path, kelvin=True)
    written.append(peanut_path)
    summary["contour_vertices_off"] = int(sum(len(c) for c in contours["off"]))
    summary["contour_vertices_on"] = int(sum(len(c) for c in contours["on"]))
    written.append(_write_json(summary, out / "fig4_summary.json"))
    report = out / "fig4_report.png"
    overlays = {"peanut": peanut, "one": (0.0, g.R), "zero": (g.p, g.a)}
    plotting.render_cloak(grid_off, grid_on, LINEAR_SCALE, contours["off"], contours["on"],
                          overlays, (FIG4_SCATTERER.center, FIG4_SCATTERER.radius), report)
    written.append(report)
    return written


FIGURES = {2: figure2, 3: figure3, 4: figure4}


def make_figure(which: int, out_dir, threads: Optional[int] = None) -> list[Path]:
    try:
        recipe = FIGURES[int(which)]
    except (KeyError, ValueError):
        raise ValueError(f"unknown figure {which!r}; choose from {sorted(FIGURES)}") from None
    return recipe(out_dir, threads=threads)

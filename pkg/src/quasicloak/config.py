"""JSON job configuration.

A job file has up to five blocks::

    {
      "geometry":  {"a": 1, "p": 8, "delta": 0.5, "R": 80},
      "incident":  {"coeffs": [0, 1], "inverted": false},
      "ensemble":  {"n": 12, "taylor_degree": 24, "exact": false, "n_samples": 512},
      "scatterer": {"center": [1.05, 0], "radius": 0.1, "eps": -0.999, "n_mult": 16},
      "output":    {"dir": "out", "bounds": [-1, 1, -1, 1], "nx": 200, "ny": 200,
                    "scale": "log:0.01:100", "mask_radius": 0.05}
    }

Coefficients are numbers or [re, im] pairs, lowest degree first. The
ensemble block may carry "beta" only when no geometry block is given, since
the geometry already fixes beta.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Optional

from .geometry import CloakGeometry, GeometryError, invert_geometry
from .raster import ColorScale
from .scatterer import ScattererSpec
from .synthesis import IncidentField


class ConfigError(ValueError):
    """Malformed or contradictory job configuration."""


def _coeff(c) -> complex:
    if isinstance(c, (list, tuple)):
        if len(c) != 2:
            raise ConfigError(f"complex coefficient must be [re, im], got {c!r}")
        return complex(float(c[0]), float(c[1]))
    return complex(float(c))


@dataclass(frozen=True)
class OutputConfig:
    dir: Optional[str] = None
    bounds: Optional[tuple[float, float, float, float]] = None
    nx: int = 200
    ny: int = 200
    scale: Optional[ColorScale] = None
    mask_radius: float = 0.0

    @classmethod
    def from_dict(cls, d: Mapping) -> "OutputConfig":
        bounds = d.get("bounds")
        if bounds is not None:
            if len(bounds) != 4:
                raise ConfigError("output.bounds must be [xmin, xmax, ymin, ymax]")
            bounds = tuple(float(b) for b in bounds)
        scale = d.get("scale")
        return cls(d.get("dir"), bounds, int(d.get("nx", 200)), int(d.get("ny", 200)),
                   ColorScale.parse(scale) if scale else None, float(d.get("mask_radius", 0.0)))


@dataclass(frozen=True)
class JobConfig:
    geometry: Optional[CloakGeometry] = None
    incident: IncidentField = field(default_factory=lambda: IncidentField.from_coeffs([0, 1]))
    n: Optional[int] = None
    beta: Optional[float] = None
    taylor_degree: Optional[int] = None
    exact: bool = False
    n_samples: int = 512
    phi: float = 0.0
    psi: float = 0.0
    scatterer: Optional[ScattererSpec] = None
    output: OutputConfig = field(default_factory=OutputConfig)

    def __post_init__(self):
        if self.beta is not None and self.geometry is not None:
            raise ConfigError("beta is given both explicitly and through the geometry")

    def resolved_beta(self) -> float:
        if self.beta is not None:
            return self.beta
        if self.geometry is not None:
            return invert_geometry(self.geometry).beta
        raise ConfigError("no beta: give ensemble.beta or a geometry block")

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "JobConfig":
        if not isinstance(d, Mapping):
            raise ConfigError("job config must be a JSON object")
        unknown = set(d) - {"geometry", "incident", "ensemble", "scatterer", "output"}
        if unknown:
            raise ConfigError(f"unknown config blocks: {sorted(unknown)}")
        try:
            geometry = CloakGeometry.from_dict(d["geometry"]) if "geometry" in d else None
            kw: dict[str, Any] = {"geometry": geometry}
            if "incident" in d:
                inc = d["incident"]
                kw["incident"] = IncidentField.from_coeffs([_coeff(c) for c in inc["coeffs"]],
                                                           inverted=bool(inc.get("inverted", False)))
            ens = d.get("ensemble", {})
            for key, conv in (("n", int), ("beta", float), ("taylor_degree", int),
                              ("exact", bool), ("n_samples", int), ("phi", float), ("psi", float)):
                if key in ens:
                    kw[key] = conv(ens[key])
            if "scatterer" in d:
                kw["scatterer"] = ScattererSpec.from_dict(d["scatterer"])
            if "output" in d:
                kw["output"] = OutputConfig.from_dict(d["output"])
        except ConfigError:
            raise
        except GeometryError as exc:
            raise ConfigError(str(exc)) from exc
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad config value: {exc!r}") from exc
        return cls(**kw)


def load_config(path) -> JobConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return JobConfig.from_dict(data)

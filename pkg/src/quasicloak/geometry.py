"""Cloak configuration in the physical plane and its image under w = 1/z.

Points are complex numbers throughout. The cloaked region is the disk
B(p, a) on the positive real axis, the device sits in B(0, delta) and the
observation region is the exterior of B(0, R).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np

SQRT2 = math.sqrt(2.0)


class GeometryError(ValueError):
    """Malformed or degenerate cloak geometry."""


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise GeometryError(f"disk radius must be positive, got {self.radius}")
        object.__setattr__(self, "center", complex(self.center))

    def boundary(self, n: int) -> np.ndarray:
        theta = 2 * np.pi * np.arange(n) / n
        return self.center + self.radius * np.exp(1j * theta)

    def contains(self, z) -> np.ndarray:
        return np.abs(np.asarray(z) - self.center) < self.radius


@dataclass(frozen=True)
class CloakGeometry:
    a: float
    p: float
    delta: float
    R: float

    @classmethod
    def from_dict(cls, d: Mapping) -> "CloakGeometry":
        try:
            vals = {k: float(d[k]) for k in ("a", "p", "delta", "R")}
        except KeyError as exc:
            raise GeometryError(f"geometry is missing key {exc.args[0]!r}") from None
        except (TypeError, ValueError) as exc:
            raise GeometryError(f"geometry values must be numbers: {exc}") from None
        return cls(**vals)

    def to_dict(self) -> dict:
        return {"a": self.a, "p": self.p, "delta": self.delta, "R": self.R}

    @property
    def cloak_disk(self) -> Disk:
        return Disk(self.p, self.a)

    @property
    def device_disk(self) -> Disk:
        return Disk(0.0, self.delta)

    @property
    def observation_disk(self) -> Disk:
        return Disk(0.0, self.R)


class InvertedGeometry(NamedTuple):
    alpha: float
    beta: float
    rho_obs: float
    rho_dev: float

    @property
    def cloak_disk(self) -> Disk:
        return Disk(self.beta, self.alpha)

    @property
    def observation_disk(self) -> Disk:
        return Disk(0.0, self.rho_obs)

    def violations(self) -> list[str]:
        out = []
        if not self.rho_obs < self.beta - self.alpha:
            out.append("1/R < beta - alpha")
        if not self.beta + self.alpha < self.rho_dev:
            out.append("beta + alpha < 1/delta")
        return out


def validate_physical(g: CloakGeometry) -> list[str]:
    """List the violated exterior-cloak constraints; empty means valid.

    Raises GeometryError when a field is non-finite or non-positive, since
    such input cannot be reported on meaningfully.
    """
    for name in ("a", "p", "delta", "R"):
        v = getattr(g, name)
        if not math.isfinite(v) or v <= 0:
            raise GeometryError(f"{name} must be finite and positive, got {v}")
    report = []
    if not g.p > g.a + g.delta:
        report.append(f"p > a + delta violated ({g.p} <= {g.a + g.delta})")
    if not g.R > g.a + g.p:
        report.append(f"R > a + p violated ({g.R} <= {g.a + g.p})")
    return report


def kelvin(z):
    """Inversion w = 1/z. Works elementwise on arrays."""
    arr = np.asarray(z, dtype=complex)
    if np.any(arr == 0):
        raise ZeroDivisionError("kelvin transform is undefined at z = 0")
    w = 1.0 / arr
    return w if w.ndim else complex(w)


def invert_geometry(g: CloakGeometry) -> InvertedGeometry:
    if g.p == g.a:
        raise GeometryError("p = a puts the cloaked disk through the origin")
    problems = validate_physical(g)
    if problems:
        raise GeometryError("; ".join(problems))
    d = g.p * g.p - g.a * g.a
    return InvertedGeometry(
        alpha=g.a / abs(d),
        beta=g.p / d,
        rho_obs=1.0 / g.R,
        rho_dev=1.0 / g.delta,
    )


def physical_from_inverted(alpha: float, beta: float, rho_obs: float, delta: float) -> CloakGeometry:
    """Recover (a, p, R) from the inverted disks; delta passes through."""
    d = beta * beta - alpha * alpha
    if not d > 0:
        raise GeometryError("need beta > alpha to invert back")
    return CloakGeometry(a=alpha / d, p=beta / d, delta=delta, R=1.0 / rho_obs)


def feasibility_threshold(beta: float) -> float:
    """beta / (2 sqrt 2 + 2), the largest admissible 1/R and alpha."""
    return beta / (2 * SQRT2 + 2)


def constraint_margins(ig: InvertedGeometry) -> tuple[float, float]:
    """(m_obs, m_clk); both positive iff the explicit cloak converges."""
    t = feasibility_threshold(ig.beta)
    return t - ig.rho_obs, t - ig.alpha

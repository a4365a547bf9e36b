"""Device field synthesis.

In the inverted plane w = 1/z the device potential is V = -Q0 (1 - W) with
W = p̄ and Q0 an analytic stand-in for the inverted incident field. Undoing
the inversion, the device field is u(z) = Re V(1/z); it is singular only at
the device location z = 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Callable, NamedTuple, Optional

import numpy as np

from .ensemble import EnsemblePolynomial, pbar_factorial
from .geometry import CloakGeometry, InvertedGeometry, constraint_margins, invert_geometry
from .polynomial import ComplexPolynomial
from .supnorm import circle_max

log = logging.getLogger(__name__)


class InfeasibleGeometryError(ValueError):
    """Constraint margins are not both positive."""


class NCapReached(RuntimeError):
    def __init__(self, n, errors):
        super().__init__(f"tolerance not reached by n = {n}: {errors}")
        self.n = n
        self.errors = errors


@dataclass(frozen=True)
class IncidentField:
    """Incident potential, given either as U0(z) or as Q0(w) with w = 1/z."""

    physical: Optional[ComplexPolynomial] = None
    inverted: Optional[ComplexPolynomial] = None

    def __post_init__(self):
        if (self.physical is None) == (self.inverted is None):
            raise ValueError("give exactly one of the physical or inverted representation")

    @classmethod
    def from_coeffs(cls, coeffs, inverted: bool = False) -> "IncidentField":
        poly = ComplexPolynomial(coeffs)
        return cls(inverted=poly) if inverted else cls(physical=poly)

    def complex_potential(self, z):
        """Analytic U0 with u0 = Re U0, in the physical variable."""
        if self.physical is not None:
            return self.physical(z)
        return self.inverted(1.0 / np.asarray(z, dtype=complex))

    def __call__(self, z):
        return np.real(self.complex_potential(z))

    def in_inverted_plane(self, w):
        if self.inverted is not None:
            return self.inverted(w)
        return self.physical(1.0 / np.asarray(w, dtype=complex))


def taylor_q0(U0: ComplexPolynomial, beta: float, degree: int) -> ComplexPolynomial:
    """Degree-``degree`` Taylor polynomial of w -> U0(1/w) about w = beta.

    Built by recomposing series: w^-j = beta^-j (1 + s/beta)^-j with
    s = w - beta. The result is centered at beta; call ``to_monomial()``
    for coefficients in powers of w.
    """
    if degree < 0:
        raise ValueError(f"Taylor degree must be >= 0, got {degree}")
    if beta == 0:
        raise ValueError("expansion point beta must be nonzero")
    u = U0.to_monomial().coeffs
    out = np.zeros(degree + 1, dtype=complex)
    out[0] += u[0]
    for j in range(1, len(u)):
        if u[j] == 0:
            continue
        for k in range(degree + 1):
            out[k] += u[j] * (-1) ** k * comb(j + k - 1, k) * beta ** (-j - k)
    return ComplexPolynomial(out, center=beta)


def sup_bound_M(q0, ig: InvertedGeometry, n_samples: Optional[int] = None) -> float:
    """sup |Q0| over B(beta, alpha) union B(0, 1/R), on the boundary circles."""
    if n_samples is None:
        deg = getattr(q0, "degree", 0)
        n_samples = max(256, 8 * deg)
    return max(circle_max(q0, ig.beta, ig.alpha, n_samples)[0],
               circle_max(q0, 0.0, ig.rho_obs, n_samples)[0])


@dataclass(frozen=True)
class DeviceField:
    ensemble: EnsemblePolynomial
    incident: IncidentField
    geometry: CloakGeometry
    taylor_degree: Optional[int] = None
    exact: bool = False

    @cached_property
    def inverted(self) -> InvertedGeometry:
        return invert_geometry(self.geometry)

    @cached_property
    def q0(self) -> Callable:
        """Q0 as a callable of w: given, exact inverted field, or Taylor polynomial."""
        if self.incident.inverted is not None:
            return self.incident.inverted
        if self.exact:
            return self.incident.in_inverted_plane
        d = self.taylor_degree if self.taylor_degree is not None else 2 * self.ensemble.n
        return taylor_q0(self.incident.physical, self.inverted.beta, d)

    def potential(self, z):
        """Complex device potential -Q0(1/z) (1 - p̄(1/z))."""
        z = np.asarray(z, dtype=complex)
        if np.any(z == 0):
            raise ZeroDivisionError("the device field is singular at z = 0")
        w = 1.0 / z
        return -self.q0(w) * self.ensemble.complement(w)

    def __call__(self, z):
        return np.real(self.potential(z))

    def total_potential(self, z):
        return self.incident.complex_potential(z) + self.potential(z)

    @property
    def margins(self) -> tuple[float, float]:
        return constraint_margins(self.inverted)

    @property
    def feasible(self) -> bool:
        return min(self.margins) > 0


def build_device(geometry: CloakGeometry, incident: IncidentField, n: int,
                 taylor_degree: Optional[int] = None, exact: bool = False) -> DeviceField:
    ig = invert_geometry(geometry)
    return DeviceField(pbar_factorial(n, ig.beta), incident, geometry, taylor_degree, exact)


def device_field(df: DeviceField, z):
    return df(z)


class CloakErrors(NamedTuple):
    e_obs: float
    e_clk: float


def cloak_errors(df: DeviceField, n_samples: int = 512) -> CloakErrors:
    """max |u| on the observation circle and max |u + u0| on the cloak boundary.

    Infeasible geometries are evaluated all the same, with a logged warning;
    their errors need not decay with n.
    """
    if not df.feasible:
        log.warning("geometry is infeasible (margins %s); errors may not decay", df.margins)
    g = df.geometry
    e_obs = circle_max(df, 0.0, g.R, n_samples)[0]
    e_clk = circle_max(lambda z: np.real(df.total_potential(z)), g.p, g.a, n_samples)[0]
    return CloakErrors(e_obs, e_clk)


def tolerance_chain(df: DeviceField, n_samples: int = 512) -> dict:
    """Bounds on the cloak errors from their inverted-plane ingredients.

    |u + u0| <= |U0(1/w) - Q0(w)| + M |W(w)| on the mapped cloak disk and
    |u| <= M |1 - W(w)| on the mapped observation disk.
    """
    ig = df.inverted
    ep = df.ensemble
    M = sup_bound_M(df.q0, ig, n_samples)
    sup_w = circle_max(ep, ig.beta, ig.alpha, n_samples)[0]
    sup_1mw = circle_max(ep.complement, 0.0, ig.rho_obs, n_samples)[0]
    remainder = circle_max(lambda w: df.incident.in_inverted_plane(w) - df.q0(w),
                           ig.beta, ig.alpha, n_samples)[0]
    return {
        "M": M,
        "sup_W_cloak": sup_w,
        "sup_1mW_obs": sup_1mw,
        "taylor_remainder": remainder,
        "bound_clk": M * sup_w + remainder,
        "bound_obs": M * sup_1mw,
    }


def w_tolerance(eps: float, M: float) -> float:
    """Tolerance eps' = eps / M that W must meet for V to meet eps."""
    return eps / M


def find_n(geometry: CloakGeometry, incident: IncidentField, eps: float, n0: int = 4,
           n_cap: int = 64, n_samples: int = 512, **kwargs) -> tuple[int, CloakErrors]:
    """Smallest n in the doubling sequence n0, 2 n0, ... with both errors < eps."""
    ig = invert_geometry(geometry)
    if min(constraint_margins(ig)) <= 0:
        raise InfeasibleGeometryError(f"constraint margins {constraint_margins(ig)}")
    n = n0
    while True:
        errs = cloak_errors(build_device(geometry, incident, n, **kwargs), n_samples)
        if max(errs) < eps:
            return n, errs
        if 2 * n > n_cap:
            raise NCapReached(n, errs)
        n *= 2


def five_point_laplacian(f, z, h: float = 1e-4):
    z = np.asarray(z, dtype=complex)
    return (f(z + h) + f(z - h) + f(z + 1j * h) + f(z - 1j * h) - 4 * f(z)) / (h * h)

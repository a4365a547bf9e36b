"""The convergence region D_beta = {z : |z^2 - beta z| < beta^2 / 4}.

Its boundary |z| |z - beta| = beta^2/4 is a lemniscate through beta/2 with
one lobe around each focus. p̄ converges to 1 on the origin lobe and to 0 on
the beta lobe.
"""

from __future__ import annotations

import enum
import logging

import numpy as np
from scipy.optimize import brentq

from .geometry import Disk, feasibility_threshold

log = logging.getLogger(__name__)

BOUNDARY_BAND = 1e-12


class Region(enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


class UnsupportedConfigurationError(ValueError):
    pass


def _check_beta(beta):
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")


def _gap(beta, z):
    z = np.asarray(z, dtype=complex)
    return np.abs(z) * np.abs(z - beta) - beta * beta / 4


def in_dbeta(beta: float, z):
    _check_beta(beta)
    g = _gap(beta, z)
    band = BOUNDARY_BAND * beta * beta
    if np.ndim(g) == 0:
        g = float(g)
        if abs(g) <= band:
            return Region.BOUNDARY
        return Region.INSIDE if g < 0 else Region.OUTSIDE
    out = np.full(g.shape, Region.OUTSIDE, dtype=object)
    out[g < -band] = Region.INSIDE
    out[np.abs(g) <= band] = Region.BOUNDARY
    return out


def limit_chi(beta: float, z):
    """Pointwise limit of p̄: 1, 0, or None where there is no limit."""
    if in_dbeta(beta, z) is not Region.INSIDE:
        return None
    x = complex(z).real
    if x < beta / 2:
        return 1
    if x > beta / 2:
        return 0
    return None


def convergence_ratio(beta: float, z):
    """rho(z) = 4 |z^2 - beta z| / beta^2; the series terms decay like rho^k."""
    z = np.asarray(z, dtype=complex)
    r = 4 * np.abs(z * (z - beta)) / (beta * beta)
    return r if r.ndim else float(r)


def _polar_quartic(r, beta, cos_t):
    return r ** 4 + beta ** 2 * r ** 2 - 2 * r ** 3 * beta * cos_t - beta ** 4 / 16


def boundary_polar(beta: float, theta: float) -> float:
    """Radius of the origin-side lobe along the ray at angle ``theta``."""
    _check_beta(beta)
    c = float(np.cos(theta))
    hi = beta / 2
    if _polar_quartic(hi, beta, c) <= 0:
        # theta = 0: the lobe pinches at beta/2
        return hi
    return float(brentq(_polar_quartic, 0.0, hi, args=(beta, c), xtol=1e-15 * beta, rtol=1e-15))


def peanut_curve(beta: float, n_theta: int = 720) -> tuple[np.ndarray, np.ndarray]:
    """(theta, z) samples of both lobes of the boundary of D_beta.

    The first ``n_theta`` points trace the origin lobe, the next ``n_theta``
    its mirror image z -> beta - z.
    """
    theta = np.linspace(-np.pi, np.pi, n_theta)
    r = np.array([boundary_polar(beta, t) for t in theta])
    z0 = r * np.exp(1j * theta)
    return np.concatenate([theta, theta]), np.concatenate([z0, beta - z0])


def _side_center(beta, side):
    if side == "origin":
        return 0.0
    if side == "beta":
        return complex(beta)
    raise ValueError(f"side must be 'origin' or 'beta', got {side!r}")


def disk_in_halfregion_sampled(beta: float, disk: Disk, side: str, n_points: int = 720) -> bool:
    """Brute-force inclusion test on ``n_points`` boundary samples."""
    pts = disk.boundary(n_points)
    cls = in_dbeta(beta, pts)
    if not np.all(cls == Region.INSIDE):
        return False
    if side == "origin":
        return bool(np.all(pts.real < beta / 2))
    return bool(np.all(pts.real > beta / 2))


def disk_in_halfregion(beta: float, disk: Disk, side: str, check: bool = True) -> bool:
    """Is the closed disk compactly inside the ``side`` lobe of D_beta?

    The disk must be centered at 0 (``side='origin'``) or at beta
    (``side='beta'``). The lobe contains such a disk exactly when its radius
    is below beta (sqrt 2 - 1) / 2, the distance from the focus to the
    nearest boundary point, which lies on the real axis away from beta/2.
    """
    _check_beta(beta)
    center = _side_center(beta, side)
    if abs(disk.center - center) > 1e-12 * beta:
        raise UnsupportedConfigurationError(
            f"disk must be centered at {center} for side={side!r}, got {disk.center}")
    answer = disk.radius < beta / 2 and disk.radius < feasibility_threshold(beta)
    if check:
        sampled = disk_in_halfregion_sampled(beta, disk, side)
        if sampled != answer:
            log.warning("analytic (%s) and sampled (%s) inclusion disagree for r=%r, beta=%r",
                        answer, sampled, disk.radius, beta)
    return answer

"""Sup norms of analytic functions over disks via their boundary circles.

By the maximum modulus principle the sup over a closed disk is attained on
its boundary, so we sample the circle and polish the best sample with a
golden-section search in the angle.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar


def circle_max(f, center: complex, radius: float, n_samples: int = 256,
               refine: bool = True, rtol: float = 1e-6) -> tuple[float, float]:
    """Return (max |f|, angle of the max) on the circle |z - center| = radius.

    ``f`` must accept complex arrays and return arrays of the same shape.
    """
    theta = 2 * np.pi * np.arange(n_samples) / n_samples
    vals = np.abs(f(center + radius * np.exp(1j * theta)))
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite samples on the circle")
    k = int(np.argmax(vals))
    best, best_theta = float(vals[k]), float(theta[k])
    if not refine or best == 0.0:
        return best, best_theta

    h = 2 * np.pi / n_samples

    def neg(t):
        return -float(np.abs(f(np.array([center + radius * np.exp(1j * t)])))[0])

    try:
        res = minimize_scalar(neg, bracket=(best_theta - h, best_theta, best_theta + h),
                              method="golden", tol=rtol)
    except ValueError:
        # flat neighbourhood, no strict bracket
        return best, best_theta
    if -res.fun > best:
        best, best_theta = float(-res.fun), float(res.x)
    return best, best_theta


def disks_max(f, disks, n_samples: int = 256) -> float:
    """Max of |f| over a union of closed disks given as (center, radius)."""
    return max(circle_max(f, c, r, n_samples)[0] for c, r in disks)

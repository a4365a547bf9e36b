"""Electrostatic scattering by a dielectric disk in a given exciting field.

The exciting potential is Re F(z) with F analytic near the disk. Expanding
F = sum a_k (z-c)^k about the center, continuity of the potential and of
eps times its normal derivative on |z - c| = r give

    outside:  Re[F(z) + sum_k b_k (z-c)^-k],   b_k = conj(a_k) r^(2k) (1-eps)/(1+eps)
    inside:   Re[sum_k c_k (z-c)^k],           c_k = 2 a_k / (1+eps),  c_0 = a_0

for real eps. The conjugate appears because Re[b (z-c)^-k] pairs with
Re[a (z-c)^k] through conj(b).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

DEFAULT_N_MULT = 16
EXPANSION_FACTOR = 1.5


class ResonanceError(ValueError):
    """eps = -1: the transmission problem has no bounded solution."""


class ExpansionDomainError(ValueError):
    """The exciting field is not analytic on the expansion circle."""


@dataclass(frozen=True)
class ScattererSpec:
    center: complex
    radius: float
    eps: float
    n_mult: int = DEFAULT_N_MULT

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if not self.radius > 0:
            raise ValueError(f"scatterer radius must be positive, got {self.radius}")
        if self.n_mult < 1:
            raise ValueError(f"n_mult must be >= 1, got {self.n_mult}")
        if self.eps == -1:
            raise ResonanceError("eps = -1 is the exact plasmonic resonance")

    @classmethod
    def from_dict(cls, d: Mapping) -> "ScattererSpec":
        cx, cy = d["center"]
        return cls(complex(cx, cy), float(d["radius"]), float(d["eps"]),
                   int(d.get("n_mult", DEFAULT_N_MULT)))

    @property
    def contrast(self) -> float:
        """(1 - eps) / (1 + eps), the multipole amplification factor."""
        if self.eps == -1:
            raise ResonanceError("eps = -1 is the exact plasmonic resonance")
        return (1 - self.eps) / (1 + self.eps)


def local_expand(field: Callable, s: ScattererSpec, factor: float = EXPANSION_FACTOR,
                 n_samples: int | None = None, singularities: Iterable[complex] = ()) -> np.ndarray:
    """Taylor coefficients a_0..a_{n_mult} of ``field`` about the disk center.

    Trapezoid rule for the Cauchy integral on |z - c| = factor * r, done as
    one FFT of the samples.
    """
    rho = factor * s.radius
    for p in singularities:
        if abs(complex(p) - s.center) <= rho:
            raise ExpansionDomainError(f"singularity {p} lies inside the expansion circle")
    m = n_samples or max(4 * s.n_mult, 64)
    if m < 4 * s.n_mult:
        raise ValueError("need at least 4 * n_mult samples")
    theta = 2 * np.pi * np.arange(m) / m
    vals = np.asarray(field(s.center + rho * np.exp(1j * theta)), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise ExpansionDomainError("exciting field is not finite on the expansion circle")
    k = np.arange(s.n_mult + 1)
    return np.fft.fft(vals)[: s.n_mult + 1] / m / rho ** k


def scattered_coeffs(a: Sequence[complex], s: ScattererSpec) -> np.ndarray:
    """b_0..b_N of the exterior response; b_0 = 0."""
    a = np.asarray(a, dtype=complex)
    k = np.arange(len(a))
    b = np.conj(a) * s.radius ** (2 * k) * s.contrast
    b[0] = 0.0
    return b


def interior_coeffs(a: Sequence[complex], s: ScattererSpec) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    c = 2 * a / (1 + s.eps)
    c[0] = a[0]
    return c


def _negative_powers(b, zeta):
    # sum_{k>=1} b_k zeta^-k by Horner in 1/zeta
    inv = 1.0 / zeta
    out = np.zeros_like(zeta)
    for bk in b[:0:-1]:
        out = (out + bk) * inv
    return out


@dataclass(frozen=True)
class DiskScattering:
    """Solved transmission problem for one disk in one exciting field."""

    spec: ScattererSpec
    field: Callable
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def scattered(self, z):
        """Complex scattered potential outside the disk."""
        zeta = np.asarray(z, dtype=complex) - self.spec.center
        return _negative_powers(self.b, zeta)

    def __call__(self, z):
        """Real total potential; uses the interior series inside the disk."""
        z = np.asarray(z, dtype=complex)
        zeta = z - self.spec.center
        inside = np.abs(zeta) < self.spec.radius
        out = np.empty(z.shape)
        zo = z[~inside]
        out[~inside] = np.real(self.field(zo) + _negative_powers(self.b, zo - self.spec.center))
        zi = zeta[inside]
        acc = np.zeros_like(zi)
        for ck in self.c[::-1]:
            acc = acc * zi + ck
        out[inside] = np.real(acc)
        return out if out.ndim else float(out)


def solve_scattering(field: Callable, s: ScattererSpec, adaptive: bool = True,
                     singularities: Iterable[complex] = (), factor: float = EXPANSION_FACTOR,
                     max_mult: int = 256) -> DiskScattering:
    """Expand, truncate adaptively and build the scattered/interior series.

    With ``adaptive`` the multipole order doubles until
    |a_N| r^N < 1e-12 |a_0 + a_1 r|.
    """
    singularities = tuple(singularities)
    spec = s
    while True:
        a = local_expand(field, spec, factor, singularities=singularities)
        N = spec.n_mult
        ref = abs(a[0] + (a[1] if N >= 1 else 0) * spec.radius)
        if not adaptive or abs(a[N]) * spec.radius ** N <= 1e-12 * ref or ref == 0 or N >= max_mult:
            break
        spec = ScattererSpec(spec.center, spec.radius, spec.eps, min(2 * N, max_mult))
    return DiskScattering(spec, field, a, scattered_coeffs(a, spec), interior_coeffs(a, spec))


def total_field_with_scatterer(field: Callable, s: ScattererSpec, z, **kwargs):
    return solve_scattering(field, s, **kwargs)(z)

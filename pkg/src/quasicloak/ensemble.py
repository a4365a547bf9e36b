"""The ensemble-average polynomial p̄ and its three construction routes.

p̄ is the average of the Lagrange interpolants p_{phi,psi} over both phase
angles. It has degree 2n-1, equals 1 at 0 and 0 at beta, and is flat to
order n-1 at both points. Routes provided here:

* factorial form ``(1 - t)^n sum_j t^j C(n+j-1, j)`` with ``t = z/beta``;
  coefficients are expanded in exact integer arithmetic;
* central-binomial series ``1/2 + sum_k C(2k,k) (t(1-t))^k (1/2 - t)``,
  the default evaluator;
* a double trapezoid average of the closed-form Lagrange interpolants,
  used as an independent oracle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb

import mpmath
import numpy as np
from scipy.optimize import bisect

from .lagrange import p_phi_psi_closed
from .polynomial import ComplexPolynomial
from .supnorm import circle_max

MAX_DOUBLE_N = 170
# inside this convergence ratio the series is summed as a complementary tail
TAIL_RHO = 0.9
_TAIL_MAX_TERMS = 4000


class PrecisionError(ArithmeticError):
    """Requested degree is beyond what double precision can represent."""


def _exact_t_coeffs(n: int) -> tuple[int, ...]:
    r = [1]
    for j in range(1, n):
        r.append(r[-1] * (n + j - 1) // j)
    lead = [(-1) ** i * comb(n, i) for i in range(n + 1)]
    out = [0] * (2 * n)
    for i, li in enumerate(lead):
        for j, rj in enumerate(r):
            out[i + j] += li * rj
    return tuple(out)


@dataclass(frozen=True)
class EnsemblePolynomial:
    """p̄ for given (n, beta).

    ``t_coeffs`` are the exact integer coefficients in ``t = z / beta``;
    ``coeffs`` are their correctly rounded images in powers of z.
    Calling the object evaluates the series form.
    """

    n: int
    beta: float
    t_coeffs: tuple[int, ...]

    @cached_property
    def coeffs(self) -> ComplexPolynomial:
        b = Fraction(self.beta)
        out = []
        try:
            for k, e in enumerate(self.t_coeffs):
                out.append(float(Fraction(e) / b ** k))
        except OverflowError:
            raise PrecisionError(
                f"coefficients of p̄ with n={self.n}, beta={self.beta} overflow double precision"
            ) from None
        return ComplexPolynomial(out)

    def __call__(self, z):
        return pbar_series(self.n, self.beta, z)

    def deviation(self, z):
        return pbar_deviation(self.n, self.beta, z)

    def complement(self, z):
        """1 - p̄(z), accurate where p̄ is close to 1."""
        return pbar_complement(self.n, self.beta, z)


def pbar_factorial(n: int, beta: float, extended: bool = False) -> EnsemblePolynomial:
    """Expand the factorial form into coefficients.

    The binomial weights follow ``r_j = r_{j-1} (n+j-1) / j`` in integers, so
    the expansion is exact; only the final scaling by ``beta**-k`` rounds.
    Beyond n = 170 the factorial weights leave double range, and a
    PrecisionError is raised unless ``extended`` is set, in which case the
    exact integer coefficients are kept and ``coeffs`` is built on demand.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if n > MAX_DOUBLE_N and not extended:
        raise PrecisionError(f"n = {n} > {MAX_DOUBLE_N}; pass extended=True")
    return EnsemblePolynomial(int(n), float(beta), _exact_t_coeffs(int(n)))


def pbar_product(n: int, beta: float, z):
    """Evaluate the factorial form as written (product of the two factors)."""
    t = np.asarray(z, dtype=complex) / beta
    s = np.zeros_like(t)
    r = [1]
    for j in range(1, n):
        r.append(r[-1] * (n + j - 1) // j)
    for rj in reversed(r):
        s = s * t + float(rj)
    out = (1 - t) ** n * s
    return out if out.ndim else complex(out)


def _flat(z):
    z = np.asarray(z, dtype=complex)
    return z.reshape(-1), z.shape


def _shaped(out, shape):
    return out.reshape(shape) if shape else complex(out[0])


def _series_parts(n: int, beta: float, z):
    t = z / beta
    u = t * (1 - t)
    acc = np.zeros_like(t)
    term = np.ones_like(t)
    for k in range(n):
        acc = acc + term
        term = term * u * (2.0 * (2 * k + 1) / (k + 1))
    # term now holds C(2n, n) u^n
    return t, u, acc, term


def _tail(n: int, u: np.ndarray, first: np.ndarray) -> np.ndarray:
    """sum_{k >= n} C(2k,k) u^k given ``first`` = C(2n,n) u^n; needs 4|u| < 1.

    Horner over the ratios C(2k,k) / C(2n,n), truncated where the largest
    ratio 4|u| in the batch has decayed below 1e-18.
    """
    rho = float(np.max(4 * np.abs(u), initial=0.0))
    if rho == 0.0:
        return first.copy()
    terms = min(_TAIL_MAX_TERMS, int(np.ceil(np.log(1e-18 * (1 - rho)) / np.log(rho))) + 2)
    k = np.arange(n, n + terms - 1)
    ratios = np.concatenate([[1.0], np.cumprod(2.0 * (2 * k + 1) / (k + 1))])
    acc = np.full(u.shape, ratios[-1], dtype=complex)
    for r in ratios[-2::-1]:
        acc = acc * u + r
    return first * acc


def _tail_mask(t, u):
    return (4 * np.abs(u) < TAIL_RHO) & (np.abs(t.real - 0.5) > 1e-12)


def pbar_series(n: int, beta: float, z):
    """Evaluate p̄ from the central-binomial series.

    Where the series converges well and p̄ is near its limit (0 or 1), the
    value is formed as limit minus remaining tail so that small values of
    p̄ keep full relative accuracy; elsewhere the partial sum is used.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    z, shape = _flat(z)
    t, u, acc, last = _series_parts(n, beta, z)
    out = 0.5 + acc * (0.5 - t)
    mask = _tail_mask(t, u)
    if mask.any():
        chi = np.where(t.real < 0.5, 1.0, 0.0)
        dev = -(0.5 - t[mask]) * _tail(n, u[mask], last[mask])
        out[mask] = chi[mask] + dev
    return _shaped(out, shape)


def pbar_deviation(n: int, beta: float, z):
    """p̄(z) - chi(z) inside the convergence region, NaN elsewhere."""
    z, shape = _flat(z)
    t, u, acc, last = _series_parts(n, beta, z)
    inside = (4 * np.abs(u) < 1) & (t.real != 0.5)
    chi = np.where(t.real < 0.5, 1.0, 0.0)
    dev = 0.5 + acc * (0.5 - t) - chi
    mask = _tail_mask(t, u)
    if mask.any():
        dev[mask] = -(0.5 - t[mask]) * _tail(n, u[mask], last[mask])
    dev = np.where(inside, dev, np.nan + 0j)
    return _shaped(dev, shape)


def pbar_complement(n: int, beta: float, z):
    """1 - p̄(z), computed from the tail where p̄ is close to 1."""
    z, shape = _flat(z)
    t, u, acc, last = _series_parts(n, beta, z)
    out = 0.5 - acc * (0.5 - t)
    mask = _tail_mask(t, u) & (t.real < 0.5)
    if mask.any():
        out[mask] = (0.5 - t[mask]) * _tail(n, u[mask], last[mask])
    mask = _tail_mask(t, u) & (t.real > 0.5)
    if mask.any():
        out[mask] = 1.0 + (0.5 - t[mask]) * _tail(n, u[mask], last[mask])
    return _shaped(out, shape)


def pbar_quadrature(n: int, beta: float, z, m_quad: int = 256):
    """Double trapezoid average of p_{phi,psi}(z) over both phase angles.

    Needs beta > 2: for smaller beta the node circles overlap, the averaged
    integrand has poles on the integration path and the average no longer
    equals p̄.
    """
    if m_quad < 64:
        raise ValueError("m_quad must be at least 64")
    if beta <= 2:
        warnings.warn("quadrature oracle is only valid for beta > 2", stacklevel=2)
    theta = 2 * np.pi * np.arange(m_quad) / m_quad
    phi = theta[:, None]
    psi = theta[None, :]
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.array([np.mean(p_phi_psi_closed(n, phi, psi, beta, zi)) for zi in zs])
    return out if np.ndim(z) else complex(out[0])


def fn_recurrence_check(n: int, t, dps: int = 50):
    """Residual of f_{n+1}(t) = f_n(t) - (1-t)^n t^n C(2n,n) (t - 1/2).

    ``f_n(t) = p̄(beta t)`` does not depend on beta. Values of f_n grow like
    8^n on |t| = 2, so the residual is formed at ``dps`` digits.
    """
    scalar = np.ndim(t) == 0
    ts = np.atleast_1d(np.asarray(t, dtype=complex))
    out = []
    with mpmath.workdps(dps):
        for ti in ts:
            tm = mpmath.mpc(ti.real, ti.imag)
            lhs = _mp_fn(n + 1, tm) - _mp_fn(n, tm)
            rhs = -(1 - tm) ** n * tm ** n * comb(2 * n, n) * (tm - mpmath.mpf(0.5))
            out.append(float(abs(lhs - rhs)))
    return out[0] if scalar else np.array(out)


def _mp_fn(n, t):
    s = mpmath.mpf(0)
    for j in range(n - 1, -1, -1):
        s = s * t + comb(n + j - 1, j)
    return (1 - t) ** n * s


def symmetry_residual(ep: EnsemblePolynomial) -> float:
    """Coefficient-level residual of p̄(z) + p̄(beta - z) = 1.

    The Taylor shift z -> beta - z is done on the exact integer
    coefficients; in floating point the shift alone would amplify rounding
    by roughly C(2n, n) 2^(2n).
    """
    e = ep.t_coeffs
    deg = len(e) - 1
    # coefficients of 1 - f(1 - t)
    mirrored = [0] * (deg + 1)
    for k, ek in enumerate(e):
        for j in range(k + 1):
            mirrored[j] += ek * comb(k, j) * (-1) ** j
    mirrored = [-m for m in mirrored]
    mirrored[0] += 1
    b = Fraction(ep.beta)
    lhs = np.array([float(Fraction(x) / b ** k) for k, x in enumerate(e)])
    rhs = np.array([float(Fraction(x) / b ** k) for k, x in enumerate(mirrored)])
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(lhs)))


def hermite_residuals(ep: EnsemblePolynomial) -> dict:
    """Residuals of the Hermite data of p̄, one entry per condition group.

    ``value_0`` and ``value_beta`` are |p̄(0) - 1| and |p̄(beta)|. The
    derivative residuals use scaled derivatives beta^k p̄^(k) / k!, which are
    the Taylor coefficients in t = z / beta: at t = 0 they are the
    coefficients themselves, at t = 1 the sums sum_j e_j C(j, k). Each is
    divided by the size of the terms that produce it.
    """
    e = np.array([float(x) for x in ep.t_coeffs])
    k = np.arange(1, ep.n)
    deriv_0 = np.abs(e[1:ep.n]) / np.max(np.abs(e))
    shift = np.array([[comb(j, kk) for j in range(len(e))] for kk in k], dtype=float).reshape(-1, len(e))
    deriv_beta = np.abs(shift @ e) / (np.abs(shift) @ np.abs(e)) if ep.n > 1 else np.zeros(0)
    return {
        "value_0": abs(ep(0.0) - 1.0),
        "value_beta": abs(ep(ep.beta)),
        "deriv_0": float(deriv_0.max(initial=0.0)),
        "deriv_beta": float(deriv_beta.max(initial=0.0)),
    }


def hermite_conditions(ep: EnsemblePolynomial) -> float:
    """Largest entry of ``hermite_residuals`` and of the symmetry residual."""
    return float(max(max(hermite_residuals(ep).values()), symmetry_residual(ep)))


def flat_radius(n: int, beta: float, tol: float = 0.01, side: str = "origin",
                n_samples: int = 720) -> float:
    """Radius r with max over |z - z0| = r of |p̄ - target| equal to ``tol``.

    ``side='origin'`` uses z0 = 0, target 1; ``side='beta'`` uses z0 = beta,
    target 0. The max modulus grows with r, so the root is bracketed on
    (0, beta/2) and bisection is safe.
    """
    if side == "origin":
        center, f = 0.0, (lambda z: pbar_complement(n, beta, z))
    elif side == "beta":
        center, f = beta, (lambda z: pbar_series(n, beta, z))
    else:
        raise ValueError(f"side must be 'origin' or 'beta', got {side!r}")

    def g(r):
        return circle_max(f, center, r, n_samples)[0] - tol

    return float(bisect(g, 1e-6 * beta, 0.5 * beta, xtol=1e-14 * beta, rtol=1e-13))

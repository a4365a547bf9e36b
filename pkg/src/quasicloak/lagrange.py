"""Lagrange interpolants that are 1 on one circle of nodes and 0 on another.

The node family is ``e^{i phi} w_j`` (unit circle about 0) together with
``beta + e^{i psi} w_j`` (unit circle about beta), with ``w_j`` the n-th
roots of unity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import mpmath
import numpy as np

from .polynomial import NewtonPolynomial

LIMIT_RADIUS = 1e-12


class DegenerateNodesError(ValueError):
    """Two interpolation nodes coincide."""


@dataclass(frozen=True)
class NodeFamily:
    n: int
    phi: float
    psi: float
    beta: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")

    def roots_of_unity(self) -> np.ndarray:
        return np.exp(2j * np.pi * np.arange(self.n) / self.n)

    def nodes(self) -> np.ndarray:
        w = self.roots_of_unity()
        return np.concatenate([np.exp(1j * self.phi) * w, self.beta + np.exp(1j * self.psi) * w])

    def targets(self) -> np.ndarray:
        return np.concatenate([np.ones(self.n), np.zeros(self.n)])

    def partner(self) -> "NodeFamily":
        """Family whose interpolant satisfies p(z) + partner(beta - z) = 1."""
        return NodeFamily(self.n, self.psi + np.pi, self.phi + np.pi, self.beta)


def nodes(f: NodeFamily) -> np.ndarray:
    return f.nodes()


def _check_distinct(x: np.ndarray, scale: float) -> None:
    gaps = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(gaps, np.inf)
    if gaps.min() < 1e-12 * scale:
        raise DegenerateNodesError(f"interpolation nodes coincide (min gap {gaps.min():.3g})")


def q_m_product(f: NodeFamily, m: int, z):
    """q_m from its defining double product over the 2n nodes."""
    if not 0 <= m < f.n:
        raise IndexError(f"m must lie in [0, {f.n}), got {m}")
    x = f.nodes()
    _check_distinct(x, 1.0 + f.beta)
    z = np.asarray(z, dtype=complex)
    xm = x[m]
    others = np.delete(x, m)
    out = np.ones(z.shape, dtype=complex)
    for xj in others:
        out = out * (z - xj) / (xm - xj)
    return out if out.ndim else complex(out)


def q_m_closed(f: NodeFamily, m: int, z):
    """q_m from the factored closed form.

    Within 1e-12 of the node ``e^{i phi} w_m`` the removable quotient
    ``(z^n - e^{i phi n}) / (z - e^{i phi} w_m)`` is replaced by its limit.
    """
    if not 0 <= m < f.n:
        raise IndexError(f"m must lie in [0, {f.n}), got {m}")
    z = np.asarray(z, dtype=complex)
    out = _q_closed(f.n, f.phi, f.psi, f.beta, m, z)
    return out if out.ndim else complex(out)


def _q_closed(n, phi, psi, beta, m, z):
    # phi, psi may be arrays broadcasting against z
    xm = np.exp(1j * phi) * np.exp(2j * np.pi * m / n)
    e_psi = np.exp(1j * psi * n)
    first = ((z - beta) ** n - e_psi) / ((xm - beta) ** n - e_psi)
    near = np.abs(z - xm) < LIMIT_RADIUS
    with np.errstate(divide="ignore", invalid="ignore"):
        middle = (z ** n - np.exp(1j * phi * n)) / (z - xm)
    middle = np.where(near, n * xm ** (n - 1), middle)
    return first * middle / (n * xm ** (n - 1))


def p_phi_psi_closed(n: int, phi, psi, beta: float, z):
    """Sum of closed-form q_m; broadcasts over ``phi``, ``psi`` and ``z``."""
    z = np.asarray(z, dtype=complex)
    total = 0
    for m in range(n):
        total = total + _q_closed(n, phi, psi, beta, m, z)
    return total


def p_phi_psi(f: NodeFamily) -> NewtonPolynomial:
    """The degree 2n-1 interpolant, built from Newton divided differences.

    Evaluate through the returned object (Newton form); its ``coeffs``
    carry the monomial expansion, which loses accuracy quickly with n.
    """
    if f.beta <= 2:
        warnings.warn(f"beta = {f.beta} <= 2: the two node circles overlap", stacklevel=2)
    x = f.nodes()
    _check_distinct(x, 1.0 + f.beta)
    return NewtonPolynomial(x, f.targets())


def _mp_newton(n, phi, psi, beta):
    w = [mpmath.expjpi(2 * mpmath.mpf(j) / n) for j in range(n)]
    ephi, epsi = mpmath.expj(phi), mpmath.expj(psi)
    x = [ephi * wj for wj in w] + [beta + epsi * wj for wj in w]
    d = [mpmath.mpf(1)] * n + [mpmath.mpf(0)] * n
    for k in range(1, len(x)):
        for i in range(len(x) - 1, k - 1, -1):
            d[i] = (d[i] - d[i - 1]) / (x[i] - x[i - k])
    return x, d


def _mp_eval(x, d, z):
    out = d[-1]
    for k in range(len(d) - 2, -1, -1):
        out = out * (z - x[k]) + d[k]
    return out


def check_symmetry_lemma(f: NodeFamily, z, dps: int = 40):
    """|p_{phi,psi}(z) + p_{psi+pi,phi+pi}(beta - z) - 1|.

    The interpolants reach ~1e14 on |z| = 2 beta for n = 12, so the sum is
    formed at ``dps`` decimal digits; double precision cannot resolve the
    identity to 1e-9 there.
    """
    scalar = np.ndim(z) == 0
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    with mpmath.workdps(dps):
        phi, psi, beta = mpmath.mpf(f.phi), mpmath.mpf(f.psi), mpmath.mpf(f.beta)
        xa, da = _mp_newton(f.n, phi, psi, beta)
        xb, db = _mp_newton(f.n, psi + mpmath.pi, phi + mpmath.pi, beta)
        res = []
        for zi in zs:
            zm = mpmath.mpc(zi.real, zi.imag)
            r = _mp_eval(xa, da, zm) + _mp_eval(xb, db, beta - zm) - 1
            res.append(float(abs(r)))
    res = np.array(res)
    return float(res[0]) if scalar else res

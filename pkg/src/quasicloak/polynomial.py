"""Polynomials in one complex variable.

Two representations are used by the rest of the package:

* ``ComplexPolynomial`` keeps coefficients in powers of ``(z - center)``,
  lowest degree first, and evaluates with Horner's scheme.
* ``NewtonPolynomial`` keeps the Newton divided-difference form of an
  interpolant. Its monomial coefficients are available for export, but
  evaluation goes through the nested Newton scheme, which stays accurate
  where the monomial expansion does not.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Sequence

import numpy as np

TRIM_RTOL = 1e-14


def _as_coeffs(coeffs: Iterable[complex]) -> np.ndarray:
    c = np.array(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                 dtype=complex).ravel()
    if c.size == 0:
        c = np.zeros(1, dtype=complex)
    c.setflags(write=False)
    return c


class ComplexPolynomial:
    """Polynomial ``sum_k coeffs[k] * (z - center)**k``.

    Instances are immutable; arithmetic returns new polynomials.
    """

    __slots__ = ("_coeffs", "_center")

    def __init__(self, coeffs: Iterable[complex], center: complex = 0.0):
        self._coeffs = _as_coeffs(coeffs)
        self._center = complex(center)

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def center(self) -> complex:
        return self._center

    @property
    def degree(self) -> int:
        """Degree after trimming trailing coefficients below 1e-14 * max|c|."""
        return len(self.trim().coeffs) - 1

    def trim(self, rtol: float = TRIM_RTOL) -> "ComplexPolynomial":
        c = self.coeffs
        scale = np.abs(c).max()
        if scale == 0.0:
            return ComplexPolynomial([0.0], self.center)
        keep = np.nonzero(np.abs(c) > rtol * scale)[0]
        return ComplexPolynomial(c[: keep[-1] + 1], self.center)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        s = z - self.center
        out = np.full(s.shape, self.coeffs[-1], dtype=complex)
        for c in self.coeffs[-2::-1]:
            out = out * s + c
        return out if out.ndim else complex(out)

    def recenter(self, center: complex) -> "ComplexPolynomial":
        """Same polynomial expanded in powers of ``(z - center)``.

        Exact Taylor shift via binomial sums; cancellation grows with
        ``|center - self.center| ** degree``.
        """
        center = complex(center)
        h = center - self.center
        c = self.coeffs
        deg = len(c) - 1
        out = np.zeros(deg + 1, dtype=complex)
        for k in range(deg + 1):
            for j in range(k, deg + 1):
                out[k] += c[j] * comb(j, k) * h ** (j - k)
        return ComplexPolynomial(out, center)

    def to_monomial(self) -> "ComplexPolynomial":
        if self.center == 0:
            return ComplexPolynomial(self.coeffs)
        return self.recenter(0.0)

    def derivative(self, order: int = 1) -> "ComplexPolynomial":
        c = self.coeffs
        for _ in range(order):
            if len(c) == 1:
                c = np.zeros(1, dtype=complex)
                break
            c = c[1:] * np.arange(1, len(c))
        return ComplexPolynomial(c, self.center)

    def compose_affine(self, a: complex, b: complex) -> "ComplexPolynomial":
        """Monomial coefficients of ``z -> self(a + b*z)``."""
        mono = self.to_monomial().coeffs
        out = np.zeros(1, dtype=complex)
        lin = np.array([a, b], dtype=complex)
        for c in mono[::-1]:
            out = np.convolve(out, lin)
            out[0] += c
        return ComplexPolynomial(out[: len(mono)])

    def _aligned(self, other: "ComplexPolynomial") -> tuple[np.ndarray, np.ndarray, complex]:
        if other.center != self.center:
            other = other.recenter(self.center)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return (np.pad(a, (0, n - len(a))), np.pad(b, (0, n - len(b))), self.center)

    def __add__(self, other):
        if not isinstance(other, ComplexPolynomial):
            c = self.coeffs.copy()
            c[0] += other
            return ComplexPolynomial(c, self.center)
        a, b, center = self._aligned(other)
        return ComplexPolynomial(a + b, center)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPolynomial(-self.coeffs, self.center)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ComplexPolynomial):
            return ComplexPolynomial(self.coeffs * other, self.center)
        if other.center != self.center:
            other = other.recenter(self.center)
        return ComplexPolynomial(np.convolve(self.coeffs, other.coeffs), self.center)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        centered = f", center={self.center!r}" if self.center else ""
        return f"{type(self).__name__}({self.coeffs.tolist()!r}{centered})"

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "ComplexPolynomial":
        c = np.array([lead], dtype=complex)
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        return cls(c)


def divided_differences(x: np.ndarray, f: np.ndarray) -> np.ndarray:
    d = np.array(f, dtype=complex)
    for k in range(1, len(x)):
        d[k:] = (d[k:] - d[k - 1:-1]) / (x[k:] - x[:-k])
    return d


def leja_order(x: np.ndarray) -> np.ndarray:
    """Permutation putting ``x`` in Leja order (largest modulus first)."""
    x = np.asarray(x, dtype=complex)
    n = len(x)
    order = [int(np.argmax(np.abs(x)))]
    logprod = np.zeros(n)
    for _ in range(n - 1):
        last = x[order[-1]]
        with np.errstate(divide="ignore"):
            logprod += np.log(np.abs(x - last))
        logprod[order] = -np.inf
        order.append(int(np.argmax(logprod)))
    return np.array(order)


class NewtonPolynomial(ComplexPolynomial):
    """Interpolant held in Newton form over Leja-ordered nodes."""

    __slots__ = ("nodes", "dd")

    def __init__(self, nodes: Sequence[complex], values: Sequence[complex]):
        x = np.asarray(nodes, dtype=complex)
        f = np.asarray(values, dtype=complex)
        perm = leja_order(x)
        self.nodes = x[perm]
        self.dd = divided_differences(self.nodes, f[perm])
        self.nodes.setflags(write=False)
        self.dd.setflags(write=False)
        super().__init__(self._monomial(), 0.0)

    def _monomial(self) -> np.ndarray:
        c = np.array([self.dd[-1]], dtype=complex)
        for k in range(len(self.dd) - 2, -1, -1):
            c = np.concatenate([[0.0], c]) - self.nodes[k] * np.concatenate([c, [0.0]])
            c[0] += self.dd[k]
        return c

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.full(z.shape, self.dd[-1], dtype=complex)
        for k in range(len(self.dd) - 2, -1, -1):
            out = out * (z - self.nodes[k]) + self.dd[k]
        return out if out.ndim else complex(out)

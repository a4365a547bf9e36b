import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasicloak.polynomial import ComplexPolynomial, NewtonPolynomial, divided_differences, leja_order

cplx = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


def test_horner_matches_polyval():
    c = np.array([1 - 2j, 0.5, 3j, -1])
    p = ComplexPolynomial(c)
    z = np.array([0.3 + 0.1j, -1.2, 2j])
    assert np.allclose(p(z), np.polynomial.polynomial.polyval(z, c))
    assert isinstance(p(0.5), complex)


def test_degree_trims_tiny_leading_terms():
    p = ComplexPolynomial([1, 2, 1e-20])
    assert p.degree == 1
    assert len(p.trim().coeffs) == 2


@given(st.lists(cplx, min_size=1, max_size=8), cplx, cplx)
@settings(max_examples=50, deadline=None)
def test_recenter_preserves_values(coeffs, center, z):
    p = ComplexPolynomial(coeffs)
    q = p.recenter(center)
    assert q.center == center
    assert abs(q(z) - p(z)) <= 1e-9 * (1 + np.sum(np.abs(coeffs)) * 10 ** len(coeffs))


def test_to_monomial_roundtrip():
    p = ComplexPolynomial([1, -1, 1], center=1.0)  # 1 - (w-1) + (w-1)^2
    m = p.to_monomial()
    assert np.allclose(m.coeffs, [3, -3, 1])


def test_derivative_and_affine():
    p = ComplexPolynomial([0, 0, 0, 1])  # z^3
    assert np.allclose(p.derivative().coeffs, [0, 0, 3])
    assert np.allclose(p.derivative(2).coeffs, [0, 6])
    q = p.compose_affine(1, 2)  # (1 + 2z)^3
    assert np.isclose(q(0.5), 8.0)


def test_arithmetic():
    p = ComplexPolynomial([1, 1])
    q = ComplexPolynomial([-1, 1])
    assert np.allclose((p * q).coeffs, [-1, 0, 1])
    assert np.allclose((p - q).trim().coeffs, [2])
    assert np.allclose((2 * p).coeffs, [2, 2])
    assert np.allclose((-p)(1.0), -2)


def test_from_roots():
    p = ComplexPolynomial.from_roots([1, -1, 2j])
    assert np.allclose(p(np.array([1, -1, 2j])), 0)


def test_divided_differences_quadratic():
    x = np.array([0.0, 1.0, 2.0])
    d = divided_differences(x, x ** 2)
    assert np.allclose(d, [0, 1, 1])


def test_leja_order_is_permutation():
    x = np.exp(2j * np.pi * np.arange(8) / 8)
    idx = leja_order(x)
    assert sorted(idx) == list(range(8))


def test_newton_interpolates_and_matches_monomial():
    x = np.exp(2j * np.pi * np.arange(6) / 6) * 0.9
    f = np.cos(x)
    p = NewtonPolynomial(x, f)
    assert np.allclose(p(x), f, atol=1e-13)
    z = np.array([0.1 + 0.2j, -0.3])
    assert np.allclose(p(z), ComplexPolynomial(p.coeffs)(z), atol=1e-12)


def test_newton_stable_for_many_nodes():
    # 2n = 32 nodes on two unit circles 2.5 apart; the monomial route fails here
    n, beta = 16, 2.5
    w = np.exp(2j * np.pi * np.arange(n) / n)
    x = np.concatenate([w, beta + w])
    p = NewtonPolynomial(x, np.r_[np.ones(n), np.zeros(n)])
    assert np.max(np.abs(p(x) - np.r_[np.ones(n), np.zeros(n)])) < 1e-8

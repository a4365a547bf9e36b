import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasicloak.lagrange import (DegenerateNodesError, NodeFamily, check_symmetry_lemma, p_phi_psi,
                                 p_phi_psi_closed, q_m_closed, q_m_product)


def test_nodes_on_two_circles():
    f = NodeFamily(5, 0.0, np.pi / 3, 4.0)
    x = f.nodes()
    assert np.allclose(np.abs(x[:5]), 1)
    assert np.allclose(np.abs(x[5:] - 4), 1)
    assert np.isclose(x[0], 1)
    assert np.isclose(x[5], 4 + np.exp(1j * np.pi / 3))


def test_interpolation_conditions():
    f = NodeFamily(10, np.pi / 10, -np.pi / 10, 4.0)
    p = p_phi_psi(f)
    assert np.max(np.abs(p(f.nodes()) - f.targets())) < 1e-10


def test_n1_is_linear():
    # nodes e^{i phi} -> 1 and beta + e^{i psi} -> 0
    f = NodeFamily(1, 0.0, 0.0, 4.0)
    p = p_phi_psi(f)
    assert np.isclose(p(1.0), 1) and np.isclose(p(5.0), 0)
    assert np.isclose(p(3.0), 0.5)


@given(st.integers(1, 8), st.floats(-np.pi, np.pi), st.floats(-np.pi, np.pi),
       st.integers(0, 7))
@settings(max_examples=40, deadline=None)
def test_closed_form_matches_product(n, phi, psi, m):
    m = m % n
    f = NodeFamily(n, phi, psi, 4.0)
    z = np.array([0.3 + 0.2j, 2.0 - 1j, 4.5 + 0.1j])
    a, b = q_m_closed(f, m, z), q_m_product(f, m, z)
    assert np.allclose(a, b, rtol=1e-9, atol=1e-12)


def test_closed_form_removable_point():
    f = NodeFamily(6, 0.2, 0.1, 4.0)
    xm = f.nodes()[2]
    assert np.isclose(q_m_closed(f, 2, xm), 1.0)
    assert np.isclose(q_m_closed(f, 2, xm + 1e-14), 1.0)


def test_sum_of_closed_q_is_interpolant():
    f = NodeFamily(7, 0.3, -0.4, 5.0)
    z = np.linspace(-1, 6, 9) + 0.3j
    assert np.allclose(p_phi_psi_closed(7, 0.3, -0.4, 5.0, z), p_phi_psi(f)(z), rtol=1e-9)


def test_symmetry_lemma_extended_precision():
    f = NodeFamily(12, 0.37, -1.1, 3.0)
    rng = np.random.default_rng(4)
    z = 6 * (rng.random(5) - 0.5) + 6j * (rng.random(5) - 0.5)
    assert np.max(check_symmetry_lemma(f, z)) < 1e-9


def test_partner_relation_float():
    f = NodeFamily(4, 0.2, 0.9, 4.0)
    p, q = p_phi_psi(f), p_phi_psi(f.partner())
    z = np.array([0.1, 1 + 1j, 3.3 - 0.2j])
    assert np.allclose(p(z) + q(4.0 - z), 1, atol=1e-9)


def test_degenerate_and_overlap():
    with pytest.raises(DegenerateNodesError), warnings.catch_warnings():
        warnings.simplefilter("ignore")
        p_phi_psi(NodeFamily(2, 0.0, np.pi, 2.0))  # node 1 = beta + e^{i pi}
    with pytest.warns(UserWarning):
        p_phi_psi(NodeFamily(3, 0.0, 0.5, 1.5))
    with pytest.raises(ValueError):
        NodeFamily(0, 0.0, 0.0, 4.0)
    with pytest.raises(IndexError):
        q_m_product(NodeFamily(3, 0, 0, 4.0), 3, 0.0)

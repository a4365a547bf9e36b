import numpy as np
import pytest

from quasicloak.ensemble import pbar_factorial
from quasicloak.geometry import CloakGeometry, InvertedGeometry, invert_geometry
from quasicloak.polynomial import ComplexPolynomial
from quasicloak.synthesis import (DeviceField, IncidentField, InfeasibleGeometryError, NCapReached,
                                  build_device, cloak_errors, find_n, five_point_laplacian,
                                  sup_bound_M, taylor_q0, tolerance_chain, w_tolerance)

FEASIBLE = CloakGeometry(a=1, p=8, delta=0.5, R=80)
FEASIBLE_2 = CloakGeometry(a=1, p=6, delta=0.5, R=50)
INFEASIBLE = CloakGeometry(a=1, p=4, delta=0.5, R=20)
U0_Z = IncidentField.from_coeffs([0, 1])


def test_taylor_q0_examples():
    q = taylor_q0(ComplexPolynomial([1]), 0.7, 5)
    assert np.allclose(q(np.array([0.5, 0.9 + 0.1j])), 1)
    q = taylor_q0(ComplexPolynomial([0, 1]), 1.0, 2)
    assert q.center == 1.0
    assert np.allclose(q.coeffs, [1, -1, 1])
    with pytest.raises(ValueError):
        taylor_q0(ComplexPolynomial([0, 1]), 1.0, -1)
    with pytest.raises(ValueError):
        taylor_q0(ComplexPolynomial([0, 1]), 0.0, 3)


def test_taylor_remainder_decays():
    U0 = ComplexPolynomial([0.3, 1, 0.5j])
    w = 1.0 + 0.4 * np.exp(2j * np.pi * np.arange(64) / 64)
    exact = U0(1 / w)
    rem = [np.max(np.abs(exact - taylor_q0(U0, 1.0, d)(w))) for d in (4, 8, 16, 32)]
    assert all(b < a for a, b in zip(rem, rem[1:]))
    assert rem[-1] < 1e-10


def test_sup_bound_M():
    ig = InvertedGeometry(alpha=0.1, beta=1.0, rho_obs=0.1, rho_dev=10.0)
    assert np.isclose(sup_bound_M(ComplexPolynomial([1]), ig), 1.0)
    assert np.isclose(sup_bound_M(ComplexPolynomial([0, 1]), ig), 1.1, rtol=1e-8)
    assert np.isclose(w_tolerance(1e-2, 2), 5e-3)


def test_device_field_basics():
    df = build_device(FEASIBLE, U0_Z, 12)
    with pytest.raises(ZeroDivisionError):
        df(0.0)
    zero = build_device(FEASIBLE, IncidentField.from_coeffs([0], inverted=True), 12)
    assert cloak_errors(zero) == (0.0, 0.0)
    # far field vanishes, cloaked disk is cancelled
    assert abs(df(1e4 + 3e3j)) < 1e-6
    z = FEASIBLE.p + 0.5 * FEASIBLE.a * np.exp(0.3j)
    assert abs(df(z) + z.real) < 1e-3


def test_exact_path_is_polynomial_for_linear_field():
    # with u0 = z the total field is z * p̄(1/z)
    df = build_device(FEASIBLE, U0_Z, 10, exact=True)
    ep = pbar_factorial(10, invert_geometry(FEASIBLE).beta)
    z = np.array([3 + 1j, -20 + 5j, 8.3])
    assert np.allclose(df.total_potential(z), z * ep(1 / z), rtol=1e-10, atol=1e-13)


@pytest.mark.parametrize("exact", [False, True])
def test_harmonic(exact):
    df = build_device(FEASIBLE, U0_Z, 12, exact=exact)
    rng = np.random.default_rng(11)
    z = (2 + 60 * rng.random(40)) * np.exp(2j * np.pi * rng.random(40))
    lap = five_point_laplacian(df, z)
    scale = np.maximum(np.abs(df(z)), 1e-3)
    assert np.all(np.abs(lap) < 1e-4 * scale * np.maximum(1, 1 / np.abs(z) ** 2) + 1e-6)


def test_errors_decrease_with_n():
    errs = np.array([cloak_errors(build_device(FEASIBLE, U0_Z, n)) for n in (4, 8, 16, 24)])
    assert np.all(np.diff(errs[:, 0]) < 0)
    assert np.all(np.diff(errs[:, 1]) < 0)


@pytest.mark.parametrize("g", [FEASIBLE, FEASIBLE_2])
def test_decay_rate_matches_ratio(g):
    ig = invert_geometry(g)
    rho_obs = 4 * ig.rho_obs * (ig.beta + ig.rho_obs) / ig.beta ** 2
    rho_clk = 4 * ig.alpha * (ig.beta + ig.alpha) / ig.beta ** 2
    ns = [8, 12, 16, 20, 24]
    for exact in (True, False):
        errs = np.array([cloak_errors(build_device(g, U0_Z, n, exact=exact)) for n in ns])
        slope_clk = np.polyfit(ns, np.log(errs[:, 1]), 1)[0]
        assert abs(slope_clk / np.log(rho_clk) - 1) < 0.25
        if exact:
            slope_obs = np.polyfit(ns, np.log(errs[:, 0]), 1)[0]
            assert abs(slope_obs / np.log(rho_obs) - 1) < 0.25


def test_tolerance_chain_consistent():
    for n in (8, 16):
        df = build_device(FEASIBLE, U0_Z, n)
        e = cloak_errors(df)
        chain = tolerance_chain(df)
        assert e.e_clk <= chain["bound_clk"] * (1 + 1e-6)
        assert e.e_obs <= chain["bound_obs"] * (1 + 1e-6)


def test_infeasible_does_not_converge():
    e8 = cloak_errors(build_device(INFEASIBLE, U0_Z, 8))
    e16 = cloak_errors(build_device(INFEASIBLE, U0_Z, 16))
    assert e16.e_clk > e8.e_clk


def test_find_n():
    n, errs = find_n(FEASIBLE, U0_Z, 1e9, n0=4)
    assert n == 4
    n, errs = find_n(FEASIBLE, U0_Z, 1e-2)
    assert max(errs) < 1e-2 and n in (4, 8, 16, 32, 64)
    with pytest.raises(InfeasibleGeometryError):
        find_n(INFEASIBLE, U0_Z, 1e-2)
    with pytest.raises(NCapReached):
        find_n(FEASIBLE, U0_Z, 1e-30, n_cap=16)


def test_incident_field_representations():
    with pytest.raises(ValueError):
        IncidentField()
    inv = IncidentField.from_coeffs([0, 1], inverted=True)  # Q0(w) = w, so U0(z) = 1/z
    assert np.isclose(inv.complex_potential(2.0), 0.5)
    assert np.isclose(U0_Z.in_inverted_plane(0.5), 2.0)

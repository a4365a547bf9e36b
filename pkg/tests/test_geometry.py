import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasicloak.geometry import (CloakGeometry, Disk, GeometryError, constraint_margins,
                                 feasibility_threshold, invert_geometry, kelvin,
                                 physical_from_inverted, validate_physical)


def test_invert_known_values():
    ig = invert_geometry(CloakGeometry(a=1, p=4, delta=0.5, R=20))
    assert math.isclose(ig.alpha, 1 / 15)
    assert math.isclose(ig.beta, 4 / 15)
    assert math.isclose(ig.rho_obs, 0.05)
    assert math.isclose(ig.rho_dev, 2.0)


def test_kelvin_maps_circle_to_circle():
    g = CloakGeometry(a=0.5, p=2.0, delta=0.2, R=10)
    ig = invert_geometry(g)
    w = kelvin(g.cloak_disk.boundary(256))
    assert np.allclose(np.abs(w - ig.beta), ig.alpha, atol=1e-13)


def test_kelvin_zero_raises():
    with pytest.raises(ZeroDivisionError):
        kelvin(0)


def test_threshold_value():
    assert math.isclose(feasibility_threshold(1.0), (math.sqrt(2) - 1) / 2)
    assert math.isclose(feasibility_threshold(1.0), 0.20710678118654752)


def test_margins_sign():
    feasible = invert_geometry(CloakGeometry(1, 8, 0.5, 80))
    assert min(constraint_margins(feasible)) > 0
    infeasible = invert_geometry(CloakGeometry(1, 4, 0.5, 20))
    assert constraint_margins(infeasible)[1] < 0


def test_validation_reports_and_raises():
    assert validate_physical(CloakGeometry(1, 1.2, 0.5, 20))
    with pytest.raises(GeometryError):
        validate_physical(CloakGeometry(-1, 4, 0.5, 20))
    with pytest.raises(GeometryError):
        invert_geometry(CloakGeometry(1, 1, 0.0001, 20))
    with pytest.raises(GeometryError):
        CloakGeometry.from_dict({"a": 1, "p": 4, "delta": 0.5})


def test_dict_roundtrip():
    g = CloakGeometry(1, 8, 0.5, 80)
    assert CloakGeometry.from_dict(g.to_dict()) == g


@given(st.floats(0.01, 1), st.floats(2, 10), st.floats(0.01, 0.5))
@settings(max_examples=60, deadline=None)
def test_inverse_roundtrip(alpha_frac, beta, rho_frac):
    alpha = alpha_frac * 0.4 * beta
    rho = rho_frac * 0.4 * beta
    g = physical_from_inverted(alpha, beta, rho, delta=1e-3)
    ig = invert_geometry(g)
    assert math.isclose(ig.alpha, alpha, rel_tol=1e-10)
    assert math.isclose(ig.beta, beta, rel_tol=1e-10)
    assert math.isclose(ig.rho_obs, rho, rel_tol=1e-12)


def test_disk_contains():
    d = Disk(1 + 1j, 0.5)
    assert d.contains(1.2 + 1j)
    assert not d.contains(0)

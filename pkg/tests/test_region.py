import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quasicloak.geometry import Disk, feasibility_threshold
from quasicloak.region import (Region, UnsupportedConfigurationError, boundary_polar,
                               convergence_ratio, disk_in_halfregion, disk_in_halfregion_sampled,
                               in_dbeta, limit_chi, peanut_curve)


def test_classification():
    assert in_dbeta(1.0, 0.1) is Region.INSIDE
    assert in_dbeta(1.0, 2.0) is Region.OUTSIDE
    assert in_dbeta(1.0, 0.5) is Region.BOUNDARY
    arr = in_dbeta(1.0, np.array([0.1, 2.0]))
    assert list(arr) == [Region.INSIDE, Region.OUTSIDE]


def test_limit_chi():
    assert limit_chi(1.0, 0.1) == 1
    assert limit_chi(1.0, 0.9) == 0
    assert limit_chi(1.0, 3.0) is None


def test_ratio():
    assert np.isclose(convergence_ratio(2.0, 1.0), 1.0)
    assert convergence_ratio(1.0, 0.0) == 0.0


@given(st.floats(0.1, 10), st.floats(-np.pi, np.pi))
@settings(max_examples=80, deadline=None)
def test_boundary_polar_on_curve(beta, theta):
    r = boundary_polar(beta, theta)
    z = r * np.exp(1j * theta)
    if r < beta / 2:
        assert abs(abs(z) * abs(z - beta) - beta ** 2 / 4) < 1e-10 * beta ** 2


def test_peanut_curve_points():
    theta, z = peanut_curve(1.0, 720)
    assert len(z) == 1440
    assert np.max(np.abs(np.abs(z) * np.abs(z - 1) - 0.25)) < 1e-10
    assert np.isclose(np.min(np.abs(z[:720])), feasibility_threshold(1.0))


@pytest.mark.parametrize("side,center", [("origin", 0.0), ("beta", 1.0)])
def test_threshold_sharp(side, center):
    t = feasibility_threshold(1.0)
    assert disk_in_halfregion(1.0, Disk(center, 0.99 * t), side)
    assert not disk_in_halfregion(1.0, Disk(center, 1.01 * t), side)
    assert disk_in_halfregion_sampled(1.0, Disk(center, 0.99 * t), side)
    assert not disk_in_halfregion_sampled(1.0, Disk(center, 1.01 * t), side)


def test_unsupported_center():
    with pytest.raises(UnsupportedConfigurationError):
        disk_in_halfregion(1.0, Disk(0.1, 0.05), "origin")
    with pytest.raises(ValueError):
        in_dbeta(-1.0, 0.0)

"""Explicit quasistatic active exterior cloak in two dimensions.

The pipeline inverts the cloak geometry with w = 1/z, builds the ensemble
average of Lagrange interpolants that is close to 1 near the origin and to 0
near beta, and turns it into a device field that cancels a known incident
field on the cloaked disk while staying small far away.
"""

from .ensemble import (EnsemblePolynomial, PrecisionError, flat_radius, pbar_deviation,
                       pbar_factorial, pbar_quadrature, pbar_series)
from .geometry import (CloakGeometry, Disk, GeometryError, InvertedGeometry, constraint_margins,
                       feasibility_threshold, invert_geometry, kelvin, physical_from_inverted)
from .lagrange import NodeFamily, p_phi_psi
from .polynomial import ComplexPolynomial, NewtonPolynomial
from .region import Region, boundary_polar, disk_in_halfregion, in_dbeta, peanut_curve
from .scatterer import ScattererSpec, solve_scattering
from .synthesis import (DeviceField, IncidentField, build_device, cloak_errors, find_n,
                        taylor_q0)

__version__ = "0.1.0"

__all__ = [
    "CloakGeometry", "ComplexPolynomial", "DeviceField", "Disk", "EnsemblePolynomial",
    "GeometryError", "IncidentField", "InvertedGeometry", "NewtonPolynomial", "NodeFamily",
    "PrecisionError", "Region", "ScattererSpec", "boundary_polar", "build_device",
    "cloak_errors", "constraint_margins", "disk_in_halfregion", "feasibility_threshold",
    "find_n", "flat_radius", "in_dbeta", "invert_geometry", "kelvin", "p_phi_psi",
    "pbar_deviation", "pbar_factorial", "pbar_quadrature", "pbar_series", "peanut_curve",
    "physical_from_inverted", "solve_scattering", "taylor_q0",
]

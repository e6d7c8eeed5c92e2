from .spray import (HOMOGENEITY_SCALARS, Spray, SpraySolution, geodesic_spray,
                    solve_spray, validate_homogeneity)
from .maps import (ConvergenceError, RadiusProbe, estimate_normal_radius,
                   exp_jacobian, exp_map, log_map)
from .piecewise import Leg, PiecewisePath, PiecewiseSolution, piecewise_solve
from .rays import RayTransport, geodesic_ray

__all__ = [
    "HOMOGENEITY_SCALARS", "Spray", "SpraySolution", "geodesic_spray",
    "solve_spray", "validate_homogeneity", "ConvergenceError", "RadiusProbe",
    "estimate_normal_radius", "exp_jacobian", "exp_map", "log_map", "Leg",
    "PiecewisePath", "PiecewiseSolution", "piecewise_solve", "RayTransport",
    "geodesic_ray"
]

from .problem import AffineMapGrid, CahProblem
from .relates import (RELATES_TOL, cah_distribution, check_relates,
                      higher_order_cah_check, levi_form_hom, pull_slots,
                      relatedness_residual, sigma_names)
from .construction import (AFFINE_TOL, RAY_TIMES, AffineReport, InducedRay,
                           SymmetryReport, affine_residual,
                           affine_symmetry_check, cah_map, involution_residual,
                           horizontality_residuals, induced_geodesic_and_sigma,
                           induced_ray, relates_at)

__all__ = [
    "AffineMapGrid", "CahProblem", "RELATES_TOL", "cah_distribution",
    "check_relates", "higher_order_cah_check", "levi_form_hom", "pull_slots",
    "relatedness_residual", "sigma_names", "AFFINE_TOL", "RAY_TIMES",
    "AffineReport", "InducedRay", "SymmetryReport", "affine_residual",
    "affine_symmetry_check", "cah_map", "involution_residual",
    "horizontality_residuals",
    "induced_geodesic_and_sigma", "induced_ray", "relates_at"
]

from .seed import (DEGENERACY_TOL, SYMMETRY_TOL, MetricGrid, MetricSeed,
                   signature)
from .recovery import (HYPOTHESIS_TOL, HypothesisError, HypothesisReport,
                       LeviCivitaReport, antisymmetry_defect,
                       check_antisymmetry_hypothesis,
                       higher_order_metric_check,
                       metric_compatibility_residuals, pulled_back_curvature,
                       recover_metric, transport_metric_along_ray,
                       verify_levi_civita)

__all__ = [
    "DEGENERACY_TOL", "SYMMETRY_TOL", "MetricGrid", "MetricSeed", "signature",
    "HYPOTHESIS_TOL", "HypothesisError", "HypothesisReport",
    "LeviCivitaReport", "antisymmetry_defect", "check_antisymmetry_hypothesis",
    "higher_order_metric_check", "metric_compatibility_residuals",
    "pulled_back_curvature", "recover_metric", "transport_metric_along_ray",
    "verify_levi_civita"
]

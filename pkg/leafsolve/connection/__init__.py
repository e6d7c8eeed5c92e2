from .bundle import (BundleConnection, NonSymmetricConnectionError,
                     NotTangentError, expr_array, map_exprs, parse_entries,
                     zeros)
from .tensors import (FIBER_RANKS, TensorFieldExpr, covariant_derivative_tensor,
                      covariant_derivatives, fiber_action, nabla)
from .curvature import (check_symmetric, covariant_derivative, curvature,
                        iota_torsion, torsion)
from .transport import (ParametrizedCurve, parallel_transport,
                        transport_basis, transport_matrix)
from .induced import (bilinear_connection, dual_connection, hom_connection,
                      horizontal_distribution, pullback_connection)
from .obstructions import (OBSTRUCTION_TOL, ObstructionReport, OrderCheck,
                           largest_entry, parallel_section_obstructions)

__all__ = [
    "BundleConnection", "NonSymmetricConnectionError", "NotTangentError",
    "expr_array", "map_exprs", "parse_entries", "zeros", "FIBER_RANKS",
    "TensorFieldExpr", "covariant_derivative_tensor", "covariant_derivatives",
    "fiber_action", "nabla", "check_symmetric", "covariant_derivative",
    "curvature", "iota_torsion", "torsion", "ParametrizedCurve",
    "parallel_transport", "transport_basis", "transport_matrix",
    "bilinear_connection", "dual_connection", "hom_connection",
    "horizontal_distribution", "pullback_connection", "OBSTRUCTION_TOL",
    "ObstructionReport", "OrderCheck", "largest_entry",
    "parallel_section_obstructions"
]

from .fields import Box, OutsideDomainError, VectorFieldExpr, lie_bracket
from .grid import SampleGrid, grid_derivatives
from .ode import ChartExitError, CurveSolution, integrate_ode
from .oracles import (FIRST_ORDER_H, NESTED_H, finite_diff_jacobian, flow,
                      flow_commutator_oracle)

__all__ = [
    "Box", "OutsideDomainError", "VectorFieldExpr", "lie_bracket", "SampleGrid", "grid_derivatives",
    "ChartExitError", "CurveSolution", "integrate_ode", "FIRST_ORDER_H",
    "NESTED_H", "finite_diff_jacobian", "flow", "flow_commutator_oracle"
]

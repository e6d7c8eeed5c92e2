from .graph import GraphDistribution
from .levi import LeviTensor, levi_form, levi_tensor
from .tde import (LeafGrid, LeafReport, check_leaf, horizontal_lift_ray,
                  leaf_residuals, solve_tde)
from .brackets import (BracketDefect, BracketReport,
                       iterated_bracket_obstructions)

__all__ = [
    "GraphDistribution", "LeviTensor", "levi_form", "levi_tensor", "LeafGrid",
    "LeafReport", "check_leaf", "horizontal_lift_ray", "leaf_residuals",
    "solve_tde", "BracketDefect", "BracketReport",
    "iterated_bracket_obstructions"
]

import numpy as np

from dataclasses import dataclass
from typing import Sequence

from ..expr import DEFAULT_BUDGET, BudgetExceededError, CompiledExprs, check_budget
from ..geometry import VectorFieldExpr, lie_bracket
from ..loggers import Logger
from .graph import GraphDistribution

BRACKET_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BracketDefect:
    """
    The vertical defect w − F(v) at the base point of the iterated bracket
    [X̃_{i_1}, [..., [X̃_{i_s}, X̃_{i_{s+1}}]...]] of order `s`. Indices are
    1-based.
    """

    order: int
    multi_index: tuple[int, ...]
    defect: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.defect))) if self.defect.size else 0.0


@dataclass(frozen=True, eq=False)
class BracketReport:
    entries: list[BracketDefect]
    completed_order: int
    tol: float = BRACKET_TOL
    budget_message: str | None = None

    @property
    def obstructions(self) -> list[BracketDefect]:
        """
        The entries with a defect above the tolerance.
        """
        return [entry for entry in self.entries if entry.norm > self.tol]

    @property
    def passed(self) -> bool:
        return not self.obstructions

    def max_defect(self, order: int | None = None) -> float:
        norms = [
            entry.norm for entry in self.entries
            if order is None or entry.order == order
        ]
        return max(norms, default=0.0)


def iterated_bracket_obstructions(D: GraphDistribution,
                                  e0: Sequence[float] | np.ndarray,
                                  max_order: int,
                                  tol: float = BRACKET_TOL,
                                  budget: int = DEFAULT_BUDGET,
                                  logger: Logger | None = None,
                                  strict: bool = False) -> BracketReport:
    """
    Evaluates the iterated brackets of the frame fields X̃_i = (e_i, F(e_i))
    at `e0` up to `max_order` and returns their vertical defects.

    Order 1 holds the brackets [X̃_i, X̃_j] for `i < j`; order `s + 1` brackets
    every frame field with each bracket of order `s`. All defects below `tol`
    at every order is the finite-order integrability condition at `e0`.

    Parameters
    ---
    - `D` (`GraphDistribution`): The distribution.
    - `e0` (`Sequence[float]`): A point of `D.domain`.
    - `max_order` (`int`): The deepest bracket order, at least 1.
    - `tol` (`float`): Defects at or below this norm are treated as zero.
    - `budget` (`int`): The expression budget in tree nodes per order.
    - `logger` (`Logger | None`): Receives one record per bracket.
    - `strict` (`bool`): Raise `BudgetExceededError` instead of returning
      the orders completed before the budget ran out.

    Returns
    ---
    - The `BracketReport`; its `completed_order` is below `max_order` only
      when the budget stopped the computation.
    """
    assert max_order >= 1, (
        f"Expected `max_order` to be at least 1, but found: {max_order}")

    D.domain.require(e0, "e0")
    e0 = np.asarray(e0, dtype=np.float64)

    frames = [D.frame_field(i) for i in range(D.k)]
    entries: list[BracketDefect] = []

    layer: list[tuple[tuple[int, ...], VectorFieldExpr]] = [
        ((i + 1, j + 1), lie_bracket(frames[i], frames[j]))
        for i in range(D.k) for j in range(i + 1, D.k)
    ]

    for order in range(1, max_order + 1):
        if order > 1:
            layer = [((i + 1, ) + index, lie_bracket(frames[i], bracket))
                     for index, bracket in layer for i in range(D.k)]

        defects = [D.vertical_defect(bracket) for _, bracket in layer]
        try:
            check_budget([entry for row in defects for entry in row], budget,
                         order, entries)
        except BudgetExceededError as e:
            if strict:
                raise
            return BracketReport(entries, order - 1, tol, str(e))

        if layer:
            values = CompiledExprs([entry for row in defects for entry in row],
                                   D.coordinates)(e0).reshape(len(layer), D.m)
        else:
            values = np.zeros((0, D.m))

        for (index, _), value in zip(layer, values):
            entry = BracketDefect(order, index, value)
            entries.append(entry)
            if logger is not None:
                logger.log_step({
                    "order": order,
                    "multi_index": list(index),
                    "defect": value.tolist(),
                    "obstructed": entry.norm > tol,
                })

    return BracketReport(entries, max_order, tol, None)

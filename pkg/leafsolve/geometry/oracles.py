"""
Numeric oracles used to cross-check symbolic formulas independently.
"""
import numpy as np

from typing import Callable

from .fields import Box, VectorFieldExpr
from .ode import integrate_ode

FIRST_ORDER_H = 1e-5
NESTED_H = 1e-4


def finite_diff_jacobian(function: Callable[[np.ndarray], np.ndarray],
                         point: np.ndarray,
                         h: float = FIRST_ORDER_H) -> np.ndarray:
    """
    Central-difference Jacobian of `function` at `point`.

    Parameters
    ---
    - `function` (`Callable[[numpy.ndarray], numpy.ndarray]`): A map from
      R^p to R^q.
    - `point` (`numpy.ndarray`): The point of shape `(p,)`.
    - `h` (`float`): The stencil half width.

    Returns
    ---
    - The `(q, p)` Jacobian matrix. Evaluation failures on the stencil
      propagate to the caller.
    """
    assert h > 0, f"Expected a positive `h`, but found: {h}"

    point = np.asarray(point, dtype=np.float64)
    columns = []
    for j in range(len(point)):
        offset = np.zeros_like(point)
        offset[j] = h
        forward = np.atleast_1d(function(point + offset))
        backward = np.atleast_1d(function(point - offset))
        columns.append((forward - backward) / (2 * h))

    return np.stack(columns, axis=-1)


def flow(field: VectorFieldExpr,
         point: np.ndarray,
         t: float,
         steps: int = 16,
         domain: Box | None = None) -> np.ndarray:
    """
    The time-`t` flow of `field` starting at `point`.
    """
    compiled = field.compiled
    solution = integrate_ode(lambda _, y: compiled(y),
                             point, (0.0, t),
                             abs(t) / steps if t else 1.0,
                             inside=domain.contains if domain else None)
    return solution.end.copy()


def flow_commutator_oracle(V: VectorFieldExpr,
                           W: VectorFieldExpr,
                           point: np.ndarray,
                           t: float = 1e-3,
                           domain: Box | None = None) -> np.ndarray:
    """
    Approximates [V, W](point) by the flow commutator

        (Φ^W_{-t} ∘ Φ^V_{-t} ∘ Φ^W_t ∘ Φ^V_t (point) − point) / t²

    with an error of order `t`. A `ChartExitError` is raised when one of the
    flows leaves `domain`.
    """
    point = np.asarray(point, dtype=np.float64)
    q = flow(V, point, t, domain=domain)
    q = flow(W, q, t, domain=domain)
    q = flow(V, q, -t, domain=domain)
    q = flow(W, q, -t, domain=domain)
    return (q - point) / (t * t)

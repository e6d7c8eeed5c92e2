import numpy as np

from dataclasses import dataclass, field
from typing import Sequence

from ..expr import DEFAULT_BUDGET, BudgetExceededError
from .bundle import BundleConnection
from .curvature import curvature
from .tensors import covariant_derivatives

OBSTRUCTION_TOL = 1e-9


@dataclass(frozen=True)
class OrderCheck:
    """
    The largest residual found at one derivative order, with the 0-based
    component index where it was attained.
    """

    order: int
    residual: float
    witness: tuple[int, ...] | None = None
    label: str = ""


@dataclass(frozen=True, eq=False)
class ObstructionReport:
    checks: list[OrderCheck]
    tol: float
    completed_order: int
    budget_message: str | None = None
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.budget_message is None and all(
            np.isfinite(check.residual) and check.residual < self.tol
            for check in self.checks)

    @property
    def max_residual(self) -> float:
        return max((check.residual for check in self.checks), default=0.0)

    @property
    def first_failure(self) -> OrderCheck | None:
        for check in self.checks:
            if not check.residual < self.tol:
                return check
        return None

    def residuals(self, label: str | None = None) -> list[float]:
        return [
            check.residual for check in self.checks
            if label is None or check.label == label
        ]


def largest_entry(values: np.ndarray) -> tuple[float, tuple[int, ...] | None]:
    """
    The largest absolute entry of `values` and its index.
    """
    if values.size == 0:
        return 0.0, None
    flat = int(np.argmax(np.abs(values)))
    index = tuple(int(i) for i in np.unravel_index(flat, values.shape))
    return float(np.abs(values[index])), index


def parallel_section_obstructions(conn: BundleConnection,
                                  x0: Sequence[float] | np.ndarray,
                                  xi: Sequence[float] | np.ndarray,
                                  max_order: int,
                                  tangent_conn: BundleConnection | None = None,
                                  tol: float = OBSTRUCTION_TOL,
                                  budget: int = DEFAULT_BUDGET
                                  ) -> ObstructionReport:
    """
    Evaluates (∇^k R)(u_1, ..., u_k, v, w) ξ at `x0` for `k = 0..max_order`
    over all basis tuples. All residuals below `tol` is the finite-order
    condition for a parallel section through ξ at `x0`.

    Parameters
    ---
    - `conn` (`BundleConnection`): The connection on the bundle.
    - `x0` (`Sequence[float]`): The base point.
    - `xi` (`Sequence[float]`): The fiber vector at `x0`.
    - `max_order` (`int`): The deepest derivative order.
    - `tangent_conn` (`BundleConnection | None`): The tangent connection for
      the covariant slots; the standard flat connection by default.
    - `tol` (`float`): The residual tolerance.
    - `budget` (`int`): The expression budget per order.
    """
    conn.domain.require(x0, "x0")
    xi = np.asarray(xi, dtype=np.float64)
    assert xi.shape == (conn.r, ), (
        f"Expected `xi` of shape ({conn.r},), but found shape: {xi.shape}")

    tangent_conn = tangent_conn or BundleConnection.flat(
        conn.domain, coordinates=conn.coordinates)

    message = None
    try:
        derivatives = covariant_derivatives(tangent_conn, conn,
                                            curvature(conn), max_order, budget)
    except BudgetExceededError as e:
        derivatives, message = e.partial, str(e)

    checks = []
    for k, derivative in enumerate(derivatives):
        values = derivative.at(x0) @ xi
        residual, witness = largest_entry(values)
        checks.append(OrderCheck(k, residual, witness, "nabla^k R xi"))

    return ObstructionReport(checks, tol, len(derivatives) - 1, message)

"""
Recovery of a metric from a symmetric connection: g0 at the base point is
carried along the radial geodesics by parallel transport,
g_m = (P⁻¹)ᵀ g0 P⁻¹, after checking that the transported curvature is
g0-antisymmetric.
"""
import numpy as np

from dataclasses import dataclass
from typing import Any, Sequence

from ..connection import (OBSTRUCTION_TOL, BundleConnection,
                          ObstructionReport, OrderCheck, check_symmetric,
                          covariant_derivatives, curvature, largest_entry,
                          torsion)
from ..expr import DEFAULT_BUDGET, BudgetExceededError
from ..geometry import ChartExitError, SampleGrid, grid_derivatives
from ..loggers import Logger
from ..spray import (ConvergenceError, RayTransport, geodesic_ray,
                     geodesic_spray, log_map)
from ..utils import parallel_map
from .seed import MetricGrid, MetricSeed

HYPOTHESIS_TOL = 1e-7
HYPOTHESIS_TIMES = (0.0, 0.25, 0.5, 0.75, 1.0)
CONDITION_WARNING = 1e6


class HypothesisError(RuntimeError):
    """
    Raised by `recover_metric` when the transported curvature is not
    g0-antisymmetric on the rays it uses. `report` holds the failing check.
    """

    def __init__(self, message: str, report: "HypothesisReport") -> None:
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class HypothesisReport:
    residual: float
    tol: float
    samples: int

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual < self.tol)


def antisymmetry_defect(g0: np.ndarray, operators: np.ndarray) -> float:
    """
    max ‖g0 A + Aᵀ g0‖_∞ over a stack of operators A (last two axes).
    """
    if operators.size == 0:
        return 0.0
    defect = g0 @ operators + np.swapaxes(operators, -1, -2) @ g0
    return float(np.max(np.abs(defect)))


def pulled_back_curvature(R: np.ndarray, P: np.ndarray) -> np.ndarray:
    """
    The operators A_{kl} = P⁻¹ R(P e_k, P e_l) P from curvature values
    `R[i, j, a, b]` at the end of a ray with transport matrix P.
    """
    RP = np.einsum("ijab,ik,jl->klab", R, P, P)
    return np.linalg.solve(P, RP @ P)


def _ray_hypothesis(conn: BundleConnection, ray: RayTransport,
                    g0: np.ndarray,
                    times: Sequence[float] = HYPOTHESIS_TIMES) -> float:
    R = curvature(conn)
    worst = 0.0
    for t in times:
        point = ray.geodesic.position(t)
        A = pulled_back_curvature(R.at(point), ray.matrix(t))
        worst = max(worst, antisymmetry_defect(g0, A))
    return worst


def check_antisymmetry_hypothesis(conn: BundleConnection,
                                  seed: MetricSeed,
                                  directions: Sequence[Sequence[float]] | np.ndarray | None = None,
                                  radius: float = 0.5,
                                  times: Sequence[float] = HYPOTHESIS_TIMES,
                                  step: float = 1e-3,
                                  tol: float = HYPOTHESIS_TOL
                                  ) -> HypothesisReport:
    """
    Checks that the curvature transported back to the base point,
    (u, v) ↦ P⁻¹ R(P u, P v) P, is g0-antisymmetric along radial geodesics.

    Parameters
    ---
    - `conn` (`BundleConnection`): A symmetric tangent connection.
    - `seed` (`MetricSeed`): The base point and g0.
    - `directions` (`Sequence[Sequence[float]] | None`): Initial velocities of
      the rays; by default ±`radius` along every axis.
    - `radius` (`float`): The length of the default rays.
    - `times` (`Sequence[float]`): The sampled parameters along each ray.
    - `step` (`float`): The integration step.
    - `tol` (`float`): The pass threshold.

    Raises
    ---
    - `NonSymmetricConnectionError` when the connection has torsion.
    - `ChartExitError` when a ray leaves the chart.
    """
    conn.require_tangent()
    check_symmetric(conn)
    conn.domain.require(seed.base_point, "base_point")

    if directions is None:
        eye = np.eye(conn.n)
        directions = radius * np.concatenate([eye, -eye])

    spray = geodesic_spray(conn)
    worst = 0.0
    count = 0
    for direction in np.asarray(directions, dtype=np.float64):
        ray = geodesic_ray(conn, seed.base_point, direction, step, spray)
        worst = max(worst, _ray_hypothesis(conn, ray, seed.g0, times))
        count += len(times)

    return HypothesisReport(worst, tol, count)


def metric_compatibility_residuals(conn: BundleConnection, grid: SampleGrid,
                                   values: np.ndarray) -> np.ndarray:
    """
    ‖∇̂g‖_∞ at every grid node, with

        (∇̂g)_{k,ij} = ∂_k g_ij − Γ^c_{ki} g_cj − Γ^c_{kj} g_ic

    and ∂g taken by grid differences. NaN where g is unavailable.
    """
    derivatives = grid_derivatives(values, grid)
    points = grid.points()
    residual = np.full(grid.shape, np.nan)

    for index in grid.indices():
        dg = derivatives[index]
        g = values[index]
        if not (np.all(np.isfinite(dg)) and np.all(np.isfinite(g))):
            continue
        try:
            gamma = conn.omega_at(points[index])
        except ArithmeticError:
            continue
        nabla_g = (dg - np.einsum("kci,cj->kij", gamma, g) -
                   np.einsum("kcj,ic->kij", gamma, g))
        residual[index] = np.max(np.abs(nabla_g))

    return residual


def recover_metric(conn: BundleConnection,
                   seed: MetricSeed,
                   grid: SampleGrid,
                   step: float = 1e-3,
                   override: bool = False,
                   tol: float = HYPOTHESIS_TOL,
                   workers: int | None = None,
                   logger: Logger | None = None) -> MetricGrid:
    """
    Recovers the metric with Levi-Civita connection `conn` from its value at
    the base point.

    For every grid node m, v = log_{m0}(m), the basis is transported along
    t ↦ exp_{m0}(t v), and g_m = (P⁻¹)ᵀ g0 P⁻¹. The anchor node holds g0
    exactly. Along each ray the transported curvature is checked for
    g0-antisymmetry.

    Parameters
    ---
    - `conn` (`BundleConnection`): A symmetric tangent connection.
    - `seed` (`MetricSeed`): The base point (the middle grid node) and g0.
    - `grid` (`SampleGrid`): The sample grid.
    - `step` (`float`): The integration step.
    - `override` (`bool`): Recover even when the antisymmetry check fails.
    - `tol` (`float`): The antisymmetry threshold.
    - `workers` (`int | None`): Number of parallel workers.
    - `logger` (`Logger | None`): Receives one record per grid node.

    Returns
    ---
    - The `MetricGrid`. Nodes outside the normal neighborhood (no log
      convergence or a chart exit) are flagged unreachable.

    Raises
    ---
    - `NonSymmetricConnectionError` when the connection has torsion.
    - `HypothesisError` when the antisymmetry check fails and not
      `override`.
    """
    conn.require_tangent()
    check_symmetric(conn)
    assert seed.n == conn.n and grid.dim == conn.n, (
        f"Expected a seed and a grid of dimension {conn.n}, but found: "
        f"{seed.n} and {grid.dim}")
    assert np.array_equal(grid.center, seed.base_point), (
        "Expected the base point to be the middle grid node")
    conn.domain.require(seed.base_point, "base_point")

    spray = geodesic_spray(conn)
    m0, g0 = seed.base_point, seed.g0
    n = conn.n

    def recover(index: tuple[int, ...]
                ) -> tuple[np.ndarray, float, float, str | None]:
        if index == grid.anchor:
            A = pulled_back_curvature(curvature(conn).at(m0), np.eye(n))
            return g0.copy(), antisymmetry_defect(g0, A), 1.0, None

        point = grid.point(index)
        try:
            v = log_map(spray, m0, point, step)
            ray = geodesic_ray(conn, m0, v, step, spray)
        except (ConvergenceError, ChartExitError) as e:
            return np.full((n, n), np.nan), float("nan"), float("nan"), str(e)

        P = ray.matrix()
        P_inv = np.linalg.inv(P)
        return (P_inv.T @ g0 @ P_inv, _ray_hypothesis(conn, ray, g0),
                float(np.linalg.cond(P)), None)

    indices = list(grid.indices())
    results = parallel_map(recover, indices, workers)

    values = np.empty(grid.shape + (n, n))
    hypothesis = np.empty(grid.shape)
    conditioning = np.empty(grid.shape)
    reachable = np.ones(grid.shape, dtype=bool)
    failures: dict[tuple[int, ...], str] = {}

    for index, (g, defect, condition, failure) in zip(indices, results):
        values[index] = g
        hypothesis[index] = defect
        conditioning[index] = condition
        if failure is not None:
            reachable[index] = False
            failures[index] = failure

    finite = hypothesis[np.isfinite(hypothesis)]
    report = HypothesisReport(float(np.max(finite)) if finite.size else 0.0,
                              tol, int(finite.size))
    if not override and not report.passed:
        raise HypothesisError(
            f"The transported curvature is not g0-antisymmetric (residual "
            f"{report.residual})", report)

    residual = metric_compatibility_residuals(conn, grid, values)

    if logger is not None:
        for index in indices:
            logger.log_step(_node_record(grid, index, values, residual,
                                         hypothesis, conditioning, failures))

    return MetricGrid(grid, seed, values, residual, hypothesis, reachable,
                      failures, conditioning)


def _node_record(grid: SampleGrid, index: tuple[int, ...], values: np.ndarray,
                 residual: np.ndarray, hypothesis: np.ndarray,
                 conditioning: np.ndarray,
                 failures: dict[tuple[int, ...], str]) -> dict[str, Any]:
    record = {
        "index": list(index),
        "x": grid.point(index).tolist(),
        "g": values[index].reshape(-1).tolist(),
        "nabla_g_residual": float(residual[index]),
        "hypothesis_residual": float(hypothesis[index]),
        "failure": failures.get(index),
    }
    if conditioning[index] > CONDITION_WARNING:
        record["ill_conditioned"] = True
    return record


@dataclass(frozen=True)
class LeviCivitaReport:
    torsion_residual: float
    nabla_g_residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.torsion_residual < self.tol
                    and self.nabla_g_residual < self.tol)


def verify_levi_civita(conn: BundleConnection, metric: MetricGrid,
                       tol: float) -> LeviCivitaReport:
    """
    Checks that `conn` is the Levi-Civita connection of the sampled metric:
    torsion free at every reachable node and ∇̂g = 0 up to `tol`.
    """
    T = torsion(conn)
    points = metric.grid.points()
    torsion_residual = 0.0
    for index in metric.grid.indices():
        if metric.reachable[index]:
            torsion_residual = max(
                torsion_residual,
                float(np.max(np.abs(T.at(points[index])))))

    residual = metric_compatibility_residuals(conn, metric.grid, metric.values)
    mask = metric.reachable & np.isfinite(residual)
    nabla_g = float(np.max(residual[mask])) if mask.any() else float("nan")

    return LeviCivitaReport(torsion_residual, nabla_g, tol)


def higher_order_metric_check(conn: BundleConnection,
                              seed: MetricSeed,
                              max_order: int = 4,
                              tol: float = OBSTRUCTION_TOL,
                              budget: int = DEFAULT_BUDGET
                              ) -> ObstructionReport:
    """
    For k = 0..`max_order`, the largest g0-antisymmetry defect
    ‖g0 A + Aᵀ g0‖ of the operators A = (∇^k R)(u_1, ..., u_k, v, w) at the
    base point, over all basis tuples.

    Raises
    ---
    - `NonSymmetricConnectionError` when the connection has torsion.
    """
    conn.require_tangent()
    check_symmetric(conn)
    conn.domain.require(seed.base_point, "base_point")

    message = None
    try:
        derivatives = covariant_derivatives(conn, conn, curvature(conn),
                                            max_order, budget)
    except BudgetExceededError as e:
        derivatives, message = e.partial, str(e)

    g0 = seed.g0
    checks = []
    for k, derivative in enumerate(derivatives):
        A = derivative.at(seed.base_point)
        residual, witness = largest_entry(g0 @ A +
                                          np.swapaxes(A, -1, -2) @ g0)
        checks.append(OrderCheck(k, residual, witness, "g0-antisymmetry"))

    return ObstructionReport(checks, tol, len(derivatives) - 1, message)


def transport_metric_along_ray(conn: BundleConnection,
                               seed: MetricSeed,
                               direction: Sequence[float] | np.ndarray,
                               times: Sequence[float],
                               step: float = 1e-3
                               ) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """
    The transport law along one ray: for each t, the point ψ(t), the
    transport matrix P_t and g_t = (P_t⁻¹)ᵀ g0 P_t⁻¹, so that
    g_t(P_t u, P_t v) = g0(u, v).
    """
    ray = geodesic_ray(conn, seed.base_point, direction, step)
    result = []
    for t in times:
        P = ray.matrix(t)
        P_inv = np.linalg.inv(P)
        result.append((ray.geodesic.position(t), P, P_inv.T @ seed.g0 @ P_inv))
    return result

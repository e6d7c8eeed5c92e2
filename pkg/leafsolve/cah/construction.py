"""
The local affine-map construction: radial geodesics of the source are sent
to the induced geodesics of the target, and the differential is carried
along both by parallel transport,

    f(x) = μ_x(1),   σ_x = P^N σ0 (P^M)⁻¹.
"""
import numpy as np

from dataclasses import dataclass
from typing import Any, Sequence

from ..connection import (OBSTRUCTION_TOL, BundleConnection, ObstructionReport,
                          OrderCheck, covariant_derivatives, curvature,
                          largest_entry, torsion)
from ..expr import DEFAULT_BUDGET, BudgetExceededError
from ..geometry import ChartExitError, SampleGrid, grid_derivatives
from ..loggers import Logger
from ..spray import (ConvergenceError, RayTransport, SpraySolution,
                     geodesic_ray, log_map)
from ..utils import parallel_map
from .problem import AffineMapGrid, CahProblem
from .relates import check_relates

RAY_TIMES = (0.0, 0.25, 0.5, 0.75, 1.0)
AFFINE_TOL = 1e-5


@dataclass(frozen=True, eq=False)
class InducedRay:
    """
    The radial geodesic γ(t) = exp_{x0}(t v) with its basis transport, and
    the induced geodesic μ(t) = exp_{y0}(t σ0 v) with its basis transport.
    """

    v: np.ndarray
    source: RayTransport
    target: RayTransport
    sigma0: np.ndarray

    def sigma_at(self, t: float | None = None) -> np.ndarray:
        """
        σ(t) = P^N_t σ0 (P^M_t)⁻¹ (at t = 1 by default).
        """
        PM, PN = self.source.matrix(t), self.target.matrix(t)
        return np.linalg.solve(PM.T, (PN @ self.sigma0).T).T


def induced_ray(prob: CahProblem, x: Sequence[float] | np.ndarray,
                step: float = 1e-3) -> InducedRay:
    """
    Raises
    ---
    - `ConvergenceError` when x is outside the source normal neighborhood.
    - `ChartExitError` when a geodesic leaves its chart.
    """
    x = np.asarray(x, dtype=np.float64)
    prob.source.domain.require(x, "x")

    v = log_map(prob.source_spray, prob.x0, x, step)
    source = geodesic_ray(prob.source, prob.x0, v, step, prob.source_spray)
    target = geodesic_ray(prob.target, prob.y0, prob.sigma0 @ v, step,
                          prob.target_spray)
    return InducedRay(v, source, target, prob.sigma0)


def induced_geodesic_and_sigma(prob: CahProblem,
                               x: Sequence[float] | np.ndarray,
                               step: float = 1e-3
                               ) -> tuple[SpraySolution, np.ndarray]:
    """
    The induced geodesic μ_x and the transported differential σ_x.

    Parameters
    ---
    - `prob` (`CahProblem`): The problem.
    - `x` (`Sequence[float]`): A point of the source normal neighborhood of
      `prob.x0`.
    - `step` (`float`): The integration step.

    Returns
    ---
    - μ_x, with μ_x(0) = y0 and μ_x'(0) = σ0 log_{x0}(x), and the `m×n`
      matrix σ_x = P^N σ0 (P^M)⁻¹.

    Raises
    ---
    - `ConvergenceError` when the logarithm does not converge.
    - `ChartExitError` when μ_x leaves the target chart before time 1.
    """
    ray = induced_ray(prob, x, step)
    return ray.target.geodesic, ray.sigma_at()


def horizontality_residuals(prob: CahProblem, ray: InducedRay,
                            times: Sequence[float] = RAY_TIMES
                            ) -> tuple[float, float]:
    """
    Checks that t ↦ (γ(t), μ(t), σ(t)) is horizontal: μ solves the target
    geodesic equation with μ'(0) = σ0 v, and σ is parallel for the
    Lin(TM, TN) connection,

        σ' + ω^N(μ') σ − σ ω^M(γ') = 0.

    Derivatives come from the dense outputs of the solutions.

    Returns
    ---
    - The geodesic residual and the parallel residual.
    """
    m, n = prob.m, prob.n
    mu = ray.target.geodesic
    spray = prob.target_spray

    geodesic = float(np.max(np.abs(mu.velocity(0.0) - prob.sigma0 @ ray.v)))
    parallel = 0.0

    for t in times:
        y, w = mu(t)
        derivative = mu.curve.derivative(t)
        geodesic = max(
            geodesic, float(np.max(np.abs(derivative[:m] - w))),
            float(np.max(np.abs(derivative[m:] - spray.acceleration_at(y, w)))))

        x, v = ray.source.geodesic(t)
        PM, PN = ray.source.matrix(t), ray.target.matrix(t)
        dPM = ray.source.basis.derivative(t).reshape(n, n)
        dPN = ray.target.basis.derivative(t).reshape(m, m)

        sigma = ray.sigma_at(t)
        PM_inv = np.linalg.inv(PM)
        dsigma = dPN @ prob.sigma0 @ PM_inv - sigma @ dPM @ PM_inv
        WM = np.tensordot(v, prob.source.omega_at(x), axes=1)
        WN = np.tensordot(w, prob.target.omega_at(y), axes=1)
        parallel = max(
            parallel,
            float(np.max(np.abs(dsigma + WN @ sigma - sigma @ WM))))

    return geodesic, parallel


def relates_at(prob: CahProblem, x: np.ndarray, y: np.ndarray,
               sigma: np.ndarray) -> tuple[float, float]:
    return check_relates(sigma,
                         torsion(prob.source).at(x),
                         torsion(prob.target).at(y),
                         curvature(prob.source).at(x),
                         curvature(prob.target).at(y))


def cah_map(prob: CahProblem,
            grid: SampleGrid,
            step: float = 1e-3,
            workers: int | None = None,
            logger: Logger | None = None) -> AffineMapGrid:
    """
    Builds f(x) = μ_x(1) and σ_x on a grid of the source chart centered at
    `prob.x0`, with per-node relatedness residuals, the Jacobian residual
    ‖grid Jacobian of f − σ_x‖_∞ and the horizontality residuals of each
    ray. The anchor node holds (y0, σ0) exactly.

    Nodes whose logarithm diverges or whose induced geodesic leaves the
    target chart are flagged unreachable; the map is still returned.

    Parameters
    ---
    - `prob` (`CahProblem`): The problem.
    - `grid` (`SampleGrid`): The source grid; its middle node is `prob.x0`.
    - `step` (`float`): The integration step.
    - `workers` (`int | None`): Number of parallel workers.
    - `logger` (`Logger | None`): Receives one record per grid node.
    """
    assert grid.dim == prob.n, (
        f"Expected a grid of dimension {prob.n}, but found {grid.dim}")
    assert np.array_equal(grid.center, prob.x0), (
        "Expected `x0` to be the middle grid node")

    m, n = prob.m, prob.n

    def construct(index: tuple[int, ...]) -> dict[str, Any]:
        x = grid.point(index)
        if index == grid.anchor:
            y, sigma = prob.y0.copy(), prob.sigma0.copy()
            geodesic = parallel = 0.0
        else:
            try:
                ray = induced_ray(prob, x, step)
            except (ConvergenceError, ChartExitError) as e:
                return {"failure": str(e)}
            y, sigma = ray.target.geodesic.end_point, ray.sigma_at()
            geodesic, parallel = horizontality_residuals(prob, ray)

        torsion_residual, curvature_residual = relates_at(prob, x, y, sigma)
        return {
            "f": y,
            "sigma": sigma,
            "torsion": torsion_residual,
            "curvature": curvature_residual,
            "geodesic": geodesic,
            "parallel": parallel,
            "failure": None,
        }

    indices = list(grid.indices())
    results = parallel_map(construct, indices, workers)

    f = np.full(grid.shape + (m, ), np.nan)
    sigma = np.full(grid.shape + (m, n), np.nan)
    residuals = {
        name: np.full(grid.shape, np.nan)
        for name in ("torsion", "curvature", "geodesic", "parallel")
    }
    reachable = np.ones(grid.shape, dtype=bool)
    failures: dict[tuple[int, ...], str] = {}

    for index, result in zip(indices, results):
        if result["failure"] is not None:
            reachable[index] = False
            failures[index] = result["failure"]
            continue
        f[index] = result["f"]
        sigma[index] = result["sigma"]
        for name, values in residuals.items():
            values[index] = result[name]

    jacobian = np.swapaxes(grid_derivatives(f, grid), -1, -2)
    jacobian_residual = np.max(np.abs(jacobian - sigma), axis=(-2, -1))

    if logger is not None:
        for index in indices:
            logger.log_step({
                "index": list(index),
                "x": grid.point(index).tolist(),
                "f": f[index].tolist(),
                "sigma": sigma[index].reshape(-1).tolist(),
                "torsion_residual": float(residuals["torsion"][index]),
                "curvature_residual": float(residuals["curvature"][index]),
                "jacobian_residual": float(jacobian_residual[index]),
                "failure": failures.get(index),
            })

    return AffineMapGrid(grid, prob, f, sigma, residuals["torsion"],
                         residuals["curvature"], jacobian_residual,
                         residuals["geodesic"], residuals["parallel"],
                         reachable, failures)


@dataclass(frozen=True, eq=False)
class AffineReport:
    residual: np.ndarray
    tol: float

    @property
    def max_residual(self) -> float:
        finite = self.residual[np.isfinite(self.residual)]
        return float(np.max(finite)) if finite.size else float("nan")

    @property
    def passed(self) -> bool:
        return bool(self.max_residual < self.tol)


def affine_residual(prob: CahProblem, amap: AffineMapGrid,
                    tol: float = AFFINE_TOL) -> AffineReport:
    """
    The ∇(df) = 0 residual of the constructed map: at every interior
    reachable node,

        ∂_i σ + (ω_i + Σ_μ ∂_i f^μ ω_{n+μ}) σ

    with ω the Lin(TM, TN) connection evaluated at (x, f(x)), σ flattened
    row-major and ∂ by grid differences. The map is affine when this
    vanishes.
    """
    grid = amap.grid
    m, n = prob.m, prob.n
    hom = prob.hom

    dsigma = grid_derivatives(amap.sigma, grid)
    df = grid_derivatives(amap.f, grid)
    interior = amap.reachable & ~grid.boundary_mask()
    residual = np.full(grid.shape, np.nan)

    for index in grid.indices():
        if not interior[index] or not np.all(np.isfinite(dsigma[index])):
            continue
        point = np.concatenate([grid.point(index), amap.f[index]])
        omega = hom.omega_at(point)
        s = amap.sigma[index].reshape(-1)

        worst = 0.0
        for i in range(n):
            W = omega[i] + np.tensordot(df[index][i], omega[n:], axes=1)
            value = dsigma[index][i].reshape(-1) + W @ s
            worst = max(worst, float(np.max(np.abs(value))))
        residual[index] = worst

    return AffineReport(residual, tol)


@dataclass(frozen=True, eq=False)
class SymmetryReport:
    """
    The order checks of the affine-symmetry criterion and, when they pass and
    a grid was given, the constructed symmetry with its affine residual.
    """

    report: ObstructionReport
    symmetry: AffineMapGrid | None = None
    affine: AffineReport | None = None

    @property
    def passed(self) -> bool:
        return self.report.passed and (self.affine is None
                                       or self.affine.passed)


def affine_symmetry_check(conn: BundleConnection,
                          x0: Sequence[float] | np.ndarray,
                          max_order: int = 4,
                          tol: float = OBSTRUCTION_TOL,
                          grid: SampleGrid | None = None,
                          step: float = 1e-3,
                          affine_tol: float = AFFINE_TOL,
                          budget: int = DEFAULT_BUDGET,
                          workers: int | None = None) -> SymmetryReport:
    """
    Checks for an affine symmetry around `x0`: the even derivatives
    ∇^{2r} T and the odd derivatives ∇^{2r+1} R must vanish at `x0` for all
    orders up to `max_order`. When they do and `grid` is given, the symmetry
    is constructed as the affine map with y0 = x0 and σ0 = −Id.

    Returns
    ---
    - A `SymmetryReport`; the first failing check carries its order and
      witness index.
    """
    conn.require_tangent()
    x0 = np.asarray(x0, dtype=np.float64)
    conn.domain.require(x0, "x0")

    messages = []

    def derivatives(tensor, order):
        try:
            return covariant_derivatives(conn, conn, tensor, order, budget)
        except BudgetExceededError as e:
            messages.append(str(e))
            return e.partial

    T = derivatives(torsion(conn), max_order)
    R = derivatives(curvature(conn), max_order)

    checks = []
    for k in range(max_order + 1):
        tensors, label = (T, "torsion") if k % 2 == 0 else (R, "curvature")
        if k >= len(tensors):
            break
        residual, witness = largest_entry(tensors[k].at(x0))
        checks.append(OrderCheck(k, residual, witness, label))

    report = ObstructionReport(checks, tol,
                               len(checks) - 1,
                               messages[0] if messages else None)
    if not report.passed or grid is None:
        return SymmetryReport(report)

    prob = CahProblem(conn, conn, x0, x0, -np.eye(conn.n))
    symmetry = cah_map(prob, grid, step, workers)
    return SymmetryReport(report, symmetry,
                          affine_residual(prob, symmetry, affine_tol))


def involution_residual(prob: CahProblem,
                        amap: AffineMapGrid,
                        step: float = 1e-3,
                        fraction: float = 0.5) -> float:
    """
    max ‖f(f(x)) − x‖_∞ over the reachable nodes within `fraction` of the
    grid radius (in index steps) of the anchor, for a map of a chart into
    itself. f(f(x)) is the induced geodesic endpoint at f(x).

    Returns NaN when no node qualifies; a node whose image leaves the normal
    neighborhood counts as infinite.
    """
    assert prob.m == prob.n, (
        f"Expected a map of a chart into itself, but found dimensions "
        f"{prob.n} and {prob.m}")

    grid = amap.grid
    anchor = np.array(grid.anchor)
    limit = fraction * min(grid.anchor)

    worst = float("nan")
    for index in grid.indices():
        if (not amap.reachable[index]
                or np.max(np.abs(np.array(index) - anchor)) > limit):
            continue

        x, y = grid.point(index), amap.f[index]
        if np.array_equal(y, prob.x0):
            twice = prob.y0
        else:
            try:
                twice = induced_geodesic_and_sigma(prob, y, step)[0].end_point
            except (ConvergenceError, ChartExitError, ValueError):
                return float("inf")
        worst = float(np.fmax(worst, np.max(np.abs(twice - x))))

    return worst

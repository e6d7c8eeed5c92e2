"""
Single-leaf solver for total differential equations df = F(x, f(x)).

The leaf through (x0, y0) is assembled ray by ray: the value at a grid node x
is the endpoint of the horizontal lift of the segment t ↦ x0 + t(x − x0).
"""
import numpy as np

from dataclasses import dataclass, field
from typing import Any, Sequence

from ..geometry import (ChartExitError, CurveSolution, SampleGrid,
                        grid_derivatives, integrate_ode)
from ..loggers import Logger
from ..utils import parallel_map
from .graph import GraphDistribution
from .levi import levi_tensor


def horizontal_lift_ray(D: GraphDistribution,
                        x0: Sequence[float] | np.ndarray,
                        y0: Sequence[float] | np.ndarray,
                        direction: Sequence[float] | np.ndarray,
                        t_end: float = 1.0,
                        step: float = 1e-3) -> CurveSolution:
    """
    Solves dΨ/dt = F(x0 + tλ, Ψ)(λ) with Ψ(0) = y0, so that
    t ↦ (x0 + tλ, Ψ(t)) is tangent to D.

    Parameters
    ---
    - `D` (`GraphDistribution`): The distribution.
    - `x0`, `y0`: The starting point, inside `D.domain`.
    - `direction` (λ): The direction of the base ray.
    - `t_end` (`float`): The final time; the segment x0 + [0, t_end]λ must lie
      in the base box.
    - `step` (`float`): The integration step.

    Returns
    ---
    - The dense solution Ψ on `[0, t_end]`.

    Raises
    ---
    - `ChartExitError` when the lift leaves the domain before `t_end`.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    y0 = np.asarray(y0, dtype=np.float64)
    direction = np.asarray(direction, dtype=np.float64)

    D.domain.require(np.concatenate([x0, y0]), "(x0, y0)")
    D.base_domain.require(x0 + t_end * direction, "x0 + t_end * λ")

    compiled = D._compiled_F
    m, k = D.m, D.k

    def rhs(t: float, psi: np.ndarray) -> np.ndarray:
        point = np.concatenate([x0 + t * direction, psi])
        D.domain.require(point)
        return compiled(point).reshape(m, k) @ direction

    return integrate_ode(rhs, y0, (0.0, t_end), step)


@dataclass(frozen=True, eq=False)
class LeafGrid:
    """
    A sampled leaf: values f over a grid anchored at x0, with per-node
    residuals. Unreachable nodes carry NaN values.
    """

    grid: SampleGrid
    x0: np.ndarray
    y0: np.ndarray
    values: np.ndarray
    leaf_residual: np.ndarray
    levi_residual: np.ndarray
    one_sided: np.ndarray
    reachable: np.ndarray
    failures: dict[tuple[int, ...], str] = field(default_factory=dict)

    @property
    def reachable_radius(self) -> int:
        """
        The largest r such that every node within r index steps (in the max
        norm) of the anchor is reachable.
        """
        anchor = np.array(self.grid.anchor)
        limit = min(self.grid.anchor)
        for index in np.argwhere(~self.reachable):
            limit = min(limit, int(np.max(np.abs(index - anchor))) - 1)
        return max(limit, 0)

    def max_leaf_residual(self, include_one_sided: bool = True) -> float:
        mask = self.reachable & np.isfinite(self.leaf_residual)
        if not include_one_sided:
            mask &= ~self.one_sided
        return float(np.max(self.leaf_residual[mask])) if mask.any() else float("nan")

    def max_levi_residual(self) -> float:
        mask = self.reachable & np.isfinite(self.levi_residual)
        return float(np.max(self.levi_residual[mask])) if mask.any() else float("nan")


def leaf_residuals(D: GraphDistribution, grid: SampleGrid,
                   values: np.ndarray) -> np.ndarray:
    """
    ‖J(f)(x) − F(x, f(x))‖_∞ at every grid node, with the Jacobian taken by
    grid differences. NaN where f or its neighbours are unavailable.
    """
    jacobians = np.moveaxis(grid_derivatives(values, grid), grid.dim, -1)
    points = grid.points()
    residual = np.full(grid.shape, np.nan)

    for index in grid.indices():
        if not np.all(np.isfinite(jacobians[index])):
            continue
        point = np.concatenate([points[index], values[index]])
        try:
            expected = D.matrix_at(point)
        except ArithmeticError:
            continue
        residual[index] = np.max(np.abs(jacobians[index] - expected))

    return residual


def solve_tde(D: GraphDistribution,
              x0: Sequence[float] | np.ndarray,
              y0: Sequence[float] | np.ndarray,
              grid: SampleGrid,
              step: float = 1e-3,
              workers: int | None = None,
              logger: Logger | None = None) -> LeafGrid:
    """
    Solves the total differential equation df = F(x, f(x)), f(x0) = y0, on a
    grid by horizontal lifting along the rays from x0.

    Parameters
    ---
    - `D` (`GraphDistribution`): The distribution Gr(F).
    - `x0`, `y0`: The anchor; `x0` must be the middle node of `grid`.
    - `grid` (`SampleGrid`): The sample grid, inside the base box.
    - `step` (`float`): The integration step of every ray.
    - `workers` (`int | None`): Number of parallel workers.
    - `logger` (`Logger | None`): Receives one record per grid node.

    Returns
    ---
    - The `LeafGrid` with values, the leaf residual (Jacobian mismatch) and the
      largest Levi form norm met along each ray. Rays that leave the domain
      are recorded as failures and their nodes as unreachable.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    y0 = np.asarray(y0, dtype=np.float64)
    assert x0.shape == (D.k, ) and y0.shape == (D.m, ), (
        f"Expected `x0` of shape ({D.k},) and `y0` of shape ({D.m},), but "
        f"found: {x0.shape} and {y0.shape}")
    assert grid.dim == D.k, (
        f"Expected a grid of dimension {D.k}, but found {grid.dim}")
    assert np.array_equal(grid.center, x0), (
        f"Expected `x0` to be the middle grid node, but found: "
        f"{grid.center.tolist()} and {x0.tolist()}")
    assert grid.within(D.base_domain), "Expected the grid inside the base box"

    D.domain.require(np.concatenate([x0, y0]), "(x0, y0)")
    tensor = levi_tensor(D)
    anchor = grid.anchor

    def solve(index: tuple[int, ...]) -> tuple[np.ndarray, float, str | None]:
        if index == anchor:
            return y0.copy(), tensor.max_norm(np.concatenate([x0, y0])), None

        direction = grid.point(index) - x0
        try:
            lift = horizontal_lift_ray(D, x0, y0, direction, 1.0, step)
        except ChartExitError as e:
            return np.full(D.m, np.nan), float("nan"), str(e)

        levi = max(
            tensor.max_norm(np.concatenate([x0 + t * direction, psi]))
            for t, psi in zip(lift.ts, lift.ys))
        return lift.end.copy(), levi, None

    indices = list(grid.indices())
    results = parallel_map(solve, indices, workers)

    values = np.empty(grid.shape + (D.m, ))
    levi_residual = np.empty(grid.shape)
    reachable = np.ones(grid.shape, dtype=bool)
    failures: dict[tuple[int, ...], str] = {}

    for index, (value, levi, failure) in zip(indices, results):
        values[index] = value
        levi_residual[index] = levi
        if failure is not None:
            reachable[index] = False
            failures[index] = failure

    leaf_residual = leaf_residuals(D, grid, values)

    if logger is not None:
        for index in indices:
            logger.log_step(_node_record(grid, index, values, leaf_residual,
                                         levi_residual, failures))

    return LeafGrid(grid, x0, y0, values, leaf_residual, levi_residual,
                    grid.boundary_mask(), reachable, failures)


def _node_record(grid: SampleGrid, index: tuple[int, ...],
                 values: np.ndarray, leaf_residual: np.ndarray,
                 levi_residual: np.ndarray,
                 failures: dict[tuple[int, ...], str]) -> dict[str, Any]:
    return {
        "index": list(index),
        "x": grid.point(index).tolist(),
        "f": values[index].tolist(),
        "leaf_residual": float(leaf_residual[index]),
        "levi_residual": float(levi_residual[index]),
        "failure": failures.get(index),
    }


@dataclass(frozen=True)
class LeafReport:
    max_leaf_residual: float
    max_levi_residual: float
    tol: float
    one_sided_nodes: int
    passed: bool


def check_leaf(D: GraphDistribution, leaf: LeafGrid,
               tol: float) -> LeafReport:
    """
    Checks that the sampled graph of f is tangent to D: the Jacobian of f
    must match F(x, f(x)) and the Levi form must vanish on the leaf.
    """
    levi = np.full(leaf.grid.shape, np.nan)
    points = leaf.grid.points()
    tensor = levi_tensor(D)

    for index in leaf.grid.indices():
        if not leaf.reachable[index]:
            continue
        try:
            levi[index] = tensor.max_norm(
                np.concatenate([points[index], leaf.values[index]]))
        except ArithmeticError:
            continue

    leaf_residual = leaf.max_leaf_residual()
    finite = np.isfinite(levi)
    levi_residual = float(np.max(levi[finite])) if finite.any() else float("nan")

    return LeafReport(
        max_leaf_residual=leaf_residual,
        max_levi_residual=levi_residual,
        tol=tol,
        one_sided_nodes=int(np.count_nonzero(leaf.one_sided & leaf.reachable)),
        passed=bool(leaf_residual < tol and levi_residual < tol))

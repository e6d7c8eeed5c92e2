import warnings

import numpy as np

from dataclasses import dataclass
from jax import Array
from jax.random import PRNGKey
from typing import Sequence

from ..data.random_fields import random_unit_vectors
from ..geometry import FIRST_ORDER_H, ChartExitError, finite_diff_jacobian
from .spray import Spray, solve_spray

LOG_TOL = 1e-9
CONDITION_LIMIT = 1e6
ROUND_TRIP_TOL = 1e-6


class ConvergenceError(RuntimeError):
    """
    Raised when the Newton iteration of `log_map` fails: no convergence in
    the allowed iterations, or a singular differential of the exponential.
    """


def exp_map(S: Spray,
            x: Sequence[float] | np.ndarray,
            v: Sequence[float] | np.ndarray,
            step: float = 1e-3) -> np.ndarray:
    """
    exp_x(v): the point at time 1 of the spray solution through (x, v).

    Raises
    ---
    - `ChartExitError` when the solution leaves the chart before time 1.
    """
    return solve_spray(S, x, v, (0.0, 1.0), step, strict=True).end_point


def exp_jacobian(S: Spray,
                 x: np.ndarray,
                 v: np.ndarray,
                 step: float = 1e-3,
                 h: float = FIRST_ORDER_H) -> np.ndarray:
    """
    d(exp_x) at `v` by central differences.
    """
    return finite_diff_jacobian(lambda w: exp_map(S, x, w, step), v, h)


def log_map(S: Spray,
            x: Sequence[float] | np.ndarray,
            target: Sequence[float] | np.ndarray,
            step: float = 1e-3,
            max_iter: int = 50,
            tol: float = LOG_TOL) -> np.ndarray:
    """
    Inverts the exponential map at `x` by damped Newton iterations on v,
    starting from `target − x`, with a finite-difference Jacobian.

    Parameters
    ---
    - `S` (`Spray`): The spray.
    - `x` (`Sequence[float]`): The base point.
    - `target` (`Sequence[float]`): The point to reach.
    - `step` (`float`): The integration step of every exponential.
    - `max_iter` (`int`): The allowed number of Newton iterations.
    - `tol` (`float`): The required accuracy ‖exp_x(v) − target‖.

    Returns
    ---
    - A vector v with ‖exp_x(v) − target‖ < `tol`.

    Raises
    ---
    - `ConvergenceError` when the iteration does not converge or the
      Jacobian is singular.
    """
    x = np.asarray(x, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    S.domain.require(x, "x")

    v = target - x
    if not np.any(v):
        return v

    try:
        residual = exp_map(S, x, v, step) - target
    except ChartExitError:
        v = np.zeros_like(v)
        residual = x - target
    error = float(np.linalg.norm(residual))

    for _ in range(max_iter):
        if error < tol:
            return v

        try:
            jacobian = exp_jacobian(S, x, v, step)
        except ChartExitError as e:
            raise ConvergenceError(
                f"The exponential left the chart near v = {v.tolist()}") from e

        if not np.all(np.isfinite(jacobian)) or np.linalg.cond(
                jacobian) > 1e12:
            raise ConvergenceError(
                f"Singular differential of the exponential at v = "
                f"{v.tolist()}")

        delta = np.linalg.solve(jacobian, -residual)

        damping = 1.0
        for _ in range(30):
            candidate = v + damping * delta
            try:
                candidate_residual = exp_map(S, x, candidate, step) - target
            except ChartExitError:
                damping /= 2
                continue
            candidate_error = float(np.linalg.norm(candidate_residual))
            if candidate_error < error:
                break
            damping /= 2
        else:
            raise ConvergenceError(
                f"Newton step failed to reduce the residual {error} at "
                f"v = {v.tolist()}")

        v, residual, error = candidate, candidate_residual, candidate_error

    if error < tol:
        return v
    raise ConvergenceError(
        f"No convergence after {max_iter} iterations (residual {error})")


@dataclass(frozen=True)
class RadiusProbe:
    radius: float
    passed: bool
    reason: str | None = None


def _probe_radius(S: Spray, x: np.ndarray, radius: float,
                  directions: np.ndarray, step: float) -> RadiusProbe:
    for direction in directions:
        v = radius * direction
        try:
            target = exp_map(S, x, v, step)
        except ChartExitError:
            return RadiusProbe(radius, False, "chart exit")

        try:
            condition = float(np.linalg.cond(exp_jacobian(S, x, v, step)))
        except ChartExitError:
            return RadiusProbe(radius, False, "chart exit")
        if not condition < CONDITION_LIMIT:
            return RadiusProbe(radius, False, "singular differential")

        try:
            recovered = log_map(S, x, target, step)
        except ConvergenceError:
            return RadiusProbe(radius, False, "no log convergence")

        if np.linalg.norm(recovered - v) > ROUND_TRIP_TOL * max(1.0, radius):
            return RadiusProbe(radius, False, "log round trip")

    return RadiusProbe(radius, True)


def estimate_normal_radius(S: Spray,
                           x: Sequence[float] | np.ndarray,
                           step: float = 1e-3,
                           initial_radius: float | None = None,
                           levels: int = 10,
                           refinements: int = 3,
                           n_random: int = 8,
                           key: Array | None = None,
                           probes: list[RadiusProbe] | None = None) -> float:
    """
    A usable normal radius at `x`: the largest radius from the sweep
    ρ_0 2^{-j} (refined by bisection towards the first failing radius) at
    which, for every sampled direction, the exponential stays in the chart,
    its differential has condition number below 1e6, and `log_map` recovers
    the velocity.

    Parameters
    ---
    - `S` (`Spray`): The spray.
    - `x` (`Sequence[float]`): The base point.
    - `step` (`float`): The integration step.
    - `initial_radius` (`float | None`): ρ_0; the largest box width by
      default.
    - `levels` (`int`): The number of halvings tried.
    - `refinements` (`int`): The number of bisection steps after the sweep.
    - `n_random` (`int`): Random directions added to the `2n` axis
      directions.
    - `key` (`jax.Array | None`): The random key; `PRNGKey(0)` if `None`.
    - `probes` (`list[RadiusProbe] | None`): Receives every tested radius.

    Returns
    ---
    - The radius. If even the smallest tested radius fails, it is returned
      with a warning.
    """
    x = np.asarray(x, dtype=np.float64)
    S.domain.require(x, "x")
    key = key if key is not None else PRNGKey(0)

    n = S.n
    axes = np.concatenate([np.eye(n), -np.eye(n)])
    directions = np.concatenate(
        [axes, random_unit_vectors(n, n_random, key)]) if n_random else axes

    radius = initial_radius or float(np.max(S.domain.widths()))
    failing: float | None = None
    passing: float | None = None

    for _ in range(levels):
        probe = _probe_radius(S, x, radius, directions, step)
        if probes is not None:
            probes.append(probe)
        if probe.passed:
            passing = radius
            break
        failing = radius
        radius /= 2

    if passing is None:
        warnings.warn(
            f"No tested radius passed at {x.tolist()}; returning the "
            f"smallest one, {failing}")
        return float(failing if failing is not None else radius)

    if failing is None:
        return passing

    for _ in range(refinements):
        middle = (passing + failing) / 2
        probe = _probe_radius(S, x, middle, directions, step)
        if probes is not None:
            probes.append(probe)
        if probe.passed:
            passing = middle
        else:
            failing = middle

    return passing

import numpy as np

from dataclasses import dataclass
from functools import cached_property, lru_cache
from jax import Array
from jax.random import PRNGKey, split
from typing import Sequence

from ..connection import BundleConnection
from ..data.random_fields import random_matrix, random_point
from ..expr import (CompiledExprs, ScalarExpr, Variable, add, as_expr, mul,
                    neg, parse_expr, variables_named)
from ..geometry import Box, ChartExitError, CurveSolution, integrate_ode

HOMOGENEITY_SCALARS = (-2.0, -1.0, 0.5, 3.0)


@dataclass(frozen=True, eq=False)
class Spray:
    """
    A spray on a chart box: the second-order system ẍ = acceleration(x, ẋ),
    one expression per coordinate over the positions `coordinates` and the
    velocities `velocities`.
    """

    coordinates: tuple[str, ...]
    velocities: tuple[str, ...]
    acceleration: tuple[ScalarExpr, ...]
    domain: Box

    def __post_init__(self) -> None:
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        object.__setattr__(self, "velocities", tuple(self.velocities))
        object.__setattr__(self, "acceleration",
                           tuple(as_expr(a) for a in self.acceleration))

        n = len(self.coordinates)
        assert len(self.velocities) == n and len(self.acceleration) == n, (
            f"Expected {n} velocities and accelerations, but found: "
            f"{len(self.velocities)} and {len(self.acceleration)}")
        assert self.domain.dim == n, (
            f"Expected a domain of dimension {n}, but found "
            f"{self.domain.dim}")
        assert not set(self.coordinates) & set(self.velocities), (
            "Expected distinct position and velocity names")

    @classmethod
    def parse(cls,
              acceleration: Sequence[str],
              domain: Box,
              coordinates: Sequence[str] | None = None,
              velocities: Sequence[str] | None = None) -> "Spray":
        """
        Parses accelerations written in `x1..xn` and `v1..vn` (or the given
        names).
        """
        n = domain.dim
        coordinates = tuple(coordinates or variables_named("x", n))
        velocities = tuple(velocities or variables_named("v", n))
        names = coordinates + velocities
        return cls(coordinates, velocities,
                   tuple(parse_expr(text, names) for text in acceleration),
                   domain)

    @property
    def n(self) -> int:
        return len(self.coordinates)

    @cached_property
    def _compiled(self) -> CompiledExprs:
        return CompiledExprs(self.acceleration,
                             self.coordinates + self.velocities)

    def acceleration_at(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self._compiled(np.concatenate([x, v]))

    def vector_field(self, t: float, state: np.ndarray) -> np.ndarray:
        """
        The first-order system (ẋ, v̇) = (v, acceleration(x, v)).
        """
        n = self.n
        return np.concatenate([state[n:], self._compiled(state)])


def _velocity_names(coordinates: Sequence[str]) -> tuple[str, ...]:
    names = tuple(variables_named("v", len(coordinates)))
    if set(names) & set(coordinates):
        names = tuple(f"d{name}" for name in coordinates)
    return names


@lru_cache(maxsize=64)
def geodesic_spray(conn: BundleConnection) -> Spray:
    """
    The geodesic spray of a tangent connection,
    acceleration^a(x, v) = −Σ_{ij} Γ^a_{ij}(x) v^i v^j.

    Raises
    ---
    - `NotTangentError` when `conn` is not a tangent connection.
    """
    conn.require_tangent()
    n = conn.n
    velocities = _velocity_names(conn.coordinates)
    v = [Variable(name) for name in velocities]

    acceleration = tuple(
        neg(
            add(*(mul(conn.omega[i, a, j], v[i], v[j]) for i in range(n)
                  for j in range(n)))) for a in range(n))

    return Spray(conn.coordinates, velocities, acceleration, conn.domain)


def validate_homogeneity(S: Spray,
                         samples: int = 8,
                         scalars: Sequence[float] = HOMOGENEITY_SCALARS,
                         key: Array | None = None) -> float:
    """
    The largest relative residual |acc(x, a v) − a² acc(x, v)| over random
    points, random velocities and the given scalars.
    """
    key = key if key is not None else PRNGKey(0)
    worst = 0.0

    for k in split(key, samples):
        point_key, velocity_key = split(k)
        x = random_point(S.domain, key=point_key)
        v = random_matrix((S.n, ), key=velocity_key)
        try:
            base = S.acceleration_at(x, v)
            for a in scalars:
                scaled = S.acceleration_at(x, a * v)
                expected = a * a * base
                scale = max(1.0, float(np.max(np.abs(expected))))
                worst = max(worst,
                            float(np.max(np.abs(scaled - expected))) / scale)
        except ArithmeticError:
            continue

    return worst


@dataclass(frozen=True, eq=False)
class SpraySolution:
    """
    A solution t ↦ (x(t), v(t)) of a spray. When the trajectory left the
    chart, `curve` stops at `exit_time`.
    """

    curve: CurveSolution
    n: int
    exit_time: float | None = None
    message: str | None = None

    @property
    def complete(self) -> bool:
        return self.exit_time is None

    @property
    def t_start(self) -> float:
        return self.curve.t_start

    @property
    def t_end(self) -> float:
        return self.curve.t_end

    def position(self, t: float) -> np.ndarray:
        return self.curve(t)[:self.n]

    def velocity(self, t: float) -> np.ndarray:
        return self.curve(t)[self.n:]

    def __call__(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """
        The point and velocity at `t`, as a curve for parallel transport.
        """
        state = self.curve(t)
        return state[:self.n], state[self.n:]

    @property
    def end_point(self) -> np.ndarray:
        return self.curve.end[:self.n].copy()

    @property
    def end_velocity(self) -> np.ndarray:
        return self.curve.end[self.n:].copy()


def solve_spray(S: Spray,
                x: Sequence[float] | np.ndarray,
                v: Sequence[float] | np.ndarray,
                t_span: tuple[float, float] = (0.0, 1.0),
                step: float = 1e-3,
                strict: bool = False) -> SpraySolution:
    """
    Integrates (ẋ, v̇) = (v, acceleration(x, v)) from (x, v).

    Parameters
    ---
    - `S` (`Spray`): The spray.
    - `x`, `v`: The initial point (inside `S.domain`) and velocity.
    - `t_span` (`tuple[float, float]`): Start and end time.
    - `step` (`float`): The integration step.
    - `strict` (`bool`): Raise `ChartExitError` on a chart exit instead of
      returning the partial solution with its exit time.

    Returns
    ---
    - The `SpraySolution`.
    """
    x = np.asarray(x, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    assert x.shape == v.shape == (S.n, ), (
        f"Expected `x` and `v` of shape ({S.n},), but found: {x.shape} and "
        f"{v.shape}")
    S.domain.require(x, "x")

    n = S.n
    try:
        curve = integrate_ode(S.vector_field, np.concatenate([x, v]), t_span,
                              step, inside=lambda s: S.domain.contains(s[:n]))
    except ChartExitError as e:
        if strict or e.partial is None:
            raise
        return SpraySolution(e.partial, n, e.last_t, str(e))

    return SpraySolution(curve, n)

import numpy as np

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

from ..expr import CompiledExprs, ScalarExpr, differentiate, parse_expr
from ..geometry import CurveSolution, integrate_ode
from .bundle import BundleConnection

Curve = Callable[[float], tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True, eq=False)
class ParametrizedCurve:
    """
    A curve t ↦ γ(t) given by one expression per coordinate in the parameter
    `parameter`. Calling returns the point and the velocity.
    """

    components: tuple[ScalarExpr, ...]
    parameter: str = "t"

    @classmethod
    def parse(cls, components: Sequence[str],
              parameter: str = "t") -> "ParametrizedCurve":
        return cls(tuple(parse_expr(text, [parameter]) for text in components),
                   parameter)

    @property
    def dim(self) -> int:
        return len(self.components)

    @cached_property
    def _compiled(self) -> CompiledExprs:
        velocity = [differentiate(c, self.parameter) for c in self.components]
        return CompiledExprs(list(self.components) + velocity,
                             (self.parameter, ))

    def __call__(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        values = self._compiled([t])
        return values[:self.dim], values[self.dim:]


def parallel_transport(conn: BundleConnection,
                       curve: Curve,
                       s0: Sequence[float] | np.ndarray,
                       t_span: tuple[float, float],
                       step: float = 1e-3) -> CurveSolution:
    """
    Transports `s0` along `curve` by solving ṡ = −(Σ_i γ̇^i ω_i(γ(t))) s.

    Parameters
    ---
    - `conn` (`BundleConnection`): The connection.
    - `curve` (`Callable[[float], tuple[numpy.ndarray, numpy.ndarray]]`):
      Returns the point γ(t) and the velocity γ̇(t).
    - `s0` (`numpy.ndarray`): A fiber vector of shape `(r,)`, or a matrix of
      shape `(r, c)` whose columns are transported together.
    - `t_span` (`tuple[float, float]`): Start and end parameter.
    - `step` (`float`): The integration step.

    Returns
    ---
    - The dense solution with the (flattened, row-major) transported state.

    Raises
    ---
    - `ChartExitError` when the curve leaves `conn.domain`.
    """
    s0 = np.array(s0, dtype=np.float64)
    assert s0.ndim in (1, 2) and s0.shape[0] == conn.r, (
        f"Expected `s0` with leading dimension {conn.r}, but found shape: "
        f"{s0.shape}")
    shape = s0.shape

    def rhs(t: float, state: np.ndarray) -> np.ndarray:
        point, velocity = curve(t)
        conn.domain.require(point, "γ(t)")
        W = np.tensordot(velocity, conn.omega_at(point), axes=1)
        return -(W @ state.reshape(shape)).reshape(-1)

    return integrate_ode(rhs, s0.reshape(-1), t_span, step)


def transport_basis(conn: BundleConnection,
                    curve: Curve,
                    t_span: tuple[float, float],
                    step: float = 1e-3) -> CurveSolution:
    """
    Transports the standard basis; the state at `t` reshaped to `(r, r)` is
    the parallel transport matrix P_{t_0 -> t}.
    """
    return parallel_transport(conn, curve, np.eye(conn.r), t_span, step)


def transport_matrix(solution: CurveSolution, t: float | None = None
                     ) -> np.ndarray:
    """
    The matrix P from a `transport_basis` solution, at its end by default.
    """
    state = solution.end if t is None else solution(t)
    r = int(round(np.sqrt(len(state))))
    return np.array(state).reshape(r, r)

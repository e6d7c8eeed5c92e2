import numpy as np

from dataclasses import dataclass
from typing import Sequence

from ..connection import BundleConnection, transport_basis, transport_matrix
from ..geometry import CurveSolution
from .spray import Spray, SpraySolution, geodesic_spray, solve_spray


@dataclass(frozen=True, eq=False)
class RayTransport:
    """
    A geodesic t ↦ exp_{x0}(t v), t ∈ [0, 1], together with the parallel
    transport of the standard basis along it.
    """

    geodesic: SpraySolution
    basis: CurveSolution

    def matrix(self, t: float | None = None) -> np.ndarray:
        """
        The transport matrix P_{0 -> t} (at t = 1 by default).
        """
        return transport_matrix(self.basis, t)

    @property
    def end_point(self) -> np.ndarray:
        return self.geodesic.end_point


def geodesic_ray(conn: BundleConnection,
                 x0: Sequence[float] | np.ndarray,
                 v: Sequence[float] | np.ndarray,
                 step: float = 1e-3,
                 spray: Spray | None = None) -> RayTransport:
    """
    Solves the geodesic through (x0, v) up to time 1 and transports the
    standard basis along it.

    Raises
    ---
    - `ChartExitError` when the geodesic leaves the chart before time 1.
    """
    spray = spray or geodesic_spray(conn)
    geodesic = solve_spray(spray, x0, v, (0.0, 1.0), step, strict=True)
    basis = transport_basis(conn, geodesic, (0.0, 1.0), step)
    return RayTransport(geodesic, basis)

import numpy as np

from dataclasses import dataclass, field
from functools import cached_property

from ..connection import BundleConnection, hom_connection
from ..geometry import SampleGrid
from ..spray import Spray, geodesic_spray


@dataclass(frozen=True, eq=False)
class CahProblem:
    """
    The data of an affine-map construction: tangent connections on a source
    chart (dimension n) and a target chart (dimension m), base points `x0`
    and `y0`, and the prescribed differential `sigma0` (an `m×n` matrix).
    No rank or isometry assumption is made on `sigma0`.
    """

    source: BundleConnection
    target: BundleConnection
    x0: np.ndarray
    y0: np.ndarray
    sigma0: np.ndarray

    def __post_init__(self) -> None:
        self.source.require_tangent()
        self.target.require_tangent()

        x0 = np.array(self.x0, dtype=np.float64)
        y0 = np.array(self.y0, dtype=np.float64)
        sigma0 = np.array(self.sigma0, dtype=np.float64)
        n, m = self.source.n, self.target.n

        assert x0.shape == (n, ), (
            f"Expected `x0` to have shape ({n},), but found shape: {x0.shape}")
        assert y0.shape == (m, ), (
            f"Expected `y0` to have shape ({m},), but found shape: {y0.shape}")
        assert sigma0.shape == (m, n), (
            f"Expected `sigma0` to have shape ({m}, {n}), but found shape: "
            f"{sigma0.shape}")
        assert np.all(np.isfinite(sigma0)), (
            "Expected finite entries in `sigma0`")
        self.source.domain.require(x0, "x0")
        self.target.domain.require(y0, "y0")

        for array in (x0, y0, sigma0):
            array.setflags(write=False)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "y0", y0)
        object.__setattr__(self, "sigma0", sigma0)

    @property
    def n(self) -> int:
        return self.source.n

    @property
    def m(self) -> int:
        return self.target.n

    @property
    def source_spray(self) -> Spray:
        return geodesic_spray(self.source)

    @property
    def target_spray(self) -> Spray:
        return geodesic_spray(self.target)

    @cached_property
    def target_coordinates(self) -> tuple[str, ...]:
        """
        The target coordinate names, renamed when they clash with the
        source's.
        """
        names = self.target.coordinates
        if set(names) & set(self.source.coordinates):
            names = tuple(f"{name}_N" for name in names)
        return names

    @cached_property
    def hom(self) -> BundleConnection:
        """
        The connection on Lin(TM, TN) over M × N, with σ flattened row-major.
        """
        return hom_connection(self.source,
                              self.target.renamed(self.target_coordinates))


def _masked_max(values: np.ndarray, mask: np.ndarray) -> float:
    mask = mask & np.isfinite(values)
    return float(np.max(values[mask])) if mask.any() else float("nan")


@dataclass(frozen=True, eq=False)
class AffineMapGrid:
    """
    The constructed map on a source grid: `f[index]` is f(x) and
    `sigma[index]` the transported differential σ_x. Residual arrays hold NaN
    at unreachable nodes.

    - `torsion_residual`, `curvature_residual`: relatedness of σ_x between
      the tensors at x and f(x).
    - `jacobian_residual`: ‖grid Jacobian of f − σ_x‖_∞.
    - `geodesic_residual`, `parallel_residual`: horizontality of the induced
      curve (μ, σ) along the radial ray.
    """

    grid: SampleGrid
    problem: CahProblem
    f: np.ndarray
    sigma: np.ndarray
    torsion_residual: np.ndarray
    curvature_residual: np.ndarray
    jacobian_residual: np.ndarray
    geodesic_residual: np.ndarray
    parallel_residual: np.ndarray
    reachable: np.ndarray
    failures: dict[tuple[int, ...], str] = field(default_factory=dict)

    def max_torsion_residual(self) -> float:
        return _masked_max(self.torsion_residual, self.reachable)

    def max_curvature_residual(self) -> float:
        return _masked_max(self.curvature_residual, self.reachable)

    def max_jacobian_residual(self) -> float:
        return _masked_max(self.jacobian_residual, self.reachable)

    def max_horizontality_residual(self) -> float:
        return float(
            np.fmax(_masked_max(self.geodesic_residual, self.reachable),
                    _masked_max(self.parallel_residual, self.reachable)))

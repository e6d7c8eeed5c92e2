import numpy as np

from dataclasses import dataclass, field
from typing import Sequence

from ..geometry import SampleGrid

SYMMETRY_TOL = 1e-12
DEGENERACY_TOL = 1e-10


def signature(g: np.ndarray) -> tuple[int, int]:
    """
    The numbers (p, q) of positive and negative eigenvalues of a symmetric
    matrix.
    """
    eigenvalues = np.linalg.eigvalsh((g + g.T) / 2)
    return int(np.sum(eigenvalues > 0)), int(np.sum(eigenvalues < 0))


@dataclass(frozen=True, eq=False)
class MetricSeed:
    """
    A nondegenerate symmetric bilinear form `g0` on the tangent space at
    `base_point`.
    """

    base_point: np.ndarray
    g0: np.ndarray

    def __post_init__(self) -> None:
        base_point = np.array(self.base_point, dtype=np.float64)
        g0 = np.array(self.g0, dtype=np.float64)
        n = len(base_point)

        assert base_point.ndim == 1, (
            f"Expected `base_point` to be a vector, but found shape: "
            f"{base_point.shape}")
        assert g0.shape == (n, n), (
            f"Expected `g0` to have shape ({n}, {n}), but found shape: "
            f"{g0.shape}")
        assert np.all(np.isfinite(g0)), "Expected finite entries in `g0`"
        assert np.max(np.abs(g0 - g0.T)) <= SYMMETRY_TOL, (
            "Expected `g0` to be symmetric")

        scale = float(np.max(np.abs(g0)))
        assert scale > 0 and abs(np.linalg.det(g0 / scale)) > DEGENERACY_TOL, (
            "Expected `g0` to be nondegenerate")

        for array in (base_point, g0):
            array.setflags(write=False)
        object.__setattr__(self, "base_point", base_point)
        object.__setattr__(self, "g0", g0)

    @property
    def n(self) -> int:
        return len(self.base_point)

    @property
    def signature(self) -> tuple[int, int]:
        return signature(self.g0)

    def scaled(self, factor: float) -> "MetricSeed":
        return MetricSeed(self.base_point, factor * self.g0)


@dataclass(frozen=True, eq=False)
class MetricGrid:
    """
    A recovered metric sampled on a grid: `values[index]` is the matrix g_m
    at the grid node `index`. Unreachable nodes hold NaN.
    """

    grid: SampleGrid
    seed: MetricSeed
    values: np.ndarray
    residual: np.ndarray
    hypothesis_residual: np.ndarray
    reachable: np.ndarray
    failures: dict[tuple[int, ...], str] = field(default_factory=dict)
    conditioning: np.ndarray | None = None

    def signatures(self) -> dict[tuple[int, ...], tuple[int, int]]:
        return {
            index: signature(self.values[index])
            for index in self.grid.indices() if self.reachable[index]
        }

    @property
    def signature_constant(self) -> bool:
        return all(s == self.seed.signature
                   for s in self.signatures().values())

    @property
    def max_residual(self) -> float:
        mask = self.reachable & np.isfinite(self.residual)
        return float(np.max(self.residual[mask])) if mask.any() else float("nan")

    @property
    def max_asymmetry(self) -> float:
        values = self.values[self.reachable]
        if not len(values):
            return 0.0
        return float(np.max(np.abs(values - np.swapaxes(values, -1, -2))))

    def at(self, point: Sequence[float]) -> np.ndarray:
        """
        The value at the grid node equal to `point`.
        """
        point = np.asarray(point, dtype=np.float64)
        index = tuple(
            int(np.argmin(np.abs(axis - p)))
            for axis, p in zip(self.grid.axes, point))
        assert np.allclose(self.grid.point(index), point, atol=1e-12), (
            f"Expected a grid node, but found: {point.tolist()}")
        return self.values[index]

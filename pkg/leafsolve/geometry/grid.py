import numpy as np

from dataclasses import dataclass
from typing import Iterator, Sequence

from .fields import Box


@dataclass(frozen=True, eq=False)
class SampleGrid:
    """
    An axis-aligned rectangular grid with an odd number of nodes per axis,
    anchored so that the base point is exactly the middle node.
    """

    axes: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        axes = tuple(np.array(axis, dtype=np.float64) for axis in self.axes)
        for i, axis in enumerate(axes):
            assert axis.ndim == 1 and len(axis) % 2 == 1, (
                f"Expected axis {i} to have an odd number of nodes, but found "
                f"{len(axis)}")
            assert np.all(np.diff(axis) > 0), (
                f"Expected axis {i} to be strictly increasing")
            axis.setflags(write=False)
        object.__setattr__(self, "axes", axes)

    @classmethod
    def centered(cls, center: Sequence[float],
                 half_widths: float | Sequence[float],
                 counts: int | Sequence[int]) -> "SampleGrid":
        """
        Builds the grid `center_i + half_width_i * linspace(-1, 1, count_i)`
        with the middle node set to `center_i` exactly.
        """
        center = [float(c) for c in center]
        dim = len(center)
        if isinstance(half_widths, (int, float)):
            half_widths = [float(half_widths)] * dim
        if isinstance(counts, int):
            counts = [counts] * dim

        assert len(half_widths) == dim and len(counts) == dim, (
            f"Expected {dim} half widths and counts, but found: "
            f"{len(half_widths)} and {len(counts)}")

        axes = []
        for c, width, count in zip(center, half_widths, counts):
            assert count % 2 == 1, (
                f"Expected odd node counts, but found: {count}")
            axis = c + width * np.linspace(-1.0, 1.0, count)
            axis[count // 2] = c
            axes.append(axis)

        return cls(tuple(axes))

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(axis) for axis in self.axes)

    @property
    def anchor(self) -> tuple[int, ...]:
        return tuple(len(axis) // 2 for axis in self.axes)

    @property
    def center(self) -> np.ndarray:
        return np.array([axis[len(axis) // 2] for axis in self.axes])

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def point(self, index: tuple[int, ...]) -> np.ndarray:
        return np.array([axis[i] for axis, i in zip(self.axes, index)])

    def indices(self) -> Iterator[tuple[int, ...]]:
        return iter(np.ndindex(*self.shape))

    def points(self) -> np.ndarray:
        """
        All nodes as an array of shape `(*shape, dim)`.
        """
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack(mesh, axis=-1)

    def spacing(self) -> np.ndarray:
        return np.array([
            (axis[-1] - axis[0]) / (len(axis) - 1) if len(axis) > 1 else 0.0
            for axis in self.axes
        ])

    def within(self, box: Box) -> bool:
        return all(
            box.lo[i] - box.PADDING <= axis[0] and axis[-1] <= box.hi[i] +
            box.PADDING for i, axis in enumerate(self.axes))

    def boundary_mask(self) -> np.ndarray:
        """
        `True` at nodes where at least one derivative is one-sided.
        """
        mask = np.zeros(self.shape, dtype=bool)
        for i, n in enumerate(self.shape):
            index: list = [slice(None)] * self.dim
            index[i] = [0, n - 1]
            mask[tuple(index)] = True
        return mask

    def subgrid(self, slices: Sequence[slice]) -> "SampleGrid":
        return SampleGrid(
            tuple(axis[s].copy() for axis, s in zip(self.axes, slices)))


def grid_derivatives(values: np.ndarray, grid: SampleGrid) -> np.ndarray:
    """
    Partial derivatives of sampled values by central differences (second-order
    one-sided differences on the boundary).

    Parameters
    ---
    - `values` (`numpy.ndarray`): Samples of shape `(*grid.shape, *rest)`.
    - `grid` (`SampleGrid`): The grid the values are sampled on; every axis
      needs at least 3 nodes.

    Returns
    ---
    - An array of shape `(*grid.shape, dim, *rest)` whose entry
      `[..., i, ...]` is the derivative along axis `i`.
    """
    assert values.shape[:grid.dim] == grid.shape, (
        f"Expected values over the grid shape {grid.shape}, but found shape: "
        f"{values.shape}")
    assert all(n >= 3 for n in grid.shape), (
        f"Expected at least 3 nodes per axis, but found: {grid.shape}")

    derivatives = [
        np.gradient(values, grid.axes[i], axis=i, edge_order=2)
        for i in range(grid.dim)
    ]
    return np.stack(derivatives, axis=grid.dim)

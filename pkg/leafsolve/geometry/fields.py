import math
import numpy as np

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ..expr import (ZERO, CompiledExprs, ScalarExpr, add, as_expr,
                    differentiate, mul, parse_expr, simplify, sub)


class OutsideDomainError(ValueError):
    """
    Raised when a point handed to an operation lies outside its chart.
    """


@dataclass(frozen=True)
class Box:
    """
    A product of closed intervals `[lo_i, hi_i]` in chart coordinates.

    Points are considered inside when they are within `PADDING` of the box.
    """

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    PADDING = 1e-9

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", tuple(float(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(float(v) for v in self.hi))

        assert len(self.lo) == len(self.hi), (
            f"Expected `lo` and `hi` to have the same length, but found: "
            f"{len(self.lo)} and {len(self.hi)}")
        assert all(
            math.isfinite(a) and math.isfinite(b)
            for a, b in zip(self.lo, self.hi)), (
                f"Expected finite bounds, but found: {self.lo}, {self.hi}")
        assert all(a < b for a, b in zip(self.lo, self.hi)), (
            f"Expected lo < hi on every axis, but found: {self.lo}, {self.hi}")

    @classmethod
    def from_intervals(cls, intervals: Sequence[Sequence[float]]) -> "Box":
        return cls(tuple(lo for lo, _ in intervals),
                   tuple(hi for _, hi in intervals))

    @classmethod
    def cube(cls, dim: int, half_width: float = 1.0) -> "Box":
        return cls((-half_width, ) * dim, (half_width, ) * dim)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @cached_property
    def _lo(self) -> np.ndarray:
        return np.array(self.lo) - self.PADDING

    @cached_property
    def _hi(self) -> np.ndarray:
        return np.array(self.hi) + self.PADDING

    def contains(self, point: Sequence[float] | np.ndarray) -> bool:
        point = np.asarray(point, dtype=np.float64)
        return bool(np.all(point >= self._lo) and np.all(point <= self._hi))

    def require(self, point: Sequence[float] | np.ndarray, name: str = "point") -> None:
        if not self.contains(point):
            raise OutsideDomainError(
                f"Expected `{name}` inside the box {list(zip(self.lo, self.hi))}, "
                f"but found: {np.asarray(point).tolist()}")

    def distance_to_boundary(self, point: Sequence[float] | np.ndarray) -> float:
        point = np.asarray(point, dtype=np.float64)
        return float(
            min(np.min(point - np.array(self.lo)),
                np.min(np.array(self.hi) - point)))

    def project(self, indices: Sequence[int]) -> "Box":
        return Box(tuple(self.lo[i] for i in indices),
                   tuple(self.hi[i] for i in indices))

    def product(self, other: "Box") -> "Box":
        return Box(self.lo + other.lo, self.hi + other.hi)

    def widths(self) -> np.ndarray:
        return np.array(self.hi) - np.array(self.lo)


@dataclass(frozen=True)
class VectorFieldExpr:
    """
    A vector field on a chart, one expression per coordinate direction.
    """

    coordinates: tuple[str, ...]
    components: tuple[ScalarExpr, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        object.__setattr__(self, "components",
                           tuple(as_expr(c) for c in self.components))

        assert len(self.components) == len(self.coordinates), (
            f"Expected {len(self.coordinates)} components, but found "
            f"{len(self.components)}")

        allowed = set(self.coordinates)
        for component in self.components:
            stray = component.free_variables - allowed
            assert not stray, (
                f"Expected components over {self.coordinates}, but found "
                f"variables: {sorted(stray)}")

    @classmethod
    def parse(cls, components: Sequence[str],
              coordinates: Sequence[str]) -> "VectorFieldExpr":
        return cls(tuple(coordinates),
                   tuple(parse_expr(text, coordinates) for text in components))

    @classmethod
    def constant(cls, values: Sequence[float],
                 coordinates: Sequence[str]) -> "VectorFieldExpr":
        return cls(tuple(coordinates), tuple(as_expr(v) for v in values))

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    @cached_property
    def compiled(self) -> CompiledExprs:
        return CompiledExprs(self.components, self.coordinates)

    def __call__(self, point: Sequence[float] | np.ndarray) -> np.ndarray:
        return self.compiled(point)

    def derivative_of(self, function: ScalarExpr) -> ScalarExpr:
        """
        The directional derivative V(f) = Σ_b V^b ∂_b f.
        """
        return add(*(mul(component, differentiate(function, name))
                     for component, name in zip(self.components,
                                                self.coordinates)))

    def __add__(self, other: "VectorFieldExpr") -> "VectorFieldExpr":
        _check_compatible(self, other)
        return VectorFieldExpr(
            self.coordinates,
            tuple(
                add(a, b)
                for a, b in zip(self.components, other.components)))

    def scale(self, factor: ScalarExpr | float) -> "VectorFieldExpr":
        factor = as_expr(factor)
        return VectorFieldExpr(self.coordinates,
                               tuple(mul(factor, c) for c in self.components))

    def simplified(self) -> "VectorFieldExpr":
        return VectorFieldExpr(self.coordinates,
                               tuple(map(simplify, self.components)))

    def is_zero(self) -> bool:
        return all(component is ZERO for component in self.components)


def _check_compatible(V: VectorFieldExpr, W: VectorFieldExpr) -> None:
    if V.dim != W.dim or V.coordinates != W.coordinates:
        raise ValueError(
            f"Dimension mismatch: fields over {V.coordinates} and "
            f"{W.coordinates}")


def lie_bracket(V: VectorFieldExpr, W: VectorFieldExpr) -> VectorFieldExpr:
    """
    The Lie bracket [V, W] with components V(W^a) − W(V^a).
    """
    _check_compatible(V, W)

    return VectorFieldExpr(
        V.coordinates,
        tuple(
            sub(V.derivative_of(w), W.derivative_of(v))
            for v, w in zip(V.components, W.components)))

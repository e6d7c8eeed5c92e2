import numpy as np

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ..expr import (ZERO, CompiledExprs, ScalarExpr, add, as_expr, mul,
                    parse_expr, sub, variables_named)
from ..geometry import Box, VectorFieldExpr


@dataclass(frozen=True, eq=False)
class GraphDistribution:
    """
    The distribution D = Gr(F) on a box of R^k × R^m: at the point (x, y) it
    is the graph of the linear map F(x, y): R^k -> R^m.

    `F[a][i]` is the expression for the `a`-th fiber component of F(e_i).
    """

    F: tuple[tuple[ScalarExpr, ...], ...]
    domain: Box
    base_names: tuple[str, ...]
    fiber_names: tuple[str, ...]

    def __post_init__(self) -> None:
        F = tuple(tuple(as_expr(entry) for entry in row) for row in self.F)
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "base_names", tuple(self.base_names))
        object.__setattr__(self, "fiber_names", tuple(self.fiber_names))

        assert len(F) == self.m and all(len(row) == self.k for row in F), (
            f"Expected `F` to be a {self.m}x{self.k} matrix of expressions")
        assert self.domain.dim == self.n, (
            f"Expected a domain of dimension {self.n}, but found "
            f"{self.domain.dim}")

        allowed = set(self.coordinates)
        for row in F:
            for entry in row:
                stray = entry.free_variables - allowed
                assert not stray, (
                    f"Expected `F` over {self.coordinates}, but found "
                    f"variables: {sorted(stray)}")

    @classmethod
    def parse(cls,
              F: Sequence[Sequence[str]],
              domain: Box,
              base_names: Sequence[str] | None = None,
              fiber_names: Sequence[str] | None = None) -> "GraphDistribution":
        """
        Builds a distribution from a matrix of expression strings over
        `x1..xk, y1..ym` (or the given names).
        """
        m, k = len(F), len(F[0])
        base_names = base_names or variables_named("x", k)
        fiber_names = fiber_names or variables_named("y", m)
        names = list(base_names) + list(fiber_names)

        return cls(
            tuple(tuple(parse_expr(text, names) for text in row) for row in F),
            domain, tuple(base_names), tuple(fiber_names))

    @property
    def k(self) -> int:
        return len(self.base_names)

    @property
    def m(self) -> int:
        return len(self.fiber_names)

    @property
    def n(self) -> int:
        return self.k + self.m

    @property
    def coordinates(self) -> tuple[str, ...]:
        return self.base_names + self.fiber_names

    @cached_property
    def base_domain(self) -> Box:
        return self.domain.project(range(self.k))

    @cached_property
    def _compiled_F(self) -> CompiledExprs:
        return CompiledExprs([entry for row in self.F for entry in row],
                             self.coordinates)

    def matrix_at(self, point: np.ndarray) -> np.ndarray:
        """
        F at `point` as an `(m, k)` matrix.
        """
        return self._compiled_F(point).reshape(self.m, self.k)

    def lift(self, X: Sequence[float] | Sequence[ScalarExpr]) -> VectorFieldExpr:
        """
        The horizontal extension (X, F(X)) of a base vector X.
        """
        X = [as_expr(x) for x in X]
        assert len(X) == self.k, (
            f"Expected a base vector of length {self.k}, but found {len(X)}")

        fiber = [add(*(mul(entry, x) for entry, x in zip(row, X)))
                 for row in self.F]
        return VectorFieldExpr(self.coordinates, tuple(X + fiber))

    def frame_field(self, i: int) -> VectorFieldExpr:
        return self.lift([1.0 if j == i else 0.0 for j in range(self.k)])

    def vertical_defect(self, field: VectorFieldExpr) -> tuple[ScalarExpr, ...]:
        """
        The quotient component w − F(v) of a field (v, w).
        """
        v, w = field.components[:self.k], field.components[self.k:]
        return tuple(
            sub(w_a, add(*(mul(entry, v_i) for entry, v_i in zip(row, v))))
            for w_a, row in zip(w, self.F))

    def defect_at(self, vector: np.ndarray, point: np.ndarray) -> np.ndarray:
        vector = np.asarray(vector, dtype=np.float64)
        return vector[self.k:] - self.matrix_at(point) @ vector[:self.k]

    def is_flat(self) -> bool:
        return all(entry is ZERO for row in self.F for entry in row)

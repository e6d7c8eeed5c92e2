import numpy as np

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Sequence

from ..expr import (ZERO, CompiledExprs, ScalarExpr, Variable, as_expr,
                    dag_size, parse_expr, substitute, variables_named)
from ..geometry import Box


class NotTangentError(ValueError):
    """
    Raised when an operation needs a connection on the tangent bundle.
    """


class NonSymmetricConnectionError(ValueError):
    """
    Raised when an operation needs a torsion-free tangent connection.
    """


def expr_array(values: Any) -> np.ndarray:
    """
    Converts nested sequences of expressions or numbers into an object array
    of `ScalarExpr`.
    """
    return map_exprs(as_expr, np.array(values, dtype=object))


def map_exprs(function: Callable[[ScalarExpr], ScalarExpr],
              array: np.ndarray) -> np.ndarray:
    result = np.empty(array.shape, dtype=object)
    for index in np.ndindex(array.shape):
        result[index] = function(array[index])
    return result


def zeros(shape: tuple[int, ...]) -> np.ndarray:
    result = np.empty(shape, dtype=object)
    result.fill(ZERO)
    return result


@dataclass(frozen=True, eq=False)
class BundleConnection:
    """
    A connection on the trivial bundle U × R^r over a box U of R^n, given by
    its coefficient matrices: ∇_{∂_i} s = ∂_i s + ω_i s.

    `omega[i, a, b]` is the entry (ω_i)^a_b. A `tangent` connection (r = n)
    is a connection on TU with Christoffel symbols Γ^a_{ib} = (ω_i)^a_b.
    """

    coordinates: tuple[str, ...]
    omega: np.ndarray
    domain: Box
    tangent: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "coordinates", tuple(self.coordinates))
        omega = expr_array(self.omega)
        object.__setattr__(self, "omega", omega)

        n = len(self.coordinates)
        assert omega.ndim == 3 and omega.shape[0] == n and (
            omega.shape[1] == omega.shape[2]), (
                f"Expected `omega` of shape ({n}, r, r), but found shape: "
                f"{omega.shape}")
        assert self.domain.dim == n, (
            f"Expected a domain of dimension {n}, but found "
            f"{self.domain.dim}")
        if self.tangent:
            assert omega.shape[1] == n, (
                f"Expected a tangent connection to have rank {n}, but found "
                f"rank {omega.shape[1]}")

        allowed = set(self.coordinates)
        for entry in omega.flat:
            stray = entry.free_variables - allowed
            assert not stray, (
                f"Expected `omega` over {self.coordinates}, but found "
                f"variables: {sorted(stray)}")

    @classmethod
    def from_christoffel(cls,
                         christoffel: Any,
                         domain: Box,
                         coordinates: Sequence[str] | None = None
                         ) -> "BundleConnection":
        """
        Builds a tangent connection from Christoffel symbols laid out as
        `christoffel[a][i][j]` = Γ^a_{ij}. String entries are parsed over
        `coordinates` (by default `x1..xn`).

        Parameters
        ---
        - `christoffel`: An `n×n×n` nested sequence of expressions, numbers or
          expression strings.
        - `domain` (`Box`): The chart box.
        - `coordinates` (`Sequence[str] | None`): The coordinate names.

        Returns
        ---
        - The tangent `BundleConnection` with ω_i[a, j] = Γ^a_{ij}.
        """
        coordinates = tuple(coordinates or variables_named("x", domain.dim))
        gamma = parse_entries(christoffel, coordinates)
        n = len(coordinates)
        assert gamma.shape == (n, n, n), (
            f"Expected Christoffel symbols of shape ({n}, {n}, {n}), but found "
            f"shape: {gamma.shape}")

        return cls(coordinates, np.transpose(gamma, (1, 0, 2)), domain, True)

    @classmethod
    def from_omega(cls,
                   omega: Any,
                   domain: Box,
                   coordinates: Sequence[str] | None = None,
                   tangent: bool = False) -> "BundleConnection":
        """
        Builds a connection from `n` coefficient matrices, parsing string
        entries over `coordinates` (by default `x1..xn`).
        """
        coordinates = tuple(coordinates or variables_named("x", domain.dim))
        return cls(coordinates, parse_entries(omega, coordinates), domain,
                   tangent)

    @classmethod
    def flat(cls,
             domain: Box,
             rank: int | None = None,
             coordinates: Sequence[str] | None = None) -> "BundleConnection":
        """
        The standard connection of the trivial bundle (tangent when `rank` is
        omitted).
        """
        coordinates = tuple(coordinates or variables_named("x", domain.dim))
        n = len(coordinates)
        r = n if rank is None else rank
        return cls(coordinates, zeros((n, r, r)), domain, rank is None)

    @property
    def n(self) -> int:
        return len(self.coordinates)

    @property
    def r(self) -> int:
        return self.omega.shape[1]

    @property
    def christoffel(self) -> np.ndarray:
        """
        The symbols Γ^a_{ij} as an object array indexed `[a, i, j]`.
        """
        self.require_tangent()
        return np.transpose(self.omega, (1, 0, 2))

    def require_tangent(self) -> None:
        if not self.tangent:
            raise NotTangentError(
                f"Expected a tangent connection, but found a connection of "
                f"rank {self.r} not declared tangent")

    @cached_property
    def _compiled_omega(self) -> CompiledExprs:
        return CompiledExprs(list(self.omega.flat), self.coordinates)

    def omega_at(self, point: Sequence[float] | np.ndarray) -> np.ndarray:
        """
        The matrices ω_i at `point` as an array of shape `(n, r, r)`.
        """
        return self._compiled_omega(point).reshape(self.omega.shape)

    def renamed(self, coordinates: Sequence[str]) -> "BundleConnection":
        """
        The same connection written over new coordinate names.
        """
        coordinates = tuple(coordinates)
        assert len(coordinates) == self.n, (
            f"Expected {self.n} coordinate names, but found {len(coordinates)}")
        mapping = {
            old: Variable(new)
            for old, new in zip(self.coordinates, coordinates)
        }
        omega = map_exprs(lambda entry: substitute(entry, mapping), self.omega)
        return BundleConnection(coordinates, omega, self.domain, self.tangent)

    def is_flat(self) -> bool:
        return all(entry is ZERO for entry in self.omega.flat)

    @property
    def size(self) -> int:
        return dag_size(self.omega.flat)


def parse_entries(values: Any, coordinates: Sequence[str]) -> np.ndarray:
    raw = np.array(values, dtype=object)
    result = np.empty(raw.shape, dtype=object)
    for index in np.ndindex(raw.shape):
        entry = raw[index]
        result[index] = parse_expr(entry, coordinates) if isinstance(
            entry, str) else as_expr(entry)
    return result

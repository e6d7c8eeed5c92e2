import numpy as np

from functools import lru_cache
from jax import Array
from jax.random import PRNGKey, split
from typing import Sequence

from ..data.random_fields import random_point
from ..expr import (ZERO, ScalarExpr, add, as_expr, differentiate, mul, neg,
                    simplify, sub)
from .bundle import (BundleConnection, NonSymmetricConnectionError,
                     parse_entries, zeros)
from .tensors import TensorFieldExpr

SYMMETRY_TOL = 1e-12


def covariant_derivative(conn: BundleConnection,
                         section: Sequence[ScalarExpr | float],
                         direction_index: int) -> list[ScalarExpr]:
    """
    ∇_{∂_i} s = ∂_i s + ω_i s for a section given by `r` expressions.
    """
    assert len(section) == conn.r, (
        f"Expected a section with {conn.r} components, but found "
        f"{len(section)}")
    assert 0 <= direction_index < conn.n, (
        f"Expected a direction index in [0, {conn.n}), but found: "
        f"{direction_index}")

    s = [as_expr(entry) for entry in section]
    name = conn.coordinates[direction_index]
    omega = conn.omega[direction_index]

    return [
        simplify(
            add(differentiate(s[a], name),
                *(mul(omega[a, b], s[b]) for b in range(conn.r))))
        for a in range(conn.r)
    ]


def _matrix_product(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    r = A.shape[0]
    result = np.empty((r, r), dtype=object)
    for a in range(r):
        for b in range(r):
            result[a, b] = add(*(mul(A[a, c], B[c, b]) for c in range(r)))
    return result


@lru_cache(maxsize=64)
def curvature(conn: BundleConnection) -> TensorFieldExpr:
    """
    The curvature R_{ij} = ∂_i ω_j − ∂_j ω_i + [ω_i, ω_j], with
    `R[i, j, a, b]` = (R(∂_i, ∂_j))^a_b. Exactly antisymmetric in `i, j`.
    """
    n, r = conn.n, conn.r
    omega = conn.omega
    R = zeros((n, n, r, r))

    for i in range(n):
        for j in range(i + 1, n):
            left = _matrix_product(omega[i], omega[j])
            right = _matrix_product(omega[j], omega[i])
            for a in range(r):
                for b in range(r):
                    value = add(
                        sub(differentiate(omega[j, a, b], conn.coordinates[i]),
                            differentiate(omega[i, a, b], conn.coordinates[j])),
                        sub(left[a, b], right[a, b]))
                    R[i, j, a, b] = value
                    R[j, i, a, b] = neg(value)

    return TensorFieldExpr(conn.coordinates, R, 2, "endo")


def iota_torsion(conn: BundleConnection,
                 iota: Sequence[Sequence[ScalarExpr | float | str]]
                 ) -> TensorFieldExpr:
    """
    The ι-torsion T^ι(∂_i, ∂_j) = ∇_i(ι ∂_j) − ∇_j(ι ∂_i) of a bundle map
    ι: TU -> E given as an `r×n` matrix of expressions.

    Returns
    ---
    - A vector-valued tensor with `T[i, j, a]` = (T^ι(∂_i, ∂_j))^a.
    """
    iota_array = parse_entries(iota, conn.coordinates)
    assert iota_array.shape == (conn.r, conn.n), (
        f"Expected `iota` of shape ({conn.r}, {conn.n}), but found shape: "
        f"{iota_array.shape}")

    n, r = conn.n, conn.r
    T = zeros((n, n, r))
    for i in range(n):
        for j in range(i + 1, n):
            nabla_i = covariant_derivative(conn, list(iota_array[:, j]), i)
            nabla_j = covariant_derivative(conn, list(iota_array[:, i]), j)
            for a in range(r):
                value = sub(nabla_i[a], nabla_j[a])
                T[i, j, a] = value
                T[j, i, a] = neg(value)

    return TensorFieldExpr(conn.coordinates, T, 2, "vector")


@lru_cache(maxsize=64)
def torsion(conn: BundleConnection) -> TensorFieldExpr:
    """
    The torsion T^a_{ij} = Γ^a_{ij} − Γ^a_{ji}, with `T[i, j, a]` = T^a_{ij}.

    Raises
    ---
    - `NotTangentError` when `conn` is not a tangent connection.
    """
    conn.require_tangent()
    n = conn.n
    omega = conn.omega
    T = zeros((n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            for a in range(n):
                value = sub(omega[i, a, j], omega[j, a, i])
                T[i, j, a] = value
                T[j, i, a] = neg(value)

    return TensorFieldExpr(conn.coordinates, T, 2, "vector")


def check_symmetric(conn: BundleConnection,
                    tol: float = SYMMETRY_TOL,
                    samples: int = 8,
                    key: Array | None = None) -> float:
    """
    Checks that a tangent connection is torsion free: symbolically when the
    torsion simplifies to zero, otherwise at the box center and `samples`
    random points.

    Returns
    ---
    - The largest torsion entry found (0 when symbolically zero).

    Raises
    ---
    - `NonSymmetricConnectionError` when a torsion entry exceeds `tol`.
    """
    T = torsion(conn)
    if all(entry is ZERO for entry in T.components.flat):
        return 0.0

    key = key if key is not None else PRNGKey(0)
    center = (np.array(conn.domain.lo) + np.array(conn.domain.hi)) / 2
    points = [center] + [
        random_point(conn.domain, key=k)
        for k in (split(key, samples) if samples else [])
    ]

    worst = 0.0
    for point in points:
        try:
            worst = max(worst, float(np.max(np.abs(T.at(point)))))
        except ArithmeticError:
            continue

    if worst > tol:
        raise NonSymmetricConnectionError(
            f"Expected a symmetric connection, but found torsion of size "
            f"{worst}")
    return worst

"""
Connections induced on associated bundles: dual, bilinear forms,
Lin(TM, TN) over M × N, pull-backs, and the horizontal distribution of a
connection viewed as a graph distribution.
"""
import numpy as np

from typing import Sequence

from ..distribution import GraphDistribution
from ..expr import (ScalarExpr, Variable, add, differentiate, mul, neg,
                    substitute, variables_named)
from ..geometry import Box
from .bundle import BundleConnection, parse_entries, zeros


def dual_connection(conn: BundleConnection) -> BundleConnection:
    """
    The connection on the dual bundle, ω*_i = −ω_iᵀ.
    """
    n, r = conn.n, conn.r
    omega = zeros((n, r, r))
    for i in range(n):
        for a in range(r):
            for b in range(r):
                omega[i, a, b] = neg(conn.omega[i, b, a])

    return BundleConnection(conn.coordinates, omega, conn.domain)


def bilinear_connection(conn: BundleConnection) -> BundleConnection:
    """
    The connection on bilinear forms of the fiber, acting on a form G
    flattened row-major (`G[a, b]` at index `a * r + b`):

        ∇̂_i G = ∂_i G − ω_iᵀ G − G ω_i
    """
    n, r = conn.n, conn.r
    omega = zeros((n, r * r, r * r))
    for i in range(n):
        for a in range(r):
            for b in range(r):
                for c in range(r):
                    # −ω_i[c, a] G[c, b]
                    row, column = a * r + b, c * r + b
                    omega[i, row, column] = add(omega[i, row, column],
                                                neg(conn.omega[i, c, a]))
                    # −G[a, c] ω_i[c, b]
                    column = a * r + c
                    omega[i, row, column] = add(omega[i, row, column],
                                                neg(conn.omega[i, c, b]))

    return BundleConnection(conn.coordinates, omega, conn.domain)


def hom_connection(connM: BundleConnection,
                   connN: BundleConnection) -> BundleConnection:
    """
    The connection on Lin(TM, TN) over M × N induced by two tangent
    connections. A section σ is an `m×n` matrix flattened row-major
    (`σ[α, a]` at index `α * n + a`), and

        ∇_{(v, w)} σ = ∂_{(v, w)} σ + ω^N(w) σ − σ ω^M(v).

    The base coordinates are those of M followed by those of N and must be
    distinct.

    Raises
    ---
    - `NotTangentError` when either connection is not tangent.
    """
    connM.require_tangent()
    connN.require_tangent()
    overlap = set(connM.coordinates) & set(connN.coordinates)
    assert not overlap, (
        f"Expected distinct coordinate names on M and N, but found shared "
        f"names: {sorted(overlap)}")

    n, m = connM.n, connN.n
    omega = zeros((n + m, m * n, m * n))

    for i in range(n):
        for alpha in range(m):
            for a in range(n):
                for b in range(n):
                    omega[i, alpha * n + a, alpha * n + b] = neg(
                        connM.omega[i, b, a])

    for mu in range(m):
        for alpha in range(m):
            for beta in range(m):
                for a in range(n):
                    omega[n + mu, alpha * n + a, beta * n + a] = connN.omega[
                        mu, alpha, beta]

    return BundleConnection(connM.coordinates + connN.coordinates, omega,
                            connM.domain.product(connN.domain))


def pullback_connection(conn: BundleConnection,
                        f: Sequence[ScalarExpr | str],
                        domain: Box,
                        coordinates: Sequence[str] | None = None,
                        tangent: bool = False) -> BundleConnection:
    """
    The pull-back f*∇ along a map f: R^p -> R^n given by `n` expressions over
    `coordinates` (by default `u1..up`):

        (f*ω)_j = Σ_i (∂_j f^i) ω_i ∘ f

    Parameters
    ---
    - `conn` (`BundleConnection`): The connection over R^n.
    - `f` (`Sequence[ScalarExpr | str]`): The components of the map.
    - `domain` (`Box`): The box of R^p the map is defined on; its image must
      lie in `conn.domain`.
    - `coordinates` (`Sequence[str] | None`): The coordinates of R^p.
    - `tangent` (`bool`): Declare the result tangent (for p = r).
    """
    coordinates = tuple(coordinates or variables_named("u", domain.dim))
    components = parse_entries(list(f), coordinates)
    assert components.shape == (conn.n, ), (
        f"Expected {conn.n} map components, but found shape: "
        f"{components.shape}")

    mapping = {name: components[i] for i, name in enumerate(conn.coordinates)}
    composed = np.empty(conn.omega.shape, dtype=object)
    for index in np.ndindex(conn.omega.shape):
        composed[index] = substitute(conn.omega[index], mapping)

    p, r = len(coordinates), conn.r
    omega = zeros((p, r, r))
    for j in range(p):
        jacobian = [differentiate(components[i], coordinates[j])
                    for i in range(conn.n)]
        for a in range(r):
            for b in range(r):
                omega[j, a, b] = add(*(mul(jacobian[i], composed[i, a, b])
                                       for i in range(conn.n)))

    return BundleConnection(coordinates, omega, domain, tangent)


def horizontal_distribution(conn: BundleConnection,
                            fiber_box: Box | None = None,
                            fiber_names: Sequence[str] | None = None
                            ) -> GraphDistribution:
    """
    The horizontal distribution of a connection on U × R^r as the graph
    distribution F_{(x, ξ)}(v) = −(Σ_i v^i ω_i(x)) ξ. Its Levi form at
    (x, ξ) is −R(v, w) ξ.
    """
    r = conn.r
    fiber_names = tuple(fiber_names or variables_named("xi", r))
    fiber_box = fiber_box or Box.cube(r, 10.0)

    xi = [Variable(name) for name in fiber_names]
    F = tuple(
        tuple(
            neg(add(*(mul(conn.omega[i, a, b], xi[b]) for b in range(r))))
            for i in range(conn.n)) for a in range(r))

    return GraphDistribution(F, conn.domain.product(fiber_box),
                             conn.coordinates, fiber_names)

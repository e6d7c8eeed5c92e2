"""
Named connections, distributions and sprays with known closed-form
behavior, shared by the self-test suite, the bundled manifests and the tests.
"""
import jax
import math
import numpy as np

from jax import Array
from typing import Any, Callable

from ..connection import BundleConnection, zeros
from ..distribution import GraphDistribution
from ..geometry import Box
from ..spray import Spray
from .random_fields import _key, random_polynomial

SPHERE_BASE = (math.pi / 2, 0.0)
SPHERE2_BASE = (math.pi, 0.0)
TDE_RATES = (1.0, -0.5)

SPHERE_BOX = Box((0.2, -math.pi + 0.2), (math.pi - 0.2, math.pi - 0.2))
SPHERE2_BOX = Box((0.4, -math.pi + 0.2), (2 * math.pi - 0.4, math.pi - 0.2))


def flat_plane(half_width: float = 1.0) -> BundleConnection:
    return BundleConnection.flat(Box.cube(2, half_width))


def sphere() -> BundleConnection:
    """
    The unit sphere in (θ, φ) = (x1, x2): Γ^1_22 = −sin θ cos θ and
    Γ^2_12 = Γ^2_21 = cot θ.
    """
    return BundleConnection.from_christoffel(
        [[["0", "0"], ["0", "-sin(x1)*cos(x1)"]],
         [["0", "cos(x1)/sin(x1)"], ["cos(x1)/sin(x1)", "0"]]], SPHERE_BOX)


def sphere_radius_two() -> BundleConnection:
    """
    The sphere of radius 2 in arc-length coordinates (s, φ) = (x1, x2), metric
    ds² + 4 sin²(s/2) dφ², with the equator at s = π.
    """
    return BundleConnection.from_christoffel(
        [[["0", "0"], ["0", "-sin(x1)"]],
         [["0", "cos(x1/2)/(2*sin(x1/2))"],
          ["cos(x1/2)/(2*sin(x1/2))", "0"]]], SPHERE2_BOX)


def perturbed_sphere(shift: float = 0.1) -> BundleConnection:
    return BundleConnection.from_christoffel(
        [[[str(shift), "0"], ["0", "-sin(x1)*cos(x1)"]],
         [["0", "cos(x1)/sin(x1)"], ["cos(x1)/sin(x1)", "0"]]], SPHERE_BOX)


def trace_obstructed() -> BundleConnection:
    """
    A symmetric connection on R² with Γ^1_12 = Γ^1_21 = x1. Its curvature
    has nonzero trace, so it preserves no nondegenerate metric.
    """
    return BundleConnection.from_christoffel(
        [[["0", "x1"], ["x1", "0"]], [["0", "0"], ["0", "0"]]],
        Box.cube(2, 1.0))


def odd_curvature() -> BundleConnection:
    """
    Γ^1_11 = x2: symmetric, with ∇R ≠ 0 wherever x2 ≠ 0.
    """
    return BundleConnection.from_christoffel(
        [[["x2", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]],
        Box.cube(2, 1.0))


def exponential_tde(rates: tuple[float, float] = TDE_RATES
                    ) -> GraphDistribution:
    """
    df = y (a · dx) on R² × R, integrable with leaves y = y0 exp(a · (x − x0)).
    """
    return GraphDistribution.parse(
        [[f"{rates[0]!r}*y1", f"{rates[1]!r}*y1"]],
        Box((-1.0, -1.0, -10.0), (1.0, 1.0, 10.0)))


def non_integrable() -> GraphDistribution:
    """
    F(x, y)(X) = x2 X1, with constant Levi form L(e1, e2) = −1.
    """
    return GraphDistribution.parse([["x2", "0"]], Box.cube(3, 1.0))


def order_two() -> GraphDistribution:
    """
    F(x, y)(X) = (x1²/2) X2: the Levi form vanishes at the origin but the
    second-order bracket does not.
    """
    return GraphDistribution.parse([["0", "x1^2/2"]], Box.cube(3, 1.0))


def lie_group_spray() -> Spray:
    """
    The spray of the one-parameter subgroups of the affine group of the line
    in the chart x1 > 0.
    """
    return Spray.parse(["v1^2/x1", "v1*v2/x1"],
                       Box((0.2, -2.0), (3.0, 2.0)))


def random_connection(domain: Box,
                      rank: int | None = None,
                      degree: int = 2,
                      key: Array | None = None,
                      scale: float = 0.5) -> BundleConnection:
    """
    A connection with random polynomial coefficients (tangent when `rank` is
    omitted).
    """
    flat = BundleConnection.flat(domain, rank)
    omega = zeros(flat.omega.shape)
    keys = jax.random.split(_key(key), omega.size)
    for k, index in zip(keys, np.ndindex(omega.shape)):
        omega[index] = random_polynomial(flat.coordinates, degree, 3, k,
                                         scale)
    return BundleConnection(flat.coordinates, omega, domain, flat.tangent)


def random_symmetric_connection(domain: Box,
                                degree: int = 2,
                                key: Array | None = None,
                                scale: float = 0.5) -> BundleConnection:
    conn = random_connection(domain, None, degree, key, scale)
    omega = conn.omega.copy()
    for i in range(conn.n):
        for a in range(conn.n):
            for j in range(i):
                omega[i, a, j] = omega[j, a, i]
    return BundleConnection(conn.coordinates, omega, domain, True)


FIXTURE_CATALOG: dict[str, Callable[[], Any]] = {
    "flat": flat_plane,
    "sphere": sphere,
    "sphere2": sphere_radius_two,
    "perturbed_sphere": perturbed_sphere,
    "trace_obstructed": trace_obstructed,
    "odd_curvature": odd_curvature,
    "exponential_tde": exponential_tde,
    "non_integrable": non_integrable,
    "order_two": order_two,
    "lie_group_spray": lie_group_spray,
}


def get_fixture(name: str) -> Any:
    if name in FIXTURE_CATALOG:
        return FIXTURE_CATALOG[name]()
    else:
        raise ValueError(f"Could not find fixture `{name}`")

import jax
import numpy as np

from jax.random import PRNGKey

from leafsolve.data.random_fields import random_vector_field
from leafsolve.geometry import (Box, OutsideDomainError, VectorFieldExpr,
                                finite_diff_jacobian, flow_commutator_oracle,
                                lie_bracket)

COORDINATES = ["x1", "x2"]


def test_box_contains_with_padding():
    box = Box.from_intervals([[-1.0, 1.0], [0.0, 2.0]])

    assert box.dim == 2
    assert box.contains([1.0 + 1e-10, 0.0])
    assert not box.contains([1.0 + 1e-6, 0.0])
    assert np.isclose(box.distance_to_boundary([0.5, 1.5]), 0.5)


def test_box_require():
    box = Box.cube(2, 1.0)

    try:
        box.require([2.0, 0.0], "x0")

        raise Exception("Expected a point outside the box to fail")

    except OutsideDomainError as e:
        assert e.args == (
            "Expected `x0` inside the box [(-1.0, 1.0), (-1.0, 1.0)], "
            "but found: [2.0, 0.0]", )


def test_box_empty_interval():
    try:
        Box((0.0, ), (0.0, ))

        raise Exception("Expected an empty interval to fail")

    except AssertionError as e:
        assert e.args == (
            "Expected lo < hi on every axis, but found: (0.0,), (0.0,)", )


def test_lie_bracket_of_shear():
    V = VectorFieldExpr.parse(["1", "0"], COORDINATES)
    W = VectorFieldExpr.parse(["0", "x1"], COORDINATES)

    bracket = lie_bracket(V, W)

    assert np.array_equal(bracket([0.3, -0.7]), [0.0, 1.0])
    assert lie_bracket(V, V).simplified().is_zero()


def test_lie_bracket_is_antisymmetric():
    V = VectorFieldExpr.parse(["x2^2", "sin(x1)"], COORDINATES)
    W = VectorFieldExpr.parse(["x1*x2", "exp(x2)"], COORDINATES)
    point = np.array([0.4, -0.2])

    assert np.allclose(lie_bracket(V, W)(point), -lie_bracket(W, V)(point),
                       atol=1e-14)


def test_flow_commutator_matches_bracket():
    V = VectorFieldExpr.parse(["x2", "0"], COORDINATES)
    W = VectorFieldExpr.parse(["0", "x1^2"], COORDINATES)
    point = np.array([0.3, 0.2])

    oracle = flow_commutator_oracle(V, W, point, t=1e-3)

    assert np.allclose(oracle, lie_bracket(V, W)(point), atol=5e-3)


def test_flow_commutator_exact_for_shear():
    V = VectorFieldExpr.parse(["1", "0"], COORDINATES)
    W = VectorFieldExpr.parse(["0", "x1"], COORDINATES)

    oracle = flow_commutator_oracle(V, W, np.zeros(2), t=1e-2)

    assert np.allclose(oracle, [0.0, 1.0], atol=1e-8)


def test_finite_diff_jacobian_of_linear_map():
    A = np.array([[1.0, 2.0, 0.0], [-1.0, 0.5, 3.0]])

    J = finite_diff_jacobian(lambda x: A @ x, np.array([0.1, 0.2, 0.3]))

    assert J.shape == (2, 3)
    assert np.allclose(J, A, atol=1e-9)


def test_lie_bracket_jacobi_identity():
    coordinates = ["x1", "x2", "x3"]
    keys = jax.random.split(PRNGKey(11), 3)
    U, V, W = (random_vector_field(coordinates, 2, key) for key in keys)

    total = (lie_bracket(U, lie_bracket(V, W)) +
             lie_bracket(V, lie_bracket(W, U)) +
             lie_bracket(W, lie_bracket(U, V)))

    for point in ([0.1, -0.3, 0.5], [0.7, 0.2, -0.4]):
        assert np.max(np.abs(total(point))) < 1e-10


def test_lie_bracket_is_bilinear():
    keys = jax.random.split(PRNGKey(5), 3)
    U, V, W = (random_vector_field(COORDINATES, 3, key) for key in keys)
    point = np.array([0.25, -0.6])

    combined = lie_bracket(U.scale(2.0) + V.scale(-0.5), W)(point)
    expected = (2.0 * lie_bracket(U, W)(point) -
                0.5 * lie_bracket(V, W)(point))

    assert np.allclose(combined, expected, atol=1e-12)

import math
import numpy as np

from leafsolve.connection import (TensorFieldExpr, bilinear_connection,
                                  covariant_derivative,
                                  covariant_derivative_tensor,
                                  covariant_derivatives, curvature)
from leafsolve.data.fixtures import sphere
from leafsolve.expr import evaluate, parse_expr

NAMES = ["x1", "x2"]
POINT = (1.0, 0.3)


def _round_metric() -> TensorFieldExpr:
    G = [[parse_expr(entry, NAMES) for entry in row]
         for row in (("1", "0"), ("0", "sin(x1)^2"))]
    return TensorFieldExpr(NAMES, G, 0, "bilinear")


def test_covariant_derivative_of_a_frame_field():
    # ∇_θ ∂φ = cot θ ∂φ
    values = covariant_derivative(sphere(), [0.0, 1.0], 0)
    env = dict(zip(NAMES, POINT))

    assert evaluate(values[0], env) == 0.0
    assert math.isclose(evaluate(values[1], env), 1.0 / math.tan(1.0))


def test_covariant_derivative_arguments():
    try:
        covariant_derivative(sphere(), [0.0, 1.0], 2)

        raise Exception("Expected an out-of-range direction to fail")

    except AssertionError as e:
        assert e.args == (
            "Expected a direction index in [0, 2), but found: 2", )

    try:
        covariant_derivative(sphere(), [1.0], 0)

        raise Exception("Expected a short section to fail")

    except AssertionError as e:
        assert e.args == ("Expected a section with 2 components, but found 1",
                          )


def test_round_metric_is_parallel():
    derivatives = covariant_derivatives(sphere(), sphere(), _round_metric(),
                                        2)

    assert len(derivatives) == 3
    assert derivatives[1].arity == 1
    assert derivatives[2].components.shape == (2, 2, 2, 2)
    assert np.allclose(derivatives[1].at(POINT), 0.0, atol=1e-12)
    assert np.allclose(derivatives[2].at(POINT), 0.0, atol=1e-12)


def test_bilinear_connection_keeps_the_metric_parallel():
    conn = bilinear_connection(sphere())
    G = _round_metric().components.reshape(-1).tolist()

    assert conn.r == 4
    for i in range(2):
        values = [
            evaluate(entry, dict(zip(NAMES, POINT)))
            for entry in covariant_derivative(conn, G, i)
        ]
        assert np.allclose(values, 0.0, atol=1e-12)


def test_sphere_curvature_is_parallel():
    nabla_R = covariant_derivative_tensor(sphere(), sphere(),
                                          curvature(sphere()))

    assert nabla_R.arity == 3
    assert nabla_R.fiber == "endo"
    assert np.allclose(nabla_R.at(POINT), 0.0, atol=1e-12)


def test_hessian_of_a_coordinate():
    f = TensorFieldExpr(NAMES, parse_expr("x1", NAMES), 0,
                        "scalar")

    hessian = covariant_derivative_tensor(sphere(), None, f, 2).at(POINT)

    assert np.allclose(hessian,
                       [[0.0, 0.0], [0.0, math.sin(1.0) * math.cos(1.0)]])


def test_order_must_be_positive():
    try:
        covariant_derivative_tensor(sphere(), sphere(), _round_metric(), 0)

        raise Exception("Expected order 0 to fail")

    except AssertionError as e:
        assert e.args == ("Expected an order of at least 1, but found: 0", )

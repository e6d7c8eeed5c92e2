import numpy as np

from jax.random import PRNGKey
from leafsolve.data.fixtures import random_connection, random_symmetric_connection
from leafsolve.data.random_fields import (random_matrix, random_point,
                                          random_polynomial,
                                          random_unit_vectors)
from leafsolve.connection import torsion
from leafsolve.expr import differentiate, evaluate
from leafsolve.geometry import Box

VARIABLES = ["x1", "x2"]


def test_draws_are_reproducible():
    assert random_polynomial(VARIABLES, 3) is random_polynomial(VARIABLES, 3)
    assert np.array_equal(random_matrix((2, 3)), random_matrix((2, 3)))
    assert not np.array_equal(random_matrix((2, 3)),
                              random_matrix((2, 3), key=PRNGKey(1)))


def test_polynomial_degree():
    for seed in range(5):
        p = random_polynomial(VARIABLES, 2, key=PRNGKey(seed))
        for a in VARIABLES:
            for b in VARIABLES:
                for c in VARIABLES:
                    third = differentiate(
                        differentiate(differentiate(p, a), b), c)
                    assert evaluate(third, {"x1": 0.3, "x2": -0.7}) == 0.0


def test_polynomial_arguments():
    try:
        random_polynomial(VARIABLES, -1)

        raise Exception("Expected a negative degree to fail")

    except AssertionError as e:
        assert e.args == (
            "Expected a non-negative degree and a positive number of terms, "
            "but found: -1 and 4", )


def test_random_point_respects_margin():
    box = Box((0.0, -1.0), (1.0, 1.0))

    for seed in range(10):
        point = random_point(box, PRNGKey(seed))
        assert np.all(point >= [0.1, -0.8]) and np.all(point <= [0.9, 0.8])


def test_unit_vectors():
    vectors = random_unit_vectors(3, 4)

    assert vectors.shape == (4, 3)
    assert np.allclose(np.linalg.norm(vectors, axis=1), 1.0)


def test_random_symmetric_connection_is_torsion_free():
    box = Box.cube(2, 1.0)
    point = random_point(box)

    assert np.max(np.abs(torsion(random_connection(box)).at(point))) > 0.0
    assert np.allclose(
        torsion(random_symmetric_connection(box)).at(point), 0.0)

import jax
import numpy as np

from jax.random import PRNGKey
from leafsolve.data.fixtures import exponential_tde, non_integrable, order_two
from leafsolve.data.random_fields import random_point, random_polynomial
from leafsolve.distribution import (GraphDistribution, iterated_bracket_obstructions,
                                    levi_form, levi_tensor)
from leafsolve.expr import BudgetExceededError
from leafsolve.geometry import Box, OutsideDomainError, flow_commutator_oracle

E1 = np.array([1.0, 0.0])
E2 = np.array([0.0, 1.0])


def test_graph_distribution_default_names():
    D = GraphDistribution.parse([["x2", "0"], ["y1", "x1*y2"]],
                                Box.cube(4, 1.0))

    assert (D.k, D.m) == (2, 2)
    assert D.coordinates == ("x1", "x2", "y1", "y2")
    assert np.array_equal(D.matrix_at(np.array([0.1, 0.2, 0.3, 0.4])),
                          [[0.2, 0.0], [0.3, 0.1 * 0.4]])


def test_levi_form_of_non_integrable():
    D = non_integrable()

    assert np.array_equal(levi_form(D, np.zeros(3), E1, E2), [-1.0])
    assert np.array_equal(levi_form(D, [0.5, -0.5, 0.2], E2, E1), [1.0])


def test_levi_form_is_antisymmetric():
    D = GraphDistribution.parse([["sin(x2)*y1", "x1^2 + y1"]],
                                Box.cube(3, 1.0))
    point = np.array([0.3, -0.4, 0.2])
    X, Y = np.array([0.7, -1.2]), np.array([0.1, 2.0])

    assert np.array_equal(levi_form(D, point, X, Y),
                          -levi_form(D, point, Y, X))
    assert np.array_equal(levi_form(D, point, X, X), [0.0])


def test_levi_form_vanishes_on_integrable():
    D = exponential_tde()

    assert levi_tensor(D).max_norm(np.array([0.2, -0.3, 4.0])) == 0.0


def test_levi_form_outside_domain():
    try:
        levi_form(non_integrable(), [2.0, 0.0, 0.0], E1, E2)

        raise Exception("Expected a point outside the domain to fail")

    except OutsideDomainError:
        pass


def test_bracket_obstructions_of_order_two():
    report = iterated_bracket_obstructions(order_two(), np.zeros(3), 2)

    assert report.completed_order == 2
    assert report.max_defect(1) == 0.0
    assert report.max_defect(2) == 1.0
    assert not report.passed
    assert [entry.multi_index for entry in report.obstructions] == [(1, 1, 2)]


def test_bracket_obstructions_of_integrable():
    report = iterated_bracket_obstructions(exponential_tde(),
                                           [0.1, 0.2, 1.5], 3)

    assert report.passed
    assert report.completed_order == 3
    assert len(report.entries) == 1 + 2 + 4


def test_bracket_obstructions_budget():
    report = iterated_bracket_obstructions(order_two(), np.zeros(3), 3,
                                           budget=0)

    assert report.completed_order == 0
    assert report.entries == []
    assert report.budget_message is not None
    assert report.budget_message.startswith("Order 1 needs")
    assert report.budget_message.endswith("budget of 0")

    try:
        iterated_bracket_obstructions(order_two(),
                                      np.zeros(3),
                                      3,
                                      budget=0,
                                      strict=True)

        raise Exception("Expected the strict budget check to fail")

    except BudgetExceededError as e:
        assert e.completed_order == 0


def test_levi_form_matches_the_flow_commutator():
    names = ("x1", "x2", "y1")
    keys = jax.random.split(PRNGKey(7), 10)

    for seed in range(5):
        entry_keys = jax.random.split(keys[2 * seed], 2)
        F = ((random_polynomial(names, 2, 3, entry_keys[0], 0.5),
              random_polynomial(names, 2, 3, entry_keys[1], 0.5)), )
        D = GraphDistribution(F, Box.cube(3, 1.0), names[:2], names[2:])
        point = random_point(Box.cube(3, 0.5), keys[2 * seed + 1])

        bracket = flow_commutator_oracle(D.frame_field(0), D.frame_field(1),
                                         point, 1e-3, D.domain)

        assert np.max(
            np.abs(D.defect_at(bracket, point) -
                   levi_form(D, point, E1, E2))) < 5e-3

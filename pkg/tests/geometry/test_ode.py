import math
import numpy as np

from leafsolve.geometry import (ChartExitError, SampleGrid, grid_derivatives,
                                integrate_ode)


def test_integrate_exponential():
    solution = integrate_ode(lambda _, y: y, np.array([1.0]), (0.0, 1.0),
                             1e-2)

    assert solution.t_end == 1.0
    assert abs(solution.end[0] - math.e) < 1e-8
    assert abs(solution(0.505)[0] - math.exp(0.505)) < 1e-7
    assert abs(solution.derivative(0.505)[0] - math.exp(0.505)) < 1e-6


def test_integrate_backward():
    solution = integrate_ode(lambda _, y: -y, np.array([2.0]), (1.0, 0.0),
                             1e-2)

    assert np.all(np.diff(solution.ts) < 0)
    assert solution.t_end == 0.0
    assert abs(solution.end[0] - 2.0 * math.e) < 1e-7


def test_integrate_breakpoints_are_exact():
    solution = integrate_ode(lambda t, y: np.array([t]), np.array([0.0]),
                             (0.0, 0.3), 0.1)

    assert len(solution.ts) == 4
    assert np.array_equal(solution(solution.ts[2]), solution.ys[2])


def test_integrate_chart_exit():
    try:
        integrate_ode(lambda _, y: np.ones(1),
                      np.zeros(1), (0.0, 1.0),
                      0.1,
                      inside=lambda y: bool(y[0] <= 0.55))

        raise Exception("Expected the trajectory to leave the chart")

    except ChartExitError as e:
        assert 0.35 < e.last_t < 0.55
        assert e.partial is not None
        assert e.partial.t_end == e.last_t
        assert e.partial.end[0] <= 0.55


def test_integrate_initial_state_outside():
    try:
        integrate_ode(lambda _, y: y,
                      np.array([2.0]), (0.0, 1.0),
                      0.1,
                      inside=lambda y: bool(y[0] < 1.0))

        raise Exception("Expected an initial state outside the chart to fail")

    except ChartExitError as e:
        assert e.args == ("Initial state [2.0] is outside the chart", )
        assert e.last_t == 0.0
        assert e.partial is None


def test_centered_grid():
    grid = SampleGrid.centered((0.3, -1.0), 0.2, 5)

    assert grid.shape == (5, 5)
    assert grid.anchor == (2, 2)
    assert np.array_equal(grid.center, [0.3, -1.0])
    assert grid.points().shape == (5, 5, 2)
    assert np.allclose(grid.spacing(), [0.1, 0.1])
    assert grid.boundary_mask().sum() == 16


def test_centered_grid_even_count():
    try:
        SampleGrid.centered((0.0, ), 1.0, 4)

        raise Exception("Expected an even node count to fail")

    except AssertionError as e:
        assert e.args == ("Expected odd node counts, but found: 4", )


def test_grid_derivatives_exact_on_quadratics():
    grid = SampleGrid.centered((0.1, 0.2), (0.3, 0.2), (7, 5))
    points = grid.points()
    x, y = points[..., 0], points[..., 1]

    derivatives = grid_derivatives(x**2 + 3 * x * y, grid)

    assert derivatives.shape == (7, 5, 2)
    assert np.allclose(derivatives[..., 0], 2 * x + 3 * y, atol=1e-12)
    assert np.allclose(derivatives[..., 1], 3 * x, atol=1e-12)

import numpy as np

from leafsolve.data.fixtures import TDE_RATES, exponential_tde, non_integrable
from leafsolve.distribution import check_leaf, horizontal_lift_ray, solve_tde
from leafsolve.geometry import ChartExitError, SampleGrid
from leafsolve.loggers import Logger


def test_horizontal_lift_of_exponential():
    D = exponential_tde()

    lift = horizontal_lift_ray(D, [0.0, 0.0], [1.0], [0.4, 0.2], step=1e-2)

    expected = np.exp(TDE_RATES[0] * 0.4 + TDE_RATES[1] * 0.2)
    assert abs(lift.end[0] - expected) < 1e-9


def test_horizontal_lift_leaves_domain():
    D = exponential_tde((5.0, 5.0))

    try:
        horizontal_lift_ray(D, [0.0, 0.0], [1.0], [0.9, 0.9], step=1e-2)

        raise Exception("Expected the lift to leave the domain")

    except ChartExitError as e:
        assert 0.0 < e.last_t < 1.0


def test_solve_exponential_leaf():
    D = exponential_tde()
    grid = SampleGrid.centered((0.0, 0.0), 0.3, 21)
    logger = Logger()

    leaf = solve_tde(D, [0.0, 0.0], [1.0], grid, step=1e-2, workers=1,
                     logger=logger)

    points = grid.points()
    expected = np.exp(TDE_RATES[0] * points[..., 0] +
                      TDE_RATES[1] * points[..., 1])
    assert np.allclose(leaf.values[..., 0], expected, atol=1e-9, rtol=0)
    assert leaf.reachable.all()
    assert leaf.reachable_radius == 10
    assert len(logger.steps) == 21 * 21
    assert logger.steps[0]["index"] == [0, 0]

    report = check_leaf(D, leaf, 1e-3)
    assert report.passed
    assert report.max_levi_residual == 0.0
    assert report.one_sided_nodes == 80


def test_solve_marks_unreachable_nodes():
    D = exponential_tde((6.0, 6.0))
    grid = SampleGrid.centered((0.0, 0.0), 0.3, 5)

    leaf = solve_tde(D, [0.0, 0.0], [1.0], grid, step=1e-2, workers=1)

    assert set(leaf.failures) == {(4, 4), (4, 3), (3, 4)}
    assert np.isnan(leaf.values[4, 4, 0])
    assert leaf.reachable_radius == 1


def test_solve_non_integrable_reports_levi():
    D = non_integrable()
    grid = SampleGrid.centered((0.0, 0.0), 0.2, 5)

    leaf = solve_tde(D, [0.0, 0.0], [0.0], grid, step=1e-2, workers=1)

    assert leaf.max_levi_residual() == 1.0
    assert not check_leaf(D, leaf, 1e-3).passed


def test_solve_requires_centered_grid():
    grid = SampleGrid.centered((0.1, 0.0), 0.2, 5)

    try:
        solve_tde(exponential_tde(), [0.0, 0.0], [1.0], grid)

        raise Exception("Expected an off-center grid to fail")

    except AssertionError as e:
        assert e.args == ("Expected `x0` to be the middle grid node, but "
                          "found: [0.1, 0.0] and [0.0, 0.0]", )


def test_leaf_values_do_not_depend_on_the_grid():
    D = non_integrable()
    wide = SampleGrid.centered((0.0, 0.0), 0.2, 9)
    narrow = SampleGrid.centered((0.0, 0.0), 0.1, 5)

    outer = solve_tde(D, [0.0, 0.0], [0.1], wide, step=1e-2, workers=1)
    inner = solve_tde(D, [0.0, 0.0], [0.1], narrow, step=1e-2, workers=1)

    for index in narrow.indices():
        shifted = tuple(i + 2 for i in index)
        assert np.allclose(narrow.point(index), wide.point(shifted),
                           atol=1e-15)
        assert np.allclose(inner.values[index], outer.values[shifted],
                           atol=1e-12, rtol=0)

import math
import numpy as np

from leafsolve.data.fixtures import (SPHERE_BASE, flat_plane, sphere,
                                     trace_obstructed)
from leafsolve.geometry import SampleGrid
from leafsolve.loggers import Logger
from leafsolve.metric import (HypothesisError, MetricSeed,
                              check_antisymmetry_hypothesis,
                              higher_order_metric_check, recover_metric,
                              transport_metric_along_ray, verify_levi_civita)


def _round_metric(theta: float) -> np.ndarray:
    return np.diag([1.0, math.sin(theta)**2])


def test_seed_must_be_symmetric():
    try:
        MetricSeed([0.0, 0.0], [[1.0, 0.5], [0.0, 1.0]])

        raise Exception("Expected a non-symmetric g0 to fail")

    except AssertionError as e:
        assert e.args == ("Expected `g0` to be symmetric", )


def test_seed_must_be_nondegenerate():
    try:
        MetricSeed([0.0, 0.0], [[1.0, 1.0], [1.0, 1.0]])

        raise Exception("Expected a degenerate g0 to fail")

    except AssertionError as e:
        assert e.args == ("Expected `g0` to be nondegenerate", )


def test_flat_recovery_is_constant():
    seed = MetricSeed([0.0, 0.0], [[2.0, 0.0], [0.0, -1.0]])
    grid = SampleGrid.centered(seed.base_point, 0.1, 3)

    metric = recover_metric(flat_plane(), seed, grid, 1e-2, workers=1)

    assert np.allclose(metric.values, seed.g0, atol=1e-12)
    assert metric.signature_constant
    assert seed.signature == (1, 1)
    assert metric.max_residual < 1e-10


def test_sphere_recovery():
    seed = MetricSeed(SPHERE_BASE, np.eye(2))
    grid = SampleGrid.centered(SPHERE_BASE, 0.006, 3)
    logger = Logger()

    metric = recover_metric(sphere(), seed, grid, 1e-2, workers=1,
                            logger=logger)

    for index in grid.indices():
        theta = grid.point(index)[0]
        assert np.allclose(metric.values[index], _round_metric(theta),
                           atol=1e-7)
    assert metric.reachable.all()
    assert metric.max_residual < 1e-5
    assert metric.max_asymmetry < 1e-12
    assert len(logger.steps) == 9

    report = verify_levi_civita(sphere(), metric, 1e-5)
    assert report.passed
    assert report.torsion_residual == 0.0


def test_trace_obstructed_recovery_fails():
    seed = MetricSeed([0.0, 0.0], np.eye(2))
    grid = SampleGrid.centered(seed.base_point, 0.05, 3)

    try:
        recover_metric(trace_obstructed(), seed, grid, 1e-2, workers=1)

        raise Exception("Expected the antisymmetry check to fail")

    except HypothesisError as e:
        assert str(e).startswith(
            "The transported curvature is not g0-antisymmetric")
        assert not e.report.passed

    metric = recover_metric(trace_obstructed(),
                            seed,
                            grid,
                            1e-2,
                            override=True,
                            workers=1)
    assert np.array_equal(metric.at(seed.base_point), seed.g0)


def test_antisymmetry_hypothesis():
    round = check_antisymmetry_hypothesis(sphere(),
                                          MetricSeed(SPHERE_BASE, np.eye(2)))
    assert round.passed
    assert round.samples == 4 * 5

    obstructed = check_antisymmetry_hypothesis(
        trace_obstructed(), MetricSeed([0.0, 0.0], np.eye(2)), radius=0.2)
    assert not obstructed.passed


def test_higher_order_metric_check():
    round = higher_order_metric_check(sphere(),
                                      MetricSeed(SPHERE_BASE, np.eye(2)), 2)
    assert round.passed
    assert round.completed_order == 2

    obstructed = higher_order_metric_check(trace_obstructed(),
                                           MetricSeed([0.0, 0.0], np.eye(2)),
                                           1)
    failure = obstructed.first_failure
    assert failure is not None and failure.order == 0
    assert math.isclose(failure.residual, 2.0)


def test_transport_law_along_ray():
    seed = MetricSeed(SPHERE_BASE, np.eye(2))

    for point, P, g in transport_metric_along_ray(sphere(), seed,
                                                  [0.3, 0.2],
                                                  [0.0, 0.5, 1.0]):
        assert np.allclose(P.T @ g @ P, seed.g0, atol=1e-12)
        assert np.allclose(g, _round_metric(point[0]), atol=1e-8)


def test_recovery_is_linear_in_the_seed():
    grid = SampleGrid.centered(SPHERE_BASE, 0.006, 3)
    g_a = np.eye(2)
    g_b = np.array([[1.0, 0.5], [0.5, 2.0]])

    def recovered(g0: np.ndarray) -> np.ndarray:
        seed = MetricSeed(SPHERE_BASE, g0)
        return recover_metric(sphere(), seed, grid, 1e-2, override=True,
                              workers=1).values

    combined = recovered(g_a + g_b)

    assert np.all(np.isfinite(combined))
    assert np.max(np.abs(combined - recovered(g_a) - recovered(g_b))) < 1e-12

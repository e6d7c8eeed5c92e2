import math
import numpy as np

from leafsolve.cah import (CahProblem, affine_residual, affine_symmetry_check,
                           cah_map, induced_geodesic_and_sigma, induced_ray,
                           involution_residual)
from leafsolve.data.fixtures import (SPHERE_BASE, flat_plane, odd_curvature,
                                     sphere)
from leafsolve.geometry import SampleGrid
from leafsolve.loggers import Logger


def _rotation(angle: float) -> np.ndarray:
    return np.array([[math.cos(angle), -math.sin(angle)],
                     [math.sin(angle), math.cos(angle)]])


def test_flat_affine_map():
    sigma0 = np.array([[1.0, 2.0], [0.0, 1.0]])
    prob = CahProblem(flat_plane(), flat_plane(), [0.0, 0.0], [0.1, 0.2],
                      sigma0)
    grid = SampleGrid.centered(prob.x0, 0.2, 3)
    logger = Logger()

    amap = cah_map(prob, grid, 1e-2, workers=1, logger=logger)

    assert amap.reachable.all()
    for index in grid.indices():
        x = grid.point(index)
        assert np.allclose(amap.f[index], prob.y0 + sigma0 @ x, atol=1e-8)
        assert np.allclose(amap.sigma[index], sigma0, atol=1e-8)
    assert amap.max_torsion_residual() == 0.0
    assert amap.max_curvature_residual() == 0.0
    assert amap.max_jacobian_residual() < 1e-6
    assert amap.max_horizontality_residual() < 1e-8
    assert len(logger.steps) == 9

    report = affine_residual(prob, amap)
    assert report.passed
    assert report.max_residual < 1e-6


def test_anchor_is_exact():
    prob = CahProblem(sphere(), sphere(), SPHERE_BASE, SPHERE_BASE,
                      _rotation(0.5))
    grid = SampleGrid.centered(SPHERE_BASE, 0.05, 3)

    amap = cah_map(prob, grid, 1e-2, workers=1)

    assert np.array_equal(amap.f[grid.anchor], prob.y0)
    assert np.array_equal(amap.sigma[grid.anchor], prob.sigma0)


def test_rotation_of_the_sphere():
    prob = CahProblem(sphere(), sphere(), SPHERE_BASE, SPHERE_BASE,
                      _rotation(0.5))
    grid = SampleGrid.centered(SPHERE_BASE, 0.05, 3)

    amap = cah_map(prob, grid, 1e-2, workers=1)

    assert amap.reachable.all()
    assert amap.max_torsion_residual() < 1e-12
    assert amap.max_curvature_residual() < 1e-6
    assert amap.max_jacobian_residual() < 5e-2
    assert amap.max_horizontality_residual() < 1e-4


def test_identity_problem():
    prob = CahProblem(sphere(), sphere(), SPHERE_BASE, SPHERE_BASE,
                      np.eye(2))
    x = np.array(SPHERE_BASE) + np.array([0.05, -0.03])

    mu, sigma = induced_geodesic_and_sigma(prob, x, 1e-2)

    assert np.allclose(mu.end_point, x, atol=1e-8)
    assert np.allclose(mu(0.0)[0], SPHERE_BASE)
    assert np.allclose(sigma, np.eye(2), atol=1e-12)

    ray = induced_ray(prob, x, 1e-2)
    assert np.allclose(ray.sigma_at(0.0), np.eye(2))


def test_grid_must_be_centered():
    prob = CahProblem(flat_plane(), flat_plane(), [0.0, 0.0], [0.0, 0.0],
                      np.eye(2))
    grid = SampleGrid.centered([0.1, 0.0], 0.2, 3)

    try:
        cah_map(prob, grid, 1e-2, workers=1)

        raise Exception("Expected an off-center grid to fail")

    except AssertionError as e:
        assert e.args == ("Expected `x0` to be the middle grid node", )


def test_flat_symmetry_is_an_involution():
    grid = SampleGrid.centered([0.0, 0.0], 0.2, 5)

    report = affine_symmetry_check(flat_plane(), [0.0, 0.0], 2, grid=grid,
                                   step=1e-2, workers=1)

    assert report.passed
    assert report.report.completed_order == 2
    for index in grid.indices():
        assert np.allclose(report.symmetry.f[index], -grid.point(index),
                           atol=1e-8)

    residual = involution_residual(report.symmetry.problem, report.symmetry,
                                   1e-2)
    assert residual < 1e-7


def test_sphere_is_symmetric():
    report = affine_symmetry_check(sphere(), SPHERE_BASE, 2)

    assert report.passed
    assert report.symmetry is None
    assert [check.label for check in report.report.checks] == [
        "torsion", "curvature", "torsion"
    ]


def test_sphere_symmetry_is_an_involution():
    grid = SampleGrid.centered(SPHERE_BASE, 0.01, 5)

    report = affine_symmetry_check(sphere(), SPHERE_BASE, 4, grid=grid,
                                   step=1e-2, workers=1)

    assert report.passed
    assert report.report.completed_order == 4
    assert report.affine is not None and report.affine.max_residual < 1e-5
    assert report.symmetry.max_curvature_residual() < 1e-8
    assert involution_residual(report.symmetry.problem, report.symmetry,
                               1e-2) < 1e-5


def test_odd_curvature_is_not_symmetric():
    grid = SampleGrid.centered([0.0, 0.5], 0.1, 3)

    report = affine_symmetry_check(odd_curvature(), [0.0, 0.5], 2, grid=grid)
    failure = report.report.first_failure

    assert not report.passed
    assert failure.order == 1
    assert failure.label == "curvature"
    assert report.symmetry is None


def test_involution_on_a_small_grid_uses_the_anchor():
    prob = CahProblem(flat_plane(), flat_plane(), [0.0, 0.0], [0.0, 0.0],
                      -np.eye(2))
    grid = SampleGrid.centered([0.0, 0.0], 0.2, 3)
    amap = cah_map(prob, grid, 1e-2, workers=1)

    assert involution_residual(prob, amap, 1e-2) == 0.0


def test_rotation_of_the_sphere_is_affine():
    prob = CahProblem(sphere(), sphere(), SPHERE_BASE, SPHERE_BASE,
                      _rotation(0.5))
    grid = SampleGrid.centered(SPHERE_BASE, 0.006, 3)

    amap = cah_map(prob, grid, 1e-2, workers=1)
    report = affine_residual(prob, amap)

    assert np.isfinite(report.residual[grid.anchor])
    assert np.isnan(report.residual[0, 0])
    assert report.max_residual < 1e-5
    assert amap.max_curvature_residual() < 1e-8

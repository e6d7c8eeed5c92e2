import math
import numpy as np

from leafsolve.data.fixtures import (SPHERE_BASE, flat_plane, lie_group_spray,
                                     sphere)
from leafsolve.geometry import Box, ChartExitError
from leafsolve.spray import (PiecewisePath, Spray, exp_jacobian, exp_map,
                             geodesic_ray, geodesic_spray, log_map,
                             piecewise_solve, solve_spray,
                             validate_homogeneity)


def test_flat_exponential_is_translation():
    spray = geodesic_spray(flat_plane())

    assert np.allclose(exp_map(spray, [0.1, -0.2], [0.3, 0.4]), [0.4, 0.2],
                       atol=1e-12)


def test_sphere_equator_and_meridian():
    spray = geodesic_spray(sphere())

    assert np.allclose(exp_map(spray, SPHERE_BASE, [0.0, 1.0]),
                       [math.pi / 2, 1.0],
                       atol=1e-9)
    assert np.allclose(exp_map(spray, SPHERE_BASE, [-0.5, 0.0]),
                       [math.pi / 2 - 0.5, 0.0],
                       atol=1e-12)


def test_lie_group_exponential():
    x1 = math.exp(0.5)
    x2 = 0.3 * (math.exp(0.5) - 1) / 0.5

    point = exp_map(lie_group_spray(), [1.0, 0.0], [0.5, 0.3])

    assert np.allclose(point, [x1, x2], atol=1e-9)


def test_geodesic_sprays_are_homogeneous():
    assert validate_homogeneity(geodesic_spray(sphere())) < 1e-12
    assert validate_homogeneity(lie_group_spray()) < 1e-12


def test_non_homogeneous_spray():
    spray = Spray.parse(["v1", "0"], Box.cube(2, 1.0))

    assert validate_homogeneity(spray) > 0.1


def test_log_inverts_exp():
    spray = geodesic_spray(sphere())
    v = np.array([0.3, 0.2])

    target = exp_map(spray, SPHERE_BASE, v)
    recovered = log_map(spray, SPHERE_BASE, target)

    assert np.allclose(recovered, v, atol=1e-6)
    assert np.allclose(exp_map(spray, SPHERE_BASE, recovered), target,
                       atol=1e-9)


def test_log_of_base_point_is_zero():
    spray = geodesic_spray(sphere())

    assert np.array_equal(log_map(spray, SPHERE_BASE, SPHERE_BASE),
                          [0.0, 0.0])


def test_solve_spray_reports_exit():
    spray = geodesic_spray(flat_plane())

    solution = solve_spray(spray, [0.0, 0.0], [2.0, 0.0], step=1e-2)

    assert not solution.complete
    assert solution.exit_time is not None and solution.exit_time < 0.5 + 1e-9

    try:
        solve_spray(spray, [0.0, 0.0], [2.0, 0.0], step=1e-2, strict=True)

        raise Exception("Expected the strict solve to fail")

    except ChartExitError:
        pass


def test_piecewise_path():
    spray = geodesic_spray(flat_plane())
    path = PiecewisePath.from_legs([([0.0, 0.0], [0.5, 0.0], 1.0),
                                    (None, [0.0, 0.5], 1.0)])

    solution = piecewise_solve(spray, path, step=1e-2)

    assert solution.knots == (0.0, 1.0, 2.0)
    assert np.allclose(solution.end_point, [0.5, 0.5], atol=1e-12)
    assert np.allclose(solution.position(1.5), [0.5, 0.25], atol=1e-12)
    assert np.allclose(solution(1.0)[1], [0.0, 0.5])


def test_piecewise_path_gap():
    spray = geodesic_spray(flat_plane())
    path = PiecewisePath.from_legs([([0.0, 0.0], [0.5, 0.0], 1.0),
                                    ([0.4, 0.0], [0.0, 0.5], 1.0)])

    try:
        piecewise_solve(spray, path, step=1e-2)

        raise Exception("Expected a gap between legs to fail")

    except ValueError as e:
        assert str(e).startswith("Leg 1 starts")


def test_flat_geodesic_ray_transport_is_identity():
    ray = geodesic_ray(flat_plane(), [0.0, 0.0], [0.2, 0.1], step=1e-2)

    assert np.allclose(ray.end_point, [0.2, 0.1], atol=1e-12)
    assert np.array_equal(ray.matrix(), np.eye(2))


def test_exponential_differential_at_zero_is_identity():
    for spray, x in ((geodesic_spray(sphere()), [1.1, 0.4]),
                     (lie_group_spray(), [1.0, 0.0])):
        jacobian = exp_jacobian(spray, np.asarray(x), np.zeros(2), 1e-2)

        assert np.allclose(jacobian, np.eye(2), atol=1e-6)

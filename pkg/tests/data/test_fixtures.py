import math
import numpy as np

from leafsolve.connection import BundleConnection, curvature, torsion
from leafsolve.data.fixtures import (FIXTURE_CATALOG, SPHERE2_BASE,
                                     SPHERE2_BOX, get_fixture,
                                     perturbed_sphere, sphere_radius_two,
                                     trace_obstructed)
from leafsolve.distribution import GraphDistribution
from leafsolve.spray import Spray


def test_catalog():
    for name in FIXTURE_CATALOG:
        assert isinstance(get_fixture(name),
                          (BundleConnection, GraphDistribution, Spray))

    assert get_fixture("flat").is_flat()


def test_unknown_fixture():
    try:
        get_fixture("torus")

        raise Exception("Expected an unknown fixture to fail")

    except ValueError as e:
        assert e.args == ("Could not find fixture `torus`", )


def test_sphere_radius_two_equator():
    conn = sphere_radius_two()

    assert SPHERE2_BOX.contains(SPHERE2_BASE)
    assert conn.tangent
    # curvature 1/4 with g_φφ = 4 on the equator
    R = curvature(conn).at(SPHERE2_BASE)
    assert math.isclose(R[0, 1, 0, 1], 1.0, abs_tol=1e-12)


def test_perturbed_sphere_has_torsion_free_christoffel():
    assert not np.any(torsion(perturbed_sphere()).at((1.0, 0.0)))
    assert not np.any(torsion(trace_obstructed()).at((0.5, 0.5)))

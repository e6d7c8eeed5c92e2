"""
The invariant suite: identities every tangent connection satisfies, checked
at one base point. On the flat fixture every residual is below 1e-10.
"""
import jax
import numpy as np

from argparse import ArgumentParser, Namespace
from typing import Callable, Sequence

from ..cah import CahProblem, cah_map
from ..connection import (BundleConnection, bilinear_connection, curvature,
                          dual_connection, horizontal_distribution,
                          parallel_transport, torsion)
from ..data.fixtures import SPHERE2_BASE, SPHERE_BASE, get_fixture
from ..data.random_fields import random_matrix
from ..distribution import levi_form
from ..geometry import ChartExitError, SampleGrid
from ..loggers import Report
from ..spray import (ConvergenceError, exp_map, geodesic_spray, log_map,
                     validate_homogeneity)
from ..spray.maps import ROUND_TRIP_TOL
from . import Context

SELFTEST_BASES: dict[str, Sequence[float]] = {
    "flat": (0.0, 0.0),
    "sphere": SPHERE_BASE,
    "sphere2": SPHERE2_BASE,
    "perturbed_sphere": SPHERE_BASE,
    "trace_obstructed": (0.0, 0.0),
    "odd_curvature": (0.0, 0.5),
}

IDENTITY_TOL = 1e-10
TRANSPORT_TOL = 1e-8
IDENTITY_MAP_TOL = 1e-8
PROBE_LENGTH = 0.1
IDENTITY_GRID_HALF_WIDTH = 0.05


def get_parser(parser: ArgumentParser):
    parser.add_argument("--fixture",
                        choices=SELFTEST_BASES.keys(),
                        default="flat",
                        help="The bundled connection to test when the "
                        "manifest names none.")


def curvature_identities(conn: BundleConnection, x0: np.ndarray,
                         key: jax.Array) -> dict[str, float]:
    """
    Residuals of the pointwise curvature identities at `x0`.
    """
    n, r = conn.n, conn.r
    R = curvature(conn).at(x0)
    form_key, bridge_key = jax.random.split(key)

    residuals = {
        "curvature-antisymmetry":
        float(np.max(np.abs(R + np.swapaxes(R, 0, 1)))),
        "dual-curvature":
        float(
            np.max(
                np.abs(
                    curvature(dual_connection(conn)).at(x0) +
                    np.swapaxes(R, -1, -2)))),
    }

    G = random_matrix((r, r), key=form_key)
    bilinear = curvature(bilinear_connection(conn)).at(x0)
    found = (bilinear @ G.reshape(-1)).reshape(n, n, r, r)
    expected = -np.swapaxes(R, -1, -2) @ G - G @ R
    residuals["bilinear-curvature"] = float(np.max(np.abs(found - expected)))

    xi, v, w = random_matrix((3, max(n, r)), key=bridge_key)
    xi, v, w = xi[:r], v[:n], w[:n]
    H = horizontal_distribution(conn)
    residuals["horizontal-levi-bridge"] = float(
        np.max(
            np.abs(
                levi_form(H, np.concatenate([x0, xi]), v, w) +
                np.einsum("i,j,ijab,b->a", v, w, R, xi))))

    if conn.tangent and not np.any(torsion(conn).at(x0)):
        cyclic = (R + np.transpose(R, (1, 3, 2, 0)) +
                  np.transpose(R, (3, 0, 2, 1)))
        residuals["first-bianchi"] = float(np.max(np.abs(cyclic)))

    return residuals


def _segment(x0: np.ndarray,
             direction: np.ndarray) -> Callable[[float], tuple[np.ndarray,
                                                             np.ndarray]]:
    return lambda t: (x0 + t * direction, direction)


def run_selftest(args: Namespace) -> Report:
    """
    Runs the invariant suite on the connection of `inputs.selftest` in the
    manifest, or on a bundled fixture.
    """
    ctx = Context(args, "selftest", requires_manifest=False)
    report = ctx.report

    if ctx.manifest is not None and "selftest" in ctx.manifest.inputs:
        inputs = ctx.inputs(["connection", "x0"])
        conn, x0 = inputs["connection"], inputs["x0"]
        report["subject"] = "manifest"
    else:
        conn = get_fixture(args.fixture)
        x0 = np.array(SELFTEST_BASES[args.fixture], dtype=np.float64)
        report["subject"] = args.fixture

    identity_key, transport_key, spray_key = jax.random.split(ctx.key, 3)

    for name, residual in curvature_identities(conn, x0,
                                               identity_key).items():
        report.add_check(name, residual, IDENTITY_TOL)

    direction = PROBE_LENGTH * np.linspace(1.0, -0.5, conn.n)
    s0 = random_matrix((conn.r, ), key=transport_key)
    try:
        forward = parallel_transport(conn, _segment(x0, direction), s0,
                                     (0.0, 1.0), ctx.step)
        backward = parallel_transport(conn, _segment(x0, direction),
                                      forward.end, (1.0, 0.0), ctx.step)
        residual = float(np.max(np.abs(backward.end - s0)))
    except ChartExitError as e:
        report.add_failure("transport", str(e))
        residual = float("nan")
    report.add_check("transport-reversibility", residual, TRANSPORT_TOL)

    if not conn.tangent:
        return ctx.finish()

    spray = geodesic_spray(conn)
    report.add_check("spray-homogeneity",
                     validate_homogeneity(spray, key=spray_key),
                     IDENTITY_TOL)

    try:
        point = exp_map(spray, x0, direction, ctx.step)
        residual = float(
            np.max(np.abs(log_map(spray, x0, point, ctx.step) - direction)))
    except (ChartExitError, ConvergenceError) as e:
        report.add_failure("exp", str(e))
        residual = float("nan")
    report.add_check("exp-log-round-trip", residual, ROUND_TRIP_TOL)

    prob = CahProblem(conn, conn, x0, x0, np.eye(conn.n))
    amap = cah_map(prob, SampleGrid.centered(x0, IDENTITY_GRID_HALF_WIDTH, 3),
                   ctx.step)
    for index, message in amap.failures.items():
        report.add_failure(list(index), message)
    points = amap.grid.points()
    identity = float(
        np.max(np.abs(amap.f - points), initial=0.0,
               where=np.isfinite(amap.f)))
    sigma = float(
        np.max(np.abs(amap.sigma - np.eye(conn.n)),
               initial=0.0,
               where=np.isfinite(amap.sigma)))
    report.add_check("identity-map",
                     identity,
                     IDENTITY_MAP_TOL,
                     passed=not amap.failures and identity < IDENTITY_MAP_TOL)
    report.add_check("identity-differential",
                     sigma,
                     IDENTITY_MAP_TOL,
                     passed=not amap.failures and sigma < IDENTITY_MAP_TOL)
    return ctx.finish()

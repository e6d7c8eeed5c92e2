import jax
import numpy as np

from argparse import Namespace

from ..connection import (curvature, horizontal_distribution,
                          parallel_transport, torsion, transport_basis,
                          transport_matrix)
from ..data.random_fields import random_matrix
from ..distribution import levi_form
from ..geometry import ChartExitError
from ..loggers import Report
from . import Context

IDENTITY_TOL = 1e-10
TRANSPORT_TOL = 1e-8
CLOSED_TOL = 1e-9
TRANSPORT_SAMPLES = 11


def run_curvature(args: Namespace) -> Report:
    """
    Curvature (and torsion of tangent connections) at the manifest points,
    with the identities they satisfy: antisymmetry, the first Bianchi
    identity when torsion free, and Levi form of the horizontal distribution
    equal to −R(v, w)ξ.
    """
    ctx = Context(args, "curvature")
    inputs = ctx.inputs(["connection", "points"])
    conn = inputs["connection"]
    report = ctx.report

    R = curvature(conn)
    T = torsion(conn) if conn.tangent else None
    H = horizontal_distribution(conn)
    keys = jax.random.split(ctx.key, len(inputs["points"]))

    antisymmetry = bianchi = bridge = 0.0
    for n, (point, key) in enumerate(zip(inputs["points"], keys)):
        try:
            conn.domain.require(point, "point")
            values = R.at(point)
            record = {"point": point.tolist(), "curvature": values.tolist()}

            antisymmetry = max(
                antisymmetry,
                float(np.max(np.abs(values + np.swapaxes(values, 0, 1)))))

            if T is not None:
                torsion_values = T.at(point)
                record["torsion"] = torsion_values.tolist()
                if np.max(np.abs(torsion_values), initial=0.0) == 0.0:
                    cyclic = (values + np.transpose(values, (1, 3, 2, 0)) +
                              np.transpose(values, (3, 0, 2, 1)))
                    bianchi = max(bianchi, float(np.max(np.abs(cyclic))))

            xi, v, w = random_matrix((3, max(conn.r, conn.n)), key=key)
            xi, v, w = xi[:conn.r], v[:conn.n], w[:conn.n]
            expected = -np.einsum("i,j,ijab,b->a", v, w, values, xi)
            found = levi_form(H, np.concatenate([point, xi]), v, w)
            bridge = max(bridge, float(np.max(np.abs(found - expected))))
        except (ValueError, ArithmeticError) as e:
            report.add_failure(n, str(e))
            continue

        report.log_step(record)

    passed = not report["failures"]
    for name, residual in (("curvature-antisymmetry", antisymmetry),
                           ("first-bianchi", bianchi),
                           ("horizontal-levi-bridge", bridge)):
        report.add_check(name,
                         residual,
                         IDENTITY_TOL,
                         passed=passed and residual <= IDENTITY_TOL)
    return ctx.finish()


def holonomy_summary(P: np.ndarray) -> dict:
    """
    The transport matrix of a closed curve with its determinant, eigenvalues
    and, for rank 2 with positive determinant, the rotation angle
    arccos(tr P / 2) of its normalized form.
    """
    eigenvalues = np.linalg.eigvals(P)
    summary = {
        "matrix": P.tolist(),
        "determinant": float(np.linalg.det(P)),
        "eigenvalues_real": np.real(eigenvalues).tolist(),
        "eigenvalues_imag": np.imag(eigenvalues).tolist(),
    }
    if P.shape == (2, 2) and summary["determinant"] > 0:
        normalized = P / np.sqrt(summary["determinant"])
        summary["angle"] = float(
            np.arccos(np.clip(np.trace(normalized) / 2, -1.0, 1.0)))
    return summary


def run_transport(args: Namespace) -> Report:
    """
    Transports `s0` along the manifest curve and back again, reporting the
    holonomy when the curve is closed.
    """
    ctx = Context(args, "transport")
    inputs = ctx.inputs(["connection", "curve", "s0"])
    conn = inputs["connection"]
    curve = inputs["curve"]
    s0 = inputs["s0"]
    report = ctx.report
    t0, t1 = curve.t_span

    try:
        forward = parallel_transport(conn, curve.curve, s0, (t0, t1),
                                     ctx.step)
        backward = parallel_transport(conn, curve.curve, forward.end,
                                      (t1, t0), ctx.step)
    except ChartExitError as e:
        report.add_failure({"t": e.last_t}, str(e))
        report.add_check("transport-reversibility",
                         float("nan"),
                         ctx.tol(TRANSPORT_TOL),
                         passed=False)
        return ctx.finish()

    for t in np.linspace(t0, t1, TRANSPORT_SAMPLES):
        point, _ = curve.curve(float(t))
        report.log_step({
            "t": float(t),
            "point": point.tolist(),
            "s": forward(float(t)).tolist(),
        })

    report["s_end"] = forward.end.tolist()
    report.add_check("transport-reversibility",
                     float(np.max(np.abs(backward.end - s0))),
                     ctx.tol(TRANSPORT_TOL))

    start, _ = curve.curve(t0)
    end, _ = curve.curve(t1)
    if float(np.max(np.abs(end - start))) <= CLOSED_TOL:
        P = transport_matrix(
            transport_basis(conn, curve.curve, (t0, t1), ctx.step))
        report["holonomy"] = holonomy_summary(P)

    return ctx.finish()

from argparse import ArgumentParser

from . import (cah, connection, distribution, get_common_parser, metric,
               selftest, spray, validate)


def get_main_parser() -> ArgumentParser:
    """
    Constructs the main parser for the `__main__.py` script for the root module.
    """
    parser = ArgumentParser(
        prog="leafsolve",
        description="Integrability, connection and affine-map computations "
        "on coordinate charts.")
    common = get_common_parser()

    subparsers = parser.add_subparsers(required=True)

    def add(name: str, help: str, func, get_parser=None) -> None:
        subparser = subparsers.add_parser(name, help=help, parents=[common])
        if get_parser is not None:
            get_parser(subparser)
        subparser.set_defaults(func=func, command=name)

    add("levi",
        "The Levi form of a distribution at the manifest points.",
        distribution.run_levi, distribution.get_parser)

    add("integrability",
        "Iterated bracket obstructions of a distribution through order K.",
        distribution.run_integrability)

    add("solve-tde",
        "Solve a total differential equation df = F(x, f) on a grid.",
        distribution.run_solve_tde)

    add("curvature",
        "Curvature and torsion of a connection, with their identities.",
        connection.run_curvature)

    add("transport",
        "Parallel transport along a curve, with the holonomy of closed "
        "curves.", connection.run_transport)

    add("geodesic", "Solve a spray from an initial point and velocity.",
        spray.run_geodesic, spray.get_parser)

    add("exp", "The exponential map of a spray.", spray.run_exp,
        spray.get_parser)

    add("log", "The logarithm (inverse exponential) of a spray.",
        spray.run_log, spray.get_parser)

    add("recover-metric",
        "Recover a parallel metric from its value at a point.",
        metric.run_recover_metric)

    add("verify-metric",
        "Recover a metric and check the connection is its Levi-Civita "
        "connection.", metric.run_verify_metric)

    add("cah-map",
        "Construct the affine map with prescribed value and differential at "
        "a point.", cah.run_cah_map)

    add("cah-check",
        "Check that the prescribed differential relates the covariant "
        "derivatives of torsion and curvature through order K.",
        cah.run_cah_check)

    add("affine-symmetry",
        "Check for (and optionally construct) an affine symmetry at a "
        "point.", cah.run_affine_symmetry, cah.get_parser)

    add("selftest", "Run the invariant suite on a bundled fixture.",
        selftest.run_selftest, selftest.get_parser)

    add("validate", "Validate a manifest without computing anything.",
        validate.run_validate)

    return parser

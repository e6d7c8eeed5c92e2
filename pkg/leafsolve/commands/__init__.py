import time

import numpy as np

from argparse import ArgumentParser, Namespace
from jax import Array
from jax.random import PRNGKey
from typing import Any, Sequence

from ..geometry import SampleGrid
from ..loggers import PrettyPrint, Report
from .manifest import (Diagnostic, Manifest, ManifestError, inputs_digest,
                       load_manifest, resolve_settings)

CONVENTIONS = {
    "christoffel": "christoffel[a][i][j] = Γ^a_ij, ∇_∂i ∂j = Γ^a_ij ∂a",
    "connection_coefficients":
    "omega[i][a][b] = (ω_i)^a_b, ∇_∂i s = ∂_i s + ω_i s",
    "curvature":
    "R[i][j][a][b] = (R(∂i, ∂j))^a_b, R_ij = ∂_i ω_j − ∂_j ω_i + [ω_i, ω_j]",
    "torsion": "T[i][j][a] = Γ^a_ij − Γ^a_ji",
    "graph_distribution": "F[a][i] = a-th fiber component of F(e_i)",
    "levi_form":
    "L(X, Y) = w − F(v) for the bracket (v, w) of the lifts of X and Y",
    "parallel_transport": "ṡ = −(Σ_i γ̇^i ω_i(γ)) s",
    "hom_sigma": "σ is m×n, flattened row-major (index α·n + a)",
}


def get_common_parser() -> ArgumentParser:
    """
    The options shared by every subcommand.
    """
    parser = ArgumentParser(add_help=False)

    parser.add_argument("--manifest",
                        type=str,
                        default=None,
                        help="The problem manifest (JSON).")

    parser.add_argument("--step",
                        type=float,
                        default=None,
                        help="The integration step.")

    parser.add_argument("--grid",
                        type=int,
                        default=None,
                        help="The number of grid nodes per axis (odd).")

    parser.add_argument("--order",
                        type=int,
                        default=None,
                        help="The derivative or bracket order K.")

    parser.add_argument("--tol",
                        type=float,
                        default=None,
                        help="The tolerance of the checks.")

    parser.add_argument("--seed",
                        type=int,
                        default=None,
                        help="The seed for the random number generator.")

    parser.add_argument("--override",
                        action="store_true",
                        help="Proceed past a failed hypothesis check.")

    parser.add_argument("--out",
                        type=str,
                        default=None,
                        help="The directory to write the report and data "
                        "files to. The report goes to stdout if omitted.")

    parser.add_argument("--format",
                        choices=("json", "csv"),
                        default="json",
                        help="The format of the report on stdout.")

    parser.add_argument("--timing",
                        action="store_true",
                        help="Record wall-clock timing in the report.")

    parser.add_argument("--verbose",
                        action="store_true",
                        help="Print every per-point record as it is logged.")

    return parser


class Context:
    """
    Everything one command run needs: the loaded manifest, the resolved
    settings and the report the engines log into.
    """

    def __init__(self, args: Namespace, command: str,
                 requires_manifest: bool = True) -> None:
        if args.manifest is None and requires_manifest:
            raise ManifestError(
                [Diagnostic("", f"Expected --manifest for `{command}`")])

        self.args = args
        self.command = command
        self.manifest: Manifest | None = (load_manifest(args.manifest)
                                          if args.manifest else None)
        self.settings = resolve_settings(self.manifest, args)

        document = self.manifest.document if self.manifest else {}
        self.report = Report(command,
                             inputs_digest=inputs_digest(
                                 document, self.settings, command),
                             settings=self.settings,
                             conventions=CONVENTIONS)

        if args.verbose:
            printer = PrettyPrint(command=command)
            self.report.register_hook(printer.mirror)

        self.started = time.perf_counter() if args.timing else None

    @property
    def loaded(self) -> Manifest:
        assert self.manifest is not None
        return self.manifest

    @property
    def step(self) -> float:
        return float(self.settings["step"])

    @property
    def order(self) -> int:
        return int(self.settings["order"])

    @property
    def override(self) -> bool:
        return bool(self.settings["override"])

    @property
    def key(self) -> Array:
        return PRNGKey(self.settings["seed"])

    def tol(self, default: float) -> float:
        tol = self.settings["tol"]
        return default if tol is None else float(tol)

    def inputs(self, required: Sequence[str] = ()) -> dict[str, Any]:
        return self.loaded.command_inputs(self.command, required)

    def grid(self, center: Sequence[float] | np.ndarray) -> SampleGrid:
        grid = self.settings["grid"]
        return SampleGrid.centered(center, grid["half_width"], grid["count"])

    def finish(self) -> Report:
        if self.started is not None:
            self.report["timing"] = {
                "seconds": time.perf_counter() - self.started
            }
        return self.report

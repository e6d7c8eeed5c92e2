"""
Problem manifests: JSON documents naming charts, connections, distributions,
sprays, curves, a metric seed, an affine-map problem, per-command inputs and
solver settings.

    {
      "charts": {"S2": {"box": [[0.2, 2.94], [-2.94, 2.94]],
                        "coordinates": ["theta", "phi"]}},
      "connections": {"sphere": {"chart": "S2",
                                 "christoffel": [[["0", "0"], ...], ...]}},
      "distributions": {"tde": {"chart": "R3", "F": [["y1", "-0.5*y1"]]}},
      "sprays": {"round": {"connection": "sphere"},
                 "lie": {"chart": "H", "acceleration": ["v1^2/x1", ...]}},
      "curves": {"latitude": {"components": ["pi/3", "t"],
                              "t_span": [0, 6.283185307179586]}},
      "metric_seed": {"connection": "sphere", "base_point": [...],
                      "g0": [[1, 0], [0, 1]]},
      "cah": {"source": "sphere", "target": "sphere", "x0": [...],
              "y0": [...], "sigma0": [[...], ...]},
      "inputs": {"levi": {"distribution": "tde", "points": [[...], ...]},
                 ...},
      "settings": {"step": 0.001, "grid": {"half_width": 0.2, "count": 5},
                   "order": 4, "tol": null, "seed": 0, "override": false}
    }

Christoffel symbols are laid out `christoffel[a][i][j]` = Γ^a_{ij} and
connection coefficients `omega[i][a][b]`. A distribution chart of dimension
k + m carries `F[a][i]` (m rows of k expressions) over the base coordinates
followed by the fiber coordinates (`x1..xk, y1..ym` unless named).

Every problem is reported with a JSON pointer into the document.
"""
import hashlib
import math

import numpy as np

from argparse import Namespace
from dataclasses import dataclass, field
from os import PathLike
from rapidjson import JSONDecodeError, dumps, load
from typing import Any, Callable, Sequence

from ..cah import CahProblem
from ..connection import BundleConnection, ParametrizedCurve
from ..distribution import GraphDistribution
from ..expr import ExprError, as_expr, parse_expr, variables_named
from ..geometry import Box
from ..metric import MetricSeed
from ..spray import Spray, geodesic_spray
from ..utils.validation import as_matrix, as_vector

SECTIONS = ("charts", "connections", "distributions", "sprays", "curves",
            "metric_seed", "cah", "inputs", "settings")

DEFAULT_SETTINGS: dict[str, Any] = {
    "step": 1e-3,
    "grid": {
        "half_width": 0.2,
        "count": 5,
    },
    "order": 4,
    "tol": None,
    "seed": 0,
    "override": False,
}

# the object kind each reference key of a command input resolves to
REFERENCES = {
    "distribution": "distributions",
    "connection": "connections",
    "spray": "sprays",
    "curve": "curves",
}


@dataclass(frozen=True)
class Diagnostic:
    pointer: str
    message: str

    def __str__(self) -> str:
        return f"{self.pointer or '/'}: {self.message}"

    def to_dict(self) -> dict[str, str]:
        return {"pointer": self.pointer, "message": self.message}


class ManifestError(ValueError):
    """
    Raised for an unusable manifest. `diagnostics` lists every problem found,
    each located by a JSON pointer.
    """

    def __init__(self, diagnostics: Sequence[Diagnostic]) -> None:
        super().__init__("\n".join(str(d) for d in diagnostics))
        self.diagnostics = list(diagnostics)


def pointer(*parts: str | int) -> str:
    return "".join(
        "/" + str(part).replace("~", "~0").replace("/", "~1")
        for part in parts)


@dataclass(frozen=True)
class Chart:
    box: Box
    coordinates: tuple[str, ...] | None = None

    @property
    def dim(self) -> int:
        return self.box.dim

    def names(self, prefix: str = "x") -> tuple[str, ...]:
        return self.coordinates or tuple(variables_named(prefix, self.dim))


@dataclass(frozen=True, eq=False)
class Curve:
    curve: ParametrizedCurve
    t_span: tuple[float, float]


@dataclass(frozen=True, eq=False)
class SeedEntry:
    connection: str
    seed: MetricSeed


@dataclass(eq=False)
class Manifest:
    """
    A validated manifest with every named object built.
    """

    document: dict[str, Any]
    charts: dict[str, Chart] = field(default_factory=dict)
    connections: dict[str, BundleConnection] = field(default_factory=dict)
    distributions: dict[str, GraphDistribution] = field(default_factory=dict)
    sprays: dict[str, Spray] = field(default_factory=dict)
    curves: dict[str, Curve] = field(default_factory=dict)
    metric_seed: SeedEntry | None = None
    cah: CahProblem | None = None
    inputs: dict[str, dict[str, Any]] = field(default_factory=dict)
    settings: dict[str, Any] = field(default_factory=dict)

    def command_inputs(self, command: str,
                       required: Sequence[str] = ()) -> dict[str, Any]:
        """
        The `inputs` object of `command`, with references resolved to the
        named objects.

        Raises
        ---
        - `ManifestError` when the object or one of the `required` keys is
          missing.
        """
        if command not in self.inputs:
            raise ManifestError([
                Diagnostic(pointer("inputs", command),
                           f"Expected an inputs object for `{command}`")
            ])

        values = self.inputs[command]
        missing = [
            Diagnostic(pointer("inputs", command, key),
                       f"Expected the key `{key}`") for key in required
            if key not in values
        ]
        if missing:
            raise ManifestError(missing)
        return values

    def require_metric_seed(self) -> SeedEntry:
        if self.metric_seed is None:
            raise ManifestError([
                Diagnostic(pointer("metric_seed"),
                           "Expected a metric seed object")
            ])
        return self.metric_seed

    def require_cah(self) -> CahProblem:
        if self.cah is None:
            raise ManifestError(
                [Diagnostic(pointer("cah"), "Expected a cah object")])
        return self.cah


class _Builder:
    """
    Builds the objects of a manifest document section by section, collecting
    a diagnostic for everything that does not validate.
    """

    def __init__(self, document: dict[str, Any]) -> None:
        self.document = document
        self.diagnostics: list[Diagnostic] = []
        self.manifest = Manifest(document)

    def error(self, where: str, message: str) -> None:
        self.diagnostics.append(Diagnostic(where, message))

    def build(self) -> Manifest:
        for key in self.document:
            if key not in SECTIONS:
                self.error(pointer(key), f"Unknown section `{key}`")

        self.charts()
        self.connections()
        self.distributions()
        self.sprays()
        self.curves()
        self.metric_seed()
        self.cah()
        self.inputs()
        self.settings()
        return self.manifest

    # helpers

    def entries(self, section: str) -> list[tuple[str, str, dict]]:
        values = self.document.get(section, {})
        if not isinstance(values, dict):
            self.error(pointer(section), "Expected an object")
            return []

        result = []
        for name, value in values.items():
            if not isinstance(value, dict):
                self.error(pointer(section, name), "Expected an object")
                continue
            result.append((name, pointer(section, name), value))
        return result

    def require(self, where: str, values: dict, key: str) -> Any:
        if key not in values:
            self.error(where, f"Expected the key `{key}`")
            return None
        return values[key]

    def reference(self, where: str, values: dict, key: str,
                  table: dict[str, Any]) -> Any:
        name = self.require(where, values, key)
        if name is None:
            return None
        if not isinstance(name, str) or name not in table:
            self.error(pointer_join(where, key),
                       f"Unresolved reference {name!r}")
            return None
        return table[name]

    def vector(self, where: str, name: str, values: Any,
               size: int | None = None) -> np.ndarray | None:
        try:
            return as_vector(name, values, size)
        except (AssertionError, ValueError, TypeError) as e:
            self.error(where, _message(e))
            return None

    def matrix(self, where: str, name: str, values: Any,
               shape: tuple[int, int]) -> np.ndarray | None:
        try:
            return as_matrix(name, values, shape)
        except (AssertionError, ValueError, TypeError) as e:
            self.error(where, _message(e))
            return None

    def names(self, where: str, values: Any, size: int) -> tuple[str, ...] | None:
        if (not isinstance(values, list)
                or not all(isinstance(v, str) and v.isidentifier()
                           for v in values)):
            self.error(where, "Expected a list of identifiers")
            return None
        if len(values) != size:
            self.error(where,
                       f"Expected {size} entries, but found {len(values)}")
            return None
        if len(set(values)) != len(values):
            self.error(where, "Expected distinct names")
            return None
        return tuple(values)

    def expressions(self, where: str, values: Any, shape: tuple[int, ...],
                    names: Sequence[str]) -> np.ndarray | None:
        result = np.empty(shape, dtype=object)
        return result if self._fill(where, values, shape, names, result,
                                    ()) else None

    def _fill(self, where: str, values: Any, shape: tuple[int, ...],
              names: Sequence[str], result: np.ndarray,
              index: tuple[int, ...]) -> bool:
        if not shape:
            if isinstance(values, str):
                try:
                    result[index] = parse_expr(values, names)
                except ExprError as e:
                    self.error(where, str(e))
                    return False
                return True
            if isinstance(values, (int, float)) and not isinstance(
                    values, bool) and math.isfinite(values):
                result[index] = as_expr(float(values))
                return True
            self.error(
                where,
                f"Expected an expression string or a number, but found: "
                f"{values!r}")
            return False

        if not isinstance(values, list):
            self.error(where, f"Expected a list of {shape[0]} entries")
            return False
        if len(values) != shape[0]:
            self.error(where,
                       f"Expected {shape[0]} entries, but found {len(values)}")
            return False

        passed = True
        for i, item in enumerate(values):
            passed = self._fill(pointer_join(where, i), item, shape[1:], names,
                                result, index + (i, )) and passed
        return passed

    def construct(self, where: str, factory: Callable[[], Any]) -> Any:
        try:
            return factory()
        except (AssertionError, ValueError) as e:
            self.error(where, _message(e))
            return None

    # sections

    def charts(self) -> None:
        for name, where, values in self.entries("charts"):
            box = self.require(where, values, "box")
            if box is None:
                continue
            if not isinstance(box, list) or not box:
                self.error(pointer_join(where, "box"),
                           "Expected a non-empty list of [lo, hi] intervals")
                continue

            intervals = [
                self.vector(pointer_join(where, "box", i), "interval", item, 2)
                for i, item in enumerate(box)
            ]
            if any(interval is None for interval in intervals):
                continue
            if not all(lo < hi for lo, hi in intervals):
                self.error(pointer_join(where, "box"),
                           "Expected lo < hi on every axis")
                continue

            coordinates = None
            if "coordinates" in values:
                coordinates = self.names(pointer_join(where, "coordinates"),
                                         values["coordinates"], len(box))
                if coordinates is None:
                    continue

            self.manifest.charts[name] = Chart(
                Box.from_intervals(intervals), coordinates)

    def connections(self) -> None:
        for name, where, values in self.entries("connections"):
            chart = self.reference(where, values, "chart",
                                   self.manifest.charts)
            if chart is None:
                continue
            n, coordinates = chart.dim, chart.names()

            if "christoffel" in values:
                gamma = self.expressions(pointer_join(where, "christoffel"),
                                         values["christoffel"], (n, n, n),
                                         coordinates)
                if gamma is not None:
                    connection = self.construct(
                        where, lambda: BundleConnection.from_christoffel(
                            gamma, chart.box, coordinates))
                    if connection is not None:
                        self.manifest.connections[name] = connection
            elif "omega" in values:
                rank = values.get("rank", n)
                if not isinstance(rank, int) or isinstance(
                        rank, bool) or rank < 1:
                    self.error(pointer_join(where, "rank"),
                               f"Expected a positive integer, but found: "
                               f"{rank!r}")
                    continue
                tangent = bool(values.get("tangent", False))
                if tangent and rank != n:
                    self.error(pointer_join(where, "tangent"),
                               f"Expected rank {n} for a tangent connection")
                    continue

                omega = self.expressions(pointer_join(where, "omega"),
                                         values["omega"], (n, rank, rank),
                                         coordinates)
                if omega is not None:
                    connection = self.construct(
                        where, lambda: BundleConnection(
                            coordinates, omega, chart.box, tangent))
                    if connection is not None:
                        self.manifest.connections[name] = connection
            else:
                self.error(where, "Expected `christoffel` or `omega`")

    def distributions(self) -> None:
        for name, where, values in self.entries("distributions"):
            chart = self.reference(where, values, "chart",
                                   self.manifest.charts)
            F = self.require(where, values, "F")
            if chart is None or F is None:
                continue
            if (not isinstance(F, list) or not F or not isinstance(F[0], list)
                    or not F[0]):
                self.error(pointer_join(where, "F"),
                           "Expected a non-empty matrix of expressions")
                continue

            m, k = len(F), len(F[0])
            if k + m != chart.dim:
                self.error(
                    pointer_join(where, "F"),
                    f"Expected {k} base and {m} fiber dimensions to add up to "
                    f"the chart dimension {chart.dim}")
                continue

            if chart.coordinates is None:
                base_names = tuple(variables_named("x", k))
                fiber_names = tuple(variables_named("y", m))
            else:
                base_names = chart.coordinates[:k]
                fiber_names = chart.coordinates[k:]

            entries = self.expressions(pointer_join(where, "F"), F, (m, k),
                                       base_names + fiber_names)
            if entries is None:
                continue

            distribution = self.construct(
                where, lambda: GraphDistribution(
                    tuple(tuple(row) for row in entries), chart.box,
                    base_names, fiber_names))
            if distribution is not None:
                self.manifest.distributions[name] = distribution

    def sprays(self) -> None:
        for name, where, values in self.entries("sprays"):
            if "connection" in values:
                connection = self.reference(where, values, "connection",
                                            self.manifest.connections)
                if connection is None:
                    continue
                spray = self.construct(where,
                                       lambda: geodesic_spray(connection))
            else:
                chart = self.reference(where, values, "chart",
                                       self.manifest.charts)
                acceleration = self.require(where, values, "acceleration")
                if chart is None or acceleration is None:
                    continue

                n = chart.dim
                coordinates = chart.names()
                velocities = tuple(variables_named("v", n))
                if "velocities" in values:
                    velocities = self.names(pointer_join(where, "velocities"),
                                            values["velocities"], n)
                    if velocities is None:
                        continue

                entries = self.expressions(
                    pointer_join(where, "acceleration"), acceleration, (n, ),
                    coordinates + velocities)
                if entries is None:
                    continue
                spray = self.construct(
                    where, lambda: Spray(coordinates, velocities,
                                         tuple(entries), chart.box))

            if spray is not None:
                self.manifest.sprays[name] = spray

    def curves(self) -> None:
        for name, where, values in self.entries("curves"):
            components = self.require(where, values, "components")
            t_span = self.require(where, values, "t_span")
            if components is None or t_span is None:
                continue

            parameter = values.get("parameter", "t")
            if not isinstance(parameter, str) or not parameter.isidentifier():
                self.error(pointer_join(where, "parameter"),
                           "Expected an identifier")
                continue
            if not isinstance(components, list) or not components:
                self.error(pointer_join(where, "components"),
                           "Expected a non-empty list of expressions")
                continue

            entries = self.expressions(pointer_join(where, "components"),
                                       components, (len(components), ),
                                       [parameter])
            span = self.vector(pointer_join(where, "t_span"), "t_span", t_span,
                               2)
            if entries is None or span is None:
                continue
            self.manifest.curves[name] = Curve(
                ParametrizedCurve(tuple(entries), parameter),
                (float(span[0]), float(span[1])))

    def metric_seed(self) -> None:
        if "metric_seed" not in self.document:
            return
        where = pointer("metric_seed")
        values = self.document["metric_seed"]
        if not isinstance(values, dict):
            self.error(where, "Expected an object")
            return

        connection = self.reference(where, values, "connection",
                                    self.manifest.connections)
        base_point = self.require(where, values, "base_point")
        g0 = self.require(where, values, "g0")
        if connection is None or base_point is None or g0 is None:
            return
        if not connection.tangent:
            self.error(pointer_join(where, "connection"),
                       "Expected a tangent connection")
            return

        n = connection.n
        point = self.vector(pointer_join(where, "base_point"), "base_point",
                            base_point, n)
        matrix = self.matrix(pointer_join(where, "g0"), "g0", g0, (n, n))
        if point is None or matrix is None:
            return
        if not connection.domain.contains(point):
            self.error(pointer_join(where, "base_point"),
                       f"Expected a point inside the chart box, but found: "
                       f"{point.tolist()}")
            return

        seed = self.construct(pointer_join(where, "g0"),
                              lambda: MetricSeed(point, matrix))
        if seed is not None:
            self.manifest.metric_seed = SeedEntry(values["connection"], seed)

    def cah(self) -> None:
        if "cah" not in self.document:
            return
        where = pointer("cah")
        values = self.document["cah"]
        if not isinstance(values, dict):
            self.error(where, "Expected an object")
            return

        source = self.reference(where, values, "source",
                                self.manifest.connections)
        target = self.reference(where, values, "target",
                                self.manifest.connections)
        if source is None or target is None:
            return
        for key, connection in (("source", source), ("target", target)):
            if not connection.tangent:
                self.error(pointer_join(where, key),
                           "Expected a tangent connection")
                return

        n, m = source.n, target.n
        raw = [self.require(where, values, key) for key in ("x0", "y0", "sigma0")]
        if any(value is None for value in raw):
            return

        x0 = self.vector(pointer_join(where, "x0"), "x0", raw[0], n)
        y0 = self.vector(pointer_join(where, "y0"), "y0", raw[1], m)
        sigma0 = self.matrix(pointer_join(where, "sigma0"), "sigma0", raw[2],
                             (m, n))
        if x0 is None or y0 is None or sigma0 is None:
            return

        problem = self.construct(where,
                                 lambda: CahProblem(source, target, x0, y0,
                                                    sigma0))
        if problem is not None:
            self.manifest.cah = problem

    def inputs(self) -> None:
        for command, where, values in self.entries("inputs"):
            resolved: dict[str, Any] = {}
            for key, value in values.items():
                if key in REFERENCES:
                    table = getattr(self.manifest, REFERENCES[key])
                    target = self.reference(where, values, key, table)
                    if target is None:
                        continue
                    resolved[key] = target
                else:
                    resolved[key] = value

            checked = self.command_inputs(command, where, resolved)
            if checked is not None:
                self.manifest.inputs[command] = checked

    def command_inputs(self, command: str, where: str,
                       values: dict[str, Any]) -> dict[str, Any] | None:
        """
        Checks the dimensions of the numeric inputs against the objects they
        go with.
        """
        result = dict(values)
        before = len(self.diagnostics)

        def vector(key: str, size: int) -> None:
            if key in values:
                result[key] = self.vector(pointer_join(where, key), key,
                                          values[key], size)

        def points(key: str, size: int) -> None:
            if key not in values:
                return
            if not isinstance(values[key], list) or not values[key]:
                self.error(pointer_join(where, key),
                           "Expected a non-empty list of points")
                return
            result[key] = [
                self.vector(pointer_join(where, key, i), key, item, size)
                for i, item in enumerate(values[key])
            ]

        def inside(key: str, box: Box) -> None:
            found = result.get(key)
            if isinstance(found, np.ndarray):
                found = [found]
                pointers = [pointer_join(where, key)]
            elif isinstance(found, list):
                pointers = [
                    pointer_join(where, key, i) for i in range(len(found))
                ]
            else:
                return
            for at, point in zip(pointers, found):
                if point is not None and not box.contains(point):
                    self.error(
                        at, f"Expected a point inside the chart box, but "
                        f"found: {point.tolist()}")

        distribution = values.get("distribution")
        if isinstance(distribution, GraphDistribution):
            points("points", distribution.n)
            vector("x0", distribution.k)
            vector("y0", distribution.m)
            inside("points", distribution.domain)
            inside("x0", distribution.base_domain)
            x0, y0 = result.get("x0"), result.get("y0")
            if (isinstance(x0, np.ndarray) and isinstance(y0, np.ndarray)
                    and distribution.base_domain.contains(x0)
                    and not distribution.domain.contains(
                        np.concatenate([x0, y0]))):
                self.error(
                    pointer_join(where, "y0"),
                    f"Expected (x0, y0) inside the chart box, but found: "
                    f"{np.concatenate([x0, y0]).tolist()}")

        connection = values.get("connection")
        if isinstance(connection, BundleConnection):
            if distribution is None:
                points("points", connection.n)
                vector("x0", connection.n)
                inside("points", connection.domain)
                inside("x0", connection.domain)
            vector("s0", connection.r)
            vector("xi", connection.r)
            curve = values.get("curve")
            if isinstance(curve, Curve) and curve.curve.dim != connection.n:
                self.error(
                    pointer_join(where, "curve"),
                    f"Expected a curve of dimension {connection.n}, but "
                    f"found {curve.curve.dim}")
            elif isinstance(curve, Curve):
                start = self.construct(pointer_join(where, "curve"),
                                       lambda: curve.curve(curve.t_span[0])[0])
                if start is not None and not connection.domain.contains(start):
                    self.error(
                        pointer_join(where, "curve"),
                        f"Expected the curve to start inside the chart box, "
                        f"but found: {start.tolist()}")

        spray = values.get("spray")
        if isinstance(spray, Spray):
            for key in ("x", "v", "target"):
                vector(key, spray.n)
            inside("x", spray.domain)
            inside("target", spray.domain)

        if "t_span" in values:
            result["t_span"] = self.vector(pointer_join(where, "t_span"),
                                           "t_span", values["t_span"], 2)

        if len(self.diagnostics) > before:
            return None
        return result

    def settings(self) -> None:
        values = self.document.get("settings", {})
        where = pointer("settings")
        if not isinstance(values, dict):
            self.error(where, "Expected an object")
            return

        for key in values:
            if key not in DEFAULT_SETTINGS:
                self.error(pointer_join(where, key), f"Unknown setting `{key}`")
        if "grid" in values and not isinstance(values["grid"], dict):
            self.error(pointer_join(where, "grid"), "Expected an object")
        self.manifest.settings = values
        for message, key in check_settings(merge_settings(values)):
            self.error(pointer_join(where, *key), message)


def pointer_join(where: str, *parts: str | int) -> str:
    return where + pointer(*parts)


def _message(error: Exception) -> str:
    return str(error.args[0]) if error.args else type(error).__name__


def merge_settings(values: dict[str, Any]) -> dict[str, Any]:
    settings = DEFAULT_SETTINGS | {
        key: value
        for key, value in values.items() if key in DEFAULT_SETTINGS
    }
    grid = values.get("grid")
    settings["grid"] = DEFAULT_SETTINGS["grid"] | (grid if isinstance(
        grid, dict) else {})
    return settings


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(
        value, bool) and math.isfinite(value)


def _is_integer(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def check_settings(settings: dict[str, Any]
                   ) -> list[tuple[str, tuple[str, ...]]]:
    """
    The problems found in resolved settings, each with its key path.
    """
    problems = []
    grid = settings["grid"]

    if not _is_number(settings["step"]) or settings["step"] <= 0:
        problems.append(("Expected a positive step", ("step", )))
    if not _is_number(grid["half_width"]) or grid["half_width"] <= 0:
        problems.append(("Expected a positive half width",
                         ("grid", "half_width")))
    if (not _is_integer(grid["count"]) or grid["count"] < 1
            or grid["count"] % 2 == 0):
        problems.append(("Expected an odd positive node count",
                         ("grid", "count")))
    if not _is_integer(settings["order"]) or settings["order"] < 0:
        problems.append(("Expected a non-negative order", ("order", )))
    if settings["tol"] is not None and (not _is_number(settings["tol"])
                                        or settings["tol"] <= 0):
        problems.append(("Expected a positive tolerance or null", ("tol", )))
    if not _is_integer(settings["seed"]) or settings["seed"] < 0:
        problems.append(("Expected a non-negative integer seed", ("seed", )))
    if not isinstance(settings["override"], bool):
        problems.append(("Expected a boolean", ("override", )))
    return problems


def build_manifest(document: Any) -> tuple[Manifest, list[Diagnostic]]:
    """
    Builds every object of `document`, returning the manifest together with
    the diagnostics of everything that failed to validate.
    """
    if not isinstance(document, dict):
        return Manifest({}), [Diagnostic("", "Expected a JSON object")]

    builder = _Builder(document)
    manifest = builder.build()
    return manifest, builder.diagnostics


def read_manifest(path: str | PathLike) -> Any:
    """
    Reads the JSON document at `path`.

    Raises
    ---
    - `OSError` when the file cannot be read.
    - `ManifestError` when it is not valid JSON.
    """
    with open(path, encoding="utf-8") as f:
        try:
            return load(f)
        except JSONDecodeError as e:
            raise ManifestError([Diagnostic("", f"Invalid JSON: {e}")]) from e


def validate_manifest(path: str | PathLike) -> list[Diagnostic]:
    """
    Full schema, reference, dimension and expression validation of the
    manifest at `path`, without computing anything.
    """
    try:
        document = read_manifest(path)
    except ManifestError as e:
        return e.diagnostics
    return build_manifest(document)[1]


def load_manifest(path: str | PathLike) -> Manifest:
    """
    Raises
    ---
    - `ManifestError` with every diagnostic when the manifest does not
      validate.
    """
    manifest, diagnostics = build_manifest(read_manifest(path))
    if diagnostics:
        raise ManifestError(diagnostics)
    return manifest


def resolve_settings(manifest: Manifest | None,
                     args: Namespace) -> dict[str, Any]:
    """
    The manifest settings over the defaults, with the command-line overrides
    (`--step --grid --order --tol --seed --override`) applied last.

    Raises
    ---
    - `ManifestError` when an override is out of range.
    """
    settings = merge_settings(manifest.settings if manifest else {})
    settings["grid"] = dict(settings["grid"])

    if getattr(args, "step", None) is not None:
        settings["step"] = args.step
    if getattr(args, "grid", None) is not None:
        settings["grid"]["count"] = args.grid
    if getattr(args, "order", None) is not None:
        settings["order"] = args.order
    if getattr(args, "tol", None) is not None:
        settings["tol"] = args.tol
    if getattr(args, "seed", None) is not None:
        settings["seed"] = args.seed
    if getattr(args, "override", False):
        settings["override"] = True

    problems = check_settings(settings)
    if problems:
        raise ManifestError([
            Diagnostic(pointer("settings", *key), message)
            for message, key in problems
        ])
    return settings


def inputs_digest(document: Any, settings: dict[str, Any],
                  command: str) -> str:
    """
    The SHA-256 of the canonical JSON of the manifest document, the resolved
    settings and the command name.
    """
    canonical = dumps({
        "command": command,
        "manifest": document,
        "settings": settings,
    },
                      sort_keys=True,
                      ensure_ascii=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

import numpy as np

from argparse import Namespace
from importlib.resources import files

from leafsolve.commands.manifest import (DEFAULT_SETTINGS, Diagnostic,
                                         ManifestError, build_manifest,
                                         inputs_digest, load_manifest,
                                         resolve_settings, validate_manifest)

PLANE = {"box": [[-1.0, 1.0], [-1.0, 1.0]]}
FLAT = {
    "chart": "plane",
    "christoffel": [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]]
}


def _bundled(name: str) -> str:
    return str(files("leafsolve.data").joinpath("manifests", name))


def _overrides(**values) -> Namespace:
    defaults = dict(step=None, grid=None, order=None, tol=None, seed=None,
                    override=False)
    return Namespace(**(defaults | values))


def test_bundled_manifests_validate():
    for name in ("flat.json", "sphere.json", "tde.json", "obstructed.json"):
        assert validate_manifest(_bundled(name)) == []


def test_flat_manifest_objects():
    manifest = load_manifest(_bundled("flat.json"))

    assert set(manifest.connections) == {"flat"}
    assert manifest.connections["flat"].is_flat()
    assert manifest.cah.n == 2
    assert np.array_equal(manifest.cah.sigma0, [[1.0, 2.0], [0.0, 1.0]])
    assert "selftest" in manifest.inputs


def test_not_an_object():
    manifest, diagnostics = build_manifest([1, 2])

    assert diagnostics == [Diagnostic("", "Expected a JSON object")]


def test_unknown_section_and_setting():
    _, diagnostics = build_manifest({
        "bogus": {},
        "settings": {
            "speed": 1
        }
    })

    assert diagnostics == [
        Diagnostic("/bogus", "Unknown section `bogus`"),
        Diagnostic("/settings/speed", "Unknown setting `speed`"),
    ]


def test_chart_diagnostics():
    _, diagnostics = build_manifest(
        {"charts": {
            "a": {},
            "b": {
                "box": [[1.0, 0.0]]
            },
            "c": 3
        }})

    assert diagnostics == [
        Diagnostic("/charts/c", "Expected an object"),
        Diagnostic("/charts/a", "Expected the key `box`"),
        Diagnostic("/charts/b/box", "Expected lo < hi on every axis"),
    ]


def test_unresolved_reference():
    _, diagnostics = build_manifest({
        "charts": {
            "plane": PLANE
        },
        "connections": {
            "flat": FLAT | {
                "chart": "torus"
            }
        }
    })

    assert diagnostics == [
        Diagnostic("/connections/flat/chart", "Unresolved reference 'torus'")
    ]


def test_expression_diagnostics():
    christoffel = [[["0", "0"], ["0", "x3"]], [["0", "0"], ["0", True]]]
    _, diagnostics = build_manifest({
        "charts": {
            "plane": PLANE
        },
        "connections": {
            "bad": {
                "chart": "plane",
                "christoffel": christoffel
            },
            "short": {
                "chart": "plane",
                "christoffel": [[["0", "0"]]]
            }
        }
    })

    assert diagnostics == [
        Diagnostic("/connections/bad/christoffel/0/1/1",
                   "Unknown identifier `x3` at offset 0"),
        Diagnostic("/connections/bad/christoffel/1/1/1",
                   "Expected an expression string or a number, but found: "
                   "True"),
        Diagnostic("/connections/short/christoffel",
                   "Expected 2 entries, but found 1"),
    ]


def test_tangent_rank():
    _, diagnostics = build_manifest({
        "charts": {
            "plane": PLANE
        },
        "connections": {
            "line_bundle": {
                "chart": "plane",
                "omega": [[["0"]], [["x1"]]],
                "rank": 1,
                "tangent": True
            }
        }
    })

    assert diagnostics == [
        Diagnostic("/connections/line_bundle/tangent",
                   "Expected rank 2 for a tangent connection")
    ]


def test_settings_diagnostics():
    _, diagnostics = build_manifest({
        "settings": {
            "step": -1.0,
            "grid": {
                "count": 4
            },
            "seed": -2
        }
    })

    assert diagnostics == [
        Diagnostic("/settings/step", "Expected a positive step"),
        Diagnostic("/settings/grid/count",
                   "Expected an odd positive node count"),
        Diagnostic("/settings/seed", "Expected a non-negative integer seed"),
    ]


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"charts\": ")

    diagnostics = validate_manifest(path)

    assert len(diagnostics) == 1
    assert diagnostics[0].pointer == ""
    assert diagnostics[0].message.startswith("Invalid JSON")

    try:
        load_manifest(path)

        raise Exception("Expected invalid JSON to fail")

    except ManifestError as e:
        assert e.diagnostics == diagnostics


def test_missing_command_inputs():
    manifest = load_manifest(_bundled("tde.json"))

    try:
        manifest.command_inputs("transport")

        raise Exception("Expected missing inputs to fail")

    except ManifestError as e:
        assert [str(d) for d in e.diagnostics] == [
            "/inputs/transport: Expected an inputs object for `transport`"
        ]

    try:
        manifest.require_metric_seed()

        raise Exception("Expected a missing metric seed to fail")

    except ManifestError as e:
        assert e.diagnostics == [
            Diagnostic("/metric_seed", "Expected a metric seed object")
        ]


def test_resolve_settings():
    manifest = load_manifest(_bundled("tde.json"))

    settings = resolve_settings(manifest, _overrides(grid=7, seed=3))
    assert settings["grid"] == {"half_width": 0.3, "count": 7}
    assert settings["order"] == 3
    assert settings["seed"] == 3

    defaults = resolve_settings(None, _overrides())
    assert defaults == DEFAULT_SETTINGS

    try:
        resolve_settings(None, _overrides(grid=4))

        raise Exception("Expected an even node count to fail")

    except ManifestError as e:
        assert e.diagnostics == [
            Diagnostic("/settings/grid/count",
                       "Expected an odd positive node count")
        ]


def test_inputs_digest():
    document = {"settings": {"step": 0.01, "order": 2}}
    reordered = {"settings": {"order": 2, "step": 0.01}}
    settings = resolve_settings(None, _overrides())

    digest = inputs_digest(document, settings, "levi")

    assert len(digest) == 64
    assert digest == inputs_digest(reordered, settings, "levi")
    assert digest != inputs_digest(document, settings, "integrability")
    assert digest != inputs_digest(document, settings | {"seed": 1}, "levi")


def test_inputs_outside_the_chart():
    _, diagnostics = build_manifest({
        "charts": {
            "plane": PLANE
        },
        "connections": {
            "flat": FLAT
        },
        "curves": {
            "shifted": {
                "components": ["2 + t", "0"],
                "t_span": [0.0, 1.0]
            }
        },
        "inputs": {
            "curvature": {
                "connection": "flat",
                "points": [[0.0, 0.0], [0.0, 1.5]]
            },
            "transport": {
                "connection": "flat",
                "curve": "shifted",
                "s0": [1.0, 0.0]
            }
        }
    })

    assert diagnostics == [
        Diagnostic("/inputs/curvature/points/1",
                   "Expected a point inside the chart box, but found: "
                   "[0.0, 1.5]"),
        Diagnostic("/inputs/transport/curve",
                   "Expected the curve to start inside the chart box, but "
                   "found: [2.0, 0.0]"),
    ]


def test_leaf_anchor_outside_the_chart():
    _, diagnostics = build_manifest({
        "charts": {
            "R3": {
                "box": [[-1.0, 1.0], [-1.0, 1.0], [-10.0, 10.0]]
            }
        },
        "distributions": {
            "exponential": {
                "chart": "R3",
                "F": [["1.0*y1", "-0.5*y1"]]
            }
        },
        "inputs": {
            "solve-tde": {
                "distribution": "exponential",
                "x0": [0.0, 0.0],
                "y0": [20.0]
            }
        }
    })

    assert diagnostics == [
        Diagnostic("/inputs/solve-tde/y0",
                   "Expected (x0, y0) inside the chart box, but found: "
                   "[0.0, 0.0, 20.0]")
    ]

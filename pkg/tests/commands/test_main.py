from importlib.resources import files
from rapidjson import dumps, loads

from leafsolve.__main__ import main


def _bundled(name: str) -> str:
    return str(files("leafsolve.data").joinpath("manifests", name))


def test_validate_passes(capsys):
    assert main(["validate", "--manifest", _bundled("sphere.json")]) == 0

    report = loads(capsys.readouterr().out)
    assert report["command"] == "validate"
    assert report["passed"]
    assert report["diagnostics"] == []


def test_validate_as_csv(capsys):
    code = main([
        "validate", "--manifest",
        _bundled("flat.json"), "--format", "csv"
    ])

    assert code == 0
    assert capsys.readouterr().out.splitlines() == [
        "name,residual,tol,passed", "manifest,0.0,1.0,True"
    ]


def test_bad_manifest_exits_with_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(dumps({"bogus": {}, "settings": {"order": -1}}))

    assert main(["levi", "--manifest", str(path)]) == 2

    captured = capsys.readouterr()
    assert captured.err.splitlines() == [
        "/bogus: Unknown section `bogus`",
        "/settings/order: Expected a non-negative order",
    ]
    report = loads(captured.out)
    assert report["diagnostics"] == [
        {
            "pointer": "/bogus",
            "message": "Unknown section `bogus`"
        },
        {
            "pointer": "/settings/order",
            "message": "Expected a non-negative order"
        },
    ]


def test_missing_manifest(capsys):
    assert main(["levi"]) == 2
    assert capsys.readouterr().err == "/: Expected --manifest for `levi`\n"


def test_missing_file(tmp_path, capsys):
    missing = str(tmp_path / "missing.json")

    assert main(["integrability", "--manifest", missing]) == 2
    assert capsys.readouterr().err.startswith("integrability: ")


def test_missing_inputs_exit_with_two(capsys):
    assert main(["transport", "--manifest", _bundled("tde.json")]) == 2
    assert capsys.readouterr().err == (
        "/inputs/transport: Expected an inputs object for `transport`\n")


def test_bad_override(capsys):
    code = main(["levi", "--manifest", _bundled("tde.json"), "--grid", "4"])

    assert code == 2
    assert capsys.readouterr().err == (
        "/settings/grid/count: Expected an odd positive node count\n")


def test_obstructed_levi_exits_with_one(capsys):
    assert main(["levi", "--manifest", _bundled("obstructed.json")]) == 1

    report = loads(capsys.readouterr().out)
    assert not report["passed"]
    assert report["checks"][0]["name"] == "levi-vanishes"
    assert report["checks"][0]["residual"] == 1.0
    assert report["iterations"][0]["levi"] == [[-1.0]]


def test_levi_writes_outputs(tmp_path, capsys):
    out = tmp_path / "out"

    code = main(["levi", "--manifest", _bundled("tde.json"), "--out", str(out)])

    assert code == 0
    assert capsys.readouterr().out == ""
    report = loads((out / "levi.json").read_text())
    assert report["passed"]
    assert len(report["iterations"]) == 2
    assert len(report["inputs_digest"]) == 64
    assert "christoffel" in report["conventions"]

    header = (out / "levi.csv").read_text().splitlines()[0]
    assert header.startswith("point_1,point_2,point_3,")


def test_selftest_is_deterministic(capsys):
    argv = ["selftest", "--step", "0.01"]

    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out

    assert first == second
    report = loads(first)
    assert report["subject"] == "flat"
    assert report["settings"]["step"] == 0.01
    assert "timing" not in report
    assert {check["name"] for check in report["checks"]} >= {
        "curvature-antisymmetry", "transport-reversibility",
        "exp-log-round-trip", "identity-map"
    }


def test_flat_curvature(capsys):
    assert main(["curvature", "--manifest", _bundled("flat.json")]) == 0

    report = loads(capsys.readouterr().out)
    assert len(report["iterations"]) == 2
    assert report["iterations"][1]["point"] == [0.5, -0.5]


def test_flat_cah_map(capsys):
    argv = [
        "cah-map", "--manifest",
        _bundled("flat.json"), "--grid", "3", "--step", "0.01"
    ]

    assert main(argv) == 0

    report = loads(capsys.readouterr().out)
    assert report["reachable_nodes"] == 9
    assert [check["name"] for check in report["checks"]] == [
        "torsion-relatedness", "curvature-relatedness", "jacobian",
        "horizontality", "affine"
    ]


def test_flat_affine_symmetry(capsys):
    argv = [
        "affine-symmetry", "--manifest",
        _bundled("flat.json"), "--construct", "--grid", "3", "--step", "0.01"
    ]

    assert main(argv) == 0

    names = [check["name"] for check in loads(capsys.readouterr().out)["checks"]]
    assert names[-2:] == ["affine", "involution"]


def test_sphere_to_plane_cah_check_exits_with_one(capsys):
    assert main(["cah-check", "--manifest", _bundled("obstructed.json")]) == 1
    assert not loads(capsys.readouterr().out)["passed"]


def test_points_outside_the_chart_exit_with_two(tmp_path, capsys):
    document = loads(files("leafsolve.data").joinpath(
        "manifests", "sphere.json").read_text())
    document["inputs"]["geodesic"]["x"] = [0.0, 0.0]
    document["inputs"]["affine-symmetry"]["x0"] = [3.0, 0.0]
    path = tmp_path / "outside.json"
    path.write_text(dumps(document))

    assert main(["geodesic", "--manifest", str(path)]) == 2

    captured = capsys.readouterr()
    assert captured.err.splitlines() == [
        "/inputs/geodesic/x: Expected a point inside the chart box, but "
        "found: [0.0, 0.0]",
        "/inputs/affine-symmetry/x0: Expected a point inside the chart box, "
        "but found: [3.0, 0.0]",
    ]
    assert len(loads(captured.out)["diagnostics"]) == 2


def test_sphere_recover_metric(capsys):
    argv = [
        "recover-metric", "--manifest",
        _bundled("sphere.json"), "--grid", "3", "--step", "0.01"
    ]

    assert main(argv) == 0

    report = loads(capsys.readouterr().out)
    checks = {check["name"]: check for check in report["checks"]}
    assert checks["antisymmetry-hypothesis"]["passed"]
    assert checks["nabla-g"]["residual"] < 1e-5

import math

from rapidjson import loads

from leafsolve.loggers import Logger, Report, to_plain

import numpy as np


def test_logger_hooks():
    logger = Logger(command="levi")
    seen = []
    logger.register_hook(lambda log: seen.append(log.steps[-1]["index"]))

    logger.log_step({"index": [0]})
    logger.log_step({"index": [1]}, note="second")

    assert seen == [[0], [1]]
    assert logger.steps[1] == {"index": [1], "note": "second"}
    assert logger["command"] == "levi"


def test_logger_reserved_key():
    try:
        Logger(iterations=3)

        raise Exception("Expected the reserved `iterations` key to fail")

    except AssertionError as e:
        assert e.args == (
            "The `iterations` keyword is reserved for the per-step data.", )


def test_report_exit_codes():
    report = Report("curvature")
    report.add_check("antisymmetry", 0.0, 1e-10)
    assert report.exit_code == 0

    assert not report.add_check("bianchi", float("nan"), 1e-10)
    assert report.exit_code == 1

    report["diagnostics"] = [{"pointer": "/charts", "message": "bad"}]
    assert report.exit_code == 2


def test_report_check_verdicts():
    report = Report("levi")

    assert report.add_check("small", 1e-12, 1e-9)
    assert not report.add_check("large", 1e-3, 1e-9)
    assert report.add_check("forced", 5.0, 1.0, passed=True, order=2)
    assert report.checks[2]["order"] == 2


def test_report_json_is_plain():
    report = Report("transport", settings={"step": 1e-3})
    report.add_check("reversibility", np.float64(1e-12), 1e-8)
    report.log_step({"t": 0.5, "s": np.array([1.0, math.inf])})

    document = loads(report.to_json())

    assert document["passed"] is True
    assert document["iterations"][0]["s"] == [1.0, None]
    assert document["checks"][0]["residual"] == 1e-12


def test_report_csv_spreads_lists():
    report = Report("levi")
    report.log_step({"x": [0.5, -0.25], "failure": None})

    assert report.to_csv() == "x_1,x_2,failure\r\n0.5,-0.25,\r\n"


def test_report_csv_falls_back_to_checks():
    report = Report("cah-check")
    report.add_check("order-0", 0.0, 1e-9)

    assert report.to_csv() == ("name,residual,tol,passed\r\n"
                               "order-0,0.0,1e-09,True\r\n")


def test_to_plain():
    assert to_plain({1: (np.int64(2), np.bool_(True), float("nan"))}) == {
        "1": [2, True, None]
    }

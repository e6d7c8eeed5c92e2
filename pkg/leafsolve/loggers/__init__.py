import csv
import io
import math
import pathlib

from os import PathLike
from pprint import pformat
from rapidjson import dump, dumps
from tqdm import tqdm
from typing import Any, Callable

import numpy as np


class Logger():
    """
    Collects run metadata and one record per grid node, ray or sample point
    (under `iterations`). Hooks run after every record.
    """

    def __init__(self, **metadata) -> None:
        assert "iterations" not in metadata, (
            "The `iterations` keyword is reserved for the per-step data.")

        self.state: dict[str, Any] = metadata
        self.state['iterations'] = []

        self.step_hooks: "list[Callable[[Logger], None]]" = []

    def save_json(self, path: str | PathLike, overwrite: bool = False):
        """
        Writes the metadata and records as plain JSON.

        Raises
        ---
        - `FileExistsError` when `path` exists and `overwrite` is `False`.
        """
        if pathlib.Path(path).exists() and not overwrite:
            raise FileExistsError(path)

        with open(path, 'w') as f:
            dump(to_plain(self.state), f, indent=2, default=repr)

    def log_step(self, state: dict[str, Any], **kwargs):
        self.state['iterations'].append(state | kwargs)

        for callable in self.step_hooks:
            callable(self)

    @property
    def steps(self) -> list[dict[str, Any]]:
        return self.state['iterations']

    def __getitem__(self, idx: str) -> Any:
        return self.state[idx]

    def __setitem__(self, idx: str, val: Any):
        self.state[idx] = val

    def __delitem__(self, idx: str):
        del self.state[idx]

    def __contains__(self, idx: Any) -> bool:
        return idx in self.state

    def register_hook(self, callable: "Callable[[Logger], None]"):
        self.step_hooks.append(callable)


class PrettyPrint(Logger):
    """
    Echoes every record through a `tqdm` bar as it is logged.
    """

    def __init__(self, **metadata) -> None:
        super().__init__(**metadata)

        self.bar = tqdm(total=metadata.get('n_steps'))

    def log_step(self, state: dict[str, Any], **kwargs):
        """
        Records `state` (with `kwargs` merged in) and prints `state`.
        """
        super().log_step(state, **kwargs)

        self.bar.write(pformat(to_plain(state), sort_dicts=False))
        self.bar.update()

    def mirror(self, logger: Logger) -> None:
        """
        Hook that echoes the latest step of `logger`.
        """
        self.log_step(logger.steps[-1])


class Report(Logger):
    """
    The outcome of one command: the resolved inputs, a list of named checks
    with residuals and verdicts, per-point failures, and the per-point records
    logged by the engines (under `iterations`).
    """

    def __init__(self, command: str, **metadata) -> None:
        super().__init__(command=command, **metadata)

        self.state.setdefault('checks', [])
        self.state.setdefault('failures', [])

    def add_check(self,
                  name: str,
                  residual: float,
                  tol: float,
                  passed: bool | None = None,
                  **details) -> bool:
        """
        Records a named check. Unless given, the verdict is `residual < tol`;
        a NaN residual fails.
        """
        residual = float(residual)
        if passed is None:
            passed = math.isfinite(residual) and residual < tol

        self.state['checks'].append({
            "name": name,
            "residual": residual,
            "tol": tol,
            "passed": bool(passed),
        } | details)
        return bool(passed)

    def add_failure(self, where: Any, message: str) -> None:
        self.state['failures'].append({"where": where, "message": message})

    @property
    def checks(self) -> list[dict[str, Any]]:
        return self.state['checks']

    @property
    def passed(self) -> bool:
        return all(check["passed"] for check in self.checks)

    @property
    def exit_code(self) -> int:
        """
        2 when the report carries input diagnostics, otherwise 0 when every
        check passed and 1 when one failed.
        """
        if self.state.get('diagnostics'):
            return 2
        return 0 if self.passed else 1

    def to_json(self) -> str:
        state = self.state | {"passed": self.passed}
        return dumps(to_plain(state), indent=2, default=repr) + "\n"

    def to_csv(self) -> str:
        """
        The per-point records as RFC 4180 CSV. List values are spread over
        columns `name_1, name_2, ...`.
        """
        rows = [_flatten(record) for record in self.steps]
        if not rows:
            rows = [_flatten(check) for check in self.checks]

        columns: list[str] = []
        for row in rows:
            columns.extend(key for key in row if key not in columns)

        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\r\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _csv_value(value) for key, value in row.items()})
        return buffer.getvalue()

    def write(self, path: str | PathLike | None, format: str = "json") -> str:
        """
        Renders the report and writes it to `path` (overwriting) when given.
        """
        text = self.to_csv() if format == "csv" else self.to_json()
        if path is not None:
            with open(path, 'w', newline='') as f:
                f.write(text)
        return text


def to_plain(value: Any) -> Any:
    """
    Converts `numpy` values, tuples and non-finite floats into plain JSON
    values (`NaN` and infinities become `None`).
    """
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def _flatten(record: dict[str, Any]) -> dict[str, Any]:
    row: dict[str, Any] = {}
    for key, value in to_plain(record).items():
        if isinstance(value, list) and all(
                not isinstance(item, (list, dict)) for item in value):
            for i, item in enumerate(value, start=1):
                row[f"{key}_{i}"] = item
        else:
            row[key] = value
    return row


def _csv_value(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, dict)):
        return dumps(value)
    return value

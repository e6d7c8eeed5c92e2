import math
import numpy as np

from dataclasses import dataclass
from typing import Callable

Rhs = Callable[[float, np.ndarray], np.ndarray]


class ChartExitError(RuntimeError):
    """
    Raised when a trajectory leaves its chart (or an evaluation on it leaves
    the domain of an expression) before the end of the requested interval.

    `last_t` is the last time at which the state was valid and `partial` the
    solution computed up to that time.
    """

    def __init__(self, message: str, last_t: float,
                 partial: "CurveSolution | None" = None) -> None:
        super().__init__(message)
        self.last_t = last_t
        self.partial = partial


@dataclass(frozen=True, eq=False)
class CurveSolution:
    """
    Dense output of a fixed-step integration: states and derivatives at the
    breakpoints, cubic Hermite interpolation in between.

    Breakpoints are strictly monotone; they decrease for backward
    integrations. Querying a breakpoint returns the stored state exactly.
    """

    ts: np.ndarray
    ys: np.ndarray
    dys: np.ndarray

    def __post_init__(self) -> None:
        assert self.ts.ndim == 1 and len(self.ts) >= 1, (
            f"Expected a non-empty vector of breakpoints, but found shape: "
            f"{self.ts.shape}")
        assert self.ys.shape == self.dys.shape == (len(self.ts),
                                                   self.ys.shape[1]), (
            f"Expected states and derivatives of shape ({len(self.ts)}, d), "
            f"but found: {self.ys.shape} and {self.dys.shape}")

        for array in (self.ts, self.ys, self.dys):
            array.setflags(write=False)

    @property
    def t_start(self) -> float:
        return float(self.ts[0])

    @property
    def t_end(self) -> float:
        return float(self.ts[-1])

    @property
    def dim(self) -> int:
        return self.ys.shape[1]

    @property
    def end(self) -> np.ndarray:
        return self.ys[-1]

    def _locate(self, t: float) -> tuple[int, float]:
        ts = self.ts
        lo, hi = min(ts[0], ts[-1]), max(ts[0], ts[-1])
        if not lo <= t <= hi:
            raise ValueError(
                f"Time {t} is outside the solution domain [{lo}, {hi}]")

        if len(ts) == 1:
            return 0, 0.0

        forward = ts[-1] > ts[0]
        i = int(np.searchsorted(ts if forward else -ts, t if forward else -t,
                                side="right")) - 1
        i = min(max(i, 0), len(ts) - 2)
        return i, (t - ts[i]) / (ts[i + 1] - ts[i])

    def __call__(self, t: float) -> np.ndarray:
        i, s = self._locate(t)
        if s == 0.0:
            return self.ys[i].copy()
        if s == 1.0:
            return self.ys[i + 1].copy()

        h = self.ts[i + 1] - self.ts[i]
        s2, s3 = s * s, s * s * s
        return ((2 * s3 - 3 * s2 + 1) * self.ys[i] +
                (s3 - 2 * s2 + s) * h * self.dys[i] +
                (-2 * s3 + 3 * s2) * self.ys[i + 1] +
                (s3 - s2) * h * self.dys[i + 1])

    def derivative(self, t: float) -> np.ndarray:
        i, s = self._locate(t)
        if s == 0.0:
            return self.dys[i].copy()
        if s == 1.0:
            return self.dys[i + 1].copy()

        h = self.ts[i + 1] - self.ts[i]
        s2 = s * s
        return ((6 * s2 - 6 * s) / h * self.ys[i] +
                (3 * s2 - 4 * s + 1) * self.dys[i] +
                (-6 * s2 + 6 * s) / h * self.ys[i + 1] +
                (3 * s2 - 2 * s) * self.dys[i + 1])

    def truncated(self, n_points: int) -> "CurveSolution":
        return CurveSolution(self.ts[:n_points].copy(),
                             self.ys[:n_points].copy(),
                             self.dys[:n_points].copy())

    def select(self, indices: slice | list[int]) -> "CurveSolution":
        """
        Restricts every state to a subset of its components.
        """
        return CurveSolution(self.ts.copy(), self.ys[:, indices].copy(),
                             self.dys[:, indices].copy())


def integrate_ode(rhs: Rhs,
                  y0: np.ndarray,
                  t_span: tuple[float, float],
                  step: float,
                  inside: Callable[[np.ndarray], bool] | None = None
                  ) -> CurveSolution:
    """
    Integrates `y' = rhs(t, y)` with the classical fixed-step fourth-order
    Runge-Kutta method.

    Parameters
    ---
    - `rhs` (`Callable[[float, numpy.ndarray], numpy.ndarray]`): The
      right-hand side.
    - `y0` (`numpy.ndarray`): The initial state at `t_span[0]`.
    - `t_span` (`tuple[float, float]`): Start and end time; the end may be
      before the start.
    - `step` (`float`): The largest step size. The interval is split into
      equal steps no larger than this, so the last breakpoint is exactly
      `t_span[1]`.
    - `inside` (`Callable[[numpy.ndarray], bool] | None`): Chart membership
      test applied to every stage state. Leaving the chart is an error.

    Returns
    ---
    - The `CurveSolution` over `t_span`.

    Raises
    ---
    - `ChartExitError` carrying the last valid time and the partial solution
      when a state leaves the chart or `rhs` fails to evaluate.
    """
    assert step > 0, f"Expected a positive step, but found: {step}"

    t0, t1 = float(t_span[0]), float(t_span[1])
    y = np.array(y0, dtype=np.float64)
    assert y.ndim == 1, f"Expected a state vector, but found shape: {y.shape}"

    n_steps = 0 if t1 == t0 else max(
        1, math.ceil(abs(t1 - t0) / step - 1e-9))
    h = (t1 - t0) / n_steps if n_steps else 0.0

    ts = t0 + h * np.arange(n_steps + 1, dtype=np.float64)
    ts[-1] = t1
    ys = np.empty((n_steps + 1, len(y)))
    dys = np.empty((n_steps + 1, len(y)))

    def evaluate(t: float, state: np.ndarray, k: int) -> np.ndarray:
        if inside is not None and not inside(state):
            raise ChartExitError(
                f"Trajectory left the chart after t = {ts[k]}", float(ts[k]),
                _partial(k))
        try:
            return rhs(t, state)
        except (ValueError, ArithmeticError) as e:
            raise ChartExitError(
                f"Right-hand side failed after t = {ts[k]}: {e}",
                float(ts[k]), _partial(k)) from e

    def _partial(k: int) -> CurveSolution:
        return CurveSolution(ts[:k + 1].copy(), ys[:k + 1].copy(),
                             dys[:k + 1].copy())

    if inside is not None and not inside(y):
        raise ChartExitError(f"Initial state {y.tolist()} is outside the chart",
                             t0, None)
    try:
        f = rhs(t0, y)
    except (ValueError, ArithmeticError) as e:
        raise ChartExitError(f"Right-hand side failed at t = {t0}: {e}", t0,
                             None) from e

    ys[0], dys[0] = y, f
    half = h / 2

    for k in range(n_steps):
        t = ts[k]
        k1 = f
        k2 = evaluate(t + half, y + half * k1, k)
        k3 = evaluate(t + half, y + half * k2, k)
        k4 = evaluate(t + h, y + h * k3, k)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        f = evaluate(ts[k + 1], y, k)
        ys[k + 1], dys[k + 1] = y, f

    return CurveSolution(ts, ys, dys)

import bisect

import numpy as np

from dataclasses import dataclass
from typing import Sequence

from ..geometry import ChartExitError
from .spray import Spray, SpraySolution, solve_spray

CONTINUITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Leg:
    """
    One leg of a piecewise path. `point` may be `None` for every leg but the
    first, meaning the leg starts where the previous one ended.
    """

    point: np.ndarray | None
    velocity: np.ndarray
    duration: float

    def __post_init__(self) -> None:
        assert self.duration > 0, (
            f"Expected a positive duration, but found: {self.duration}")
        if self.point is not None:
            object.__setattr__(self, "point",
                               np.asarray(self.point, dtype=np.float64))
        object.__setattr__(self, "velocity",
                           np.asarray(self.velocity, dtype=np.float64))


@dataclass(frozen=True, eq=False)
class PiecewisePath:
    legs: tuple[Leg, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "legs", tuple(self.legs))
        assert self.legs, "Expected at least one leg"
        assert self.legs[0].point is not None, (
            "Expected the first leg to have a starting point")

    @classmethod
    def from_legs(cls, legs: Sequence[tuple[Sequence[float] | None,
                                            Sequence[float], float]]
                  ) -> "PiecewisePath":
        return cls(
            tuple(
                Leg(None if point is None else np.asarray(point),
                    np.asarray(velocity), float(duration))
                for point, velocity, duration in legs))

    @property
    def duration(self) -> float:
        return sum(leg.duration for leg in self.legs)


@dataclass(frozen=True, eq=False)
class PiecewiseSolution:
    """
    Concatenated leg solutions on consecutive time intervals starting at 0.
    At a knot the position is continuous and the velocity may jump; queries
    at a knot return the state of the later leg.
    """

    pieces: tuple[SpraySolution, ...]
    knots: tuple[float, ...]

    @property
    def t_start(self) -> float:
        return 0.0

    @property
    def t_end(self) -> float:
        return self.knots[-1]

    def _piece(self, t: float) -> tuple[SpraySolution, float]:
        if not 0.0 <= t <= self.t_end:
            raise ValueError(
                f"Time {t} is outside the solution domain [0, {self.t_end}]")
        i = min(bisect.bisect_right(self.knots, t) - 1, len(self.pieces) - 1)
        return self.pieces[i], t - self.knots[i]

    def __call__(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        piece, local = self._piece(t)
        return piece(local)

    def position(self, t: float) -> np.ndarray:
        return self(t)[0]

    @property
    def end_point(self) -> np.ndarray:
        return self.pieces[-1].end_point


def piecewise_solve(S: Spray, path: PiecewisePath,
                    step: float = 1e-3) -> PiecewiseSolution:
    """
    Solves every leg of `path` in turn, starting each one where the previous
    ended.

    Raises
    ---
    - `ValueError` when a leg's given starting point is more than 1e-12 away
      from the previous end.
    - `ChartExitError` when a leg leaves the chart.
    """
    pieces: list[SpraySolution] = []
    knots = [0.0]
    point = path.legs[0].point
    assert point is not None

    for i, leg in enumerate(path.legs):
        if leg.point is not None:
            gap = float(np.max(np.abs(leg.point - point)))
            if gap > CONTINUITY_TOL:
                raise ValueError(
                    f"Leg {i} starts {gap} away from the end of the previous "
                    f"leg")
            point = leg.point

        piece = solve_spray(S, point, leg.velocity, (0.0, leg.duration), step)
        if not piece.complete:
            raise ChartExitError(
                f"Leg {i} left the chart at t = {knots[-1] + piece.t_end}",
                knots[-1] + piece.t_end, piece.curve)

        pieces.append(piece)
        knots.append(knots[-1] + leg.duration)
        point = piece.end_point

    return PiecewiseSolution(tuple(pieces), tuple(knots))

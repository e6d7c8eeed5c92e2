import os

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_VARIABLE = "LEAFSOLVE_THREADS"


def get_worker_count() -> int:
    """
    Number of workers used for per-grid-point work.

    Sized from the CPU count in tiers and capped by the `LEAFSOLVE_THREADS`
    environment variable when it is set.
    """
    cpu_count = os.cpu_count()
    cpu_count = 1 if cpu_count is None else cpu_count

    if cpu_count <= 4:
        workers = 1
    elif cpu_count <= 16:
        workers = cpu_count // 4
    elif cpu_count <= 64:
        workers = cpu_count // 8
    else:
        workers = 8

    cap = os.environ.get(THREADS_VARIABLE)
    if cap is not None:
        assert cap.strip().isdigit() and int(cap) > 0, (
            f"Expected `{THREADS_VARIABLE}` to be a positive integer, "
            f"but found: {cap!r}")
        workers = min(workers, int(cap))

    return workers


def parallel_map(function: Callable[[T], R],
                 items: Iterable[T],
                 workers: int | None = None) -> list[R]:
    """
    Applies `function` to every item, in parallel when more than one worker is
    available. The output order matches the input order, so results do not
    depend on scheduling.
    """
    items = list(items)
    workers = get_worker_count() if workers is None else workers

    if workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, items))

from leafsolve.utils import THREADS_VARIABLE, get_worker_count, parallel_map


def test_parallel_map_keeps_order():
    items = list(range(20))

    assert parallel_map(lambda i: i * i, items, workers=4) == [
        i * i for i in items
    ]
    assert parallel_map(lambda i: -i, items, workers=1) == [-i for i in items]


def test_worker_count_cap(monkeypatch):
    monkeypatch.setenv(THREADS_VARIABLE, "1")

    assert get_worker_count() == 1


def test_worker_count_invalid_cap(monkeypatch):
    monkeypatch.setenv(THREADS_VARIABLE, "zero")

    try:
        get_worker_count()

        raise Exception("Expected an invalid thread cap to fail")

    except AssertionError as e:
        assert e.args == (
            f"Expected `{THREADS_VARIABLE}` to be a positive integer, but "
            "found: 'zero'", )

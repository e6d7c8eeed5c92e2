import numpy as np

from leafsolve.utils.validation import as_matrix, as_vector, check_ndarray


def test_check_ndarray_accepts_a_state():
    state = np.zeros((2, 4))

    check_ndarray("state", state, shape=(2, 4), dtype=np.float64)
    check_ndarray("state", state)


def test_check_ndarray_rejects_a_transposed_state():
    state = np.zeros((4, 2))

    try:
        check_ndarray("state", state, shape=(2, 4))

        raise Exception("Expected a transposed state to fail")

    except AssertionError as e:
        assert e.args == (
            "Expected `state` to have shape (2, 4), but found shape: (4, 2)", )


def test_check_ndarray_rejects_single_precision():
    sigma = np.eye(2, dtype=np.float32)

    try:
        check_ndarray("sigma", sigma, dtype=np.float64)

        raise Exception("Expected a float32 matrix to fail")

    except AssertionError as e:
        assert e.args == (
            "Expected `sigma` to have `dtype` float64, but found `dtype`: float32",
        )


def test_check_ndarray_rejects_nested_lists():
    try:
        check_ndarray("sigma", [[1.0, 0.0], [0.0, 1.0]])  # type: ignore

        raise Exception("Expected a nested list to fail")

    except AssertionError as e:
        assert e.args == (
            "Expected `sigma` to be of type `numpy.ndarray`, but found type: <class 'list'>",
        )


def test_as_vector():
    vector = as_vector("x0", [1, 2], 2)

    assert vector.dtype == np.float64
    assert vector.tolist() == [1.0, 2.0]


def test_as_vector_wrong_length():
    try:
        as_vector("x0", [1.0, 2.0, 3.0], 2)

        raise Exception("Expected a vector of the wrong length to fail")

    except AssertionError as e:
        assert e.args == (
            "Expected `x0` to have shape (2,), but found shape: (3,)", )


def test_as_matrix_not_finite():
    try:
        as_matrix("g0", [[1.0, float("inf")], [0.0, 1.0]], (2, 2))

        raise Exception("Expected a non-finite matrix to fail")

    except AssertionError as e:
        assert e.args == (
            "Expected `g0` to be finite, but found: [[1.0, inf], [0.0, 1.0]]", )

import numpy as np

from numpy.typing import DTypeLike


def check_ndarray(var_name: str,
                  array: np.ndarray,
                  shape: None | tuple[int, ...] = None,
                  dtype: DTypeLike | None = None) -> None:
    """
    Parameters
    ---
    - `var_name` (`str`): The name of the variable in assertation messages.
    - `array` (`numpy.ndarray`): The array to validate.
    - `shape` (`None | tuple[int, ...]`): The shape to assert the array to be.
      If `None`, do not validate shape.
    - `dtype` (`None | numpy.typing.DTypeLike`): The `dtype` to assert the
      array to be. If `None`, do not validate `dtype`.
    """

    assert isinstance(array, np.ndarray), (
        f"Expected `{var_name}` to be of type `numpy.ndarray`, but found type: {type(array)}"
    )

    if shape is not None:
        assert array.shape == shape, (
            f"Expected `{var_name}` to have shape {shape}, but found shape: {array.shape}"
        )

    if dtype is not None:
        assert array.dtype == dtype, (
            f"Expected `{var_name}` to have `dtype` {np.dtype(dtype)}, but found `dtype`: {array.dtype}"
        )


def as_vector(var_name: str, values, size: int | None = None) -> np.ndarray:
    """
    Converts `values` to a finite float64 vector, checking its length.
    """
    array = np.array(values, dtype=np.float64)
    assert array.ndim == 1, (
        f"Expected `{var_name}` to be a vector, but found shape: {array.shape}"
    )
    if size is not None:
        check_ndarray(var_name, array, shape=(size, ))
    assert np.all(np.isfinite(array)), (
        f"Expected `{var_name}` to be finite, but found: {array.tolist()}")
    return array


def as_matrix(var_name: str, values, shape: tuple[int, int]) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    check_ndarray(var_name, array, shape=shape)
    assert np.all(np.isfinite(array)), (
        f"Expected `{var_name}` to be finite, but found: {array.tolist()}")
    return array

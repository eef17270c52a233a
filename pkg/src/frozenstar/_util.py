"""Small internal helpers."""

import numpy as np


def as_z_array(z):
    """Normalize a spectral argument to a 1-d complex array.

    Returns (array, scalar_flag); scalar_flag tells callers to unwrap the
    result back to a python complex.
    """
    arr = np.asarray(z, dtype=np.complex128)
    return arr.reshape(-1), arr.ndim == 0


def unwrap(values, scalar_flag):
    return complex(values[0]) if scalar_flag else values

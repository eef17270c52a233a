"""Numba-jitted twins of the numpy kernels.

Same arithmetic as ``_kernels_numpy``, written as explicit loops so numba can
compile them. Kept signature-compatible; ``backend`` dispatches between the
two modules.
"""

import cmath
import math

import numpy as np
from numba import njit

_SIN_RATIO_CUTOFF = 1e-3


@njit(cache=True)
def _sin_ratio(w):
    if abs(w) < _SIN_RATIO_CUTOFF:
        w2 = w * w
        return 1.0 - w2 / 6.0 * (1.0 - w2 / 20.0 * (1.0 - w2 / 42.0))
    return cmath.sin(w) / w


@njit(cache=True)
def term_ratios(z, l, n_terms, eps):
    K = z.shape[0]
    out = np.empty((K, n_terms), dtype=np.complex128)
    for i in range(K):
        zi = z[i]
        szl = cmath.sin(zi * l)
        for n in range(1, n_terms + 1):
            p = n * math.pi / l
            sgn = 1.0 if n % 2 == 0 else -1.0
            dm = zi - p
            dp = zi + p
            if abs(dm) < eps:
                out[i, n - 1] = sgn * l * _sin_ratio(dm * l) / dp
            elif abs(dp) < eps:
                out[i, n - 1] = sgn * l * _sin_ratio(dp * l) / dm
            else:
                out[i, n - 1] = szl / (dm * dp)
    return out


@njit(cache=True)
def _ratio_series_impl(z, l, w, eps):
    K = z.shape[0]
    N = w.shape[0]
    out = np.zeros(K, dtype=np.complex128)
    for i in range(K):
        zi = z[i]
        szl = cmath.sin(zi * l)
        acc = 0.0 + 0.0j
        for n in range(1, N + 1):
            p = n * math.pi / l
            sgn = 1.0 if n % 2 == 0 else -1.0
            dm = zi - p
            dp = zi + p
            if abs(dm) < eps:
                rho = sgn * l * _sin_ratio(dm * l) / dp
            elif abs(dp) < eps:
                rho = sgn * l * _sin_ratio(dp * l) / dm
            else:
                rho = szl / (dm * dp)
            acc += w[n - 1] * rho
        out[i] = acc
    return out


def ratio_series(z, l, w, eps):
    z = np.ascontiguousarray(np.asarray(z, dtype=np.complex128).ravel())
    w = np.ascontiguousarray(np.asarray(w, dtype=np.complex128))
    if w.size == 0:
        return np.zeros(z.size, dtype=np.complex128)
    return _ratio_series_impl(z, float(l), w, float(eps))


@njit(cache=True)
def _sin_prod_excl_impl(z, lengths):
    K = z.shape[0]
    m = lengths.shape[0]
    out = np.empty((K, m), dtype=np.complex128)
    for i in range(K):
        for j in range(m):
            prod = 1.0 + 0.0j
            for k in range(m):
                if k != j:
                    prod *= cmath.sin(z[i] * lengths[k])
            out[i, j] = prod
    return out


def sin_prod_excl(z, lengths):
    z = np.ascontiguousarray(np.asarray(z, dtype=np.complex128).ravel())
    lengths = np.ascontiguousarray(np.asarray(lengths, dtype=np.float64))
    return _sin_prod_excl_impl(z, lengths)

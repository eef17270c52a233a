"""Pure-numpy evaluation kernels.

These are the reference implementations of the two hot primitives that every
spectral formula in the package is assembled from:

* ``term_ratios`` / ``ratio_series`` -- the resonant quotient
  sin(z*l) / (z**2 - (n*pi/l)**2), summed against a weight vector.  The
  quotient has removable singularities at z = +-n*pi/l; inside a window of
  half-width ``eps`` around each one the factored form
  sin(d*l)/d * l / (z +- n*pi/l) with a series-expanded sin(d)/d is used, so
  the value stays accurate to machine precision across the window.
* ``sin_prod_excl`` -- leave-one-out products of sin(z*l_k) over the edges.

The numba twin in ``_kernels_numba`` implements the same arithmetic with
explicit loops; ``backend`` picks one of the two at import time.
"""

import numpy as np

# below this the direct quotient sin(w)/w starts losing nothing yet, but the
# series is exact to double precision and branch-free
_SIN_RATIO_CUTOFF = 1e-3


def _sin_ratio(w):
    """sin(w)/w for complex w, stable at w = 0."""
    w = np.asarray(w, dtype=np.complex128)
    out = np.empty(w.shape, dtype=np.complex128)
    small = np.abs(w) < _SIN_RATIO_CUTOFF
    ws = w[small]
    w2 = ws * ws
    out[small] = 1.0 - w2 / 6.0 * (1.0 - w2 / 20.0 * (1.0 - w2 / 42.0))
    wl = w[~small]
    out[~small] = np.sin(wl) / wl
    return out


def term_ratios(z, l, n_terms, eps):
    """Stable values of sin(z*l)/(z**2 - (n*pi/l)**2), n = 1..n_terms.

    z : complex array (K,); returns (K, n_terms) complex.
    """
    z = np.asarray(z, dtype=np.complex128).ravel()
    n = np.arange(1, n_terms + 1)
    p = n * (np.pi / l)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    dm = z[:, None] - p[None, :]
    dp = z[:, None] + p[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.sin(z * l)[:, None] / (dm * dp)
    near_m = np.abs(dm) < eps
    near_p = np.abs(dp) < eps
    if near_m.any():
        iz, im = np.nonzero(near_m)
        ratios[iz, im] = sign[im] * l * _sin_ratio(dm[iz, im] * l) / dp[iz, im]
    if near_p.any():
        iz, im = np.nonzero(near_p)
        ratios[iz, im] = sign[im] * l * _sin_ratio(dp[iz, im] * l) / dm[iz, im]
    return ratios


def ratio_series(z, l, w, eps):
    """sin(z*l) * sum_n w[n-1] / (z**2 - (n*pi/l)**2) over a z grid."""
    w = np.asarray(w, dtype=np.complex128)
    if w.size == 0:
        return np.zeros(np.asarray(z).size, dtype=np.complex128)
    return term_ratios(z, l, w.size, eps) @ w


def sin_prod_excl(z, lengths):
    """out[i, j] = prod over k != j of sin(z[i] * lengths[k])."""
    z = np.asarray(z, dtype=np.complex128).ravel()
    lengths = np.asarray(lengths, dtype=np.float64)
    sins = np.sin(z[:, None] * lengths[None, :])
    m = lengths.size
    out = np.empty((z.size, m), dtype=np.complex128)
    for j in range(m):
        out[:, j] = np.prod(sins[:, [k for k in range(m) if k != j]], axis=1)
    return out

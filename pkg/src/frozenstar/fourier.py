"""Sine-series analysis on edges.

Every potential lives on an edge [0, l] and is expanded against the tip-anchored
basis sin[(n*pi/l)(l - x)], n = 1..N. This module extracts coefficients from
samples (composite Simpson), synthesizes the truncated series, evaluates the
sine transform

    F(q)(z) = (2/l) * integral_0^l q(x) sin[(z*pi/l)(l - x)] dx,

and provides both sides of the partial-fraction / integral identity used by
the potential-recovery argument. All closed forms come from the exact
integral of a product of two sines, so off-grid quadrature error never enters
the transform or the identity's left side.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from . import backend
from ._util import as_z_array, unwrap
from .errors import GridTooCoarse, OutOfDomain

DEFAULT_POLE_EPS = 1e-6

# Gauss-Legendre rule for the integral side of the identity check; 200 nodes
# resolve the oscillation of sin(eta*x) far beyond any truncation order used
# at desk scale.
_GL_NODES = 200


def _freeze(a, dtype) -> np.ndarray:
    out = np.asarray(a, dtype=dtype).copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SampledFunction:
    """Complex samples of a function on a uniform grid over [0, length]."""

    length: float
    samples: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "samples", _freeze(self.samples, np.complex128))
        if not (self.length > 0 and np.isfinite(self.length)):
            raise ValueError("length must be positive and finite")
        if self.samples.ndim != 1 or self.samples.size < 3:
            raise ValueError("need samples on at least 3 grid points")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")

    @property
    def intervals(self) -> int:
        return self.samples.size - 1

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.samples.size)


@dataclass(frozen=True)
class PotentialCoeffs:
    """Per-edge sine coefficients q[j, n-1], shared truncation order N."""

    lengths: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lengths", _freeze(self.lengths, np.float64))
        object.__setattr__(self, "coefficients", _freeze(self.coefficients, np.complex128))
        if self.coefficients.ndim != 2 or self.coefficients.shape[0] != self.lengths.size:
            raise ValueError("coefficients must be (edges, order)")
        if self.coefficients.shape[1] < 1:
            raise ValueError("truncation order must be at least 1")
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError("coefficients must be finite")
        if np.any(self.lengths <= 0):
            raise ValueError("edge lengths must be positive")

    @property
    def m(self) -> int:
        return self.lengths.size

    @property
    def order(self) -> int:
        return self.coefficients.shape[1]

    @classmethod
    def from_sequences(cls, lengths, sequences, order: int | None = None) -> "PotentialCoeffs":
        """Build from ragged per-edge sequences, zero-padding to a common order."""
        seqs = [np.asarray(s, dtype=np.complex128).reshape(-1) for s in sequences]
        n = order if order is not None else max((s.size for s in seqs), default=1)
        n = max(n, 1)
        coeffs = np.zeros((len(seqs), n), dtype=np.complex128)
        for j, s in enumerate(seqs):
            if s.size > n:
                raise ValueError(f"edge {j} has {s.size} coefficients, order is {n}")
            coeffs[j, : s.size] = s
        return cls(np.asarray(lengths, dtype=np.float64), coeffs)

    @classmethod
    def zeros(cls, lengths, order: int) -> "PotentialCoeffs":
        lengths = np.asarray(lengths, dtype=np.float64)
        return cls(lengths, np.zeros((lengths.size, order), dtype=np.complex128))


def sine_coefficients(f: SampledFunction, order: int) -> np.ndarray:
    """Extract q_n = (2/l) * integral_0^l f(x) sin[(n*pi/l)(l-x)] dx, n = 1..order.

    Composite Simpson on the sample grid. Warns (GridTooCoarse) when the grid
    has fewer than 8*order intervals, the point where the top modes are no
    longer resolved to quadrature accuracy.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if f.intervals < 8 * order:
        warnings.warn(
            f"{f.intervals} intervals for order {order}; expect degraded coefficients below 8*order",
            GridTooCoarse,
            stacklevel=2,
        )
    x = f.grid()
    n = np.arange(1, order + 1)
    sines = np.sin(np.outer(n, (np.pi / f.length) * (f.length - x)))
    return (2.0 / f.length) * simpson(sines * f.samples[None, :], x=x, axis=1)


def sine_synthesis(c: PotentialCoeffs, j: int, x):
    """Partial sum of the coefficient series for edge j at x (scalar or array)."""
    l = float(c.lengths[j])
    xa = np.asarray(x, dtype=np.float64)
    if np.any(xa < 0) or np.any(xa > l):
        raise OutOfDomain(f"x outside [0, {l}] on edge {j}")
    n = np.arange(1, c.order + 1)
    sines = np.sin(np.outer(l - np.atleast_1d(xa), n * np.pi / l))
    vals = sines @ c.coefficients[j]
    return complex(vals[0]) if xa.ndim == 0 else vals


def sine_transform(c: PotentialCoeffs, j: int, z, eps: float = DEFAULT_POLE_EPS):
    """F(q_j)(z) by exact termwise integration of the truncated series.

    Reduces to (2/pi) sin(z*pi) * sum_n (-1)^n n q_n / (z**2 - n**2); entire in
    z, with the integer points giving back the coefficients themselves.
    """
    za, scalar = as_z_array(z)
    n = np.arange(1, c.order + 1)
    w = (2.0 / np.pi) * ((-1.0) ** n) * n * c.coefficients[j]
    return unwrap(backend.ratio_series(za, np.pi, w, eps), scalar)


def boundary_kernel_overlap(coeffs_j: np.ndarray, length: float, z, eps: float = DEFAULT_POLE_EPS):
    """integral_0^l sin[z*pi*(1 - x/l)] * (sum_n c_n sin[(n*pi/l)(l-x)]) dx, closed form.

    Termwise the integral equals (l/pi) (-1)^n n sin(z*pi)/(z**2 - n**2); the
    apparent integer poles are removable and handled by the stable quotient.
    """
    za, scalar = as_z_array(z)
    c = np.asarray(coeffs_j, dtype=np.complex128)
    n = np.arange(1, c.size + 1)
    w = (length / np.pi) * ((-1.0) ** n) * n * c
    return unwrap(backend.ratio_series(za, np.pi, w, eps), scalar)


def ll33_lhs(c: PotentialCoeffs, j: int, z, eps: float = DEFAULT_POLE_EPS):
    """sin(z*l) * sum_n (-1)^n (n*pi/l) q_n / (z**2 - (n*pi/l)**2), stable at the poles."""
    za, scalar = as_z_array(z)
    l = float(c.lengths[j])
    n = np.arange(1, c.order + 1)
    w = ((-1.0) ** n) * (n * np.pi / l) * c.coefficients[j]
    return unwrap(backend.ratio_series(za, l, w, eps), scalar)


def ll33_rhs(c: PotentialCoeffs, j: int, z):
    """(l/pi) * integral_0^pi q_j((l/pi)(pi - x)) sin(eta*x) dx with eta = z*l/pi.

    Gauss-Legendre quadrature of the synthesized potential; deliberately a
    different evaluation route from the closed-form left side. The argument is
    rescaled by l/pi (and the matching prefactor applied) so the identity
    holds for every edge length, not only l = pi.
    """
    za, scalar = as_z_array(z)
    l = float(c.lengths[j])
    nodes, weights = np.polynomial.legendre.leggauss(_GL_NODES)
    x = 0.5 * np.pi * (nodes + 1.0)
    wq = 0.5 * np.pi * weights
    qvals = sine_synthesis(c, j, (l / np.pi) * (np.pi - x))
    eta = za * (l / np.pi)
    integ = np.sin(np.multiply.outer(eta, x)) @ (wq * qvals)
    return unwrap((l / np.pi) * integ, scalar)

"""Special-solution family on the extended star graph.

On edge j the distinguished solution is

    phi_j(x; z) = ( sin[z*pi*(1 - x/l_j)]
                    + sin(z*l_j) * sum_n q_{j,n} sin[(n*pi/l_j)(l_j - x)]
                                         / (z**2 - (n*pi/l_j)**2) )
                  * prod_{k != j} sin(z*l_k),

which vanishes at the tip x = l_j structurally and at the center for integer
z. Chords carry the potential-free analogue with the chord length in the
boundary sine. This module evaluates those solutions, their x-derivatives,
the derivative sums entering the vertex conditions, the non-local integral of
phi against the conjugated potential, and the eigen-equation residual.

Near z = +-n*pi/l_j the series quotients pass through removable
singularities; all evaluation goes through the stable kernels in ``backend``,
which switch to the factored analytic form inside a window of half-width
``pole_eps`` around each one.

Vectorization convention: the spectral argument z may be a scalar or a 1-d
array at fixed x; the position x may be a scalar or a 1-d array at fixed
scalar z. Mixing two arrays is not supported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from ._util import as_z_array, unwrap
from .errors import InvalidGeometry, ModeRequired, OutOfDomain
from .fourier import PotentialCoeffs, boundary_kernel_overlap, sine_synthesis
from .geometry import ExtendedGraphSpec, StarGraphSpec

VERBATIM = "verbatim"
NORMALIZED = "normalized"
MODES = (VERBATIM, NORMALIZED)


@dataclass(frozen=True)
class ModelConfig:
    """Immutable bundle of graph, extension, potential and evaluation policy.

    ``normalized`` mode pins every edge length to pi; that is the regime in
    which the vertex values and the eigen-equation residual close exactly, and
    it is enforced at construction. ``pole_eps`` must stay below half the
    smallest gap between consecutive series poles.
    """

    graph: StarGraphSpec
    extension: ExtendedGraphSpec
    potentials: PotentialCoeffs
    mode: str = VERBATIM
    pole_eps: float = 1e-6

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.extension.m != self.graph.m:
            raise InvalidGeometry("extension chord count must match edge count")
        if self.potentials.m != self.graph.m:
            raise ValueError("one coefficient row per edge required")
        if not np.array_equal(self.potentials.lengths, self.graph.lengths):
            raise ValueError("potential edge lengths disagree with the graph")
        if self.mode == NORMALIZED and not np.allclose(self.graph.lengths, np.pi, rtol=0, atol=1e-12):
            raise ValueError("normalized mode requires every edge length to equal pi")
        min_gap = float(np.min(np.pi / self.graph.lengths))
        if not (0.0 < self.pole_eps < 0.5 * min_gap):
            raise ValueError(f"pole_eps must lie in (0, {0.5 * min_gap:.3e})")

    @property
    def lengths(self) -> np.ndarray:
        return self.graph.lengths

    @property
    def chords(self) -> np.ndarray:
        return self.extension.chords

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def order(self) -> int:
        return self.potentials.order


def _check_domain(x, upper, what):
    xa = np.asarray(x, dtype=np.float64)
    if np.any(xa < 0.0) or np.any(xa > upper):
        raise OutOfDomain(f"x outside [0, {upper:.6g}] on {what}")
    return xa


def edge_products(lengths, z) -> np.ndarray:
    """Leave-one-out products prod_{k != j} sin(z l_k); shape (K, m)."""
    za, _ = as_z_array(z)
    return backend.sin_prod_excl(za, np.asarray(lengths, dtype=np.float64))


def _mode_numbers(l: float, order: int) -> np.ndarray:
    return np.arange(1, order + 1) * (np.pi / l)


def phi_edge(cfg: ModelConfig, j: int, x, z):
    """Special solution on edge j at position x, spectral argument z."""
    l = float(cfg.lengths[j])
    xa = _check_domain(x, l, f"edge {j}")
    q = cfg.potentials.coefficients[j]
    p = _mode_numbers(l, cfg.order)
    if xa.ndim == 0:
        za, scalar = as_z_array(z)
        bnd = np.sin(za * np.pi * (1.0 - xa / l))
        series = backend.ratio_series(za, l, q * np.sin(p * (l - xa)), cfg.pole_eps)
        prod = edge_products(cfg.lengths, za)[:, j]
        return unwrap((bnd + series) * prod, scalar)
    zs = complex(z)
    ratios = backend.term_ratios(np.array([zs]), l, cfg.order, cfg.pole_eps)[0]
    sines = np.sin(np.outer(l - xa, p))
    bnd = np.sin(zs * np.pi * (1.0 - xa / l))
    prod = edge_products(cfg.lengths, zs)[0, j]
    return (bnd + sines @ (q * ratios)) * prod


def phi_edge_derivative(cfg: ModelConfig, j: int, x, z):
    """d/dx of the edge solution, same cadence of arguments as phi_edge."""
    l = float(cfg.lengths[j])
    xa = _check_domain(x, l, f"edge {j}")
    q = cfg.potentials.coefficients[j]
    p = _mode_numbers(l, cfg.order)
    if xa.ndim == 0:
        za, scalar = as_z_array(z)
        bnd = -(za * np.pi / l) * np.cos(za * np.pi * (1.0 - xa / l))
        series = backend.ratio_series(za, l, q * p * np.cos(p * (l - xa)), cfg.pole_eps)
        prod = edge_products(cfg.lengths, za)[:, j]
        return unwrap((bnd - series) * prod, scalar)
    zs = complex(z)
    ratios = backend.term_ratios(np.array([zs]), l, cfg.order, cfg.pole_eps)[0]
    cosines = np.cos(np.outer(l - xa, p))
    bnd = -(zs * np.pi / l) * np.cos(zs * np.pi * (1.0 - xa / l))
    prod = edge_products(cfg.lengths, zs)[0, j]
    return (bnd - cosines @ (q * p * ratios)) * prod


def phi_chord(cfg: ModelConfig, j: int, x, z):
    """Potential-free solution on chord j, arclength x from tip j to tip j+1."""
    lbar = float(cfg.chords[j])
    xa = _check_domain(x, lbar, f"chord {j}")
    if xa.ndim == 0:
        za, scalar = as_z_array(z)
        vals = np.sin(za * np.pi * (1.0 - xa / lbar)) * edge_products(cfg.lengths, za)[:, j]
        return unwrap(vals, scalar)
    zs = complex(z)
    prod = edge_products(cfg.lengths, zs)[0, j]
    return np.sin(zs * np.pi * (1.0 - xa / lbar)) * prod


def phi_chord_derivative(cfg: ModelConfig, j: int, x, z):
    """d/dx of the chord solution."""
    lbar = float(cfg.chords[j])
    xa = _check_domain(x, lbar, f"chord {j}")
    if xa.ndim == 0:
        za, scalar = as_z_array(z)
        vals = -(za * np.pi / lbar) * np.cos(za * np.pi * (1.0 - xa / lbar))
        vals = vals * edge_products(cfg.lengths, za)[:, j]
        return unwrap(vals, scalar)
    zs = complex(z)
    prod = edge_products(cfg.lengths, zs)[0, j]
    return -(zs * np.pi / lbar) * np.cos(zs * np.pi * (1.0 - xa / lbar)) * prod


def center_block_raw(lengths, coefficients, z, eps: float) -> np.ndarray:
    """sum_j [ (z*pi/l_j) cos(z*pi) + sin(z*l_j) * alternating mode series ] * prod_j.

    The center Kirchhoff derivative sum is the negative of this block.
    """
    za, _ = as_z_array(z)
    lengths = np.asarray(lengths, dtype=np.float64)
    prods = backend.sin_prod_excl(za, lengths)
    cz = np.cos(za * np.pi)
    out = np.zeros(za.size, dtype=np.complex128)
    for j, l in enumerate(lengths):
        p = _mode_numbers(l, coefficients.shape[1])
        signs = np.where(np.arange(1, p.size + 1) % 2 == 0, 1.0, -1.0)
        series = backend.ratio_series(za, l, signs * p * coefficients[j], eps)
        out += ((za * np.pi / l) * cz + series) * prods[:, j]
    return out


def outer_block_raw(lengths, coefficients, z, eps: float, chords=None) -> np.ndarray:
    """sum over outer vertices of the tip Kirchhoff block, optionally chord-free.

    Per vertex j' the block is
    (z*pi/l_j' + z*pi/lbar_{j'-1} + (z*pi/lbar_j') cos(z*pi) + plain mode series) * prod_j';
    with ``chords=None`` the two reciprocal terms are dropped (the form the
    topology recovery subtracts).
    """
    za, _ = as_z_array(z)
    lengths = np.asarray(lengths, dtype=np.float64)
    prods = backend.sin_prod_excl(za, lengths)
    cz = np.cos(za * np.pi)
    out = np.zeros(za.size, dtype=np.complex128)
    for jp, l in enumerate(lengths):
        p = _mode_numbers(l, coefficients.shape[1])
        series = backend.ratio_series(za, l, p * coefficients[jp], eps)
        term = (za * np.pi / l) + series
        if chords is not None:
            term = term + za * np.pi / chords[jp - 1] + (za * np.pi / chords[jp]) * cz
        out += term * prods[:, jp]
    return out


def nonlocal_block_raw(lengths, coefficients, j: int, z, eps: float, quad_weight: float) -> np.ndarray:
    """Boundary-kernel overlap plus the |q_n|^2 resonant series on edge j.

    ``quad_weight`` scales the quadratic channel: l_j/2 gives the actual
    integral of phi_j against conj(q_j) (sine orthogonality), 1.0 gives the
    characteristic-function block as printed.
    """
    za, _ = as_z_array(z)
    lengths = np.asarray(lengths, dtype=np.float64)
    l = float(lengths[j])
    cj = coefficients[j]
    overlap = boundary_kernel_overlap(np.conj(cj), l, za, eps)
    series = backend.ratio_series(za, l, quad_weight * cj * np.conj(cj), eps)
    prod = backend.sin_prod_excl(za, lengths)[:, j]
    return (overlap + series) * prod


def kirchhoff_center_sum(cfg: ModelConfig, z):
    """Sum over edges of phi_j'(0; z), the derivative sum at the center vertex."""
    za, scalar = as_z_array(z)
    vals = -center_block_raw(cfg.lengths, cfg.potentials.coefficients, za, cfg.pole_eps)
    return unwrap(vals, scalar)


def kirchhoff_outer_sum(cfg: ModelConfig, jp: int, z):
    """Derivative sum prepared at outer vertex jp (0-based, cyclic).

    Combines the edge derivative at the tip, the arriving chord derivative at
    its far end and the departing chord derivative at its start, under the
    common leave-one-out product. Index jp = 0 wraps to the last chord.
    """
    za, scalar = as_z_array(z)
    l = float(cfg.lengths[jp])
    p = _mode_numbers(l, cfg.order)
    series = backend.ratio_series(za, l, p * cfg.potentials.coefficients[jp], cfg.pole_eps)
    beta = (
        za * np.pi / l
        + za * np.pi / cfg.chords[jp - 1]
        + (za * np.pi / cfg.chords[jp]) * np.cos(za * np.pi)
        + series
    )
    prod = edge_products(cfg.lengths, za)[:, jp]
    return unwrap(-beta * prod, scalar)


def nonlocal_integral(cfg: ModelConfig, j: int, z):
    """integral_0^{l_j} phi_j(x; z) conj(q_j(x)) dx, termwise closed form."""
    za, scalar = as_z_array(z)
    l = float(cfg.lengths[j])
    vals = nonlocal_block_raw(cfg.lengths, cfg.potentials.coefficients, j, za, cfg.pole_eps, 0.5 * l)
    return unwrap(vals, scalar)


def ode_residual(cfg: ModelConfig, j: int, x, z, potential=None):
    """-phi_j'' + q_j(x) phi_j(0) - (z*pi/l_j)**2 phi_j at scalar z, x scalar or array.

    Second derivative taken termwise in closed form. Only available in
    normalized mode; with unequal lengths the spectral parameter
    (z*pi/l_j)**2 is not shared across edges and the residual is not a
    meaningful quantity. ``potential`` overrides the truncated synthesis with
    an arbitrary callable q_j(x), which is how the residual detects
    truncation-tail mismatch at non-integer z.
    """
    if cfg.mode != NORMALIZED:
        raise ModeRequired("eigen-equation residual is defined in normalized mode only")
    l = float(cfg.lengths[j])
    xa = _check_domain(x, l, f"edge {j}")
    zs = complex(z)
    q = cfg.potentials.coefficients[j]
    p = _mode_numbers(l, cfg.order)
    ratios = backend.term_ratios(np.array([zs]), l, cfg.order, cfg.pole_eps)[0]
    x1 = np.atleast_1d(xa)
    sines = np.sin(np.outer(l - x1, p))
    lam = (zs * np.pi / l) ** 2
    bnd = np.sin(zs * np.pi * (1.0 - x1 / l))
    minus_pp = lam * bnd + sines @ (p**2 * q * ratios)
    phi_val = bnd + sines @ (q * ratios)
    prod = edge_products(cfg.lengths, zs)[0, j]
    phi_center = phi_edge(cfg, j, 0.0, zs)
    q_at = potential(x1) if potential is not None else sine_synthesis(cfg.potentials, j, x1)
    res = minus_pp * prod + np.asarray(q_at, dtype=np.complex128) * phi_center - lam * phi_val * prod
    return complex(res[0]) if xa.ndim == 0 else res

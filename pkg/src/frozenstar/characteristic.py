"""Assembly and sampling of the characteristic function.

Phi(z) is the sum of three blocks over the extended graph: the non-local
integral block (boundary-kernel overlap plus the squared-magnitude resonant
series of each potential), the center derivative block, and the outer-vertex
block carrying the chord reciprocals. It is affine in the chord-reciprocal
vector u = (1/lbar_1, ..., 1/lbar_m); that structure is exposed through
``chord_design_matrix`` and ``phi_chordfree`` and is exactly what the
topology recovery solves against.

The quadratic channel of the first block is implemented as printed, with
weight q_n * conj(q_n) (no l_j/2 factor); the actual integral of phi against
conj(q), which carries the l_j/2, lives in ``solution.nonlocal_integral``.
The two coincide when l_j = 2.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from . import backend
from ._util import as_z_array, unwrap
from .errors import ConfigParseError, DegenerateGrid, GridMismatch, OutOfDomain
from .solution import (
    ModelConfig,
    center_block_raw,
    edge_products,
    nonlocal_block_raw,
    outer_block_raw,
)

_FMT = "%.17g"

GRID_KINDS = ("integers", "edge-resonant", "zero-set", "custom")


def _canon_floats(arr) -> str:
    return ",".join(_FMT % v for v in np.asarray(arr, dtype=np.float64).ravel())


def _canon_complex(arr) -> str:
    a = np.asarray(arr, dtype=np.complex128).ravel()
    return ",".join((_FMT % v.real) + "/" + (_FMT % v.imag) for v in a)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def config_fingerprint(cfg: ModelConfig) -> dict:
    """Per-section digests of the generating configuration.

    Sectioned so a recovery run can check compatibility of exactly the parts
    it declares as known (an observed set produced with unknown chords still
    matches on lengths, potentials and mode).
    """
    sections = {
        "lengths": _digest(_canon_floats(cfg.lengths)),
        "chords": _digest(_canon_floats(cfg.chords)),
        "potentials": _digest(_canon_complex(cfg.potentials.coefficients)),
        "mode": cfg.mode,
        "eps": _FMT % cfg.pole_eps,
        "order": str(cfg.order),
    }
    sections["combined"] = _digest(json.dumps(sections, sort_keys=True))
    return sections


def knowns_fingerprint(lengths, coefficients, mode: str, eps: float) -> dict:
    """Fingerprint sections computable without chords (topology-recovery knowns)."""
    return {
        "lengths": _digest(_canon_floats(lengths)),
        "potentials": _digest(_canon_complex(coefficients)),
        "mode": mode,
        "eps": _FMT % eps,
        "order": str(np.asarray(coefficients).shape[1]),
    }


def geometry_knowns_fingerprint(lengths, chords, mode: str, eps: float, order: int) -> dict:
    """Fingerprint sections computable without potentials (potential-recovery knowns)."""
    return {
        "lengths": _digest(_canon_floats(lengths)),
        "chords": _digest(_canon_floats(chords)),
        "mode": mode,
        "eps": _FMT % eps,
        "order": str(order),
    }


@dataclass(frozen=True)
class SampleGridSpec:
    """Declarative z-grid.

    kind "integers": z = 1..count. kind "edge-resonant": z = r*pi/l_edge,
    r = 1..count. kind "zero-set": all zeros of sin(z*pi) * prod_{k != edge}
    sin(z*l_k) in (0, z_max]. kind "custom": explicit points, which must stay
    clear of the pole windows unless ``allow_pole_windows`` is set.
    """

    kind: str
    count: int = 0
    edge: int = -1
    z_max: float = 0.0
    points: tuple = field(default_factory=tuple)
    allow_pole_windows: bool = False

    def __post_init__(self):
        if self.kind not in GRID_KINDS:
            raise ConfigParseError(f"grid kind must be one of {GRID_KINDS}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "count": self.count,
            "edge": self.edge,
            "z_max": self.z_max,
            "points": [[complex(p).real, complex(p).imag] for p in self.points],
            "allow_pole_windows": self.allow_pole_windows,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SampleGridSpec":
        return cls(
            kind=d["kind"],
            count=int(d.get("count", 0)),
            edge=int(d.get("edge", -1)),
            z_max=float(d.get("z_max", 0.0)),
            points=tuple(complex(re, im) for re, im in d.get("points", [])),
            allow_pole_windows=bool(d.get("allow_pole_windows", False)),
        )


def build_grid(spec: SampleGridSpec, cfg: ModelConfig) -> np.ndarray:
    """Materialize a grid spec against a configuration."""
    lengths = cfg.lengths
    if spec.kind == "integers":
        if spec.count < 1:
            raise ConfigParseError("integers grid needs count >= 1")
        return np.arange(1, spec.count + 1, dtype=np.complex128)
    if spec.kind == "edge-resonant":
        if not (0 <= spec.edge < cfg.m):
            raise ConfigParseError(f"edge index {spec.edge} out of range")
        if spec.count < 1:
            raise ConfigParseError("edge-resonant grid needs count >= 1")
        r = np.arange(1, spec.count + 1)
        return (r * np.pi / lengths[spec.edge]).astype(np.complex128)
    if spec.kind == "zero-set":
        if not (0 <= spec.edge < cfg.m):
            raise ConfigParseError(f"edge index {spec.edge} out of range")
        if spec.z_max <= 0:
            raise ConfigParseError("zero-set grid needs z_max > 0")
        pts = list(np.arange(1, int(np.floor(spec.z_max)) + 1, dtype=np.float64))
        for k, l in enumerate(lengths):
            if k == spec.edge:
                continue
            r_max = int(np.floor(spec.z_max * l / np.pi))
            pts.extend(r * np.pi / l for r in range(1, r_max + 1))
        pts = sorted(pts)
        dedup: list[float] = []
        for p in pts:
            if not dedup or abs(p - dedup[-1]) > 1e-12:
                dedup.append(p)
        if not dedup:
            raise DegenerateGrid("zero-set grid is empty on the requested range")
        return np.asarray(dedup, dtype=np.complex128)
    # custom
    pts = np.asarray([complex(p) for p in spec.points], dtype=np.complex128)
    if pts.size == 0:
        raise ConfigParseError("custom grid needs at least one point")
    if np.unique(pts).size != pts.size:
        raise ConfigParseError("custom grid points must be distinct")
    if not spec.allow_pole_windows:
        poles = np.concatenate(
            [np.arange(1, cfg.order + 1) * np.pi / l for l in lengths]
            + [np.arange(1, cfg.order + 1).astype(np.float64)]
        )
        dist = np.min(np.abs(pts[:, None] - poles[None, :]), axis=1)
        if np.any(dist < cfg.pole_eps):
            bad = pts[np.argmin(dist)]
            raise OutOfDomain(
                f"custom grid point {bad} lies inside a pole window; "
                "set allow_pole_windows to evaluate by the analytic limit"
            )
    return pts


def phi_chordfree(lengths, coefficients, z, eps: float) -> np.ndarray:
    """All of Phi except the chord-reciprocal terms, from knowns only."""
    za, _ = as_z_array(z)
    lengths = np.asarray(lengths, dtype=np.float64)
    out = center_block_raw(lengths, coefficients, za, eps)
    out = out + outer_block_raw(lengths, coefficients, za, eps, chords=None)
    for j in range(lengths.size):
        out = out + nonlocal_block_raw(lengths, coefficients, j, za, eps, 1.0)
    return out


def chord_design_matrix(lengths, z) -> np.ndarray:
    """Columns d/du_i Phi(z): A[:, i] = z*pi*(prod_{i+1} + cos(z*pi) prod_i).

    u_i = 1/lbar_i enters the outer block of vertex i+1 plainly and of vertex
    i through the cos(z*pi) term; indices cyclic.
    """
    za, _ = as_z_array(z)
    lengths = np.asarray(lengths, dtype=np.float64)
    m = lengths.size
    prods = backend.sin_prod_excl(za, lengths)
    cz = np.cos(za * np.pi)
    cols = np.empty((za.size, m), dtype=np.complex128)
    for i in range(m):
        cols[:, i] = za * np.pi * (prods[:, (i + 1) % m] + cz * prods[:, i])
    return cols


def phi(cfg: ModelConfig, z):
    """Characteristic function at z (scalar or 1-d array)."""
    za, scalar = as_z_array(z)
    u = 1.0 / cfg.chords
    vals = phi_chordfree(cfg.lengths, cfg.potentials.coefficients, za, cfg.pole_eps)
    vals = vals + chord_design_matrix(cfg.lengths, za) @ u
    return unwrap(vals, scalar)


@dataclass(frozen=True)
class PhiSampleSet:
    """Sampled characteristic function with provenance."""

    grid: np.ndarray
    values: np.ndarray
    mode: str
    fingerprint: dict
    grid_spec: SampleGridSpec | None = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.complex128).copy()
        values = np.asarray(self.values, dtype=np.complex128).copy()
        grid.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        if grid.shape != values.shape or grid.ndim != 1:
            raise GridMismatch("grid and values must be 1-d arrays of equal length")
        if not np.all(np.isfinite(values)):
            raise ValueError("sampled values must be finite")

    def __len__(self) -> int:
        return self.grid.size


def sample_phi(cfg: ModelConfig, grid_spec: SampleGridSpec) -> PhiSampleSet:
    """Evaluate Phi over a declared grid; ordering follows the grid."""
    grid = build_grid(grid_spec, cfg)
    values = phi(cfg, grid)
    return PhiSampleSet(
        grid=grid,
        values=values,
        mode=cfg.mode,
        fingerprint=config_fingerprint(cfg),
        grid_spec=grid_spec,
    )


def phi_difference(set_a: PhiSampleSet, set_b: PhiSampleSet) -> np.ndarray:
    """Pointwise Phi_a - Phi_b; the sets must share grid and mode exactly."""
    if set_a.mode != set_b.mode:
        raise GridMismatch(f"mode mismatch: {set_a.mode} vs {set_b.mode}")
    if set_a.grid.shape != set_b.grid.shape or not np.array_equal(set_a.grid, set_b.grid):
        raise GridMismatch("sample sets were taken on different grids")
    return set_a.values - set_b.values

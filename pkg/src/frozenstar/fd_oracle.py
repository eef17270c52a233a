"""Independent finite-difference solver for the frozen-argument eigenproblem.

Discretizes the original star-graph system: on each edge the second
difference of psi plus q_j(x) times the shared vertex value, Dirichlet tips
eliminated, and one non-local row collecting the outgoing derivatives (3-point
one-sided, O(h^2)) minus the trapezoid of psi against conj(q). The vertex
value is a single unknown; its equation is the non-local row, which carries
no spectral parameter, so the assembled problem is A v = lambda B v with one
zero row in B. ``spectrum`` solves either that generalized form or the
algebraically identical standard problem obtained by eliminating the vertex
unknown through the non-local row.

Everything here is deliberately unrelated to the special-solution machinery;
it exists to cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .characteristic import phi
from .errors import EigensolverFailure, MeshTooCoarse
from .fourier import sine_synthesis
from .solution import NORMALIZED, ModelConfig

_MIN_INTERIOR = 16


@dataclass(frozen=True)
class DiscretizedStar:
    """Assembled dense operator; unknown 0 is the vertex value."""

    matrix: np.ndarray
    lengths: np.ndarray
    steps: np.ndarray
    counts: np.ndarray
    offsets: np.ndarray

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class OracleSpectrum:
    """Smallest-magnitude eigenvalues, sorted by real then imaginary part."""

    values: np.ndarray
    h: float
    count: int
    method: str = "eliminated"
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128).copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        if not np.all(np.isfinite(vals)):
            raise EigensolverFailure("non-finite eigenvalues in spectrum")


def assemble(cfg: ModelConfig, h: float) -> DiscretizedStar:
    """Build the dense discretization with target step h (per-edge snapped to l_j/M_j)."""
    lengths = cfg.lengths
    m = lengths.size
    counts = np.maximum(np.round(lengths / h).astype(int), 1)
    if np.any(counts - 1 < _MIN_INTERIOR):
        raise MeshTooCoarse(
            f"step {h:.4g} leaves an edge with fewer than {_MIN_INTERIOR} interior points"
        )
    steps = lengths / counts
    offsets = np.concatenate([[1], 1 + np.cumsum(counts - 1)[:-1]])
    dim = 1 + int(np.sum(counts - 1))

    qnodes = []
    complex_q = False
    for j in range(m):
        x = np.arange(counts[j] + 1) * steps[j]
        x[-1] = lengths[j]
        qv = np.asarray(sine_synthesis(cfg.potentials, j, x), dtype=np.complex128)
        complex_q = complex_q or bool(np.any(qv.imag != 0.0))
        qnodes.append(qv)

    dtype = np.complex128 if complex_q else np.float64
    a = np.zeros((dim, dim), dtype=dtype)

    def cast(v):
        return v if complex_q else v.real

    for j in range(m):
        hj = float(steps[j])
        mj = int(counts[j])
        off = int(offsets[j])
        qv = qnodes[j]
        inv_h2 = 1.0 / (hj * hj)
        for i in range(1, mj):
            r = off + i - 1
            a[r, r] += 2.0 * inv_h2
            if i > 1:
                a[r, off + i - 2] += -inv_h2
            else:
                a[r, 0] += -inv_h2
            if i < mj - 1:
                a[r, off + i] += -inv_h2
            a[r, 0] += cast(qv[i])
        # non-local row: 3-point one-sided derivative at the vertex minus the
        # trapezoid of psi * conj(q) (tip value is zero, vertex weight h/2)
        a[0, 0] += -1.5 / hj - 0.5 * hj * cast(np.conj(qv[0]))
        a[0, off] += 2.0 / hj - hj * cast(np.conj(qv[1]))
        a[0, off + 1] += -0.5 / hj - hj * cast(np.conj(qv[2]))
        for i in range(3, mj):
            a[0, off + i - 1] += -hj * cast(np.conj(qv[i]))

    return DiscretizedStar(matrix=a, lengths=lengths, steps=steps, counts=counts, offsets=offsets)


def spectrum(d: DiscretizedStar, k: int, h: float | None = None, method: str = "eliminated") -> OracleSpectrum:
    """k smallest-magnitude eigenvalues of the discretized operator."""
    if k < 1 or k > d.dim - 1:
        raise EigensolverFailure(f"requested {k} eigenvalues from a {d.dim}-dim operator")
    a = d.matrix
    try:
        if method == "eliminated":
            pivot = a[0, 0]
            if abs(pivot) < 1e-300:
                raise EigensolverFailure("non-local row cannot be solved for the vertex value")
            reduced = a[1:, 1:] - np.outer(a[1:, 0], a[0, 1:]) / pivot
            vals = scipy.linalg.eigvals(reduced)
        elif method == "generalized":
            b = np.eye(d.dim, dtype=a.dtype)
            b[0, 0] = 0.0
            vals = scipy.linalg.eigvals(a, b)
            vals = vals[np.isfinite(vals)]
        else:
            raise ValueError(f"unknown method {method!r}")
    except np.linalg.LinAlgError as exc:  # pragma: no cover - lapack failure path
        raise EigensolverFailure(str(exc)) from exc
    order = np.argsort(np.abs(vals))[:k]
    chosen = vals[order]
    chosen = chosen[np.lexsort((chosen.imag, chosen.real))]
    return OracleSpectrum(
        values=chosen,
        h=float(h) if h is not None else float(np.max(d.steps)),
        count=k,
        method=method,
        details={"dim": d.dim, "steps": [float(s) for s in d.steps]},
    )


def compare_phi_zeros(cfg: ModelConfig, oracle: OracleSpectrum, z_range, scan_points: int = 2001) -> list[dict]:
    """Locate real zeros of Phi in a range and tabulate oracle distances.

    Sign-change bisection on Re Phi plus detection of scan samples that are
    zero to roundoff (even-multiplicity zeros do not change sign). Purely a
    diagnostic report; the spectral content of Phi's zero set is not asserted.
    In normalized mode the zeros convert to spectral values lambda = z**2 and
    the distance to the nearest oracle eigenvalue is reported.
    """
    a, b = float(z_range[0]), float(z_range[1])
    if not (b > a) or scan_points < 2:
        return []
    zs = np.linspace(a, b, scan_points)
    vals = phi(cfg, zs.astype(np.complex128))
    re = vals.real
    scale = float(np.max(np.abs(vals))) or 1.0

    roots: list[float] = []
    for i in range(scan_points - 1):
        lo, hi = zs[i], zs[i + 1]
        flo, fhi = re[i], re[i + 1]
        if abs(vals[i]) < 1e-12 * scale:
            roots.append(float(lo))
            continue
        if flo * fhi < 0:
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                fmid = complex(phi(cfg, complex(mid))).real
                if flo * fmid <= 0:
                    hi, fhi = mid, fmid
                else:
                    lo, flo = mid, fmid
                if hi - lo < 1e-12:
                    break
            roots.append(float(0.5 * (lo + hi)))
    if abs(vals[-1]) < 1e-12 * scale:
        roots.append(float(zs[-1]))

    dedup: list[float] = []
    spacing = (b - a) / (scan_points - 1)
    for r in sorted(roots):
        if not dedup or r - dedup[-1] > 0.5 * spacing:
            dedup.append(r)

    table = []
    for r in dedup:
        row: dict = {"z": r, "lambda": None, "nearest_eigenvalue": None, "distance": None}
        if cfg.mode == NORMALIZED:
            lam = r * r
            dist = np.abs(oracle.values - lam)
            kmin = int(np.argmin(dist))
            row["lambda"] = lam
            row["nearest_eigenvalue"] = complex(oracle.values[kmin])
            row["distance"] = float(dist[kmin])
        table.append(row)
    return table

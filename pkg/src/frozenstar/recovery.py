"""Inverse solvers over characteristic-function samples.

Topology: Phi is affine in the chord reciprocals u_i = 1/lbar_i, so chord
recovery subtracts the chord-free part computed from the knowns and solves an
overdetermined real linear system for u. A closed-form companion path solves
per-edge 2x2 systems on grids built from edge resonances z = r*pi/l_j, where
all but one outer-vertex term drops out; it mirrors the parity argument of
the uniqueness proof and is valid when the remaining sine products are not
degenerate.

Potentials: with geometry known, Phi is affine in (q, conj q) plus a diagonal
quadratic channel |q_{j,n}|^2. Recovery runs Gauss-Newton on the stacked
real/imaginary parts with the analytic Jacobian, step-halving line search,
initialized at zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import backend
from .characteristic import (
    PhiSampleSet,
    chord_design_matrix,
    geometry_knowns_fingerprint,
    knowns_fingerprint,
    phi_chordfree,
)
from .errors import (
    AmbiguousSolution,
    ConfigMismatch,
    DegenerateGrid,
    FingerprintMismatch,
    MaxItersExceeded,
    NonPositiveReciprocal,
    RankDeficient,
)
from .fourier import PotentialCoeffs
from .geometry import principal_angles
from .solution import ModelConfig, center_block_raw, outer_block_raw

_PRODUCT_FLOOR = 1e-12


@dataclass
class TopologyOptions:
    method: str = "lstsq"  # or "parity"
    cond_limit: float = 1e10
    closure_tol: float = 1e-6
    # symmetric stars (equal edge lengths) collapse the design columns; the
    # minimum-norm completion is then the canonical answer, but it is only
    # correct when the truth shares the symmetry, so it is opt-in
    min_norm: bool = False


@dataclass
class GaussNewtonOptions:
    max_iter: int = 50
    step_tol: float = 1e-12
    residual_tol: float = 1e-12
    cond_limit: float = 1e10


@dataclass(frozen=True)
class RecoveryReport:
    """Outcome of a recovery solve; residual_norm is recomputed post-fit."""

    status: str
    residual_norm: float
    condition: float
    iterations: int = 0
    chords: np.ndarray | None = None
    angles: np.ndarray | None = None
    closure_defect: float | None = None
    coefficients: np.ndarray | None = None
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "status": self.status,
            "residual_norm": self.residual_norm,
            "condition": self.condition,
            "iterations": self.iterations,
        }
        if self.chords is not None:
            out["chords"] = list(map(float, self.chords))
        if self.angles is not None:
            out["angles"] = list(map(float, self.angles))
        if self.closure_defect is not None:
            out["closure_defect"] = float(self.closure_defect)
        if self.coefficients is not None:
            out["coefficients"] = [
                [[float(c.real), float(c.imag)] for c in row] for row in self.coefficients
            ]
        out["details"] = self.details
        return out


def _check_sections(observed: PhiSampleSet, expected: dict, keys) -> None:
    fp = observed.fingerprint or {}
    for key in keys:
        if key in fp and fp[key] != expected[key]:
            raise FingerprintMismatch(
                f"observed samples disagree with declared knowns on '{key}'"
            )


@dataclass(frozen=True)
class TopologyRecoveryProblem:
    """Knowns (edge lengths, potentials) plus observed Phi samples."""

    lengths: np.ndarray
    potentials: PotentialCoeffs
    observed: PhiSampleSet
    pole_eps: float = 1e-6
    options: TopologyOptions = field(default_factory=TopologyOptions)
    check_fingerprint: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lengths", np.asarray(self.lengths, dtype=np.float64))
        prods = backend.sin_prod_excl(self.observed.grid, self.lengths)
        alive = np.max(np.abs(prods), axis=1) > _PRODUCT_FLOOR
        if not np.all(alive):
            raise DegenerateGrid(
                f"{int(np.sum(~alive))} grid points sit on common zeros of every sine product"
            )
        if self.check_fingerprint:
            expected = knowns_fingerprint(
                self.lengths, self.potentials.coefficients, self.observed.mode, self.pole_eps
            )
            _check_sections(self.observed, expected, ("lengths", "potentials", "mode", "eps", "order"))


def recover_chords(problem: TopologyRecoveryProblem) -> RecoveryReport:
    """Chord lengths from Phi samples with lengths and potentials known."""
    grid = problem.observed.grid
    psi = problem.observed.values - phi_chordfree(
        problem.lengths, problem.potentials.coefficients, grid, problem.pole_eps
    )
    if problem.options.method == "parity":
        return _recover_chords_parity(problem, psi)
    design = chord_design_matrix(problem.lengths, grid)
    a = np.vstack([design.real, design.imag])
    b = np.concatenate([psi.real, psi.imag])
    limit = problem.options.cond_limit
    u, _, rank, sv = np.linalg.lstsq(a, b, rcond=1.0 / limit)
    kept = sv[sv > sv[0] / limit]
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf
    if cond > limit and not problem.options.min_norm:
        raise RankDeficient(
            f"design condition {cond:.3e} exceeds {limit:.1e} "
            f"(effective rank {int(rank)} of {a.shape[1]}); symmetric stars admit "
            "the minimum-norm completion via TopologyOptions(min_norm=True)"
        )
    if np.any(u <= 0):
        raise NonPositiveReciprocal(
            "recovered chord reciprocals are not strictly positive; observed data "
            "carries no chord contribution or is inconsistent with the knowns"
        )
    residual = float(np.linalg.norm(a @ u - b))
    return RecoveryReport(
        status="ok",
        residual_norm=residual,
        condition=float(kept[0] / kept[-1]),
        chords=1.0 / u,
        details={"method": "lstsq", "grid_points": int(grid.size), "effective_rank": int(rank)},
    )


def _recover_chords_parity(problem: TopologyRecoveryProblem, psi: np.ndarray) -> RecoveryReport:
    """Closed-form path on edge-resonant grids.

    At z = r*pi/l_j every outer term except vertex j's vanishes with
    sin(z*l_j), leaving psi = z*pi*(u_{j-1} + u_j cos(z*pi)) * prod_j. Two
    resonances of the same edge with separated cos(z*pi) values pin the pair
    (u_{j-1}, u_j); each u_i is then estimated twice and averaged.
    """
    lengths = problem.lengths
    m = lengths.size
    grid = problem.observed.grid
    prods = backend.sin_prod_excl(grid, lengths)
    estimates: list[list[float]] = [[] for _ in range(m)]
    conds = []
    for j in range(m):
        res = np.abs(np.sin(grid * lengths[j])) < 1e-9
        usable = res & (np.abs(prods[:, j]) > _PRODUCT_FLOOR)
        if int(np.sum(usable)) < 2:
            raise DegenerateGrid(
                f"edge {j} has fewer than 2 usable resonant points for the closed-form path"
            )
        z = grid[usable]
        rhs = (psi[usable] / (z * np.pi * prods[usable, j])).real
        design = np.column_stack([np.ones(z.size), np.cos(z * np.pi).real])
        pair, _, _, sv = np.linalg.lstsq(design, rhs, rcond=None)
        cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf
        if cond > problem.options.cond_limit:
            raise RankDeficient(f"resonant pair system for edge {j} is degenerate (cond {cond:.3e})")
        conds.append(cond)
        estimates[(j - 1) % m].append(pair[0])
        estimates[j].append(pair[1])
    u = np.array([np.mean(e) for e in estimates])
    spread = float(max(np.ptp(e) for e in estimates))
    if np.any(u <= 0):
        raise NonPositiveReciprocal("closed-form path produced non-positive chord reciprocals")
    design = chord_design_matrix(lengths, grid)
    residual = float(np.linalg.norm(design @ u - psi))
    return RecoveryReport(
        status="ok",
        residual_norm=residual,
        condition=float(max(conds)),
        chords=1.0 / u,
        details={"method": "parity", "estimate_spread": spread, "grid_points": int(grid.size)},
    )


def recover_angles(problem: TopologyRecoveryProblem) -> RecoveryReport:
    """Chord recovery composed with the inverse law of cosines; m >= 3."""
    if problem.lengths.size < 3:
        raise ConfigMismatch("angle recovery needs at least 3 edges")
    report = recover_chords(problem)
    angles, defect = principal_angles(problem.lengths, report.chords)
    status = "ok" if defect <= problem.options.closure_tol else "closure-defect"
    return RecoveryReport(
        status=status,
        residual_norm=report.residual_norm,
        condition=report.condition,
        chords=report.chords,
        angles=angles,
        closure_defect=defect,
        details=report.details,
    )


@dataclass(frozen=True)
class PotentialRecoveryProblem:
    """Knowns (edge lengths, chords) plus observed Phi samples."""

    lengths: np.ndarray
    chords: np.ndarray
    observed: PhiSampleSet
    order: int
    pole_eps: float = 1e-6
    options: GaussNewtonOptions = field(default_factory=GaussNewtonOptions)
    check_fingerprint: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lengths", np.asarray(self.lengths, dtype=np.float64))
        object.__setattr__(self, "chords", np.asarray(self.chords, dtype=np.float64))
        grid = self.observed.grid
        m = self.lengths.size
        if grid.size < m * self.order:
            raise DegenerateGrid(
                f"{grid.size} grid points cannot pin {m}x{self.order} complex coefficients"
            )
        prods = backend.sin_prod_excl(grid, self.lengths)
        needed = 2 * self.order + 1
        for j in range(m):
            usable = int(np.sum(np.abs(prods[:, j]) > _PRODUCT_FLOOR))
            if usable < needed:
                raise DegenerateGrid(
                    f"edge {j} has {usable} usable grid points, needs {needed}"
                )
        if self.check_fingerprint:
            expected = geometry_knowns_fingerprint(
                self.lengths, self.chords, self.observed.mode, self.pole_eps, self.order
            )
            _check_sections(self.observed, expected, ("lengths", "chords", "mode", "eps", "order"))


def _potential_channels(problem: PotentialRecoveryProblem):
    """Precompute the affine/quadratic channel coefficients over the grid."""
    grid = problem.observed.grid
    lengths = problem.lengths
    m, order = lengths.size, problem.order
    eps = problem.pole_eps
    k = grid.size
    prods = backend.sin_prod_excl(grid, lengths)
    ratios_pi = backend.term_ratios(grid, np.pi, order, eps)
    n = np.arange(1, order + 1)
    sign = (-1.0) ** n
    alpha = np.empty((k, m, order), dtype=np.complex128)
    beta = np.empty((k, m, order), dtype=np.complex128)
    gamma = np.empty((k, m, order), dtype=np.complex128)
    for j, l in enumerate(lengths):
        ratios = backend.term_ratios(grid, float(l), order, eps)
        p = n * np.pi / l
        alpha[:, j, :] = (sign + 1.0) * p * ratios * prods[:, [j]]
        beta[:, j, :] = (l / np.pi) * sign * n * ratios_pi * prods[:, [j]]
        gamma[:, j, :] = ratios * prods[:, [j]]
    zeros = np.zeros((m, order), dtype=np.complex128)
    const = center_block_raw(lengths, zeros, grid, eps) + outer_block_raw(
        lengths, zeros, grid, eps, chords=problem.chords
    )
    return const, alpha, beta, gamma


def recover_potentials(problem: PotentialRecoveryProblem) -> RecoveryReport:
    """Per-edge sine coefficients from Phi samples with geometry known."""
    obs = problem.observed.values
    m, order = problem.lengths.size, problem.order
    const, alpha, beta, gamma = _potential_channels(problem)
    opts = problem.options

    def model(q):
        qc = np.conj(q)
        return (
            const
            + np.einsum("kjn,jn->k", alpha, q)
            + np.einsum("kjn,jn->k", beta, qc)
            + np.einsum("kjn,jn->k", gamma, q * qc)
        )

    def residual(q):
        r = model(q) - obs
        return np.concatenate([r.real, r.imag])

    def jacobian(q):
        cols_a = alpha + beta + 2.0 * q.real[None, :, :] * gamma
        cols_b = 1j * (alpha - beta) + 2.0 * q.imag[None, :, :] * gamma
        cols = np.concatenate(
            [cols_a.reshape(-1, m * order), cols_b.reshape(-1, m * order)], axis=1
        )
        return np.vstack([cols.real, cols.imag])

    q = np.zeros((m, order), dtype=np.complex128)
    r = residual(q)
    norm = float(np.linalg.norm(r))
    history = [norm]
    iters = 0
    cond = 0.0
    converged = norm < opts.residual_tol
    while not converged:
        if iters >= opts.max_iter:
            raise MaxItersExceeded(f"no convergence in {opts.max_iter} Gauss-Newton iterations")
        jac = jacobian(q)
        sv = np.linalg.svd(jac, compute_uv=False)
        cond = float((sv[0] / sv[-1]) ** 2) if sv[-1] > 0 else np.inf
        if cond > opts.cond_limit:
            raise AmbiguousSolution(
                f"normal matrix condition {cond:.3e} exceeds {opts.cond_limit:.1e}; "
                "the sample grid does not separate the coefficient directions"
            )
        step, _, _, _ = np.linalg.lstsq(jac, -r, rcond=None)
        scale = 1.0
        while True:
            trial = q + scale * _unflatten(step, m, order)
            r_trial = residual(trial)
            norm_trial = float(np.linalg.norm(r_trial))
            if norm_trial < norm:
                break
            scale *= 0.5
            if scale < 1e-12:
                raise MaxItersExceeded("line search stalled without residual decrease")
        q, r, norm = trial, r_trial, norm_trial
        history.append(norm)
        iters += 1
        if scale * float(np.linalg.norm(step)) < opts.step_tol or norm < opts.residual_tol:
            converged = True
    final = float(np.linalg.norm(residual(q)))
    return RecoveryReport(
        status="ok",
        residual_norm=final,
        condition=cond,
        iterations=iters,
        coefficients=q,
        details={"residual_history": history, "grid_points": int(problem.observed.grid.size)},
    )


def _unflatten(step: np.ndarray, m: int, order: int) -> np.ndarray:
    half = m * order
    return (step[:half] + 1j * step[half:]).reshape(m, order)


def _max_phi_gap(cfg_a: ModelConfig, cfg_b: ModelConfig, grid) -> float:
    from .characteristic import phi

    za = np.asarray(grid, dtype=np.complex128).ravel()
    return float(np.max(np.abs(phi(cfg_a, za) - phi(cfg_b, za))))


def uniqueness_gap_topology(cfg_a: ModelConfig, cfg_b: ModelConfig, grid) -> float:
    """max |Phi_a - Phi_b| for configs sharing lengths and potentials."""
    if not np.array_equal(cfg_a.lengths, cfg_b.lengths):
        raise ConfigMismatch("edge lengths differ")
    if not np.array_equal(cfg_a.potentials.coefficients, cfg_b.potentials.coefficients):
        raise ConfigMismatch("potentials differ")
    if cfg_a.mode != cfg_b.mode:
        raise ConfigMismatch("modes differ")
    return _max_phi_gap(cfg_a, cfg_b, grid)


def uniqueness_gap_potential(cfg_a: ModelConfig, cfg_b: ModelConfig, grid) -> float:
    """max |Phi_a - Phi_b| for configs sharing the full geometry."""
    if not np.array_equal(cfg_a.lengths, cfg_b.lengths):
        raise ConfigMismatch("edge lengths differ")
    if not np.array_equal(cfg_a.chords, cfg_b.chords):
        raise ConfigMismatch("chords differ")
    if cfg_a.mode != cfg_b.mode:
        raise ConfigMismatch("modes differ")
    return _max_phi_gap(cfg_a, cfg_b, grid)


def recovery_grid(lengths, order: int, count: int = 80, offset: float = 0.7) -> np.ndarray:
    """Well-conditioned grid for potential recovery.

    Spans (0.3, order*pi/min(l) + 2) so every mode to be recovered resonates
    inside the sampled window, and sits ``offset`` above the real axis, where
    |sin(z l)| >= sinh(offset*l) keeps every sine product bounded away from
    zero; that keeps the Gauss-Newton basin wide. Per-edge coefficients are
    only as identifiable as the edge lengths are separated: phase separation
    of two edges needs z * |l_i - l_j| to reach order pi inside the window.
    """
    lengths = np.asarray(lengths, dtype=np.float64)
    z_hi = order * np.pi / float(np.min(lengths)) + 2.0
    return np.linspace(0.3, z_hi, count) + 1j * offset


def parity_resonant_grid(lengths, per_edge: int = 4, r_start: int = 1) -> np.ndarray:
    """Edge-resonance points z = r*pi/l_j, ``per_edge`` consecutive r per edge.

    The natural feed for the closed-form topology path; points whose
    remaining sine product degenerates are the caller's concern (the solver
    checks usability).
    """
    lengths = np.asarray(lengths, dtype=np.float64)
    pts = []
    for l in lengths:
        for r in range(r_start, r_start + per_edge):
            pts.append(r * np.pi / l)
    return np.asarray(sorted(set(pts)), dtype=np.complex128)

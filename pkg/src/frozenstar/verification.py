"""Config-driven property suite behind the ``verify`` subcommand.

Each check exercises one structural identity of the model on the user's own
configuration with fixed internal probe sets, and reports PASS/FAIL/SKIP.
Checks that only close in normalized mode are skipped (not silently passed)
in verbatim mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import characteristic, solution
from .errors import FrozenStarError, InvalidGeometry
from .fourier import ll33_lhs, ll33_rhs, sine_synthesis, sine_transform
from .geometry import TWO_PI, ExtendedGraphSpec, angles_from_chords, chords_from_angles
from .serialization import ParsedConfig, samples_to_csv
from .solution import NORMALIZED, ModelConfig


@dataclass(frozen=True)
class PropertyResult:
    name: str
    status: str  # PASS | FAIL | SKIP
    detail: str

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


def _probe_z(cfg: ModelConfig, count: int, seed: int = 0, lo: float = 0.3, hi: float = 9.7) -> np.ndarray:
    """Deterministic real probes pushed clear of every series pole."""
    rng = np.random.default_rng(seed)
    z = rng.uniform(lo, hi, count)
    poles = np.concatenate(
        [np.arange(1, cfg.order + 1) * np.pi / l for l in cfg.lengths]
        + [np.arange(1, int(hi) + 2).astype(np.float64)]
    )
    for _ in range(8):
        d = z[:, None] - poles[None, :]
        idx = np.argmin(np.abs(d), axis=1)
        near = np.abs(d[np.arange(z.size), idx]) < 1e-3
        if not near.any():
            break
        z[near] += 3e-3
    return z


def run_verification(parsed: ParsedConfig, closure_tol: float = 1e-9) -> list[PropertyResult]:
    results: list[PropertyResult] = []

    def record(name, ok, detail=""):
        results.append(PropertyResult(name, "PASS" if ok else "FAIL", detail))

    def skip(name, reason):
        results.append(PropertyResult(name, "SKIP", reason))

    # geometry closure is checked on the raw numbers so a broken config still
    # produces a verdict instead of a parse crash
    if parsed.angles is None:
        skip("geometry_closure", "config declares no angles")
    else:
        defect = abs(float(np.sum(parsed.angles)) - TWO_PI)
        record("geometry_closure", defect <= closure_tol, f"defect {defect:.3e}")

    cfg = None
    cfg_error = ""
    try:
        cfg = parsed.model_config()
    except (FrozenStarError, ValueError) as exc:
        cfg_error = f"model not constructible: {exc}"

    if parsed.angles is None or parsed.m < 3:
        skip("geometry_roundtrip", "needs angles and at least 3 edges")
    elif cfg is None:
        skip("geometry_roundtrip", cfg_error)
    else:
        try:
            back = angles_from_chords(parsed.lengths, chords_from_angles(cfg.graph))
            err = float(np.max(np.abs(back - parsed.angles)))
            record("geometry_roundtrip", err < 1e-12, f"max angle error {err:.3e}")
        except InvalidGeometry as exc:
            record("geometry_roundtrip", False, str(exc))

    if cfg is None:
        for name in (
            "tip_dirichlet",
            "vertex_integer_values",
            "derivative_central_difference",
            "pole_window_continuity",
            "series_integral_identity",
            "transform_integer_collocation",
            "center_sum_consistency",
            "characteristic_reassembly",
            "chord_affinity",
            "conjugate_symmetry",
            "eigen_residual_integer",
            "nonlocal_closed_form",
            "sample_determinism",
        ):
            skip(name, cfg_error)
        return results

    probes = np.array([0.37, 2.63, 5.11 + 0.2j])
    worst = max(
        abs(solution.phi_edge(cfg, j, float(cfg.lengths[j]), z)) for j in range(cfg.m) for z in probes
    )
    record("tip_dirichlet", worst == 0.0, f"max tip value {worst:.3e}")

    worst = max(abs(solution.phi_edge(cfg, j, 0.0, float(k))) for j in range(cfg.m) for k in range(1, 11))
    record("vertex_integer_values", worst < 1e-12, f"max integer-z vertex value {worst:.3e}")

    rng = np.random.default_rng(1)
    h = 1e-5
    worst = 0.0
    for _ in range(40):
        j = int(rng.integers(cfg.m))
        l = float(cfg.lengths[j])
        x = rng.uniform(2 * h, l - 2 * h)
        z = complex(_probe_z(cfg, 1, seed=int(rng.integers(10_000)))[0])
        an = solution.phi_edge_derivative(cfg, j, x, z)
        fd = (solution.phi_edge(cfg, j, x + h, z) - solution.phi_edge(cfg, j, x - h, z)) / (2 * h)
        if abs(an) > 1e-6:
            worst = max(worst, abs(fd - an) / abs(an))
    record("derivative_central_difference", worst < 1e-6, f"max rel err {worst:.3e}")

    worst = 0.0
    for j in range(cfg.m):
        l = float(cfg.lengths[j])
        x0 = 0.37 * l
        for n in range(1, min(3, cfg.order) + 1):
            p = n * np.pi / l
            deltas = cfg.pole_eps * np.array([-2, -1.5, -1.1, -0.9, -0.5, -0.1, 0.1, 0.5, 0.9, 1.1, 1.5, 2])
            vals = np.array([solution.phi_edge(cfg, j, x0, p + d) for d in deltas])
            scale = max(1.0, float(np.max(np.abs(vals))))
            for part in (vals.real, vals.imag):
                coef = np.polyfit(deltas, part, 1)
                resid = float(np.max(np.abs(part - np.polyval(coef, deltas))))
                worst = max(worst, resid / scale)
    record("pole_window_continuity", worst < 1e-6, f"max line-fit residual {worst:.3e}")

    zs = _probe_z(cfg, 25, seed=2)
    worst = 0.0
    for j in range(cfg.m):
        lhs = np.array([ll33_lhs(cfg.potentials, j, z, cfg.pole_eps) for z in zs])
        rhs = np.array([ll33_rhs(cfg.potentials, j, z) for z in zs])
        scale = max(1.0, float(np.max(np.abs(lhs))))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))) / scale)
    record("series_integral_identity", worst < 1e-8, f"max |lhs-rhs| {worst:.3e}")

    worst = max(
        abs(sine_transform(cfg.potentials, j, float(n)) - cfg.potentials.coefficients[j, n - 1])
        for j in range(cfg.m)
        for n in range(1, cfg.order + 1)
    )
    record("transform_integer_collocation", worst < 1e-10, f"max coefficient error {worst:.3e}")

    zs = _probe_z(cfg, 12, seed=3)
    direct = np.array([sum(solution.phi_edge_derivative(cfg, j, 0.0, z) for j in range(cfg.m)) for z in zs])
    packed = np.array([solution.kirchhoff_center_sum(cfg, z) for z in zs])
    scale = max(1.0, float(np.max(np.abs(direct))))
    err = float(np.max(np.abs(direct - packed))) / scale
    record("center_sum_consistency", err < 1e-12, f"max rel err {err:.3e}")

    reassembled = np.zeros(zs.size, dtype=np.complex128)
    for j in range(cfg.m):
        reassembled += solution.nonlocal_block_raw(
            cfg.lengths, cfg.potentials.coefficients, j, zs, cfg.pole_eps, 1.0
        )
    reassembled -= np.array([solution.kirchhoff_center_sum(cfg, z) for z in zs])
    for jp in range(cfg.m):
        reassembled -= np.array([solution.kirchhoff_outer_sum(cfg, jp, z) for z in zs])
    assembled = characteristic.phi(cfg, zs.astype(np.complex128))
    scale = max(1.0, float(np.max(np.abs(assembled))))
    err = float(np.max(np.abs(assembled - reassembled))) / scale
    record("characteristic_reassembly", err < 1e-12, f"max rel err {err:.3e}")

    du = 1e-3
    worst = 0.0
    base = characteristic.phi(cfg, zs.astype(np.complex128))
    u = 1.0 / cfg.chords
    for i in range(cfg.m):
        for sgn in (+1.0, -1.0):
            up = u.copy()
            up[i] += sgn * du
            cfg_p = ModelConfig(cfg.graph, ExtendedGraphSpec(1.0 / up), cfg.potentials, cfg.mode, cfg.pole_eps)
            vals = characteristic.phi(cfg_p, zs.astype(np.complex128))
            if sgn > 0:
                plus = vals
            else:
                minus = vals
        second = plus + minus - 2 * base
        scale = max(1.0, float(np.max(np.abs(base))))
        worst = max(worst, float(np.max(np.abs(second))) / scale)
    record("chord_affinity", worst < 1e-12, f"max second difference {worst:.3e}")

    if np.any(cfg.potentials.coefficients.imag != 0.0):
        skip("conjugate_symmetry", "potential is complex-valued")
    else:
        zc = np.array([0.7 + 0.3j, 2.2 + 0.15j, 4.4 + 0.05j])
        a = characteristic.phi(cfg, np.conj(zc))
        b = np.conj(characteristic.phi(cfg, zc))
        scale = max(1.0, float(np.max(np.abs(b))))
        err = float(np.max(np.abs(a - b))) / scale
        record("conjugate_symmetry", err < 1e-10, f"max rel err {err:.3e}")

    if cfg.mode != NORMALIZED:
        skip("eigen_residual_integer", "requires normalized mode")
    else:
        xg = np.linspace(0.0, float(cfg.lengths[0]), 41)
        worst = max(
            float(np.max(np.abs(solution.ode_residual(cfg, j, xg, float(z)))))
            for j in range(cfg.m)
            for z in range(1, 6)
        )
        record("eigen_residual_integer", worst < 1e-8, f"sup residual {worst:.3e}")

    nodes, weights = np.polynomial.legendre.leggauss(200)
    worst = 0.0
    for j in range(cfg.m):
        l = float(cfg.lengths[j])
        x = 0.5 * l * (nodes + 1.0)
        wq = 0.5 * l * weights
        for z in _probe_z(cfg, 4, seed=5):
            integrand = solution.phi_edge(cfg, j, x, complex(z)) * np.conj(
                sine_synthesis(cfg.potentials, j, x)
            )
            quad = np.sum(wq * integrand)
            closed = solution.nonlocal_integral(cfg, j, complex(z))
            worst = max(worst, abs(closed - quad) / max(1.0, abs(closed)))
    record("nonlocal_closed_form", worst < 1e-8, f"max rel err {worst:.3e}")

    spec = characteristic.SampleGridSpec(kind="custom", points=tuple(zs[:6]), allow_pole_windows=True)
    csv_a = samples_to_csv(characteristic.sample_phi(cfg, spec))
    csv_b = samples_to_csv(characteristic.sample_phi(cfg, spec))
    record("sample_determinism", csv_a == csv_b, "re-sampled CSV matches" if csv_a == csv_b else "outputs differ")

    return results


def has_failures(results: list[PropertyResult]) -> bool:
    return any(r.status == "FAIL" for r in results)

import numpy as np
import pytest

import frozenstar as fs
from frozenstar.characteristic import chord_design_matrix, phi_chordfree
from frozenstar.errors import ConfigParseError, GridMismatch, OutOfDomain
from frozenstar.solution import ModelConfig
from helpers import naive_phi, nonresonant_real_grid, random_config


@pytest.fixture(scope="module")
def cfg():
    return random_config(np.random.default_rng(21), m=3, order=5, scale=0.3)


def _with_chords(cfg, chords):
    return ModelConfig(cfg.graph, fs.ExtendedGraphSpec(chords), cfg.potentials, cfg.mode, cfg.pole_eps)


def test_integer_z_vanishes_in_normalized_mode():
    for m in (2, 3, 4):
        cfg = random_config(np.random.default_rng(m), m=m, order=4, mode="normalized")
        worst = max(abs(fs.phi(cfg, float(k))) for k in range(1, 11))
        assert worst < 1e-12


def test_large_chords_reduce_to_chord_free_third_block(cfg):
    big = _with_chords(cfg, np.full(cfg.m, 1e9))
    zero = fs.PotentialCoeffs.zeros(cfg.lengths, cfg.order)
    base = ModelConfig(cfg.graph, big.extension, zero, cfg.mode, cfg.pole_eps)
    for z in (0.41, 1.7, 3.3):
        prods = np.array(
            [np.prod([np.sin(z * l) for k, l in enumerate(cfg.lengths) if k != j]) for j in range(cfg.m)]
        )
        reduced = np.sum((z * np.pi / cfg.lengths) * np.cos(z * np.pi) * prods) + np.sum(
            (z * np.pi / cfg.lengths) * prods
        )
        assert fs.phi(base, z) == pytest.approx(reduced, abs=1e-6)


def test_phi_against_independent_reimplementation():
    rng = np.random.default_rng(77)
    for trial in range(3):
        cfg = random_config(rng, m=3, order=5, scale=0.3)
        grid = nonresonant_real_grid(cfg.lengths, cfg.order, 10, hi=6.0)
        for z in grid:
            a = fs.phi(cfg, complex(z))
            b = naive_phi(cfg.lengths, cfg.chords, cfg.potentials.coefficients, complex(z))
            assert abs(a - b) < 1e-8 * max(1.0, abs(b))


def test_phi_at_z_037_named_case():
    cfg = random_config(np.random.default_rng(7), m=3, order=5, scale=0.3)
    a = fs.phi(cfg, 0.37)
    b = naive_phi(cfg.lengths, cfg.chords, cfg.potentials.coefficients, 0.37)
    assert abs(a - b) < 1e-8 * abs(b)


def test_block_decomposition_consistency(cfg):
    # characteristic = first block - center sum - outer sums, reassembled from
    # the public per-operation evaluators
    from frozenstar.solution import nonlocal_block_raw

    zs = nonresonant_real_grid(cfg.lengths, cfg.order, 7, hi=5.0).astype(complex)
    total = np.zeros(zs.size, dtype=complex)
    for j in range(cfg.m):
        total += nonlocal_block_raw(cfg.lengths, cfg.potentials.coefficients, j, zs, cfg.pole_eps, 1.0)
    total -= np.array([fs.kirchhoff_center_sum(cfg, z) for z in zs])
    for jp in range(cfg.m):
        total -= np.array([fs.kirchhoff_outer_sum(cfg, jp, z) for z in zs])
    direct = fs.phi(cfg, zs)
    assert np.max(np.abs(direct - total)) < 1e-12 * max(1.0, float(np.max(np.abs(direct))))


def test_first_block_equals_nonlocal_integral_when_length_two():
    # the printed quadratic channel omits the l/2 orthogonality factor, so the
    # two coincide exactly on edges of length 2
    lengths = np.array([2.0, 2.0, 2.0])
    g = fs.StarGraphSpec(lengths, [2 * np.pi / 3] * 3)
    rng = np.random.default_rng(5)
    coef = (rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))) * 0.4
    cfg2 = ModelConfig(g, fs.chords_from_angles(g), fs.PotentialCoeffs(lengths, coef))
    from frozenstar.solution import nonlocal_block_raw

    for z in (0.37, 1.21, 2.9):
        za = np.array([z], dtype=complex)
        for j in range(3):
            block1 = nonlocal_block_raw(lengths, coef, j, za, cfg2.pole_eps, 1.0)[0]
            integral = fs.nonlocal_integral(cfg2, j, z)
            assert abs(block1 - integral) < 1e-12 * max(1.0, abs(integral))


def test_affine_in_chord_reciprocals(cfg):
    zs = nonresonant_real_grid(cfg.lengths, cfg.order, 9, hi=6.0).astype(complex)
    u = 1.0 / cfg.chords
    base = fs.phi(cfg, zs)
    h = 1e-3
    for i in range(cfg.m):
        up, um = u.copy(), u.copy()
        up[i] += h
        um[i] -= h
        plus = fs.phi(_with_chords(cfg, 1.0 / up), zs)
        minus = fs.phi(_with_chords(cfg, 1.0 / um), zs)
        second = plus + minus - 2 * base
        assert np.max(np.abs(second)) < 1e-12 * max(1.0, float(np.max(np.abs(base))))
        # and the design matrix is exactly the u-gradient
        fd = (plus - minus) / (2 * h)
        col = chord_design_matrix(cfg.lengths, zs)[:, i]
        assert np.max(np.abs(fd - col)) < 1e-8 * max(1.0, float(np.max(np.abs(col))))


def test_conjugate_symmetry_for_real_potentials():
    cfg = random_config(np.random.default_rng(3), m=3, order=4, scale=0.4, real=True)
    zs = np.array([0.37, 1.9, 4.4])
    assert np.max(np.abs(fs.phi(cfg, zs.astype(complex)).imag)) < 1e-12
    zc = zs + 0.3j
    assert np.max(np.abs(fs.phi(cfg, np.conj(zc)) - np.conj(fs.phi(cfg, zc)))) < 1e-10


def test_chord_sensitivity(cfg):
    chords = cfg.chords.copy()
    chords[1] += 1e-3
    other = _with_chords(cfg, chords)
    grid = nonresonant_real_grid(cfg.lengths, cfg.order, 40, hi=8.0)
    gap = np.max(np.abs(fs.phi(cfg, grid.astype(complex)) - fs.phi(other, grid.astype(complex))))
    assert gap > 0


def test_phi_chordfree_plus_design_matches_phi(cfg):
    zs = nonresonant_real_grid(cfg.lengths, cfg.order, 11, hi=7.0).astype(complex)
    rebuilt = phi_chordfree(cfg.lengths, cfg.potentials.coefficients, zs, cfg.pole_eps)
    rebuilt = rebuilt + chord_design_matrix(cfg.lengths, zs) @ (1.0 / cfg.chords)
    assert np.max(np.abs(rebuilt - fs.phi(cfg, zs))) == 0.0


def test_sample_integers_normalized_zero():
    cfg = random_config(np.random.default_rng(1), m=3, order=4, mode="normalized")
    samples = fs.sample_phi(cfg, fs.SampleGridSpec(kind="integers", count=20))
    assert np.max(np.abs(samples.values)) < 1e-12
    assert np.array_equal(samples.grid.real, np.arange(1, 21))


def test_zero_set_grid_points_kill_the_product():
    cfg = random_config(np.random.default_rng(9), m=3, order=4)
    jp = 1
    spec = fs.SampleGridSpec(kind="zero-set", edge=jp, z_max=9.0)
    grid = fs.build_grid(spec, cfg)
    for z in grid.real:
        prod = np.sin(z * np.pi) * np.prod(
            [np.sin(z * l) for k, l in enumerate(cfg.lengths) if k != jp]
        )
        assert abs(prod) < 1e-12

    # bracketing oracle: every generated point is a sign-change root of the product
    def g(z):
        return np.sin(z * np.pi) * np.prod([np.sin(z * l) for k, l in enumerate(cfg.lengths) if k != jp])

    from scipy.optimize import brentq

    for z in grid.real:
        lo, hi = z - 1e-4, z + 1e-4
        if g(lo) * g(hi) < 0:
            root = brentq(g, lo, hi, xtol=1e-13)
            assert abs(root - z) < 1e-10


def test_edge_resonant_grid():
    cfg = random_config(np.random.default_rng(2), m=3, order=4)
    spec = fs.SampleGridSpec(kind="edge-resonant", edge=2, count=6)
    grid = fs.build_grid(spec, cfg)
    assert np.allclose(grid.real, np.arange(1, 7) * np.pi / cfg.lengths[2])


def test_custom_grid_rejects_pole_window_points():
    cfg = random_config(np.random.default_rng(4), m=2, order=4)
    pole = np.pi / float(cfg.lengths[0])
    spec = fs.SampleGridSpec(kind="custom", points=(0.5, pole + 1e-9))
    with pytest.raises(OutOfDomain):
        fs.build_grid(spec, cfg)
    allowed = fs.SampleGridSpec(kind="custom", points=(0.5, pole + 1e-9), allow_pole_windows=True)
    grid = fs.build_grid(allowed, cfg)
    assert np.all(np.isfinite(fs.phi(cfg, grid)))


def test_custom_grid_rejects_duplicates():
    cfg = random_config(np.random.default_rng(4), m=2, order=4)
    with pytest.raises(ConfigParseError):
        fs.build_grid(fs.SampleGridSpec(kind="custom", points=(0.5, 0.5)), cfg)


def test_fingerprint_changes_with_chords(cfg):
    fp_a = fs.config_fingerprint(cfg)
    chords = cfg.chords.copy()
    chords[0] *= 1.0 + 1e-12
    fp_b = fs.config_fingerprint(_with_chords(cfg, chords))
    assert fp_a["chords"] != fp_b["chords"]
    assert fp_a["combined"] != fp_b["combined"]
    assert fp_a["lengths"] == fp_b["lengths"]
    assert fp_a == fs.config_fingerprint(cfg)


def test_phi_difference_identical_and_mismatch(cfg):
    spec = fs.SampleGridSpec(kind="custom", points=(0.41, 1.7, 3.1), allow_pole_windows=True)
    a = fs.sample_phi(cfg, spec)
    b = fs.sample_phi(cfg, spec)
    assert np.all(fs.phi_difference(a, b) == 0)
    other = fs.sample_phi(cfg, fs.SampleGridSpec(kind="custom", points=(0.42, 1.7, 3.1), allow_pole_windows=True))
    with pytest.raises(GridMismatch):
        fs.phi_difference(a, other)


def test_phi_difference_single_chord_closed_form(cfg):
    # difference of two configs differing in one chord is carried entirely by
    # the reciprocal terms of the outer block
    k = 2
    chords = cfg.chords.copy()
    chords[k] = chords[k] * 1.17
    other = _with_chords(cfg, chords)
    grid = nonresonant_real_grid(cfg.lengths, cfg.order, 17, hi=7.0)
    spec = fs.SampleGridSpec(kind="custom", points=tuple(grid.astype(complex)), allow_pole_windows=True)
    diff = fs.phi_difference(fs.sample_phi(cfg, spec), fs.sample_phi(other, spec))
    du = 1.0 / cfg.chords[k] - 1.0 / chords[k]
    closed = chord_design_matrix(cfg.lengths, grid.astype(complex))[:, k] * du
    assert np.max(np.abs(diff - closed)) < 1e-10 * max(1.0, float(np.max(np.abs(closed))))


def test_phi_difference_potential_closed_form():
    # difference of two configs sharing geometry follows the affine channel
    # structure in (q, conj q) plus the squared-magnitude channel
    import cmath

    rng = np.random.default_rng(12)
    cfg_a = random_config(rng, m=3, order=4, scale=0.35)
    coef_b = cfg_a.potentials.coefficients.copy()
    coef_b[0, 1] += 0.21 - 0.13j
    coef_b[2, 3] -= 0.08j
    cfg_b = ModelConfig(
        cfg_a.graph, cfg_a.extension, fs.PotentialCoeffs(cfg_a.lengths, coef_b), cfg_a.mode, cfg_a.pole_eps
    )
    grid = nonresonant_real_grid(cfg_a.lengths, cfg_a.order, 15, hi=6.5)
    spec = fs.SampleGridSpec(kind="custom", points=tuple(grid.astype(complex)), allow_pole_windows=True)
    diff = fs.phi_difference(fs.sample_phi(cfg_a, spec), fs.sample_phi(cfg_b, spec))

    lengths = cfg_a.lengths
    qa, qb = cfg_a.potentials.coefficients, coef_b
    order = qa.shape[1]
    closed = np.zeros(grid.size, dtype=complex)
    for i, z in enumerate(grid):
        for j in range(3):
            l = lengths[j]
            prod = np.prod([cmath.sin(z * lk) for kk, lk in enumerate(lengths) if kk != j])
            for n in range(1, order + 1):
                p = n * np.pi / l
                dn = z**2 - p**2
                a_int = (l / np.pi) * ((-1) ** n) * n * np.sin(z * np.pi) / (z**2 - n**2)
                closed[i] += a_int * (np.conj(qa[j, n - 1]) - np.conj(qb[j, n - 1])) * prod
                closed[i] += (
                    cmath.sin(z * l)
                    * (qa[j, n - 1] * np.conj(qa[j, n - 1]) - qb[j, n - 1] * np.conj(qb[j, n - 1]))
                    / dn
                    * prod
                )
                closed[i] += (
                    cmath.sin(z * l) * ((-1) ** n + 1) * p * (qa[j, n - 1] - qb[j, n - 1]) / dn * prod
                )
    assert np.max(np.abs(diff - closed)) < 1e-10 * max(1.0, float(np.max(np.abs(closed))))


def test_sample_set_invariants(cfg):
    spec = fs.SampleGridSpec(kind="integers", count=5)
    s = fs.sample_phi(cfg, spec)
    assert len(s) == 5
    assert s.mode == cfg.mode
    with pytest.raises(GridMismatch):
        fs.PhiSampleSet(grid=np.array([1.0 + 0j, 2.0]), values=np.array([0j]), mode="verbatim", fingerprint={})

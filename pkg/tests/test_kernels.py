import numpy as np
import pytest

import frozenstar as fs
from frozenstar import backend
from frozenstar import _kernels_numpy as knp

numba_available = True
try:
    from frozenstar import _kernels_numba as knb
except ImportError:  # pragma: no cover
    numba_available = False

needs_numba = pytest.mark.skipif(not numba_available, reason="numba not installed")


@pytest.fixture
def restore_backend():
    previous = fs.active_backend()
    yield
    fs.set_backend(previous)


def test_numpy_ratio_against_naive_off_poles():
    rng = np.random.default_rng(0)
    l = 1.3
    w = rng.normal(size=6) + 1j * rng.normal(size=6)
    z = np.array([0.41, 1.1 + 0.2j, 3.7])
    naive = np.zeros(3, dtype=complex)
    for i, zi in enumerate(z):
        for n in range(1, 7):
            p = n * np.pi / l
            naive[i] += np.sin(zi * l) * w[n - 1] / (zi**2 - p**2)
    got = knp.ratio_series(z, l, w, 1e-6)
    assert np.max(np.abs(got - naive)) < 1e-13 * max(1.0, np.max(np.abs(naive)))


def test_numpy_ratio_limit_at_pole():
    # at z = n*pi/l exactly the quotient takes its analytic limit
    l = np.pi
    w = np.array([1.0 + 0j])
    z = np.array([1.0 + 0j])  # first pole for l = pi
    got = knp.ratio_series(z, l, w, 1e-6)[0]
    expected = -l / 2.0  # (-1)^1 * l * sr(0) / (2 p), p = 1
    assert got == pytest.approx(expected, rel=1e-14)


def test_numpy_ratio_negative_pole_window():
    l = 1.1
    w = np.array([0.7 - 0.2j, 0.1 + 0j])
    p1 = np.pi / l
    z = np.array([-p1 + 3e-7, -p1 - 3e-7])
    vals = knp.ratio_series(z, l, w, 1e-6)
    assert np.all(np.isfinite(vals))
    assert abs(vals[0] - vals[1]) < 1e-5


def test_sin_ratio_series_accuracy():
    for wv in (1e-8, 1e-4, 9e-4, 1e-3 + 1e-9, 0.5, 1.0 + 0.3j):
        got = knp._sin_ratio(np.array([wv]))[0]
        expected = np.sin(complex(wv)) / complex(wv)
        assert abs(got - expected) < 1e-15 * max(1.0, abs(expected))


@needs_numba
def test_backends_agree_on_random_inputs(restore_backend):
    rng = np.random.default_rng(1)
    for _ in range(5):
        l = rng.uniform(0.6, 2.0)
        n = int(rng.integers(1, 12))
        w = rng.normal(size=n) + 1j * rng.normal(size=n)
        z = rng.normal(size=20) + 1j * 0.2 * rng.normal(size=20)
        a = knp.ratio_series(z, l, w, 1e-6)
        b = knb.ratio_series(z, l, w, 1e-6)
        assert np.max(np.abs(a - b)) < 1e-12 * max(1.0, np.max(np.abs(a)))
        ta = knp.term_ratios(z, l, n, 1e-6)
        tb = knb.term_ratios(z, l, n, 1e-6)
        assert np.max(np.abs(ta - tb)) < 1e-12 * max(1.0, np.max(np.abs(ta)))


@needs_numba
def test_backends_agree_inside_pole_windows(restore_backend):
    l = 1.37
    w = np.array([0.3 + 0.4j, -0.2j, 0.15])
    eps = 1e-6
    probes = []
    for n in (1, 2, 3):
        p = n * np.pi / l
        probes.extend([p, p + eps / 3, p - eps / 3, -p + eps / 5])
    z = np.array(probes, dtype=complex)
    a = knp.ratio_series(z, l, w, eps)
    b = knb.ratio_series(z, l, w, eps)
    assert np.max(np.abs(a - b)) < 1e-13 * max(1.0, np.max(np.abs(a)))


@needs_numba
def test_backends_agree_on_products(restore_backend):
    # multiplication order differs (pairwise vs sequential), so agreement is
    # to rounding, not bitwise
    rng = np.random.default_rng(2)
    lengths = rng.uniform(0.5, 2.0, 5)
    z = rng.normal(size=30) + 1j * rng.normal(size=30)
    a = knp.sin_prod_excl(z, lengths)
    b = knb.sin_prod_excl(z, lengths)
    assert np.max(np.abs(a - b)) < 1e-13 * max(1.0, float(np.max(np.abs(a))))


@needs_numba
def test_phi_identical_across_backends(restore_backend):
    from helpers import random_config

    cfg = random_config(np.random.default_rng(3), m=3, order=6, scale=0.3)
    z = np.linspace(0.3, 8.0, 50).astype(complex) + 0.1j
    fs.set_backend("numpy")
    a = fs.phi(cfg, z)
    fs.set_backend("numba")
    b = fs.phi(cfg, z)
    assert np.max(np.abs(a - b)) < 1e-12 * max(1.0, float(np.max(np.abs(a))))


def test_set_backend_validation(restore_backend):
    with pytest.raises(ValueError):
        fs.set_backend("fortran")
    assert fs.set_backend("numpy") == "numpy"
    assert fs.active_backend() == "numpy"

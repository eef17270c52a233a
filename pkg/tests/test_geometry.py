import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import frozenstar as fs
from frozenstar.errors import ClosureViolation, InvalidGeometry, TriangleViolation
from helpers import random_star


def test_equilateral_chords():
    g = fs.StarGraphSpec([1.0, 1.0, 1.0], [2 * np.pi / 3] * 3)
    ext = fs.chords_from_angles(g)
    assert np.allclose(ext.chords, np.sqrt(3), rtol=0, atol=1e-14)


def test_pythagorean_chord():
    g = fs.StarGraphSpec([3.0, 4.0, 1.0], [np.pi / 2, 1.2, 2 * np.pi - np.pi / 2 - 1.2])
    ext = fs.chords_from_angles(g)
    assert ext.chords[0] == pytest.approx(5.0, abs=1e-13)


def test_m4_chords_against_planar_oracle():
    # independent oracle: place the tips in the plane, take euclidean distances
    lengths = np.array([1.0, 1.3, 0.9, 1.1])
    angles = np.array([1.9, 1.4, 1.5, 2 * np.pi - 4.8])
    polar = np.concatenate([[0.0], np.cumsum(angles)[:-1]])
    tips = np.stack([lengths * np.cos(polar), lengths * np.sin(polar)], axis=1)
    oracle = np.linalg.norm(tips - np.roll(tips, -1, axis=0), axis=1)
    expected = [1.8789765495729607, 1.4499230619634396, 1.3711091643986442, 1.4203880583957393]
    assert np.allclose(oracle, expected, rtol=0, atol=1e-12)

    ext = fs.chords_from_angles(fs.StarGraphSpec(lengths, angles))
    assert np.allclose(ext.chords, oracle, rtol=0, atol=1e-12)


def test_inverse_equilateral():
    angles = fs.angles_from_chords([1.0, 1.0, 1.0], [np.sqrt(3.0)] * 3)
    assert np.allclose(angles, 2 * np.pi / 3, rtol=0, atol=1e-14)


def test_round_trip_m4():
    lengths = np.array([1.0, 1.3, 0.9, 1.1])
    angles = np.array([1.9, 1.4, 1.5, 2 * np.pi - 4.8])
    back = fs.angles_from_chords(lengths, fs.chords_from_angles(fs.StarGraphSpec(lengths, angles)))
    assert np.max(np.abs(back - angles)) < 1e-12


def test_triangle_violation():
    lengths = [1.0, 2.0, 1.5]
    chords = [1.0 + 2.0 + 0.1, 2.0, 1.4]
    with pytest.raises(TriangleViolation):
        fs.angles_from_chords(lengths, chords)


def test_reflex_angle_reports_closure_violation():
    # one angle beyond pi: the principal branch folds it back, closure breaks
    lengths = np.array([1.0, 1.1, 0.9, 1.2])
    angles = np.array([3.5, 1.0, 0.9, 2 * np.pi - 5.4])
    assert angles.sum() == pytest.approx(2 * np.pi)
    ext = fs.chords_from_angles(fs.StarGraphSpec(lengths, angles))
    with pytest.raises(ClosureViolation) as err:
        fs.angles_from_chords(lengths, ext.chords)
    assert err.value.defect > 1e-3
    assert err.value.angles is not None  # principal branch still reported


def test_angle_recovery_needs_three_edges():
    with pytest.raises(InvalidGeometry):
        fs.angles_from_chords([1.0, 1.0], [1.5, 1.5])


def test_cyclic_permutation_permutes_chords():
    rng = np.random.default_rng(0)
    lengths, angles = random_star(rng, 5)
    base = fs.chords_from_angles(fs.StarGraphSpec(lengths, angles)).chords
    rolled = fs.chords_from_angles(fs.StarGraphSpec(np.roll(lengths, 2), np.roll(angles, 2))).chords
    assert np.allclose(rolled, np.roll(base, 2), rtol=1e-14, atol=0)


def test_invariant_validation():
    with pytest.raises(InvalidGeometry):
        fs.StarGraphSpec([1.0], [2 * np.pi])
    with pytest.raises(InvalidGeometry):
        fs.StarGraphSpec([1.0, -1.0], [np.pi, np.pi])
    with pytest.raises(InvalidGeometry):
        fs.StarGraphSpec([1.0, 1.0], [np.pi, np.pi + 1e-6])
    with pytest.raises(InvalidGeometry):
        fs.ExtendedGraphSpec([1.0, 0.0])


@settings(max_examples=40, deadline=None)
@given(m=st.integers(min_value=3, max_value=6), seed=st.integers(min_value=0, max_value=10_000))
def test_round_trip_random_stars(m, seed):
    rng = np.random.default_rng(seed)
    lengths, angles = random_star(rng, m)
    g = fs.StarGraphSpec(lengths, angles)
    back = fs.angles_from_chords(lengths, fs.chords_from_angles(g))
    assert np.max(np.abs(back - angles)) < 1e-12

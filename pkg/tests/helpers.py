"""Shared fixtures-in-code: random model builders and independent oracles.

The oracles here are deliberately written from scratch (plain python loops,
their own quadrature) so they share no evaluation path with the package.
"""

import cmath

import numpy as np

import frozenstar as fs
from frozenstar.solution import ModelConfig

GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(400)


def random_star(rng, m, max_angle=3.0):
    """Distinct edge lengths and a valid closed fan.

    For m >= 3 the fan is kept reflex-free (every angle < pi) so angle
    recovery round-trips exactly; a 2-edge fan always carries a reflex angle
    and is exempt.
    """
    lengths = rng.uniform(0.7, 1.4, m)
    while True:
        w = rng.uniform(0.5, 1.5, m)
        angles = 2 * np.pi * w / w.sum()
        if m <= 2 or angles.max() < max_angle:
            return lengths, angles


def random_config(rng, m=3, order=8, scale=0.3, mode="verbatim", real=False):
    if mode == "normalized":
        lengths = np.full(m, np.pi)
        _, angles = random_star(rng, m)
    else:
        lengths, angles = random_star(rng, m)
    graph = fs.StarGraphSpec(lengths, angles)
    ext = fs.chords_from_angles(graph)
    coef = rng.normal(size=(m, order)) * scale
    if not real:
        coef = coef + 1j * rng.normal(size=(m, order)) * scale
    pot = fs.PotentialCoeffs(lengths, coef.astype(np.complex128))
    return ModelConfig(graph, ext, pot, mode=mode)


def nonresonant_real_grid(lengths, order, count, lo=0.3, hi=8.0, margin=1e-3):
    """Real grid pushed clear of every series pole and integer."""
    z = np.linspace(lo, hi, count)
    poles = np.concatenate(
        [np.arange(1, order + 1) * np.pi / l for l in np.asarray(lengths)]
        + [np.arange(1, int(hi) + 2).astype(np.float64)]
    )
    for _ in range(10):
        d = np.abs(z[:, None] - poles[None, :]).min(axis=1)
        near = d < margin
        if not near.any():
            break
        z[near] += 2.7 * margin
    return z


def grid_spec_from_points(points):
    return fs.SampleGridSpec(
        kind="custom", points=tuple(np.asarray(points).astype(complex)), allow_pole_windows=True
    )


def q_synth_naive(coef_row, length, x):
    """Plain-loop sine synthesis."""
    total = np.zeros(np.shape(x), dtype=complex)
    for n, c in enumerate(coef_row, start=1):
        total = total + c * np.sin((n * np.pi / length) * (length - x))
    return total


def naive_phi_edge(lengths, coef, j, x, z):
    """Verbatim edge solution, plain loops, no stable rewrites (off poles only)."""
    l = lengths[j]
    val = cmath.sin(z * np.pi * (1 - x / l))
    for n, c in enumerate(coef[j], start=1):
        p = n * np.pi / l
        val += cmath.sin(z * l) * c * cmath.sin(p * (l - x)) / (z * z - p * p)
    for k in range(len(lengths)):
        if k != j:
            val *= cmath.sin(z * lengths[k])
    return val


def naive_phi(lengths, chords, coef, z):
    """Characteristic function: plain loops plus Gauss-Legendre quadrature.

    The non-local integral term is integrated numerically against the
    synthesized potential instead of using any closed form.
    """
    m = len(lengths)
    order = coef.shape[1]
    total = 0j
    for j in range(m):
        l = lengths[j]
        prod = 1 + 0j
        for k in range(m):
            if k != j:
                prod *= cmath.sin(z * lengths[k])
        x = 0.5 * l * (GL_NODES + 1.0)
        wq = 0.5 * l * GL_WEIGHTS
        integ = np.sum(wq * np.sin(z * np.pi * (1 - x / l)) * np.conj(q_synth_naive(coef[j], l, x)))
        s1 = sum(
            coef[j, n - 1] * np.conj(coef[j, n - 1]) / (z**2 - (n * np.pi / l) ** 2)
            for n in range(1, order + 1)
        )
        s2 = sum(
            ((-1) ** n) * (n * np.pi / l) * coef[j, n - 1] / (z**2 - (n * np.pi / l) ** 2)
            for n in range(1, order + 1)
        )
        s3 = sum(
            (n * np.pi / l) * coef[j, n - 1] / (z**2 - (n * np.pi / l) ** 2)
            for n in range(1, order + 1)
        )
        b1 = (integ + cmath.sin(z * l) * s1) * prod
        b2 = ((z * np.pi / l) * cmath.cos(z * np.pi) + cmath.sin(z * l) * s2) * prod
        b3 = (
            (z * np.pi / l)
            + z * np.pi / chords[j - 1]
            + (z * np.pi / chords[j]) * cmath.cos(z * np.pi)
            + cmath.sin(z * l) * s3
        ) * prod
        total += b1 + b2 + b3
    return total


def mp_phi_edge(lengths, coef, j, x, z, dps=40):
    """Edge solution evaluated verbatim in high-precision arithmetic.

    Near a pole the naive quotient cancels catastrophically in doubles but
    only costs ~6 of the 40 digits here, so this is the truth value for the
    pole-window tests.
    """
    import mpmath

    with mpmath.workdps(dps):
        zm = mpmath.mpc(z)
        l = mpmath.mpf(lengths[j])
        xm = mpmath.mpf(x)
        val = mpmath.sin(zm * mpmath.pi * (1 - xm / l))
        for n, c in enumerate(coef[j], start=1):
            p = n * mpmath.pi / l
            cm = mpmath.mpc(complex(c))
            val += mpmath.sin(zm * l) * cm * mpmath.sin(p * (l - xm)) / (zm * zm - p * p)
        for k in range(len(lengths)):
            if k != j:
                val *= mpmath.sin(zm * mpmath.mpf(lengths[k]))
        return complex(val)

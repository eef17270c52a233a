"""Planar star-graph geometry.

A star graph is a fan of m edges sharing the origin; closing the fan by
joining consecutive edge tips with straight chords produces the extended
cyclic graph. Chord lengths and fan angles determine each other through the
law of cosines, which is what the topology-recovery path ultimately inverts.

Indexing is 0-based and cyclic: chord j joins the tips of edges j and j+1
(mod m), and angle j sits between those same two edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ClosureViolation, InvalidGeometry, TriangleViolation

TWO_PI = 2.0 * np.pi
CLOSURE_TOL = 1e-9


def _freeze(a, dtype=np.float64) -> np.ndarray:
    out = np.asarray(a, dtype=dtype).copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class StarGraphSpec:
    """Edge lengths and consecutive-edge angles of a planar star.

    Invariants: m >= 2, lengths positive, each angle in (0, 2*pi), and the
    angles close up to a full turn within ``CLOSURE_TOL``.
    """

    lengths: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lengths", _freeze(self.lengths))
        object.__setattr__(self, "angles", _freeze(self.angles))
        l, th = self.lengths, self.angles
        if l.ndim != 1 or l.size < 2:
            raise InvalidGeometry("need at least 2 edges")
        if th.shape != l.shape:
            raise InvalidGeometry("one angle per edge required")
        if not np.all(np.isfinite(l)) or np.any(l <= 0):
            raise InvalidGeometry("edge lengths must be positive and finite")
        if not np.all(np.isfinite(th)) or np.any(th <= 0) or np.any(th >= TWO_PI):
            raise InvalidGeometry("angles must lie strictly inside (0, 2*pi)")
        defect = abs(float(th.sum()) - TWO_PI)
        if defect > CLOSURE_TOL:
            raise InvalidGeometry(f"angles do not close the fan: defect {defect:.3e}")

    @property
    def m(self) -> int:
        return self.lengths.size


@dataclass(frozen=True)
class ExtendedGraphSpec:
    """Chord lengths of the closed extension (chord j joins tips j and j+1)."""

    chords: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "chords", _freeze(self.chords))
        c = self.chords
        if c.ndim != 1 or c.size < 2:
            raise InvalidGeometry("need at least 2 chords")
        if not np.all(np.isfinite(c)) or np.any(c <= 0):
            raise InvalidGeometry("chord lengths must be positive and finite")

    @property
    def m(self) -> int:
        return self.chords.size


def chords_from_angles(g: StarGraphSpec) -> ExtendedGraphSpec:
    """Chord lengths of the closed extension, by the law of cosines."""
    l = g.lengths
    l_next = np.roll(l, -1)
    chords = np.sqrt(l**2 + l_next**2 - 2.0 * l * l_next * np.cos(g.angles))
    return ExtendedGraphSpec(chords)


def principal_angles(lengths, chords) -> tuple[np.ndarray, float]:
    """Inverse law of cosines on each chord, plus the closure defect.

    Returns principal-branch angles in (0, pi) and |sum - 2*pi|. A reflex fan
    is representable only through a nonzero defect, which is reported, never
    silently absorbed.
    """
    l = np.asarray(lengths, dtype=np.float64)
    c = chords.chords if isinstance(chords, ExtendedGraphSpec) else np.asarray(chords, dtype=np.float64)
    if l.size != c.size:
        raise InvalidGeometry("need one chord per edge")
    l_next = np.roll(l, -1)
    arg = (l**2 + l_next**2 - c**2) / (2.0 * l * l_next)
    bad = np.abs(arg) >= 1.0
    if bad.any():
        j = int(np.argmax(bad))
        raise TriangleViolation(
            f"chord {j} (length {c[j]:.6g}) violates the triangle inequality "
            f"against edges {l[j]:.6g}, {l_next[j]:.6g}"
        )
    angles = np.arccos(arg)
    defect = abs(float(angles.sum()) - TWO_PI)
    return angles, defect


def angles_from_chords(lengths, chords, closure_tol: float = 1e-6) -> np.ndarray:
    """Recover fan angles from chord lengths; m >= 3 required.

    Raises TriangleViolation when a chord cannot come from the given edges and
    ClosureViolation (carrying the principal angles) when the recovered fan
    does not close within ``closure_tol``.
    """
    l = np.asarray(lengths, dtype=np.float64)
    if l.size < 3:
        raise InvalidGeometry("angle recovery needs at least 3 edges; two tips span a single segment")
    angles, defect = principal_angles(l, chords)
    if defect > closure_tol:
        raise ClosureViolation(defect, angles=angles)
    return angles

"""Forward and inverse toolkit for frozen-argument operators on planar star graphs.

Evaluates the distinguished solution family and the characteristic function of
a star graph whose edges carry non-local (frozen-argument) potentials, recovers
the closed extension's chord lengths (hence the fan angles) and the potentials'
sine coefficients from characteristic-function samples, and cross-checks the
analytic machinery against an independent finite-difference eigensolver.
"""

__version__ = "0.1.0"

from .backend import active_backend, set_backend
from .characteristic import (
    PhiSampleSet,
    SampleGridSpec,
    build_grid,
    config_fingerprint,
    phi,
    phi_difference,
    sample_phi,
)
from .fd_oracle import DiscretizedStar, OracleSpectrum, assemble, compare_phi_zeros, spectrum
from .fourier import (
    PotentialCoeffs,
    SampledFunction,
    ll33_lhs,
    ll33_rhs,
    sine_coefficients,
    sine_synthesis,
    sine_transform,
)
from .geometry import (
    ExtendedGraphSpec,
    StarGraphSpec,
    angles_from_chords,
    chords_from_angles,
    principal_angles,
)
from .recovery import (
    GaussNewtonOptions,
    PotentialRecoveryProblem,
    RecoveryReport,
    TopologyOptions,
    TopologyRecoveryProblem,
    parity_resonant_grid,
    recover_angles,
    recover_chords,
    recover_potentials,
    uniqueness_gap_potential,
    uniqueness_gap_topology,
)
from .solution import (
    MODES,
    NORMALIZED,
    VERBATIM,
    ModelConfig,
    kirchhoff_center_sum,
    kirchhoff_outer_sum,
    nonlocal_integral,
    ode_residual,
    phi_chord,
    phi_chord_derivative,
    phi_edge,
    phi_edge_derivative,
)

__all__ = [
    "DiscretizedStar",
    "ExtendedGraphSpec",
    "GaussNewtonOptions",
    "ModelConfig",
    "MODES",
    "NORMALIZED",
    "OracleSpectrum",
    "PhiSampleSet",
    "PotentialCoeffs",
    "PotentialRecoveryProblem",
    "RecoveryReport",
    "SampleGridSpec",
    "SampledFunction",
    "StarGraphSpec",
    "TopologyOptions",
    "TopologyRecoveryProblem",
    "VERBATIM",
    "active_backend",
    "angles_from_chords",
    "assemble",
    "build_grid",
    "chords_from_angles",
    "compare_phi_zeros",
    "config_fingerprint",
    "kirchhoff_center_sum",
    "kirchhoff_outer_sum",
    "ll33_lhs",
    "ll33_rhs",
    "nonlocal_integral",
    "ode_residual",
    "parity_resonant_grid",
    "phi",
    "phi_chord",
    "phi_chord_derivative",
    "phi_difference",
    "phi_edge",
    "phi_edge_derivative",
    "principal_angles",
    "recover_angles",
    "recover_chords",
    "recover_potentials",
    "sample_phi",
    "set_backend",
    "sine_coefficients",
    "sine_synthesis",
    "sine_transform",
    "spectrum",
    "uniqueness_gap_potential",
    "uniqueness_gap_topology",
]

"""Exception types and warning categories shared across the package."""


class FrozenStarError(Exception):
    """Base class for all frozenstar errors."""


class InvalidGeometry(FrozenStarError):
    """Star-graph data violates a geometric invariant (positivity, angle range, closure)."""


class TriangleViolation(InvalidGeometry):
    """A chord length is incompatible with the two adjacent edge lengths."""


class ClosureViolation(InvalidGeometry):
    """Recovered fan angles do not close up to a full turn.

    Carries the principal-branch angles and the closure defect so callers can
    inspect the partial result instead of losing it.
    """

    def __init__(self, defect, angles=None):
        super().__init__(f"angle sum deviates from full turn by {defect:.3e}")
        self.defect = defect
        self.angles = angles


class OutOfDomain(FrozenStarError):
    """Evaluation point lies outside the edge or chord it was asked on."""


class ModeRequired(FrozenStarError):
    """Operation is only defined in a specific evaluation mode."""


class GridMismatch(FrozenStarError):
    """Two sample sets do not share the same grid and mode."""


class DegenerateGrid(FrozenStarError):
    """Sample grid cannot support the requested solve (all-zero rows, too few points)."""


class ConfigMismatch(FrozenStarError):
    """Two configurations differ in data that the operation requires to be shared."""


class FingerprintMismatch(FrozenStarError):
    """Observed sample file was produced by a configuration incompatible with the declared knowns."""


class RankDeficient(FrozenStarError):
    """Least-squares system is numerically rank deficient."""


class NonPositiveReciprocal(FrozenStarError):
    """Recovered chord reciprocals are not strictly positive; data is inconsistent."""


class AmbiguousSolution(FrozenStarError):
    """Gauss-Newton normal matrix has a near-null direction; solution not unique."""


class MaxItersExceeded(FrozenStarError):
    """Iterative solver hit its iteration budget without converging."""


class MeshTooCoarse(FrozenStarError):
    """Finite-difference mesh has fewer interior points than the scheme needs."""


class EigensolverFailure(FrozenStarError):
    """Dense eigenvalue decomposition failed or did not converge."""


class ConfigParseError(FrozenStarError):
    """Input descriptor (JSON config, grid spec, sample file) is malformed."""


class GridTooCoarse(UserWarning):
    """Sampled function is too coarse for the requested truncation order."""

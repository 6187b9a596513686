"""Exception types shared across the package."""


class AxishellError(Exception):
    """Base class for all package errors."""


class DomainError(AxishellError):
    """Coordinate outside the profile interval."""


class GeometryError(AxishellError):
    """Invalid geometric data (e.g. nonpositive radius)."""


class AdmissibilityError(AxishellError):
    """Azimuthal curvature fails to dominate the meridian curvature."""


class AssemblyError(AxishellError):
    """Invalid coefficient data during finite-element assembly."""


class SolverError(AxishellError):
    """Eigenvalue solver failure (factorization or convergence)."""


class ThicknessError(AxishellError):
    """Half-thickness too large for an injective normal coordinate map."""


class ReductionNotApplicableError(AxishellError):
    """Scalar reduction is not defined for this shell class."""

"""Exception types shared across the package."""


class NPShellError(Exception):
    """Base class for all package-specific errors."""


class GeometryDegenerateError(NPShellError, ValueError):
    """Curve self-intersects or the core/shell separation is violated."""


class AccuracyWarningError(NPShellError, ValueError):
    """Requested evaluation lies outside the quadrature's accuracy regime."""


class ContrastSingularError(NPShellError, ZeroDivisionError):
    """Shell and background permittivities coincide; z(omega) undefined."""


class ExcludedModeError(NPShellError, ValueError):
    """Eigenvalue >= 1/2 has no resonance frequency and is not reported."""


class ResonanceSingularError(NPShellError, ValueError):
    """z(omega) hit an eigenvalue exactly; add loss to regularize."""


class SelfAdjointnessError(NPShellError, RuntimeError):
    """Spectrum came out significantly complex; assembly is inconsistent."""


class DegeneracyResolutionError(NPShellError, RuntimeError):
    """Eigenvalue clusters cannot be separated from distinct families."""


class ConfigError(NPShellError, ValueError):
    """Run configuration file is malformed or inconsistent."""

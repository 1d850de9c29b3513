"""Exception hierarchy shared by all modules."""


class WgSchwarzError(Exception):
    """Base class for every error raised by the package."""


class DomainError(WgSchwarzError, ValueError):
    """An argument lies outside the admissible parameter domain."""


class NumericError(WgSchwarzError, ArithmeticError):
    """A numerical procedure failed to converge or met a singularity."""


class CutoffError(DomainError):
    """The transverse wavenumber sits on (or too close to) a cut-off."""


class PmlResonanceError(NumericError):
    """The truncated-PML symbol denominator vanishes."""


class SingularInterfaceError(NumericError):
    """An interface matrix M^{l,l} is numerically singular."""


class SingularDenominatorError(NumericError):
    """The common denominator of the compact Schwarz block vanishes."""


class ResourceError(WgSchwarzError):
    """A dense computation would exceed the configured size cap."""


class ConfigError(WgSchwarzError, ValueError):
    """Invalid run configuration (unknown key, malformed value, conflict)."""

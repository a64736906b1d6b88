"""Exception types raised by the numerical kernels."""


class EPWavesError(Exception):
    """Base class for all package errors."""


class NoConvergence(EPWavesError):
    """An iterative solver did not reach its tolerance."""


class NoRoot(EPWavesError):
    """A bracketing search found no sign change."""


class PeakonProximity(EPWavesError):
    """The profile density came too close to the peakon density."""


class NonPeriodic(EPWavesError):
    """The integrated profile failed to close up after one period."""


class InsufficientFourier(EPWavesError):
    """Profile Fourier data does not cover the requested truncation."""


class EigensolverFailure(EPWavesError):
    """The dense eigenvalue solver failed."""


class NotFound(EPWavesError):
    """A root search over a window came up empty."""


class ConfigError(EPWavesError):
    """Invalid run configuration."""

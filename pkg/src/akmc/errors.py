"""Shared exception hierarchy."""


class AkmcError(Exception):
    """Base class for all errors raised by this package."""


class NoConvergence(AkmcError):
    """Newton refinement of a stationary point failed to converge."""


class WrongSignature(AkmcError):
    """A stationary point's curvature sign contradicts its expected role."""


class InsideBasin(AkmcError):
    """A point handed to exit classification lies strictly inside the basin."""


class NonFinite(AkmcError):
    """A numerical update produced a non-finite value."""


class MaxStepsExceeded(AkmcError):
    """The integrator consumed its step budget before finishing."""


class MaxCyclesExceeded(AkmcError):
    """The search loop hit its cycle cap before the stopping rule fired."""


class OutOfRange(AkmcError):
    """A query time lies outside the recorded horizon."""


class BadCurvature(AkmcError):
    """Rate evaluation received curvatures with invalid signs."""


class TooFewSamples(AkmcError):
    """A Monte Carlo statistic needs at least two samples."""


class ConfigError(AkmcError):
    """A run configuration failed validation; message carries the field path."""

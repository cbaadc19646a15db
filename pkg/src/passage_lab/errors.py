"""Exception types raised across the lab.

Every error is a ``ValueError`` subclass so callers that only care about
"bad input" can catch one thing; the CLI maps all of them to exit code 2.
"""


class LabError(ValueError):
    """Base class for all validation and degeneracy errors."""


class ProbabilityOutOfRange(LabError):
    pass


class AngleOutOfRange(LabError):
    pass


class DegeneratePostSelection(LabError):
    """No concordant mass: the post-selected world is empty."""


class EmptyBatch(LabError):
    pass


class NoRetainedTrials(LabError):
    """Every simulated trial was discordant."""


class ResolutionTooSmall(LabError):
    pass


class NonInvertiblePole(LabError):
    """A pole of the sphere corresponds to a whole edge of the square."""


class DegenerateLongitude(LabError):
    """The longitude maps to p_s in {0, 1}, leaving p_o undefined."""


class InvalidProbabilityLaw(LabError):
    pass


class InvalidState(LabError):
    pass


class EmptyEnsemble(LabError):
    pass


class NotInMeasurementImage(LabError):
    """The state is not of the form produced by the measurement unitary."""


class InsufficientSamples(LabError):
    pass


class UnderdeterminedFit(LabError):
    pass


class InconsistentFrequencies(LabError):
    pass

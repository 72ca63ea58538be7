"""Exception hierarchy shared by all modules."""


class BuresFormsError(Exception):
    """Base class for every error raised by this package."""


class InvalidIndexError(BuresFormsError, ValueError):
    pass


class DegreeOverflowError(BuresFormsError, ValueError):
    pass


class InvalidMetricError(BuresFormsError, ValueError):
    pass


class DegenerateStateError(BuresFormsError, ValueError):
    """Raised when eigenvalues vanish or collide beyond the configured gap."""


class CalibrationError(BuresFormsError):
    """No unique generator sequence reproduces the calibration fixtures.

    ``deviations`` maps a human-readable candidate label to its maximum
    entrywise deviation from the fixture matrices.
    """

    def __init__(self, message, deviations=None):
        super().__init__(message)
        self.deviations = dict(deviations or {})


class SolverError(BuresFormsError):
    """Base for failures of the duality / spectral solvers."""


class DegenerateDualityError(SolverError):
    pass


class PinConventionError(SolverError):
    pass


class InvalidGramError(SolverError):
    pass


class PatternError(SolverError):
    pass


class StencilError(BuresFormsError):
    pass


class PoleError(BuresFormsError, ValueError):
    pass

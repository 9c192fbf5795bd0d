"""Exception types shared across the package.

Validation problems (bad bounds, shape mismatches, rejected parameters) are
plain ``ValueError``s unless a caller needs to tell them apart; the classes
below mark outcomes that sweep cells and the CLI handle specially.
"""


class ComputationError(Exception):
    """A well-posed request whose numerical evaluation failed or is undefined."""


class NoReflectionError(ComputationError):
    """The Schur function is ~0 on the whole contour; the winding is undefined."""


class PoleOnContourError(ComputationError):
    """A Möbius denominator vanished during the Schur recursion (|γ|=1 alignment)."""


class IndeterminateRootError(ComputationError):
    """The winding oracle found a polynomial root too close to the unit circle."""


class SolverConvergenceError(ComputationError):
    """Eigen-residuals exceeded tolerance; carries the offending configuration."""

    def __init__(self, message, config=None):
        super().__init__(message)
        self.config = config


class BoundaryContaminationError(ValueError):
    """Requested time window is long enough for boundary reflections to matter."""

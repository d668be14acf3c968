"""Exception hierarchy shared across the package.

``SimulationError`` covers numerical and physical failures; the CLI maps it
to exit code 3, keeping it distinct from usage errors (exit code 2).
"""


class SimulationError(Exception):
    """A computation failed on physical or numerical grounds."""


class TruncationError(SimulationError):
    """The Fock ladder is too short: bad ``n_max`` or population leaking
    into the top retained level."""


class StiffnessError(SimulationError):
    """The adaptive step size underflowed; reports where it happened."""

    def __init__(self, message, t=None, rho_norm=None):
        super().__init__(message)
        self.t = t
        self.rho_norm = rho_norm


class DiagnosticsError(SimulationError):
    """An eigensolver or optimizer failed or returned inconsistent output."""


class ShapeError(SimulationError):
    """Operator or state dimensions do not match the Hilbert space."""

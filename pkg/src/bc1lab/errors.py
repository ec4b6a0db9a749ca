"""Exception types shared across the package."""


class LabError(Exception):
    """Base class for all bc1lab errors."""


class TorusError(LabError, ValueError):
    """Modular parameter outside the supported half-plane."""


class NonConvergentError(LabError, ArithmeticError):
    """Theta series hit the term cap before reaching tolerance."""


class NearPoleError(LabError, ArithmeticError):
    """An argument lies within the pole tolerance of a lattice point."""


class SingularError(LabError, ArithmeticError):
    """A gauge matrix is numerically singular."""


class ZeroDenominatorError(LabError, ArithmeticError):
    """A spectral function used as a denominator vanishes."""


class ZeroCouplingError(LabError, ValueError):
    """A coupling that must be nonzero vanishes."""


class PoleApproachError(LabError, ArithmeticError):
    """A trajectory came within the pole tolerance during integration."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class ConfigError(LabError, ValueError):
    """Invalid run configuration."""

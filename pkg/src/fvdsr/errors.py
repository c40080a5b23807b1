"""Exception types shared across the library."""

from __future__ import annotations


class FvdsrError(Exception):
    """Base class for all library-specific errors."""


class NoRealBranch(FvdsrError):
    """Raised when a map inversion has no real root on the SR-connected branch."""

    def __init__(self, target: float, detail: str = ""):
        self.target = target
        msg = f"no real SR-connected branch for target {target!r}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class NoBracket(FvdsrError):
    """Raised when a root bracket cannot be established inside the valid domain."""


class NonpositiveMass(FvdsrError):
    pass


class NonpositiveFrequency(FvdsrError):
    pass


class WrongModelKind(FvdsrError):
    """Operation called with a deformation model kind it does not support."""


class InsufficientRange(FvdsrError):
    """Asymptotic diagnostics requested on too short a level range."""


class GridTooCoarse(FvdsrError):
    """Finite-difference grid too coarse for the requested accuracy."""


class GridTooNarrow(FvdsrError):
    """Finite-difference grid does not contain the requested modes."""


class StepSizeTooLarge(FvdsrError):
    """ODE integrator failed its internal step-halving consistency check."""


class UsageError(FvdsrError):
    """Bad command line or configuration input."""


class ConflictError(UsageError):
    """Configuration key incompatible with the requested command."""


class PerturbativeWindowWarning(UserWarning):
    """First-order shift evaluated outside the trusted perturbative window."""

"""Exception hierarchy shared by every module."""


class KeplerError(ValueError):
    """Base class; carries a human-readable reason naming the offending value."""


class SingularPosition(KeplerError):
    """The field was evaluated at (or integration approached) the origin."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class DegenerateOrbit(KeplerError):
    """Zero angular momentum, zero velocity, or a vector with no in-plane part."""


class NotBound(KeplerError):
    """The operation needs H < 0."""

    def __init__(self, energy: float):
        super().__init__(f"orbit is not bound: H={energy!r} (need H < 0)")
        self.energy = energy


class InsufficientCoverage(KeplerError):
    """The trajectory does not complete a full revolution."""


class CollinearPoints(KeplerError):
    pass


class ParallelLines(KeplerError):
    pass


class DegenerateConfiguration(KeplerError):
    """Coincident points where distinct points are required."""

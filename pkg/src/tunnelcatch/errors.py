"""Exception hierarchy shared by all tunnelcatch modules."""


class TunnelCatchError(Exception):
    """Base class for every error raised by the package."""


class NumericalError(TunnelCatchError):
    """A solver, root finder or integrator could not deliver a result."""


class NotFoundError(TunnelCatchError):
    """A search completed normally but found nothing to report."""


class InputError(TunnelCatchError, ValueError):
    """Invalid user-supplied parameters or scenario data."""


EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3
EXIT_NOT_FOUND = 4


def exit_code(exc):
    """Process exit status for an exception raised by the package."""
    if isinstance(exc, InputError):
        return EXIT_INPUT
    if isinstance(exc, NotFoundError):
        return EXIT_NOT_FOUND
    return EXIT_NUMERIC


# model
class NoTurningPoint(InputError):
    pass


class NonMonotoneSlope(NumericalError):
    pass


# squarewell
class RootBracketFailure(NumericalError):
    pass


class EnergyOutOfRange(InputError):
    pass


class NoDepthRoot(NumericalError):
    pass


# eigensolve
class NotEnoughBoundStates(NumericalError):
    pass


# semiclassic
class BarrierPierced(NumericalError):
    pass


class InvalidTwoLevel(InputError):
    """The barrier center lies inside a well support; two-level formulas do not apply."""


class NonPositiveDelta(InputError):
    pass


class GridMismatch(InputError):
    pass


# dynamics
class StabilityBudgetExceeded(NumericalError):
    pass


# scanner
class ValidityViolated(InputError):
    """A sampled probing well is too close to the physical well."""


class NotFirstPeak(InputError):
    pass


class NoPeakFound(NotFoundError):
    pass


class ScenarioError(InputError):
    pass

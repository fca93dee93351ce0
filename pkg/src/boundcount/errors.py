"""Exception hierarchy shared by the numerical modules."""


class BoundCountError(Exception):
    """Base class for all errors raised by boundcount."""


class PotentialError(BoundCountError, ValueError):
    """Invalid potential parameters, samples or evaluation point."""


class SingularityError(PotentialError):
    """Evaluation requested at a point where the potential is singular."""


class QuadratureError(BoundCountError):
    """Adaptive integration failed to converge within its budget."""


class NotIntegrableError(QuadratureError):
    """The requested moment diverges at one of its endpoints."""


class NoBoundStatesError(BoundCountError):
    """The necessary condition for a bound state fails, so p and q are undefined."""


class RootNotFoundError(BoundCountError):
    """No sign change of a defining equation was found on the scan grid."""

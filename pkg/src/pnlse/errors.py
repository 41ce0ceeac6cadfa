"""Exception hierarchy shared by all solvers."""


class PnlseError(Exception):
    """Base class for solver failures."""


class DivergentRegime(PnlseError):
    """sigma = +1 with k >= 1: the decaying transcendent does not exist."""


class BlowUp(PnlseError):
    """The integrated solution exceeded the blow-up threshold."""


class DomainError(PnlseError, ValueError):
    pass


class OutOfRange(PnlseError, ValueError):
    pass


class NoTurningPoint(PnlseError):
    pass


class SignChange(PnlseError, ValueError):
    """q^2 changes sign inside an action-integral interval."""


class ForbiddenWindow(PnlseError, ValueError):
    """mu lies in (-|w|, |w|), where the constant-potential map is undefined."""


class DegeneratePhi(PnlseError):
    pass


class NoRoot(PnlseError):
    pass


class NoConvergence(PnlseError):
    pass


class WrongNodeCount(PnlseError):
    pass


class ConfigError(PnlseError, ValueError):
    pass

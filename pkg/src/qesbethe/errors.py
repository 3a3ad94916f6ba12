"""Exception hierarchy. Every error raised by the package derives from QesError."""


class QesError(Exception):
    pass


class DegenerateScalingError(QesError):
    """b2 = 0: the exponential gauge factor of the spheroidal form degenerates."""


class ComplexEquationError(QesError):
    """Spheroidal parameters off the imaginary axis have no real basic equation."""


class SingularConfigurationError(QesError):
    """Coincident roots, or a root sitting on a singular point."""


class NotQesError(QesError):
    """c1 != -n*b2 for the requested degree."""


class LeakageError(NotQesError):
    """The monomial space of degree n is not invariant under H."""

    def __init__(self, message: str, leakage: float):
        super().__init__(message)
        self.leakage = leakage


class InconsistentFamilyError(QesError):
    pass


class DegreeDeflationError(QesError):
    """Polynomial with a vanishing leading coefficient."""


class ModelError(QesError):
    """Invalid model parameters or an unknown free parameter."""


class DomainError(QesError):
    pass


class EigenSolverError(QesError):
    pass


class ConfigError(QesError):
    pass

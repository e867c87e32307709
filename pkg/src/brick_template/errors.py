"""Exception types raised by the package."""


class BrickTemplateError(Exception):
    """Base class for all package errors."""


class InvalidGeometryError(BrickTemplateError, ValueError):
    pass


class SingularMaterialError(BrickTemplateError, ValueError):
    pass


class InvalidPointError(BrickTemplateError, ValueError):
    pass


class FactorizationError(BrickTemplateError, ArithmeticError):
    """Raised when a matrix expected to be SPD fails Cholesky factorization."""

    def __init__(self, message, minor=None):
        super().__init__(message)
        self.minor = minor


class IncompatibleMatricesError(BrickTemplateError, ValueError):
    pass


class DecompositionInconsistencyError(BrickTemplateError, ArithmeticError):
    pass


class InvalidParameterError(BrickTemplateError, ValueError):
    pass


class InvalidPlaneError(BrickTemplateError, ValueError):
    pass


class DegenerateEnergyError(BrickTemplateError, ArithmeticError):
    pass

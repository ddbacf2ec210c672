class BouncerError(Exception):
    exit_code = 1


class ConfigError(BouncerError):
    exit_code = 2


class DomainError(BouncerError, ValueError):
    exit_code = 2


class ValidityError(BouncerError):
    exit_code = 3


class ConvergenceError(BouncerError):
    exit_code = 4

    def __init__(self, message: str, iterations: int | None = None) -> None:
        super().__init__(message if iterations is None else f"{message} (after {iterations} iterations)")
        self.iterations = iterations


class QuadratureError(ConvergenceError):
    pass


class InternalConsistencyError(BouncerError):
    exit_code = 4


class VerificationFailure(BouncerError):
    exit_code = 5

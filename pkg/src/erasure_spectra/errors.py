"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A parameter lies outside its documented domain."""


class InvalidDimensionError(InvalidParameterError):
    """A matrix or mask dimension is impossible or inconsistent."""


class DomainError(ValueError):
    """An evaluation point lies outside the function's domain."""


class PoleError(DomainError):
    """Evaluation requested at, or mapped onto, a pole."""


class NumericsError(ArithmeticError):
    """An internal numerical guard tripped; results would be unreliable."""


class RetryExhaustedError(RuntimeError):
    """A bounded redraw loop ran out of attempts."""


class SampleFormatError(ValueError):
    """A samples file does not conform to the expected schema."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line

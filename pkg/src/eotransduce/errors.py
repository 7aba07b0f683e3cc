class ValidationError(ValueError):
    """An input value is outside the model's domain.

    ``field`` names the offending parameter or config key.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class NumericalError(ArithmeticError):
    """A computation produced an undefined or ill-conditioned result."""

"""Exception types shared across the library."""


class ShapeError(ValueError):
    """Image/mask dimensions do not line up."""


class ConfigError(ValueError):
    """Invalid parameter range or malformed configuration."""


class NumericError(RuntimeError):
    """A numeric routine could not produce a usable result."""


class ConvergenceError(NumericError):
    """Iterative solver ran out of iterations; carries the final relative residual."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual

    def __reduce__(self):
        return (type(self), (self.args[0], self.residual))


class MaskGenError(NumericError):
    """Random mask generation could not satisfy the coverage constraint."""

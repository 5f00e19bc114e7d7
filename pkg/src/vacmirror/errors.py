"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A physical parameter is out of its allowed range.

    ``field`` names the offending parameter so callers (the CLI in
    particular) can report it precisely.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not converge within its subdivision cap."""


class SweepSpecError(ValueError):
    """Malformed sweep specification, optionally tied to a source line."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class GridPointError(Exception):
    """Evaluation failed at one sweep grid point."""

    def __init__(self, coordinates: dict, cause: Exception):
        self.coordinates = coordinates
        self.cause = cause
        super().__init__(coordinates, cause)

    def __str__(self):
        where = ", ".join(f"{k}={v!r}" for k, v in self.coordinates.items())
        return f"at {where}: {self.cause}"

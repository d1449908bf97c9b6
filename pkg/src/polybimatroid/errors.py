class InfeasibleError(Exception):
    """No biset satisfies the constraints."""


class ReadingsError(ValueError):
    """Malformed or incomplete readings file."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)

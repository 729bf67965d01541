"""Exception types shared across the package."""


class AlgebraError(ValueError):
    """Base class for every error raised by conicbundle."""


class FieldError(AlgebraError):
    """Invalid field specification or an operation a field does not support."""


class ParseError(AlgebraError):
    """Malformed polynomial or field-element text.

    ``offset`` is the 0-based character position where parsing failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class GeometryError(AlgebraError):
    """A geometric precondition failed.

    ``hypothesis`` names the violated condition in a short machine-readable
    form (``"p in C"``, ``"simple branching"``, ``"rationality"``, ...).
    """

    def __init__(self, message: str, hypothesis: str, **info):
        super().__init__(message)
        self.hypothesis = hypothesis
        self.info = info

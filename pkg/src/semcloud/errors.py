"""Exception types shared across the package."""


class UnknownTagError(KeyError):
    """Raised when an operation references a tag the corpus does not contain."""

    def __init__(self, tag: str):
        super().__init__(tag)
        self.tag = tag

    def __str__(self) -> str:
        return f"unknown tag: {self.tag!r}"


class MalformedRecordError(ValueError):
    """A single input record could not be parsed as an assignment."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason

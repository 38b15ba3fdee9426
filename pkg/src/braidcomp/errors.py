"""Exception hierarchy. Every domain failure derives from BraidError so the CLI
can map it to exit code 1."""


class BraidError(Exception):
    pass


class DimensionError(BraidError, ValueError):
    pass


class AlphabetError(BraidError, ValueError):
    pass


class NonUnitaryError(BraidError, ValueError):
    pass


class ProgramParseError(BraidError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ProgramRangeError(ProgramParseError):
    pass


class ModelError(BraidError, ValueError):
    pass


class AssignmentError(BraidError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""

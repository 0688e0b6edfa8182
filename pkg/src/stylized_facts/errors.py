"""Exception hierarchy shared by every module of the package."""


class StylizedFactsError(Exception):
    """Base class. ``exit_code`` is what the command-line front end returns."""

    exit_code = 3


class InputError(StylizedFactsError):
    """A file could not be read or parsed. ``line`` is 1-based when known."""

    exit_code = 2

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyInput(StylizedFactsError):
    pass


class InvalidPrice(InputError):
    pass


class DegenerateSeries(StylizedFactsError):
    pass


class InsufficientData(StylizedFactsError):
    pass


class InsufficientTail(InsufficientData):
    pass


class InvalidSpec(StylizedFactsError):
    exit_code = 4


class ConfigError(StylizedFactsError):
    exit_code = 4

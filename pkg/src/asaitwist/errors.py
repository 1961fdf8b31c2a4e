"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: syntax errors -> 2, semantic /
validation failures -> 3, resource caps -> 4, internal inconsistency -> 5.
"""


class AsaitwistError(Exception):
    pass


class ParameterError(AsaitwistError):
    """A numeric argument is out of contract (q not a power of p, ...)."""


class IncompatibleFields(AsaitwistError):
    """Operation between field levels whose degrees do not divide."""


class CapExceeded(AsaitwistError):
    """A configured resource limit (group order, extension degree) was hit."""


class GroupLawSyntaxError(AsaitwistError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class GroupLawSemanticError(AsaitwistError):
    def __init__(self, message: str, coordinate: int | None = None):
        super().__init__(message)
        self.coordinate = coordinate


class InternalInconsistencyError(AsaitwistError):
    """An identity that must hold by construction failed: always a bug."""

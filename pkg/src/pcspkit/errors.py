"""Exception hierarchy shared by every module."""


class PcspError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(PcspError, ValueError):
    """An argument violates an operation's precondition."""


class StructuralError(PcspError, ValueError):
    """Structures, instances or chains do not fit together."""


class TotalityError(PcspError, ValueError):
    """A strict presentation is undefined on some input."""


class InvariantError(PcspError, AssertionError):
    """An internal consistency check failed. This is a bug or a counterexample."""


class CapacityError(PcspError, RuntimeError):
    """An exhaustive search would exceed its configured cap."""


class ConstructionError(PcspError, RuntimeError):
    """A builder produced an object that failed its own verification."""


class SchemaError(PcspError, ValueError):
    """A JSON artifact does not match its schema.

    ``path`` names the offending field, e.g. ``constraints[2].scope``.
    """

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
        self.message = message

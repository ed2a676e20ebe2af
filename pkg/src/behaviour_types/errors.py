"""Exception hierarchy shared by every module of the toolkit."""


class BehaviourTypeError(Exception):
    """Base class for all toolkit errors."""


class InstanceMismatchError(BehaviourTypeError, TypeError):
    """Behaviours of different instances (or different functors) were mixed."""


class ArityError(BehaviourTypeError, ValueError):
    pass


class PreconditionError(BehaviourTypeError, ValueError):
    pass


class ShapeError(BehaviourTypeError, ValueError):
    """A functor value does not match the shape of its functor."""


class ResourceLimitError(BehaviourTypeError, RuntimeError):
    """An operation would exceed a configured size bound."""


class CertificationError(BehaviourTypeError, AssertionError):
    """An internally computed certificate failed its own check."""


class FormatError(BehaviourTypeError, ValueError):
    """Syntax or semantic error in the textual format, with a position."""

    def __init__(self, message, line=0, column=0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)

"""Exception hierarchy shared by all knotdance modules."""


class KnotDanceError(Exception):
    """Base class for every error raised by this package."""


class CodeSyntaxError(KnotDanceError, ValueError):
    """A token in a Gauss code or braid word could not be parsed."""

    def __init__(self, message: str, token: str | None = None):
        super().__init__(message)
        self.token = token


class ValidationError(KnotDanceError, ValueError):
    """A code parsed but violates the crossing pairing rules."""

    def __init__(self, message: str, crossing: int | None = None):
        super().__init__(message)
        self.crossing = crossing


class InvalidConfiguration(KnotDanceError, ValueError):
    pass


class InvalidTrace(KnotDanceError, ValueError):
    pass


class Infeasible(KnotDanceError):
    """No configuration of any size dances the code under the rule."""


class ResourceLimit(KnotDanceError):
    pass


class PreconditionViolated(KnotDanceError, ValueError):
    pass


class IndexOutOfRange(KnotDanceError, ValueError):
    pass


class NotAKnot(KnotDanceError, ValueError):
    """The braid closure has more than one component."""

    def __init__(self, message: str, components: int):
        super().__init__(message)
        self.components = components

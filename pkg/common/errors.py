"""
Exception hierarchy shared by all modules.
"""


class FktError(Exception):
    """Base class for every error raised by the toolkit."""


class MalformedInput(FktError):
    """Space JSON or CLI arguments could not be parsed."""


class CycleDetected(FktError):
    """The generating relations do not close to a partial order (not T0)."""


class NotConnected(FktError):
    pass


class NotLocallyClosed(FktError):
    pass


class IsTypeA(FktError):
    """A witness was requested for an accordion space."""


class NotTypeA(FktError):
    pass


class UnsupportedSpace(FktError):
    """No certified presentation of NT*(X) exists for this space."""


class ObjectMismatch(FktError):
    """Morphisms are not composable or belong to different objects."""


class NotIndecomposable(FktError):
    pass


class PresentationDidNotConverge(FktError):
    """Path enumeration exceeded the configured word length or symbol limit."""


class PipelinePreconditionFailed(FktError):
    """One of the three assumptions of the counterexample construction broke."""

    def __init__(self, assumption: str, detail: str = ""):
        self.assumption = assumption
        self.detail = detail
        message = f"assumption '{assumption}' failed"
        if detail:
            message += f": {detail}"
        super().__init__(message)

"""Exception hierarchy shared by every module."""


class CCPairError(Exception):
    """Base class for all errors raised by ccpair."""


class DimensionError(CCPairError, ValueError):
    pass


class ShapeError(CCPairError, ValueError):
    pass


class DegenerateInput(CCPairError, ValueError):
    pass


class InvalidPair(DegenerateInput):
    """The two matrices do not define a genuine norm on C^2."""


class NotUnitary(CCPairError, ValueError):
    pass


class NotApplicable(CCPairError):
    """The requested construction does not exist for this input."""


class ParseError(CCPairError, ValueError):
    pass


class SearchFailure(CCPairError, RuntimeError):
    """Raised when the counterexample search cannot produce a certificate.

    ``stage`` names the step that failed so callers can report it.
    """

    def __init__(self, message: str, stage: str = "search"):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage

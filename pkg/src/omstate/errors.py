"""Exception hierarchy shared by every module."""


class OmstateError(Exception):
    """Base class; ``witness`` holds the offending element indices, if any."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidSpec(OmstateError, ValueError):
    pass


class NotALattice(OmstateError):
    pass


class NotInvolution(OmstateError):
    pass


class NotOrthocomplemented(OmstateError):
    pass


class NotOrthomodular(OmstateError):
    pass


class ResourceCap(OmstateError):
    """Raised when a search or closure would exceed a configured cap."""

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress


class CarrierMismatch(OmstateError):
    pass


class NotAPrestate(OmstateError):
    pass


class NotAStarPrestate(OmstateError):
    pass


class NotAnIeLattice(OmstateError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotAnIeStarSemigroup(OmstateError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotResiduated(OmstateError):
    pass


class SignatureMismatch(OmstateError):
    pass


class DerivedOpOnNonProjection(OmstateError):
    pass


class NotASublattice(OmstateError):
    pass


class NotAHomomorphism(OmstateError):
    pass


class NotSurjective(OmstateError):
    pass


class TermSyntaxError(OmstateError, SyntaxError):
    """Parse failure; ``position`` is the 0-based offset into the source text."""

    def __init__(self, message, text, position):
        OmstateError.__init__(self, f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position

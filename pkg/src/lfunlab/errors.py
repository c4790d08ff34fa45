"""Exception types shared across the library."""


class LfunlabError(Exception):
    """Base class for all lfunlab errors."""


class PoleError(LfunlabError):
    """Evaluation requested at (or numerically indistinguishable from) a pole."""


class ConvergenceError(LfunlabError):
    """An iteration (series, continued fraction, ...) failed to converge."""


class TailBoundError(LfunlabError):
    """A truncation cutoff is too small for the requested tolerance."""


class ContourError(LfunlabError):
    """A zero sits on (or too close to) an integration contour."""


class WindingError(LfunlabError):
    """A winding-number computation did not settle on an integer."""


class ValidationError(LfunlabError):
    """Input data violates a structural invariant (bad file, bad coefficients)."""


class SearchCapError(LfunlabError):
    """A bounded search exhausted its cap without finding what was asked."""

"""Exception hierarchy shared by every gfscalc module."""


class GfsError(Exception):
    """Base class for all gfscalc errors."""


class SingularResolvent(GfsError):
    """``lambda I - T`` is singular or too ill-conditioned to solve."""

    def __init__(self, message, lam=None, rcond=None):
        super().__init__(message)
        self.lam = lam
        self.rcond = rcond


class UnsupportedExponent(GfsError):
    """Requested an l^p exponent outside [1, inf)."""


class NonConvergence(GfsError):
    """An iterative method or adaptive rule did not reach its tolerance."""


class RadiusExceeded(GfsError):
    """Evaluation radius lies outside the certified disk of a series."""


class NodeEvaluationFailure(GfsError):
    """A quadrature integrand returned non-finite values."""


class FrequencyOutOfRange(GfsError):
    """Fourier frequency cannot be resolved by the circle rule."""


class UnsupportedM(GfsError):
    """Derivative order not supported by the estimator."""


class SpectrumOutsideDisk(GfsError):
    """Spectral radius exceeds one where the closed unit disk is required."""


class InvalidSpec(GfsError):
    """Operator or configuration specification is malformed."""


class DecompositionMismatch(GfsError):
    """A Peller-algebra decomposition does not reproduce its polynomial."""

"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes):

* :class:`InputError` -- the input itself is malformed (bad shape, bad file,
  non-finite entries, mismatched sizes).
* :class:`RefusalError` -- the input is well formed but the mathematical
  preconditions of a construction are not met (not positive definite,
  numerically singular, truncation too coarse, ...).
"""


class BandInvError(Exception):
    """Base class for all errors raised by this package."""


class InputError(BandInvError, ValueError):
    pass


class InvalidBandwidthError(InputError):
    pass


class ShapeMismatchError(InputError):
    pass


class RefusalError(BandInvError, ArithmeticError):
    pass


class NotSymmetricError(RefusalError):
    pass


class NotPositiveDefiniteError(RefusalError):
    pass


class SingularMatrixError(RefusalError):
    def __init__(self, message, sigma_min=None, sigma_max=None):
        super().__init__(message)
        self.sigma_min = sigma_min
        self.sigma_max = sigma_max


class CertificateRefusedError(RefusalError):
    pass


class TruncationTooCoarseError(RefusalError):
    """Raised when ``||A - B_k(A)||`` is too large for the requested ``k``.

    ``min_admissible_k`` is the smallest bandwidth that would have been
    accepted, or ``None`` if no bandwidth below ``n`` works.
    """

    def __init__(self, message, k, epsilon, threshold, min_admissible_k=None):
        super().__init__(message)
        self.k = k
        self.epsilon = epsilon
        self.threshold = threshold
        self.min_admissible_k = min_admissible_k


class DependenceDegeneracyError(RefusalError):
    pass

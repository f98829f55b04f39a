"""Conservative bounds on extreme eigenvalues / singular values.

Every certificate downstream consumes a :class:`SpectralBounds` with
``m_lo <= m = 1/||A^{-1}||`` and ``M_hi >= M = ||A||``.  Replacing ``(m, M)``
by ``(m_lo, M_hi)`` keeps all the geometric error bounds valid because they
are monotone in the condition number.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InputError, NotPositiveDefiniteError, NotSymmetricError, SingularMatrixError
from .matcore import _require_square, as_array

DEFAULT_SLACK = 1e-8
SYMMETRY_TOL = 1e-12
SINGULAR_RTOL = 1e-12


@dataclass(frozen=True)
class SpectralBounds:
    m_lo: float
    M_hi: float
    source: str = "user"

    def __post_init__(self):
        m, M = float(self.m_lo), float(self.M_hi)
        if not (np.isfinite(m) and np.isfinite(M)):
            raise InputError("spectral bounds must be finite")
        if not 0.0 < m <= M:
            raise InputError(f"spectral bounds need 0 < m_lo <= M_hi, got m_lo={m}, M_hi={M}")
        object.__setattr__(self, "m_lo", m)
        object.__setattr__(self, "M_hi", M)

    @property
    def kappa(self):
        return self.M_hi / self.m_lo

    @property
    def rigorous(self):
        """True only for caller-supplied bounds; estimated ones are floating-point conservative."""
        return self.source == "user"

    def as_dict(self):
        return {"m_lo": self.m_lo, "M_hi": self.M_hi, "kappa": self.kappa, "source": self.source}


def user_bounds(m_lo, M_hi):
    return SpectralBounds(m_lo, M_hi, "user")


def check_symmetric(A, tol=SYMMETRY_TOL):
    A = as_array(A)
    _require_square(A)
    scale = max(float(np.max(np.abs(A))), np.finfo(float).tiny)
    asym = float(np.max(np.abs(A - A.T)))
    if asym > tol * scale:
        raise NotSymmetricError(f"matrix is not symmetric (max |A - A^T| = {asym:.3e})")
    return A


def spd_bounds(A, slack=DEFAULT_SLACK):
    """Eigenvalue bracket for a symmetric positive definite matrix.

    Returns ``m_lo = lambda_min (1 - slack)`` and ``M_hi = lambda_max (1 + slack)``
    from a dense symmetric eigensolve.
    """
    A = check_symmetric(A)
    if not 0.0 <= slack < 1.0:
        raise InputError("slack must lie in [0, 1)")
    w = scipy.linalg.eigvalsh(0.5 * (A + A.T))
    lmin, lmax = float(w[0]), float(w[-1])
    if lmin <= 0.0:
        raise NotPositiveDefiniteError(f"matrix is not positive definite (lambda_min = {lmin:.3e})")
    return SpectralBounds(lmin * (1.0 - slack), lmax * (1.0 + slack), "estimated")


def singular_bounds(A, slack=DEFAULT_SLACK):
    """Singular-value bracket ``m_lo <= sigma_min(A)``, ``M_hi >= sigma_max(A)``."""
    A = as_array(A)
    _require_square(A)
    if not 0.0 <= slack < 1.0:
        raise InputError("slack must lie in [0, 1)")
    s = scipy.linalg.svdvals(A)
    smax, smin = float(s[0]), float(s[-1])
    if smax == 0.0 or smin <= SINGULAR_RTOL * smax:
        raise SingularMatrixError(
            f"matrix is numerically singular (sigma_min={smin:.3e}, sigma_max={smax:.3e})",
            sigma_min=smin, sigma_max=smax)
    return SpectralBounds(smin * (1.0 - slack), smax * (1.0 + slack), "estimated")

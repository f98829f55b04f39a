"""Banded approximate inverses with closed-form error certificates.

Three constructions, in increasing generality:

``neumann_spd``
    ``A`` banded, symmetric positive definite.  With ``gamma = 2/(M + m)``,
    ``B_n = gamma * sum_{j<=n} (I - gamma A)^j`` lies in ``BO_{nk}`` and
    ``||A^{-1} - B_n|| <= (1/m) ((kappa-1)/(kappa+1))^(n+1)``.

``neumann_general``
    ``A`` banded and invertible.  Apply the above to ``A^T A`` and multiply by
    ``A^T`` on the right; the result lies in ``BO_{3nk}`` and the error is at
    most ``(kappa^2/M) ((kappa^2-1)/(kappa^2+1))^(n+1)``.

``bdo_inverse``
    ``A`` band-dominated.  Truncate to ``A_k = B_k(A)``, run the general
    construction on ``A_k`` and add the perturbation error of replacing
    ``A^{-1}`` with ``A_k^{-1}``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CertificateRefusedError, InputError, TruncationTooCoarseError
from .matcore import BandedMatrix, as_array, band_truncate, op_norm
from .spectral import SpectralBounds, check_symmetric, singular_bounds, spd_bounds

BOUND_RTOL = 1e-10


@dataclass(frozen=True)
class InverseCertificate:
    construction: str
    approx: BandedMatrix
    band_width: int
    terms: int
    gamma: float
    bounds_used: SpectralBounds
    error_bound: float
    extra: dict = field(default_factory=dict)

    @property
    def label(self):
        return "rigorous" if self.bounds_used.rigorous else "floating-point conservative"

    def as_dict(self):
        out = {
            "construction": self.construction,
            "n": self.terms,
            "k": self.extra.get("k", self.extra.get("input_k")),
            "band_width": self.band_width,
            "stored_bandwidth": self.approx.k,
            "gamma": self.gamma,
            "m_lo": self.bounds_used.m_lo,
            "M_hi": self.bounds_used.M_hi,
            "kappa": self.bounds_used.kappa,
            "error_bound": self.error_bound,
            "label": self.label,
        }
        for key, val in self.extra.items():
            out.setdefault(key, val)
        return out


def spd_error_bound(bounds, n):
    """``(1/m) ((kappa-1)/(kappa+1))^(n+1)``."""
    q = (bounds.kappa - 1.0) / (bounds.kappa + 1.0)
    return q ** (n + 1) / bounds.m_lo


def general_error_bound(bounds, n):
    """``(kappa^2/M) ((kappa^2-1)/(kappa^2+1))^(n+1)``."""
    k2 = bounds.kappa ** 2
    return (k2 / bounds.M_hi) * ((k2 - 1.0) / (k2 + 1.0)) ** (n + 1)


def _as_banded(A):
    if isinstance(A, BandedMatrix):
        return A
    A = as_array(A)
    n = A.shape[0]
    i, j = np.nonzero(A)
    k = int(np.max(np.abs(i - j))) if i.size else 0
    return BandedMatrix.from_dense(A, min(k, n - 1))


def _check_terms(n):
    if int(n) != n or n < 0:
        raise InputError(f"number of terms must be a non-negative integer, got {n}")
    return int(n)


def _check_bounds_against(A, bounds, singular):
    """Refuse caller-supplied bounds that visibly fail to bracket ``A``'s spectrum."""
    M = op_norm(A)
    if bounds.M_hi < M * (1.0 - BOUND_RTOL):
        raise CertificateRefusedError(
            f"M_hi={bounds.M_hi!r} is below ||A||={M!r}; certificate refused")
    dense = as_array(A)
    if singular:
        s = np.linalg.svd(dense, compute_uv=False)
        m = float(s[-1])
    else:
        m = float(np.linalg.eigvalsh(0.5 * (dense + dense.T))[0])
    if bounds.m_lo > m * (1.0 + BOUND_RTOL):
        raise CertificateRefusedError(
            f"m_lo={bounds.m_lo!r} exceeds the smallest {'singular value' if singular else 'eigenvalue'} "
            f"{m!r}; certificate refused")


def _neumann_sum(T, n, size):
    """``sum_{j=0}^n T^j`` by Horner's rule, keeping the band tight."""
    S = BandedMatrix.identity(size)
    for _ in range(n):
        S = BandedMatrix.identity(size) + T @ S
    return S


def neumann_spd(A, n, bounds=None):
    """Banded approximation of ``A^{-1}`` for symmetric positive definite banded ``A``.

    Parameters
    ----------
    A : BandedMatrix or ndarray
        SPD matrix; dense input is stored with its actual bandwidth.
    n : int
        Highest power in the truncated Neumann series.
    bounds : SpectralBounds, optional
        Eigenvalue bracket.  Estimated with :func:`spd_bounds` when omitted;
        otherwise checked against ``A`` and refused if inconsistent.
    """
    n = _check_terms(n)
    A = _as_banded(A)
    check_symmetric(A)
    if bounds is None:
        bounds = spd_bounds(A)
    else:
        _check_bounds_against(A, bounds, singular=False)
    size, k = A.n, A.k
    gamma = 2.0 / (bounds.M_hi + bounds.m_lo)
    T = BandedMatrix.identity(size) - gamma * A
    S = _neumann_sum(T, n, size)
    # exact symmetry; the average is no farther from A^{-1} than S itself
    approx = gamma * (0.5 * (S + S.T))
    return InverseCertificate(
        construction="spd",
        approx=approx,
        band_width=n * k,
        terms=n,
        gamma=gamma,
        bounds_used=bounds,
        error_bound=spd_error_bound(bounds, n),
        extra={"input_k": k},
    )


def neumann_general(A, n, bounds=None):
    """Banded approximation of ``A^{-1}`` for invertible banded ``A``, via ``A^T A``.

    ``bounds`` brackets the singular values of ``A`` (see
    :func:`singular_bounds`).  The approximant is stored with its true
    bandwidth ``(2n+1)k``; the certificate records ``3nk``.
    """
    n = _check_terms(n)
    A = _as_banded(A)
    if bounds is None:
        bounds = singular_bounds(A)
    else:
        _check_bounds_against(A, bounds, singular=True)
    size, k = A.n, A.k
    At = A.T
    gamma = 2.0 / (bounds.M_hi ** 2 + bounds.m_lo ** 2)
    T = BandedMatrix.identity(size) - gamma * (At @ A)
    approx = gamma * (_neumann_sum(T, n, size) @ At)
    return InverseCertificate(
        construction="general",
        approx=approx,
        band_width=_general_width(n, k),
        terms=n,
        gamma=gamma,
        bounds_used=bounds,
        error_bound=general_error_bound(bounds, n),
        extra={"input_k": k},
    )


def _general_width(n, k):
    # 3nk covers the true width (2n+1)k once n >= 1; at n = 0 the approximant is gamma A^T
    return max(3 * n * k, (2 * n + 1) * k)


def truncation_error(A, k):
    """``||A - B_k(A)||`` (zero once ``k >= n - 1``)."""
    A = as_array(A)
    if k >= A.shape[0] - 1:
        return 0.0
    return op_norm(A - band_truncate(A, k).to_dense())


def minimal_admissible_k(A, bounds=None):
    """Smallest ``k`` with ``||A - B_k(A)|| < m_lo / 2``, scanning upward."""
    A = as_array(A)
    if bounds is None:
        bounds = singular_bounds(A)
    for k in range(A.shape[0]):
        if truncation_error(A, k) < bounds.m_lo / 2.0:
            return k
    return None


def bdo_terms(bounds, eps, n):
    """Certificate pieces for the band-dominated construction.

    Returns ``(alpha, kappa_plus, kappa_minus, horizontal, vertical)`` with
    the measured truncation error ``eps`` standing in for ``2 delta_k``.
    """
    m, M, kappa = bounds.m_lo, bounds.M_hi, bounds.kappa
    alpha = m / (m - eps)
    kp = alpha * (kappa + eps / m)
    km = alpha * (kappa - eps / m)
    horizontal = eps * alpha / m ** 2
    vertical = kp ** 2 / (M + eps) * ((kp ** 2 - 1.0) / (km ** 2 + 1.0)) ** (n + 1)
    return alpha, kp, km, horizontal, vertical


def bdo_inverse(A, k, n, bounds=None):
    """Banded approximation of ``A^{-1}`` for a band-dominated invertible ``A``.

    ``A`` is truncated to ``A_k = B_k(A)`` and ``eps = ||A - A_k||`` is
    measured.  The construction needs ``eps < m_lo/2``; otherwise
    :class:`TruncationTooCoarseError` reports the smallest admissible ``k``.
    The Neumann series for ``A_k`` runs with the bracket
    ``[m_lo/alpha, M_hi + eps]``, which is valid for ``A_k`` whenever the
    bracket for ``A`` is; with ``eps = 0`` this is exactly ``neumann_general(A)``.
    """
    n = _check_terms(n)
    A = as_array(A)
    size = A.shape[0]
    k = int(k)
    if bounds is None:
        bounds = singular_bounds(A)
    if k >= size:
        k = size - 1
    Ak = band_truncate(A, k)
    eps = truncation_error(A, k)
    threshold = bounds.m_lo / 2.0
    if not eps < threshold:
        kmin = minimal_admissible_k(A, bounds)
        raise TruncationTooCoarseError(
            f"truncation to k={k} leaves ||A - A_k|| = {eps:.6g} >= m_lo/2 = {threshold:.6g}; "
            f"minimal admissible k is {kmin}",
            k=k, epsilon=eps, threshold=threshold, min_admissible_k=kmin)
    alpha, kp, km, horizontal, vertical = bdo_terms(bounds, eps, n)
    if eps == 0.0:
        inner = bounds
    else:
        inner = SpectralBounds(bounds.m_lo / alpha, bounds.M_hi + eps, bounds.source)
    cert = neumann_general(Ak, n, inner)
    return InverseCertificate(
        construction="bdo",
        approx=cert.approx,
        band_width=_general_width(n, k),
        terms=n,
        gamma=cert.gamma,
        bounds_used=bounds,
        error_bound=horizontal + vertical,
        extra={
            "k": k,
            "epsilon_k": eps,
            "alpha_k": alpha,
            "kappa_plus": kp,
            "kappa_minus": km,
            "horizontal_bound": horizontal,
            "vertical_bound": vertical,
        },
    )


def terms_for_tolerance(bounds, mode, tol):
    """Smallest ``n`` whose certified error is at most ``tol``.

    ``mode`` is ``"spd"`` or ``"general"``.
    """
    if not tol > 0:
        raise InputError("tolerance must be positive")
    if mode == "spd":
        q = (bounds.kappa - 1.0) / (bounds.kappa + 1.0)
        const = 1.0 / bounds.m_lo
        bound = spd_error_bound
    elif mode == "general":
        k2 = bounds.kappa ** 2
        q = (k2 - 1.0) / (k2 + 1.0)
        const = k2 / bounds.M_hi
        bound = general_error_bound
    else:
        raise InputError(f"mode must be 'spd' or 'general', got {mode!r}")
    if q <= 0.0 or const * q <= tol:
        return 0
    # const * q^(n+1) <= tol  <=>  n + 1 >= log(tol/const) / log(q)
    n = max(0, math.ceil(math.log(tol / const) / math.log(q)) - 1)
    # absorb rounding in the logarithms
    while n > 0 and bound(bounds, n - 1) <= tol:
        n -= 1
    while bound(bounds, n) > tol:
        n += 1
    return n

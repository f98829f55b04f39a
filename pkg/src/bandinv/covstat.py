"""Banded covariance and precision estimation from Gaussian samples."""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import InputError, NotPositiveDefiniteError, RefusalError, TruncationTooCoarseError
from .invapprox import neumann_spd
from .matcore import as_array, band_truncate
from .spectral import check_symmetric, spd_bounds


@dataclass(frozen=True)
class SampleSet:
    observations: np.ndarray
    seed: int = None

    def __post_init__(self):
        X = np.array(self.observations, dtype=float)
        if X.ndim != 2:
            raise InputError("observations must be an (N, p) array")
        if not np.all(np.isfinite(X)):
            raise InputError("observations contain non-finite values")
        X.setflags(write=False)
        object.__setattr__(self, "observations", X)

    @property
    def N(self):
        return self.observations.shape[0]

    @property
    def p(self):
        return self.observations.shape[1]


@dataclass(frozen=True)
class CovarianceEstimate:
    sigma_hat: np.ndarray
    kind: str
    k: int = None
    terms: int = None
    gamma_hat: float = None
    extra: dict = field(default_factory=dict)


def sample_gaussian(Sigma, N, seed):
    """``N`` i.i.d. draws from ``N(0, Sigma)`` via a Cholesky factor.

    A failed factorization is retried once with ``1e-10 * trace/p`` added to
    the diagonal.
    """
    S = check_symmetric(Sigma)
    N = int(N)
    if N < 1:
        raise InputError("N must be positive")
    p = S.shape[0]
    try:
        L = scipy.linalg.cholesky(S, lower=True)
    except np.linalg.LinAlgError:
        jitter = 1e-10 * np.trace(S) / p
        try:
            L = scipy.linalg.cholesky(S + jitter * np.eye(p), lower=True)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefiniteError("covariance is not positive definite, even after jitter") from exc
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((N, p))
    return SampleSet(Z @ L.T, seed)


def empirical_cov(data):
    """``(1/N) sum (X_i - Xbar)(X_i - Xbar)^T``."""
    X = data.observations
    if data.N < 2:
        raise InputError("at least two observations are needed")
    Xc = X - X.mean(axis=0)
    S = (Xc.T @ Xc) / data.N
    return CovarianceEstimate(0.5 * (S + S.T), "empirical")


def banded_cov_estimator(est, k):
    if est.kind != "empirical":
        raise InputError(f"banding expects an empirical estimate, got kind={est.kind!r}")
    B = band_truncate(est.sigma_hat, k).to_dense()
    return CovarianceEstimate(B, "banded", k=int(k))


def banded_precision_estimator(est, k, n):
    """``gamma_hat sum_{j<=n} (I - gamma_hat B_k(Sigma_hat))^j``, banded with width ``n k``.

    ``gamma_hat = 2 / (M_hat + m_hat)`` from the extreme eigenvalues of the
    banded estimate, which must be positive definite.
    """
    if est.kind != "empirical":
        raise InputError(f"expects an empirical estimate, got kind={est.kind!r}")
    Bk = band_truncate(est.sigma_hat, k)
    try:
        bounds = spd_bounds(Bk, slack=0.0)
    except NotPositiveDefiniteError as exc:
        raise NotPositiveDefiniteError(
            f"banded estimate B_{k}(Sigma_hat) is not positive definite; "
            "use more samples or a smaller k") from exc
    cert = neumann_spd(Bk, n, bounds)
    return CovarianceEstimate(
        cert.approx.to_dense(), "banded-inverse", k=int(k), terms=int(n), gamma_hat=cert.gamma,
        extra={"m_hat": bounds.m_lo, "M_hat": bounds.M_hi, "neumann_bound": cert.error_bound},
    )


def precision_bound_eq26(bounds, delta_k, n):
    """``2 d/(m (m - 2 d)) + (1/m) ((kappa-1)/(kappa+1))^n`` for ``d = delta_k``.

    Bounds ``dist(Sigma^{-1}, BO_{nk})`` for positive definite ``Sigma``.
    """
    m, kappa = bounds.m_lo, bounds.kappa
    if delta_k < 0:
        raise InputError("delta_k must be non-negative")
    if not delta_k < m / 2.0:
        raise TruncationTooCoarseError(
            f"delta_k={delta_k!r} must be below m/2={m / 2.0!r}", k=None, epsilon=delta_k,
            threshold=m / 2.0)
    q = (kappa - 1.0) / (kappa + 1.0)
    return 2.0 * delta_k / (m * (m - 2.0 * delta_k)) + q ** int(n) / m


def select_k(data, k_grid, folds=2):
    """Bandwidth minimizing the fold-averaged ``||B_k(S_train) - S_test||_F``.

    Folds are contiguous blocks of observations; ties go to the smaller ``k``.
    """
    grid = sorted({int(k) for k in k_grid})
    if not grid:
        raise InputError("k grid is empty")
    folds = int(folds)
    if folds < 2:
        raise InputError("need at least two folds")
    if data.N < 2 * folds:
        raise InputError(f"need at least {2 * folds} observations for {folds} folds")
    if grid[0] < 0 or grid[-1] >= data.p:
        raise InputError(f"k grid must lie in 0..{data.p - 1}")
    X = data.observations
    parts = np.array_split(np.arange(data.N), folds)
    risk = np.zeros(len(grid))
    for test_idx in parts:
        train_idx = np.setdiff1d(np.arange(data.N), test_idx)
        S_train = empirical_cov(SampleSet(X[train_idx])).sigma_hat
        S_test = empirical_cov(SampleSet(X[test_idx])).sigma_hat
        for a, k in enumerate(grid):
            risk[a] += np.linalg.norm(band_truncate(S_train, k).to_dense() - S_test, "fro")
    risk /= folds
    return grid[int(np.argmin(risk))]


def estimate_pipeline(Sigma, N, seed, k, n, k_grid=None):
    """Sample, band, invert; returns the pieces and a JSON-ready report.

    ``k="auto"`` picks the bandwidth with :func:`select_k` over ``k_grid``
    (default ``0..min(10, p-1)``).
    """
    Sigma = check_symmetric(Sigma)
    data = sample_gaussian(Sigma, N, seed)
    emp = empirical_cov(data)
    if k == "auto":
        grid = k_grid if k_grid is not None else range(0, min(10, data.p - 1) + 1)
        k = select_k(data, grid)
    k = int(k)
    banded = banded_cov_estimator(emp, k)
    report = {"N": int(N), "p": data.p, "seed": int(seed), "k": k, "terms": int(n)}
    precision = None
    try:
        precision = banded_precision_estimator(emp, k, n)
        report.update({"gamma_hat": precision.gamma_hat, "m_hat": precision.extra["m_hat"],
                       "M_hat": precision.extra["M_hat"],
                       "neumann_bound_vs_banded_inverse": precision.extra["neumann_bound"]})
    except RefusalError as exc:
        report["precision_error"] = str(exc)
    truth = spd_bounds(Sigma, slack=0.0)
    inv_truth = scipy.linalg.inv(Sigma)
    delta_k = _opnorm(Sigma - band_truncate(Sigma, k).to_dense()) if k < data.p - 1 else 0.0
    report.update({
        "true_m": truth.m_lo, "true_M": truth.M_hi, "true_delta_k": delta_k,
        "cov_error_banded": _opnorm(banded.sigma_hat - Sigma),
        "cov_error_empirical": _opnorm(emp.sigma_hat - Sigma),
    })
    try:
        report["precision_bound_true"] = precision_bound_eq26(truth, delta_k, n)
    except RefusalError as exc:
        report["precision_bound_true"] = None
        report["precision_bound_error"] = str(exc)
    if precision is not None:
        report["precision_error_achieved"] = _opnorm(precision.sigma_hat - inv_truth)
    return data, emp, banded, precision, report


def _opnorm(A):
    return float(np.linalg.norm(as_array(A), 2))

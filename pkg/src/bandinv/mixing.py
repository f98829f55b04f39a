"""Beta-mixing and regularity diagnostics for Gaussian covariance matrices.

Everything here works on a finite section ``Sigma`` (indices ``0..N-1``) of
the covariance operator.  Supremums over cut positions become maxima over
the cuts available in the section.

Block windows follow one convention throughout: the past block is
``m..n`` (inclusive) and the future block is ``n+p+1 .. n+p+k``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (DependenceDegeneracyError, InputError, NotPositiveDefiniteError,
                     ShapeMismatchError, SingularMatrixError)
from .matcore import _require_square, as_array, band_distance_bounds
from .spectral import check_symmetric

LAMBDA_CLAMP = 1.0 - 1e-12
LAMBDA_DEGENERATE = 1.0 + 1e-8
TV_NOTE = ("tv_hi = min(1, sqrt(2)*H^2); the standard Hellinger/total-variation "
           "inequality has sqrt(2)*H, which is larger when H^2 < 1")


def _tail_table(S2):
    """``C[t, c] = sum_{i <= t} sum_{j >= c} S2[i, j]``.

    Built from a suffix sum along rows and a prefix sum down columns, so only
    non-negative terms are ever added (no cancellation, exact zeros stay zero).
    """
    R = np.cumsum(S2[:, ::-1], axis=1)[:, ::-1]
    return np.cumsum(R, axis=0)


def beta_criterion_profile(Sigma, p_max):
    """``b(p) = max_t sum_{i <= t} sum_{j >= t + p} sigma_ij^2`` for ``p = 1..p_max``.

    Returns a :class:`MixingReport` holding the profile.
    """
    S = check_symmetric(Sigma)
    N = S.shape[0]
    p_max = int(p_max)
    if p_max < 1 or p_max >= N:
        raise InputError(f"p_max must satisfy 1 <= p_max < n={N}, got {p_max}")
    C = _tail_table(S * S)
    profile = []
    for p in range(1, p_max + 1):
        t = np.arange(N - p)
        profile.append((p, float(C[t, t + p].max())))
    return MixingReport(profile=profile)


def gamma_sufficient(Sigma, p):
    """``gamma(p) = sum_i sum_{j >= i + p} sigma_ij^2``."""
    S = check_symmetric(Sigma)
    N = S.shape[0]
    p = int(p)
    if p < 0 or p >= N:
        raise InputError(f"p must satisfy 0 <= p < n={N}, got {p}")
    return float(np.sum(np.triu(S * S, k=p)))


def _window(N, m, n, p, k):
    m, n, p, k = int(m), int(n), int(p), int(k)
    if m < 0 or n < m:
        raise InputError(f"past block m..n needs 0 <= m <= n, got m={m}, n={n}")
    if p < 0:
        raise InputError(f"gap p must be non-negative (blocks would overlap), got {p}")
    if k < 1:
        raise InputError(f"future block length k must be positive, got {k}")
    if n + p + k >= N:
        raise InputError(f"future block ends at {n + p + k}, beyond the section size {N}")
    return np.arange(m, n + 1), np.arange(n + p + 1, n + p + k + 1)


def block_trace(Sigma, m, n, p, k, method="entries"):
    """``Trace(Sigma_12 Sigma_21)`` for the past/future windows.

    ``method="entries"`` sums squared cross entries; ``method="trace"`` forms
    the product and takes its trace.  Both give the same number.
    """
    S = as_array(Sigma)
    _require_square(S)
    I1, I2 = _window(S.shape[0], m, n, p, k)
    S12 = S[np.ix_(I1, I2)]
    if method == "entries":
        return math.fsum((S12 * S12).ravel().tolist())
    if method == "trace":
        S21 = S[np.ix_(I2, I1)]
        return float(np.trace(S12 @ S21))
    raise InputError(f"unknown method {method!r}")


@dataclass(frozen=True)
class CovBlocks:
    """Covariance of a past/future pair, blocked as ``[[S11, S12], [S21, S22]]``."""

    sigma11: np.ndarray
    sigma22: np.ndarray
    sigma12: np.ndarray

    def __post_init__(self):
        s11, s22, s12 = (np.array(x, dtype=float) for x in (self.sigma11, self.sigma22, self.sigma12))
        if s11.ndim != 2 or s11.shape[0] != s11.shape[1]:
            raise ShapeMismatchError("sigma11 must be square")
        if s22.ndim != 2 or s22.shape[0] != s22.shape[1]:
            raise ShapeMismatchError("sigma22 must be square")
        if s12.shape != (s11.shape[0], s22.shape[0]):
            raise ShapeMismatchError(f"sigma12 must have shape {(s11.shape[0], s22.shape[0])}, got {s12.shape}")
        for x in (s11, s22, s12):
            x.setflags(write=False)
        object.__setattr__(self, "sigma11", s11)
        object.__setattr__(self, "sigma22", s22)
        object.__setattr__(self, "sigma12", s12)

    @property
    def sigma21(self):
        return self.sigma12.T

    @classmethod
    def from_joint(cls, S, q):
        S = check_symmetric(S)
        q = int(q)
        return cls(S[:q, :q], S[q:, q:], S[:q, q:])

    @classmethod
    def from_window(cls, Sigma, m, n, p, k):
        S = check_symmetric(Sigma)
        I1, I2 = _window(S.shape[0], m, n, p, k)
        return cls(S[np.ix_(I1, I1)], S[np.ix_(I2, I2)], S[np.ix_(I1, I2)])

    def joint(self):
        return np.block([[self.sigma11, self.sigma12], [self.sigma21, self.sigma22]])

    def cross_trace(self):
        return float(np.sum(self.sigma12 * self.sigma12))


def _inv_sqrt_factor(S, name):
    w, V = scipy.linalg.eigh(0.5 * (S + S.T))
    if w[0] <= 0.0:
        raise NotPositiveDefiniteError(f"{name} is not positive definite (lambda_min = {w[0]:.3e})")
    # Lambda^{-1/2} Q with S = Q^T Lambda Q, Q = V^T
    return (V / np.sqrt(w)).T


def whiten_blocks(b):
    """Transform both blocks to identity covariance.

    The cross block becomes ``Lambda_1^{-1/2} Q_1 S12 Q_2^T Lambda_2^{-1/2}``
    where ``S_jj = Q_j^T Lambda_j Q_j``.
    """
    T1 = _inv_sqrt_factor(b.sigma11, "sigma11")
    T2 = _inv_sqrt_factor(b.sigma22, "sigma22")
    cross = T1 @ b.sigma12 @ T2.T
    return CovBlocks(np.eye(b.sigma11.shape[0]), np.eye(b.sigma22.shape[0]), cross)


def cross_eigenvalues(b):
    """Eigenvalues of the whitened ``S12 S21``, computed on the smaller side."""
    w = whiten_blocks(b)
    C = w.sigma12
    G = C @ C.T if C.shape[0] <= C.shape[1] else C.T @ C
    lam = scipy.linalg.eigvalsh(0.5 * (G + G.T))
    return lam


@dataclass(frozen=True)
class HellingerResult:
    affinity: float
    h2: float
    tv_lo: float
    tv_hi: float
    trace: float
    eigenvalues: tuple

    def as_dict(self):
        return {"affinity": self.affinity, "H2": self.h2, "tv_lo": self.tv_lo, "tv_hi": self.tv_hi,
                "whitened_trace": self.trace, "eigenvalues": list(self.eigenvalues),
                "tv_note": TV_NOTE}


def hellinger_affinity(b):
    """Hellinger affinity between the joint Gaussian and the product of its block marginals.

    ``A = prod_j (1 - l_j)^{1/4} / (1 - l_j/4)^{1/2}`` over the eigenvalues
    ``l_j`` of the whitened cross product; ``H^2 = 2 (1 - A)``.
    """
    lam = cross_eigenvalues(b)
    if lam.size and lam[-1] > LAMBDA_DEGENERATE:
        raise DependenceDegeneracyError(
            f"whitened cross-product eigenvalue {lam[-1]:.6g} >= 1: joint covariance is singular")
    lam = np.clip(lam, 0.0, LAMBDA_CLAMP)
    log_a = float(np.sum(0.25 * np.log1p(-lam) - 0.5 * np.log1p(-lam / 4.0)))
    A = math.exp(log_a)
    h2 = 2.0 * (1.0 - A)
    return HellingerResult(
        affinity=A,
        h2=h2,
        tv_lo=h2 / 2.0,
        tv_hi=min(1.0, math.sqrt(2.0) * h2),
        trace=math.fsum(lam.tolist()),
        eigenvalues=tuple(lam.tolist()),
    )


def squeeze_bounds(t):
    """``((1 - t)^{1/4}, exp(-t/8))`` bracketing the affinity when the whitened trace is ``t``."""
    if not t >= 0:
        raise InputError(f"t must be non-negative, got {t}")
    lower = (1.0 - t) ** 0.25 if t < 1.0 else 0.0
    return lower, math.exp(-t / 8.0)


@dataclass(frozen=True)
class Leakage:
    value: float
    bound: float
    epsilon: float


def prediction_leakage(Sigma, m, n, p):
    """Energy of the best linear prediction of ``X_{n+p+1}`` from ``X_m..X_n``.

    ``value = s^T Sigma[m..n]^{-1} s`` with ``s = Cov(X_{m..n}, X_{n+p+1})``.
    ``bound = eps^2 ||Sigma^{-1}||`` where ``eps`` is the norm of the
    off-band remainder of ``Sigma`` at half-bandwidth ``p`` (a banded
    covariance of that width has no cross term at gap ``p``).
    """
    S = check_symmetric(Sigma)
    N = S.shape[0]
    m, n, p = int(m), int(n), int(p)
    if m < 0 or n < m or p < 0 or n + p + 1 >= N:
        raise InputError(f"window m={m}, n={n}, p={p} does not fit a section of size {N}")
    W = S[m:n + 1, m:n + 1]
    s = S[m:n + 1, n + p + 1]
    try:
        c, low = scipy.linalg.cho_factor(W)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("window covariance is not positive definite") from exc
    value = float(s @ scipy.linalg.cho_solve((c, low), s))
    w = scipy.linalg.eigvalsh(S)
    if w[0] <= 0.0:
        raise SingularMatrixError("covariance section is not positive definite")
    _, eps = band_distance_bounds(S, p)
    return Leakage(value=value, bound=eps * eps / float(w[0]), epsilon=eps)


def frobenius_band_norm(Sigma, m):
    """``sqrt(sum_{|i-j| >= m} sigma_ij^2)``."""
    S = as_array(Sigma)
    _require_square(S)
    if int(m) < 0:
        raise InputError("m must be non-negative")
    return float(np.sqrt(np.sum(_offband(S, m) ** 2)))


def _offband(S, m):
    i, j = np.indices(S.shape)
    return np.where(np.abs(i - j) >= int(m), S, 0.0)


def schur_band_product(Sigma0, T0, m):
    """Entrywise product restricted to ``|i - j| >= m``."""
    S, T = as_array(Sigma0), as_array(T0)
    if S.shape != T.shape:
        raise ShapeMismatchError(f"sizes differ: {S.shape} vs {T.shape}")
    _require_square(S)
    return _offband(S * T, m)


@dataclass
class MixingReport:
    profile: list
    gamma_p: list = None
    hellinger: list = None
    inverse_profile: list = None
    notes: list = field(default_factory=list)

    @property
    def values(self):
        return np.array([b for _, b in self.profile])

    def is_monotone(self, rtol=1e-12):
        v = self.values
        return bool(np.all(v[1:] <= v[:-1] * (1 + rtol) + 1e-300))

    def verdict(self, tol=1e-6):
        """Summary of the decay of ``b(p)``: monotone, final value, first ``p`` below ``tol``."""
        v = self.values
        below = [p for p, b in self.profile if b <= tol]
        return {
            "monotone": self.is_monotone(),
            "b_first": float(v[0]),
            "b_last": float(v[-1]),
            "first_p_below_tol": below[0] if below else None,
            "tol": tol,
        }

    def as_dict(self):
        out = {"profile": [{"p": p, "b": b} for p, b in self.profile], "verdict": self.verdict()}
        if self.gamma_p is not None:
            out["gamma_p"] = [{"p": p, "gamma": g} for p, g in self.gamma_p]
        if self.hellinger is not None:
            out["hellinger"] = self.hellinger
        if self.inverse_profile is not None:
            out["inverse_profile"] = [{"p": p, "b": b} for p, b in self.inverse_profile]
            inv = MixingReport(self.inverse_profile)
            out["inverse_verdict"] = inv.verdict()
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_csv(self):
        lines = ["p,b"] + [f"{p},{b!r}" for p, b in self.profile]
        return "\n".join(lines) + "\n"


def hellinger_record(Sigma, m, n, p, k):
    """Affinity, bounds and traces for one window, as a JSON-ready dict."""
    b = CovBlocks.from_window(Sigma, m, n, p, k)
    res = hellinger_affinity(b)
    lo, hi = squeeze_bounds(res.trace)
    rec = {"m": int(m), "n": int(n), "p": int(p), "k": int(k),
           "block_trace": block_trace(Sigma, m, n, p, k)}
    rec.update(res.as_dict())
    rec["squeeze_lower"] = lo
    rec["squeeze_upper"] = hi
    return rec


@dataclass
class FInversionWitness:
    m: int
    frob_sigma: float
    frob_inverse: float
    sigma_report: MixingReport
    inverse_report: MixingReport

    @property
    def sigma_profile(self):
        return self.sigma_report.values

    @property
    def inverse_profile(self):
        return self.inverse_report.values

    def decays(self, tol=1e-6):
        """Whether each profile falls below ``tol`` within the computed range."""
        return (bool(self.sigma_profile[-1] <= tol), bool(self.inverse_profile[-1] <= tol))

    def as_dict(self):
        return {
            "m": self.m,
            "frobenius_band_sigma": self.frob_sigma,
            "frobenius_band_inverse": self.frob_inverse,
            "sigma_profile": [{"p": p, "b": b} for p, b in self.sigma_report.profile],
            "inverse_profile": [{"p": p, "b": b} for p, b in self.inverse_report.profile],
        }


def f_inversion_witness(Sigma, m, p_max):
    """Criterion profiles of ``Sigma`` and of ``Sigma^{-1}``, side by side."""
    S = check_symmetric(Sigma)
    w = scipy.linalg.eigvalsh(S)
    if w[0] <= 0.0:
        raise SingularMatrixError(f"Sigma is not positive definite (lambda_min = {w[0]:.3e})")
    Sinv = scipy.linalg.inv(S)
    Sinv = 0.5 * (Sinv + Sinv.T)
    return FInversionWitness(
        m=int(m),
        frob_sigma=frobenius_band_norm(S, m),
        frob_inverse=frobenius_band_norm(Sinv, m),
        sigma_report=beta_criterion_profile(S, p_max),
        inverse_report=beta_criterion_profile(Sinv, p_max),
    )


def mixing_check(Sigma, p_max, hellinger=None, inverse=False, with_gamma=True):
    """Assemble a full :class:`MixingReport` (what the CLI prints)."""
    report = beta_criterion_profile(Sigma, p_max)
    if with_gamma:
        report.gamma_p = [(p, gamma_sufficient(Sigma, p)) for p, _ in report.profile]
    if hellinger is not None:
        report.hellinger = [hellinger_record(Sigma, *hellinger)]
        report.notes.append(TV_NOTE)
    if inverse:
        wit = f_inversion_witness(Sigma, 0, p_max)
        report.inverse_profile = wit.inverse_report.profile
    return report

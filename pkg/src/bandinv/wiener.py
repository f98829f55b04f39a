"""Wiener norms, Laurent sections of symbols, and symbol diagnostics."""

import math
from fractions import Fraction

import numpy as np

from .errors import InputError, ShapeMismatchError
from .matcore import BandedMatrix, _require_square, as_array, diagonal_sups

# 2 * m_max + 1 coefficients are materialized
MAX_EXAMPLE_TERMS = 10 ** 7


def wiener_norm(A):
    """Sum of diagonal suprema, ``sum_d max_i |a_{i, i-d}|``."""
    if isinstance(A, BandedMatrix):
        return float(sum(np.max(np.abs(A.diagonal(d))) for d in range(-A.k, A.k + 1)))
    return float(np.sum(diagonal_sups(A)))


def generalized_wiener_norm(A, metric):
    """Wiener norm with diagonals replaced by metric shells.

    Shell ``r = 0`` holds the pairs with ``rho(i, j) == 0``; shell ``r >= 1``
    holds ``rho(i, j)`` in ``(r - 1, r]``.  The norm is the sum over shells of
    the largest absolute entry in the shell.
    """
    A = as_array(A)
    _require_square(A)
    if metric.n != A.shape[0]:
        raise ShapeMismatchError(f"metric has n={metric.n}, matrix has n={A.shape[0]}")
    shells = np.ceil(metric.table).astype(np.int64)
    absA = np.abs(A).ravel()
    sups = np.zeros(int(shells.max()) + 1)
    np.maximum.at(sups, shells.ravel(), absA)
    return float(np.sum(sups))


class SymbolSeries:
    """Finitely supported Fourier coefficients ``{k: f_k}`` of a symbol on the circle.

    Offsets are kept as Python integers (they can exceed 64 bits for long
    sparse symbols); zero coefficients are dropped.
    """

    def __init__(self, coefficients):
        items = sorted((int(k), float(v)) for k, v in dict(coefficients).items())
        items = [(k, v) for k, v in items if v != 0.0]
        if not all(math.isfinite(v) for _, v in items):
            raise InputError("symbol coefficients must be finite")
        self._offsets = tuple(k for k, _ in items)
        self._values = np.array([v for _, v in items], dtype=float)
        self._values.setflags(write=False)
        self._lookup = None

    @property
    def offsets(self):
        return self._offsets

    @property
    def values(self):
        return self._values

    def __len__(self):
        return len(self._offsets)

    def __getitem__(self, k):
        if self._lookup is None:
            self._lookup = dict(zip(self._offsets, self._values.tolist()))
        return self._lookup.get(int(k), 0.0)

    def as_dict(self):
        return dict(zip(self._offsets, self._values.tolist()))

    def is_symmetric(self):
        return all(self[-k] == v for k, v in zip(self._offsets, self._values.tolist()))

    def support_width(self):
        return max((abs(k) for k in self._offsets), default=0)

    def evaluate(self, theta):
        """``f(e^{i theta}) = sum_k f_k e^{i k theta}`` (complex in general)."""
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=complex)
        for k, v in zip(self._offsets, self._values.tolist()):
            out += v * np.exp(1j * k * theta)
        return out

    def __eq__(self, other):
        return isinstance(other, SymbolSeries) and self.as_dict() == other.as_dict()

    __hash__ = None

    def __repr__(self):
        return f"SymbolSeries({len(self)} terms, width {self.support_width()})"


def laurent_matrix(f, n, banded=False):
    """``n x n`` section ``(f_{i-j})`` for ``i, j = 0..n-1``.

    With ``banded=True`` the result is a :class:`BandedMatrix` whose
    half-bandwidth is the symbol's support width (capped at ``n - 1``).
    """
    n = int(n)
    if n < 1:
        raise InputError("section size must be positive")
    diags = {k: np.full(n - abs(k), v) for k, v in zip(f.offsets, f.values.tolist()) if abs(k) < n}
    if not diags:
        diags = {0: np.zeros(n)}
    B = BandedMatrix.from_diagonals(n, diags)
    return B if banded else B.to_dense()


def symbol_wiener_norm(f):
    """``sum_k |f_k|``."""
    return math.fsum(np.abs(f.values).tolist())


def sobolev_half_partial(f, K):
    """Partial sum ``sum_{|k| <= K} |k| f_k^2`` of the ``W^{1/2,2}`` seminorm.

    Accumulated exactly in rational arithmetic over the stored floats and
    rounded once.
    """
    K = int(K)
    if K < 0:
        raise InputError("K must be non-negative")
    total = Fraction(0)
    for k, v in zip(f.offsets, f.values.tolist()):
        if k != 0 and abs(k) <= K:
            fv = Fraction(v)
            total += abs(k) * fv * fv
    return float(total)


def symbol_range_bounds(f):
    """Interval containing ``Re f(t)`` on the circle: ``f_0 -+ sum_{k != 0} |f_k|``."""
    f0 = f[0]
    rest = math.fsum(abs(v) for k, v in zip(f.offsets, f.values.tolist()) if k != 0)
    return f0 - rest, f0 + rest


def example53_symbol(m_max, shift=4.0):
    """Symbol of a stationary Gaussian process that is strongly but not beta mixing.

    Coefficients ``b_{+-m^4} = 1/m^2`` for ``m = 1..m_max`` and ``b_0 = shift``.
    The full series has Wiener norm ``shift + pi^2/3`` and, for ``shift = 4``,
    a strictly positive symbol, while ``sum |k| b_k^2`` diverges.
    """
    m_max = int(m_max)
    if m_max < 1:
        raise InputError("m_max must be at least 1")
    if 2 * m_max + 1 > MAX_EXAMPLE_TERMS:
        raise InputError(f"m_max={m_max} would materialize more than {MAX_EXAMPLE_TERMS} coefficients")
    coeffs = {0: float(shift)}
    for m in range(1, m_max + 1):
        k = m ** 4
        v = 1.0 / (m * m)
        coeffs[k] = v
        coeffs[-k] = v
    return SymbolSeries(coeffs)


def inverse_diagonal_bound(bounds, k, j):
    """Bound on the ``j``-th diagonal supremum of ``A^{-1}`` for banded ``A`` in ``BO_k``.

    Diagonal ``j != 0`` lies outside ``BO_{3(n)k}`` for ``n = ceil(|j|/(3k)) - 1``,
    so it is bounded by ``r_n = (kappa^2/M) ((kappa^2-1)/(kappa^2+1))^(n+1)``.
    The main diagonal is bounded by ``||A^{-1}|| <= 1/m_lo``.
    """
    j = abs(int(j))
    if j == 0:
        return 1.0 / bounds.m_lo
    if k == 0:
        return 0.0
    n = -(-j // (3 * k)) - 1
    k2 = bounds.kappa ** 2
    return (k2 / bounds.M_hi) * ((k2 - 1.0) / (k2 + 1.0)) ** (n + 1)


def inverse_wiener_bound(bounds, k):
    """Upper bound on the Wiener norm of ``A^{-1}``: ``d_0 + 6k (r_0 + r_1 + ...)``."""
    k2 = bounds.kappa ** 2
    q = (k2 - 1.0) / (k2 + 1.0)
    r_sum = (k2 / bounds.M_hi) * q / (1.0 - q)
    return 1.0 / bounds.m_lo + 6 * k * r_sum

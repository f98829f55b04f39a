"""Dense and banded matrices, band truncation, operator norms, metric banding.

Matrices are plain 2-d ``numpy`` arrays unless they are known to be banded, in
which case :class:`BandedMatrix` stores them by diagonals.  Every function
that takes a matrix accepts either form.

Diagonal offsets follow the convention ``d = i - j``: offset ``+1`` is the
first subdiagonal, ``-1`` the first superdiagonal.
"""

import math

import numpy as np

from .errors import InputError, InvalidBandwidthError, ShapeMismatchError

DENSE_NORM_LIMIT = 2000
POWER_TOL = 1e-12


def _shift(x, s):
    """Return ``y`` with ``y[i] = x[i - s]`` (zero where out of range)."""
    if s == 0:
        return x
    y = np.zeros_like(x)
    if s > 0:
        y[s:] = x[:-s]
    else:
        y[:s] = x[-s:]
    return y


class BandedMatrix:
    """Square ``n x n`` matrix supported on diagonals ``-k..k``.

    Storage is a ``(2k + 1, n)`` array ``data`` with
    ``data[d + k, i] = A[i, i - d]``; slots that fall outside the matrix are
    kept at zero.  Instances are immutable.
    """

    __slots__ = ("_data", "_k", "_n")
    __array_ufunc__ = None

    def __init__(self, data, k):
        data = np.array(data, dtype=float)
        k = int(k)
        if data.ndim != 2 or data.shape[0] != 2 * k + 1:
            raise ShapeMismatchError(
                f"banded storage must have 2k+1 = {2 * k + 1} rows, got shape {data.shape}")
        n = data.shape[1]
        if n < 1:
            raise InputError("matrix size must be positive")
        if k < 0 or k >= n:
            raise InvalidBandwidthError(f"half-bandwidth k={k} must satisfy 0 <= k < n={n}")
        if not np.all(np.isfinite(data)):
            raise InputError("banded matrix has non-finite entries")
        rows = np.arange(n)
        for d in range(-k, k + 1):
            cols = rows - d
            data[d + k, (cols < 0) | (cols >= n)] = 0.0
        data.setflags(write=False)
        self._data = data
        self._k = k
        self._n = n

    # construction -------------------------------------------------------

    @classmethod
    def from_dense(cls, A, k):
        """Band part of a dense matrix (entries with ``|i - j| > k`` are dropped)."""
        A = as_array(A)
        _require_square(A)
        n = A.shape[0]
        k = int(k)
        if k < 0 or k >= n:
            raise InvalidBandwidthError(f"half-bandwidth k={k} must satisfy 0 <= k < n={n}")
        data = np.zeros((2 * k + 1, n))
        rows = np.arange(n)
        for d in range(-k, k + 1):
            cols = rows - d
            ok = (cols >= 0) & (cols < n)
            data[d + k, ok] = A[rows[ok], cols[ok]]
        return cls(data, k)

    @classmethod
    def from_diagonals(cls, n, diagonals):
        """Build from ``{offset: entries}`` where entries run down the diagonal.

        The diagonal with offset ``d`` has ``n - |d|`` entries, starting at
        row ``max(d, 0)``.
        """
        n = int(n)
        k = max((abs(int(d)) for d in diagonals), default=0)
        data = np.zeros((2 * k + 1, n))
        for d, vals in diagonals.items():
            d = int(d)
            vals = np.asarray(vals, dtype=float).ravel()
            if abs(d) >= n or vals.size != n - abs(d):
                raise ShapeMismatchError(
                    f"diagonal {d} of an {n}x{n} matrix needs {n - abs(d)} entries, got {vals.size}")
            start = max(d, 0)
            data[d + k, start:start + vals.size] = vals
        return cls(data, k)

    @classmethod
    def identity(cls, n):
        return cls(np.ones((1, int(n))), 0)

    # inspection ---------------------------------------------------------

    @property
    def n(self):
        return self._n

    @property
    def k(self):
        return self._k

    @property
    def shape(self):
        return (self._n, self._n)

    @property
    def data(self):
        return self._data

    def diagonal(self, d):
        """Entries on diagonal ``d`` (length ``n - |d|``)."""
        d = int(d)
        if abs(d) >= self._n:
            raise InvalidBandwidthError(f"diagonal offset {d} out of range for n={self._n}")
        if abs(d) > self._k:
            return np.zeros(self._n - abs(d))
        start = max(d, 0)
        return self._data[d + self._k, start:start + self._n - abs(d)].copy()

    def bandwidth(self):
        """Largest ``|d|`` whose diagonal holds a nonzero entry (0 for the zero matrix)."""
        for d in range(self._k, 0, -1):
            if np.any(self._data[self._k + d]) or np.any(self._data[self._k - d]):
                return d
        return 0

    def to_dense(self):
        A = np.zeros((self._n, self._n))
        rows = np.arange(self._n)
        for d in range(-self._k, self._k + 1):
            cols = rows - d
            ok = (cols >= 0) & (cols < self._n)
            A[rows[ok], cols[ok]] = self._data[d + self._k, ok]
        return A

    def __array__(self, dtype=None, copy=None):
        A = self.to_dense()
        return A if dtype is None else A.astype(dtype)

    def __repr__(self):
        return f"BandedMatrix(n={self._n}, k={self._k})"

    def __eq__(self, other):
        if not isinstance(other, BandedMatrix):
            return NotImplemented
        return self._n == other._n and np.array_equal(self.to_dense(), other.to_dense())

    __hash__ = None

    # arithmetic ---------------------------------------------------------

    def widen(self, k):
        """Same matrix stored with a larger half-bandwidth ``k``."""
        k = min(int(k), self._n - 1)
        if k < self._k:
            raise InvalidBandwidthError("widen() cannot shrink the band; use band_truncate")
        if k == self._k:
            return self
        data = np.zeros((2 * k + 1, self._n))
        data[k - self._k:k + self._k + 1] = self._data
        return BandedMatrix(data, k)

    def __add__(self, other):
        if isinstance(other, BandedMatrix):
            if other.n != self._n:
                raise ShapeMismatchError(f"cannot add {self.shape} and {other.shape}")
            k = max(self._k, other._k)
            return BandedMatrix(self.widen(k)._data + other.widen(k)._data, k)
        if isinstance(other, np.ndarray):
            return self.to_dense() + other
        return NotImplemented

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return BandedMatrix(-self._data, self._k)

    def __sub__(self, other):
        if isinstance(other, (BandedMatrix, np.ndarray)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, c):
        if isinstance(c, (int, float, np.floating, np.integer)):
            return BandedMatrix(float(c) * self._data, self._k)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, BandedMatrix):
            return _banded_matmul(self, other)
        if isinstance(other, np.ndarray):
            return self.to_dense() @ other
        return NotImplemented

    def __rmatmul__(self, other):
        if isinstance(other, np.ndarray):
            return other @ self.to_dense()
        return NotImplemented

    @property
    def T(self):
        k, n = self._k, self._n
        data = np.empty_like(self._data)
        for d in range(-k, k + 1):
            # A^T[i, i-d] = A[i-d, i], stored at row i-d with offset -d
            data[d + k] = _shift(self._data[-d + k], d)
        return BandedMatrix(data, k)

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        y = np.zeros(self._n)
        for d in range(-self._k, self._k + 1):
            y += self._data[d + self._k] * _shift(x, d)
        return y


def _banded_matmul(A, B):
    if A.n != B.n:
        raise ShapeMismatchError(f"cannot multiply {A.shape} by {B.shape}")
    n = A.n
    k = min(A.k + B.k, n - 1)
    data = np.zeros((2 * k + 1, n))
    # C[i, i-a-b] += A[i, i-a] * B[i-a, i-a-b]
    for a in range(-A.k, A.k + 1):
        da = A.data[a + A.k]
        if not np.any(da):
            continue
        for b in range(-B.k, B.k + 1):
            c = a + b
            if abs(c) > k:
                continue
            data[c + k] += da * _shift(B.data[b + B.k], a)
    return BandedMatrix(data, k)


# ---------------------------------------------------------------------------
# helpers shared by all modules

def as_array(A):
    """Return ``A`` as a finite 2-d float array (BandedMatrix is densified)."""
    if isinstance(A, BandedMatrix):
        return A.to_dense()
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ShapeMismatchError(f"expected a 2-d matrix, got ndim={A.ndim}")
    if A.size == 0:
        raise InputError("empty matrix")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    return A


def _require_square(A):
    if A.shape[0] != A.shape[1]:
        raise ShapeMismatchError(f"expected a square matrix, got shape {A.shape}")


def size_of(A):
    return A.n if isinstance(A, BandedMatrix) else np.shape(A)[0]


# ---------------------------------------------------------------------------
# band structure

def band_truncate(A, k):
    """``B_k(A)``: keep the entries with ``|i - j| <= k``, zero the rest."""
    return BandedMatrix.from_dense(A, k)


def diagonal_sup(A, d):
    """Largest absolute entry on diagonal ``d`` (``i - j = d``)."""
    if isinstance(A, BandedMatrix):
        diag = A.diagonal(d)
    else:
        A = as_array(A)
        _require_square(A)
        d = int(d)
        if abs(d) >= A.shape[0]:
            raise InvalidBandwidthError(f"diagonal offset {d} out of range for n={A.shape[0]}")
        diag = np.diagonal(A, offset=-d)
    return float(np.max(np.abs(diag)))


def diagonal_sups(A):
    """All diagonal suprema as an array indexed by ``d + n - 1`` for ``d = -(n-1)..n-1``."""
    A = as_array(A)
    _require_square(A)
    n = A.shape[0]
    return np.array([np.max(np.abs(np.diagonal(A, offset=-d))) for d in range(-(n - 1), n)])


def band_distance_bounds(A, k):
    """Bracket ``lower <= dist(A, BO_k) <= upper``.

    ``lower`` is the largest entry outside the band (no banded matrix can
    cancel it); ``upper`` is the norm of the off-band remainder left by hard
    truncation.
    """
    A = as_array(A)
    _require_square(A)
    n = A.shape[0]
    k = int(k)
    if k < 0:
        raise InvalidBandwidthError("k must be non-negative")
    if k >= n - 1:
        return 0.0, 0.0
    sups = diagonal_sups(A)
    offsets = np.arange(-(n - 1), n)
    lower = float(np.max(sups[np.abs(offsets) > k]))
    if lower == 0.0:
        return 0.0, 0.0
    rest = A - band_truncate(A, k).to_dense()
    upper = op_norm(rest)
    return lower, max(upper, lower)


def is_banded(A, k):
    """Exact test for membership in ``BO_k`` (stored zeros only)."""
    A = as_array(A)
    i, j = np.nonzero(A)
    return bool(np.all(np.abs(i - j) <= k))


# ---------------------------------------------------------------------------
# norms

def op_norm(A):
    """Spectral norm ``||A||`` (largest singular value).

    Dense SVD up to ``DENSE_NORM_LIMIT``; above that, power iteration on
    ``A^T A``.
    """
    if isinstance(A, BandedMatrix):
        if A.n > DENSE_NORM_LIMIT:
            return _power_norm(A.matvec, A.T.matvec, A.n)
        A = A.to_dense()
    A = as_array(A)
    if max(A.shape) > DENSE_NORM_LIMIT:
        return _power_norm(lambda x: A @ x, lambda x: A.T @ x, A.shape[1])
    return float(np.linalg.norm(A, 2))


def _power_norm(mv, rmv, n, tol=POWER_TOL, maxiter=None):
    maxiter = 10 * n if maxiter is None else maxiter
    rng = np.random.default_rng(0)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(maxiter):
        y = rmv(mv(x))
        lam_new = float(x @ y)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        resid = np.linalg.norm(y - lam_new * x)
        x = y / ny
        lam = lam_new
        if resid <= tol * max(lam, 1e-300):
            break
    return math.sqrt(max(lam, 0.0))


def frobenius_norm(A):
    return float(np.linalg.norm(as_array(A), "fro"))


# ---------------------------------------------------------------------------
# plumbing: products, sums, adjoints

def matmul(A, B):
    if isinstance(A, BandedMatrix) and isinstance(B, BandedMatrix):
        return A @ B
    A, B = as_array(A), as_array(B)
    if A.shape[1] != B.shape[0]:
        raise ShapeMismatchError(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def add(A, B):
    if isinstance(A, BandedMatrix) and isinstance(B, BandedMatrix):
        return A + B
    A, B = as_array(A), as_array(B)
    if A.shape != B.shape:
        raise ShapeMismatchError(f"cannot add {A.shape} and {B.shape}")
    return A + B


def scale(A, c):
    if isinstance(A, BandedMatrix):
        return A * c
    return float(c) * as_array(A)


def adjoint(A):
    """Transpose (all matrices here are real)."""
    if isinstance(A, BandedMatrix):
        return A.T
    return as_array(A).T.copy()


# ---------------------------------------------------------------------------
# generalized banding

class IndexMetric:
    """A metric on the index set ``{0, ..., n-1}``.

    Use one of :meth:`linear`, :meth:`from_points` or :meth:`from_table`.
    """

    def __init__(self, table, kind):
        self._table = table
        self._table.setflags(write=False)
        self.kind = kind

    @classmethod
    def linear(cls, n):
        idx = np.arange(int(n))
        return cls(np.abs(idx[:, None] - idx[None, :]).astype(float), "linear")

    @classmethod
    def from_points(cls, points):
        X = np.asarray(points, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2 or not np.all(np.isfinite(X)):
            raise InputError("points must be a finite (n, d) array")
        diff = X[:, None, :] - X[None, :, :]
        return cls(np.sqrt(np.sum(diff * diff, axis=-1)), "points")

    @classmethod
    def from_table(cls, table, tol=1e-12):
        D = np.array(table, dtype=float)
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise ShapeMismatchError("distance table must be square")
        if not np.all(np.isfinite(D)):
            raise InputError("distance table has non-finite entries")
        if np.any(np.diag(D) != 0):
            raise InputError("distance table must vanish on the diagonal")
        if not np.array_equal(D, D.T):
            raise InputError("distance table must be symmetric")
        if np.any(D < 0):
            raise InputError("distances must be non-negative")
        scale_ = max(float(D.max()), 1.0)
        # D[i,j] <= D[i,l] + D[l,j] for all l
        for l in range(D.shape[0]):
            if np.any(D > D[:, l:l + 1] + D[l:l + 1, :] + tol * scale_):
                raise InputError("distance table violates the triangle inequality")
        return cls(D, "table")

    @property
    def n(self):
        return self._table.shape[0]

    @property
    def table(self):
        return self._table

    def __call__(self, i, j):
        return float(self._table[i, j])

    def diameter(self):
        return float(self._table.max())


def metric_truncate(A, metric, r):
    """Zero every entry with ``rho(i, j) > r``."""
    A = as_array(A)
    _require_square(A)
    if metric.n != A.shape[0]:
        raise ShapeMismatchError(f"metric has n={metric.n}, matrix has n={A.shape[0]}")
    out = A.copy()
    out[metric.table > r] = 0.0
    return out


# ---------------------------------------------------------------------------
# permutations

class Permutation:
    """Bijection ``i -> image[i]`` on ``{0, ..., n-1}``.

    As an operator it maps ``x`` to ``(x[image[0]], x[image[1]], ...)``.
    """

    def __init__(self, image):
        image = np.array(image, dtype=np.int64).ravel()
        n = image.size
        if n == 0 or not np.array_equal(np.sort(image), np.arange(n)):
            raise InputError("permutation image must be a bijection on 0..n-1")
        image.setflags(write=False)
        self._image = image

    @classmethod
    def identity(cls, n):
        return cls(np.arange(int(n)))

    @property
    def n(self):
        return self._image.size

    @property
    def image(self):
        return self._image

    def inverse(self):
        inv = np.empty_like(self._image)
        inv[self._image] = np.arange(self.n)
        return Permutation(inv)

    def compose(self, other):
        """Operator product ``self @ other`` (apply ``other`` first)."""
        if other.n != self.n:
            raise ShapeMismatchError("permutation sizes differ")
        return Permutation(other.image[self._image])

    def matrix(self):
        P = np.zeros((self.n, self.n))
        P[np.arange(self.n), self._image] = 1.0
        return P

    def __eq__(self, other):
        return isinstance(other, Permutation) and np.array_equal(self._image, other._image)

    __hash__ = None


def permute_conjugate(A, perm):
    """``P A P^T`` for the permutation operator ``P`` of ``perm``."""
    A = as_array(A)
    _require_square(A)
    if perm.n != A.shape[0]:
        raise ShapeMismatchError(f"permutation has n={perm.n}, matrix has n={A.shape[0]}")
    p = perm.image
    return A[np.ix_(p, p)]

"""Plain-text formats for matrices, point clouds, permutations, symbols and samples.

Matrix files start with a header line:

``dense n``
    followed by ``n`` rows of ``n`` numbers.
``banded n k``
    followed by one line per stored diagonal: the offset ``d = i - j`` and
    then its ``n - |d|`` entries from the top.  Omitted diagonals are zero.
``coo n nnz``
    followed by ``nnz`` lines ``i j value`` (0-based; repeats are summed).

Other headers: ``points n d`` (one point per line), ``perm n`` (the image
sequence), ``samples N p`` (one observation per line).  Symbol files have
no header, just ``k f_k`` lines.  ``#`` starts a comment everywhere.

Numbers are written with ``repr`` so that parse -> write -> parse is exact.
"""

import numpy as np

from .errors import InputError
from .matcore import BandedMatrix, IndexMetric, Permutation, as_array
from .wiener import SymbolSeries


class ParseError(InputError):
    pass


def _lines(text):
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line.split())
    return out


def _num(tok):
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"not a number: {tok!r}") from None


def _int(tok):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"not an integer: {tok!r}") from None


def _fmt(x):
    return repr(float(x))


def _header(lines, kinds):
    if not lines:
        raise ParseError("empty input")
    head = lines[0]
    if head[0] not in kinds:
        raise ParseError(f"unknown header {head[0]!r}; expected one of {sorted(kinds)}")
    return head[0], [_int(t) for t in head[1:]]


def parse_matrix(text):
    """Parse a matrix file; returns an ndarray or a BandedMatrix."""
    lines = _lines(text)
    kind, args = _header(lines, {"dense", "banded", "coo"})
    body = lines[1:]
    if kind == "dense":
        if len(args) != 1:
            raise ParseError("header must be 'dense n'")
        n = args[0]
        if n < 1 or len(body) != n or any(len(r) != n for r in body):
            raise ParseError(f"dense matrix needs {n} rows of {n} entries")
        return np.array([[_num(t) for t in r] for r in body])
    if kind == "banded":
        if len(args) != 2:
            raise ParseError("header must be 'banded n k'")
        n, k = args
        if n < 1 or not 0 <= k < n:
            raise ParseError(f"banded header needs 0 <= k < n, got n={n}, k={k}")
        diags = {}
        for r in body:
            d = _int(r[0])
            if abs(d) > k:
                raise ParseError(f"diagonal {d} outside declared half-bandwidth {k}")
            if d in diags:
                raise ParseError(f"diagonal {d} given twice")
            vals = [_num(t) for t in r[1:]]
            if len(vals) != n - abs(d):
                raise ParseError(f"diagonal {d} needs {n - abs(d)} entries, got {len(vals)}")
            diags[d] = vals
        data = np.zeros((2 * k + 1, n))
        for d, vals in diags.items():
            start = max(d, 0)
            data[d + k, start:start + len(vals)] = vals
        return BandedMatrix(data, k)
    if len(args) != 2:
        raise ParseError("header must be 'coo n nnz'")
    n, nnz = args
    if n < 1 or len(body) != nnz:
        raise ParseError(f"coo matrix declares {nnz} entries, found {len(body)}")
    A = np.zeros((n, n))
    for r in body:
        if len(r) != 3:
            raise ParseError("coo lines must be 'i j value'")
        i, j, v = _int(r[0]), _int(r[1]), _num(r[2])
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"coo index ({i}, {j}) out of range for n={n}")
        A[i, j] += v
    return A


def format_matrix(A, fmt=None):
    """Serialize ``A``; ``fmt`` defaults to ``banded`` for BandedMatrix, else ``dense``."""
    if fmt is None:
        fmt = "banded" if isinstance(A, BandedMatrix) else "dense"
    if fmt == "banded":
        B = A if isinstance(A, BandedMatrix) else BandedMatrix.from_dense(A, _bandwidth(A))
        out = [f"banded {B.n} {B.k}"]
        for d in range(-B.k, B.k + 1):
            out.append(" ".join([str(d)] + [_fmt(x) for x in B.diagonal(d)]))
        return "\n".join(out) + "\n"
    D = as_array(A)
    n = D.shape[0]
    if fmt == "dense":
        out = [f"dense {n}"] + [" ".join(_fmt(x) for x in row) for row in D]
        return "\n".join(out) + "\n"
    if fmt == "coo":
        i, j = np.nonzero(D)
        out = [f"coo {n} {i.size}"] + [f"{a} {b} {_fmt(D[a, b])}" for a, b in zip(i, j)]
        return "\n".join(out) + "\n"
    raise InputError(f"unknown matrix format {fmt!r}")


def _bandwidth(A):
    i, j = np.nonzero(as_array(A))
    return int(np.max(np.abs(i - j))) if i.size else 0


def parse_points(text):
    lines = _lines(text)
    _, args = _header(lines, {"points"})
    if len(args) != 2:
        raise ParseError("header must be 'points n d'")
    n, d = args
    body = lines[1:]
    if len(body) != n or any(len(r) != d for r in body):
        raise ParseError(f"expected {n} points of dimension {d}")
    return IndexMetric.from_points(np.array([[_num(t) for t in r] for r in body]).reshape(n, d))


def parse_permutation(text):
    lines = _lines(text)
    _, args = _header(lines, {"perm"})
    if len(args) != 1:
        raise ParseError("header must be 'perm n'")
    image = [_int(t) for r in lines[1:] for t in r]
    if len(image) != args[0]:
        raise ParseError(f"permutation declares n={args[0]} but lists {len(image)} entries")
    return Permutation(image)


def format_permutation(perm):
    return f"perm {perm.n}\n" + " ".join(str(int(i)) for i in perm.image) + "\n"


def parse_symbol(text):
    coeffs = {}
    for r in _lines(text):
        if len(r) != 2:
            raise ParseError("symbol lines must be 'k f_k'")
        k = _int(r[0])
        if k in coeffs:
            raise ParseError(f"coefficient {k} given twice")
        coeffs[k] = _num(r[1])
    return SymbolSeries(coeffs)


def format_symbol(f):
    return "".join(f"{k} {_fmt(v)}\n" for k, v in zip(f.offsets, f.values))


def parse_samples(text):
    lines = _lines(text)
    _, args = _header(lines, {"samples"})
    if len(args) != 2:
        raise ParseError("header must be 'samples N p'")
    N, p = args
    body = lines[1:]
    if len(body) != N or any(len(r) != p for r in body):
        raise ParseError(f"expected {N} observations of dimension {p}")
    return np.array([[_num(t) for t in r] for r in body]).reshape(N, p)


def format_samples(X):
    X = np.asarray(X, dtype=float)
    out = [f"samples {X.shape[0]} {X.shape[1]}"] + [" ".join(_fmt(x) for x in row) for row in X]
    return "\n".join(out) + "\n"

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from bandinv import matcore
from bandinv.errors import InputError, InvalidBandwidthError, ShapeMismatchError
from bandinv.matcore import (BandedMatrix, IndexMetric, Permutation, adjoint, add, band_distance_bounds,
                             band_truncate, diagonal_sup, matmul, metric_truncate, op_norm,
                             permute_conjugate)


def decay_matrix(n, base=2.0):
    i, j = np.indices((n, n))
    return base ** (-np.abs(i - j).astype(float))


def random_banded(rng, n, k, symmetric=False):
    A = rng.standard_normal((n, n))
    if symmetric:
        A = A + A.T
    return band_truncate(A, k)


# -- band_truncate ---------------------------------------------------------

def test_band_truncate_identity():
    for n in (1, 3, 7):
        assert np.array_equal(band_truncate(np.eye(n), 0).to_dense(), np.eye(n))


def test_band_truncate_decay_matrix():
    B = band_truncate(decay_matrix(4), 1).to_dense()
    assert B[0, 2] == 0.0
    assert B[0, 1] == 0.5
    assert B[3, 3] == 1.0


def test_band_truncate_matches_loop(rng):
    A = rng.standard_normal((8, 8))
    B = band_truncate(A, 3).to_dense()
    for i in range(8):
        for j in range(8):
            expected = A[i, j] if abs(i - j) <= 3 else 0.0
            assert B[i, j] == expected


def test_band_truncate_rejects_wide_k():
    with pytest.raises(InvalidBandwidthError):
        band_truncate(np.eye(4), 4)


# -- diagonal_sup ----------------------------------------------------------

def test_diagonal_sup_identity():
    assert diagonal_sup(np.eye(5), 0) == 1.0
    assert diagonal_sup(np.eye(5), 1) == 0.0


def test_diagonal_sup_constant_diagonal():
    assert diagonal_sup(decay_matrix(6), 2) == 0.25
    assert diagonal_sup(decay_matrix(6), -2) == 0.25


def test_diagonal_sup_loop_oracle(rng):
    A = rng.standard_normal((9, 9))
    for d in range(-8, 9):
        expected = max(abs(A[i, j]) for i in range(9) for j in range(9) if i - j == d)
        assert diagonal_sup(A, d) == expected
        assert diagonal_sup(BandedMatrix.from_dense(A, 8), d) == expected


def test_diagonal_sup_out_of_range():
    with pytest.raises(InvalidBandwidthError):
        diagonal_sup(np.eye(3), 3)


# -- band_distance_bounds --------------------------------------------------

def test_band_distance_banded_is_zero(rng):
    A = random_banded(rng, 10, 2).to_dense()
    assert band_distance_bounds(A, 2) == (0.0, 0.0)
    assert band_distance_bounds(A, 5) == (0.0, 0.0)


def test_band_distance_single_far_entry():
    n = 6
    A = np.eye(n)
    A[0, n - 1] = 1.0
    lo, hi = band_distance_bounds(A, n - 2)
    assert lo == 1.0
    assert hi == pytest.approx(1.0, rel=1e-14)


def test_band_distance_random_matches_svd(rng):
    A = rng.standard_normal((12, 12))
    lo, hi = band_distance_bounds(A, 2)
    i, j = np.indices(A.shape)
    tail = np.where(np.abs(i - j) > 2, A, 0.0)
    assert lo == np.max(np.abs(tail))
    assert hi == pytest.approx(scipy.linalg.svdvals(tail)[0], rel=1e-12)
    assert lo <= hi


# -- op_norm ---------------------------------------------------------------

def test_op_norm_simple():
    assert op_norm(np.eye(4)) == pytest.approx(1.0, rel=1e-15)
    assert op_norm(np.diag([3.0, -5.0, 2.0])) == pytest.approx(5.0, rel=1e-15)


def test_op_norm_random_vs_svd(rng):
    A = rng.standard_normal((20, 20))
    assert op_norm(A) == pytest.approx(scipy.linalg.svdvals(A)[0], rel=1e-10)


def test_op_norm_rejects_nonfinite():
    with pytest.raises(InputError):
        op_norm(np.array([[1.0, np.nan], [0.0, 1.0]]))


def test_op_norm_power_iteration_path(rng, monkeypatch):
    monkeypatch.setattr(matcore, "DENSE_NORM_LIMIT", 10)
    B = random_banded(rng, 40, 2)
    expected = scipy.linalg.svdvals(B.to_dense())[0]
    assert op_norm(B) == pytest.approx(expected, rel=1e-6)
    assert op_norm(B.to_dense()) == pytest.approx(expected, rel=1e-6)


# -- arithmetic ------------------------------------------------------------

def test_banded_product_bandwidth(rng):
    A, B = random_banded(rng, 9, 1), random_banded(rng, 9, 1)
    C = A @ B
    assert isinstance(C, BandedMatrix)
    assert C.k == 2
    np.testing.assert_allclose(C.to_dense(), A.to_dense() @ B.to_dense(), rtol=1e-13, atol=1e-13)


def test_banded_product_width_capped(rng):
    A, B = random_banded(rng, 5, 3), random_banded(rng, 5, 3)
    C = A @ B
    assert C.k == 4
    np.testing.assert_allclose(C.to_dense(), A.to_dense() @ B.to_dense(), atol=1e-13)


def test_add_negation_is_zero(rng):
    A = random_banded(rng, 7, 2)
    assert not np.any((A + (-A)).to_dense())
    D = rng.standard_normal((4, 4))
    assert not np.any(add(D, -D))


def test_adjoint_loop_oracle(rng):
    A = rng.standard_normal((5, 6))
    At = adjoint(A)
    for i in range(5):
        for j in range(6):
            assert At[j, i] == A[i, j]
    B = random_banded(rng, 8, 3)
    Bt = adjoint(B).to_dense()
    Bd = B.to_dense()
    for i in range(8):
        for j in range(8):
            assert Bt[j, i] == Bd[i, j]


def test_matmul_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_matvec(rng):
    B = random_banded(rng, 11, 2)
    x = rng.standard_normal(11)
    np.testing.assert_allclose(B.matvec(x), B.to_dense() @ x, atol=1e-13)


def test_from_diagonals_layout():
    B = BandedMatrix.from_diagonals(3, {0: [1, 2, 3], 1: [4, 5], -1: [6, 7]})
    np.testing.assert_array_equal(B.to_dense(), [[1, 6, 0], [4, 2, 7], [0, 5, 3]])
    np.testing.assert_array_equal(B.diagonal(1), [4, 5])


def test_banded_is_immutable(rng):
    B = random_banded(rng, 5, 1)
    with pytest.raises(ValueError):
        B.data[0, 0] = 1.0


# -- metric banding ----------------------------------------------------------

def test_metric_truncate_linear_equals_band(rng):
    A = rng.standard_normal((9, 9))
    for k in range(4):
        np.testing.assert_array_equal(metric_truncate(A, IndexMetric.linear(9), k),
                                      band_truncate(A, k).to_dense())


def test_metric_truncate_grid_neighbors(rng):
    pts = np.array([(x, y) for x in range(3) for y in range(3)], dtype=float)
    A = rng.standard_normal((9, 9))
    out = metric_truncate(A, IndexMetric.from_points(pts), 1.0)
    for i in range(9):
        for j in range(9):
            near = abs(pts[i, 0] - pts[j, 0]) + abs(pts[i, 1] - pts[j, 1]) <= 1
            assert out[i, j] == (A[i, j] if near else 0.0)


def test_metric_truncate_large_radius_is_noop(rng):
    A = rng.standard_normal((6, 6))
    metric = IndexMetric.from_points(rng.standard_normal((6, 2)))
    np.testing.assert_array_equal(metric_truncate(A, metric, metric.diameter()), A)


def test_metric_size_mismatch():
    with pytest.raises(ShapeMismatchError):
        metric_truncate(np.eye(3), IndexMetric.linear(4), 1)


def test_metric_table_validation():
    good = IndexMetric.from_table([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
    assert good(0, 2) == 2.0
    with pytest.raises(InputError):
        IndexMetric.from_table([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
    with pytest.raises(InputError):
        IndexMetric.from_table([[0, 1], [2, 0]])
    with pytest.raises(InputError):
        IndexMetric.from_table([[1, 1], [1, 0]])


# -- permutations -------------------------------------------------------------

def test_permute_identity(rng):
    A = rng.standard_normal((5, 5))
    np.testing.assert_array_equal(permute_conjugate(A, Permutation.identity(5)), A)


def test_permute_diagonal(rng):
    d = rng.standard_normal(6)
    perm = Permutation(rng.permutation(6))
    out = permute_conjugate(np.diag(d), perm)
    np.testing.assert_array_equal(out, np.diag(d[perm.image]))


def test_permute_round_trip_and_matrix(rng):
    A = rng.standard_normal((7, 7))
    perm = Permutation(rng.permutation(7))
    B = permute_conjugate(A, perm)
    assert np.array_equal(permute_conjugate(B, perm.inverse()), A)
    P = perm.matrix()
    np.testing.assert_allclose(B, P @ A @ P.T, atol=0)
    assert perm.compose(perm.inverse()) == Permutation.identity(7)


def test_permutation_validation():
    with pytest.raises(InputError):
        Permutation([0, 0, 1])
    with pytest.raises(ShapeMismatchError):
        permute_conjugate(np.eye(3), Permutation([1, 0]))


# -- properties -------------------------------------------------------------

sizes = st.integers(min_value=1, max_value=12)
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


@given(n=sizes, seed=seeds, data=st.data())
@settings(max_examples=60, deadline=None)
def test_round_trip_dense_banded(n, seed, data):
    k = data.draw(st.integers(0, n - 1))
    A = band_truncate(np.random.default_rng(seed).standard_normal((n, n)), k).to_dense()
    B = BandedMatrix.from_dense(A, k)
    assert np.array_equal(B.to_dense(), A)
    assert np.array_equal(band_truncate(B.to_dense(), k).to_dense(), A)


@given(n=sizes, seed=seeds)
@settings(max_examples=60, deadline=None)
def test_norm_submultiplicative_and_adjoint(n, seed):
    rng = np.random.default_rng(seed)
    A, B = rng.standard_normal((n, n)), rng.standard_normal((n, n))
    assert op_norm(A @ B) <= op_norm(A) * op_norm(B) * (1 + 1e-9)
    assert op_norm(A.T) == pytest.approx(op_norm(A), rel=1e-9)


@given(n=st.integers(2, 12), seed=seeds, data=st.data())
@settings(max_examples=60, deadline=None)
def test_distance_bracket_ordered(n, seed, data):
    rng = np.random.default_rng(seed)
    k = data.draw(st.integers(0, n - 1))
    A = rng.standard_normal((n, n))
    if data.draw(st.booleans()):
        A = band_truncate(A, k).to_dense()
    lo, hi = band_distance_bounds(A, k)
    assert 0.0 <= lo <= hi
    assert (lo == 0.0 and hi == 0.0) == matcore.is_banded(A, k)


@given(n=sizes, seed=seeds, data=st.data())
@settings(max_examples=40, deadline=None)
def test_band_truncate_idempotent_and_metric(n, seed, data):
    k = data.draw(st.integers(0, n - 1))
    A = np.random.default_rng(seed).standard_normal((n, n))
    once = band_truncate(A, k)
    assert band_truncate(once, k) == once
    np.testing.assert_array_equal(metric_truncate(A, IndexMetric.linear(n), k), once.to_dense())


@given(n=st.integers(2, 12), seed=seeds, data=st.data())
@settings(max_examples=40, deadline=None)
def test_banded_arithmetic_matches_dense(n, seed, data):
    rng = np.random.default_rng(seed)
    k1 = data.draw(st.integers(0, n - 1))
    k2 = data.draw(st.integers(0, n - 1))
    A, B = random_banded(rng, n, k1), random_banded(rng, n, k2)
    np.testing.assert_allclose((A @ B).to_dense(), A.to_dense() @ B.to_dense(), atol=1e-12)
    np.testing.assert_array_equal((A + B).to_dense(), A.to_dense() + B.to_dense())
    np.testing.assert_array_equal(A.T.to_dense(), A.to_dense().T)
    np.testing.assert_array_equal((2.5 * A).to_dense(), 2.5 * A.to_dense())

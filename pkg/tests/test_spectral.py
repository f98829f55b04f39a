import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from bandinv.errors import InputError, NotPositiveDefiniteError, NotSymmetricError, SingularMatrixError
from bandinv.invapprox import general_error_bound, spd_error_bound
from bandinv.spectral import singular_bounds, spd_bounds, user_bounds


def tridiag(n, off, diag):
    return np.diag(np.full(n, diag)) + np.diag(np.full(n - 1, off), 1) + np.diag(np.full(n - 1, off), -1)


def test_spd_bounds_scaled_identity():
    b = spd_bounds(2 * np.eye(5))
    assert b.m_lo == pytest.approx(2 * (1 - 1e-8), rel=1e-14)
    assert b.M_hi == pytest.approx(2 * (1 + 1e-8), rel=1e-14)
    assert b.kappa == pytest.approx(1.0, abs=1e-7)
    assert not b.rigorous


def test_spd_bounds_diagonal():
    b = spd_bounds(np.diag([1.0, 10.0]))
    assert b.m_lo == pytest.approx(1.0, rel=1e-7)
    assert b.M_hi == pytest.approx(10.0, rel=1e-7)
    assert b.kappa == pytest.approx(10.0, rel=1e-7)


def test_spd_bounds_tridiagonal_bracket():
    A = tridiag(20, -1.0, 4.0)
    w = np.linalg.eigvalsh(A)
    b = spd_bounds(A)
    assert b.m_lo <= w[0] and b.M_hi >= w[-1]
    # closed form: 4 - 2 cos(j pi / 21)
    assert b.m_lo == pytest.approx(4 - 2 * np.cos(np.pi / 21), rel=1e-7)


def test_spd_bounds_errors():
    with pytest.raises(NotSymmetricError):
        spd_bounds(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(NotPositiveDefiniteError):
        spd_bounds(np.diag([1.0, -1.0]))


def test_singular_bounds_orthogonal(rng):
    Q, _ = np.linalg.qr(rng.standard_normal((12, 12)))
    b = singular_bounds(Q)
    assert b.m_lo == pytest.approx(1.0, rel=1e-7)
    assert b.M_hi == pytest.approx(1.0, rel=1e-7)


def test_singular_bounds_diagonal():
    b = singular_bounds(np.diag([1.0, -3.0]))
    assert b.m_lo == pytest.approx(1.0, rel=1e-7)
    assert b.M_hi == pytest.approx(3.0, rel=1e-7)


def test_singular_bounds_random(rng):
    A = rng.standard_normal((30, 30))
    s = scipy.linalg.svdvals(A)
    b = singular_bounds(A)
    assert b.m_lo <= s[-1] and b.M_hi >= s[0]


def test_singular_bounds_reports_singularity():
    A = np.ones((3, 3))
    with pytest.raises(SingularMatrixError) as info:
        singular_bounds(A)
    assert info.value.sigma_max == pytest.approx(3.0)
    assert info.value.sigma_min < 1e-12


def test_user_bounds():
    assert user_bounds(1, 1).kappa == 1.0
    assert user_bounds(2, 8).kappa == 4.0
    assert user_bounds(2, 8).rigorous
    with pytest.raises(InputError):
        user_bounds(3, 2)
    with pytest.raises(InputError):
        user_bounds(0, 1)


@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 15))
@settings(max_examples=50, deadline=None)
def test_rayleigh_quotients_inside_bracket(seed, n):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, n))
    A = G @ G.T + 0.1 * np.eye(n)
    b = spd_bounds(A)
    X = rng.standard_normal((n, 20))
    rq = np.einsum("ij,ij->j", X, A @ X) / np.einsum("ij,ij->j", X, X)
    assert np.all(rq >= b.m_lo) and np.all(rq <= b.M_hi)


@given(seed=st.integers(0, 2 ** 32 - 1), n=st.integers(1, 15))
@settings(max_examples=50, deadline=None)
def test_singular_bracket_vs_inverse(seed, n):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n)) + 3 * np.eye(n)
    b = singular_bounds(A)
    assert b.M_hi >= np.linalg.norm(A, 2)
    assert 1.0 / b.m_lo >= np.linalg.norm(np.linalg.inv(A), 2)


@given(m=st.floats(0.1, 10), kappa=st.floats(1.0, 100), widen=st.floats(1.0, 2.0), n=st.integers(0, 20))
@settings(max_examples=100, deadline=None)
def test_widening_slack_increases_bounds(m, kappa, widen, n):
    tight = user_bounds(m, m * kappa)
    loose = user_bounds(m / widen, m * kappa * widen)
    assert spd_error_bound(loose, n) >= spd_error_bound(tight, n) * (1 - 1e-12)
    assert general_error_bound(loose, n) >= general_error_bound(tight, n) * (1 - 1e-12)

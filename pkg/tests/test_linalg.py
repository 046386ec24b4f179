from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xorcert import (
    NormBound,
    SparseMat,
    bernstein_tail,
    bernstein_threshold,
    l1_norm_bound,
    min_eig_check,
    min_eig_lower_bound,
    spectral_norm,
)


def _random_sparse(rng, rows, cols, density=0.4):
    a = rng.standard_normal((rows, cols))
    a[rng.random((rows, cols)) > density] = 0.0
    return a


def test_sparsemat_merges_duplicates_and_drops_zeros():
    m = SparseMat.from_entries(2, 3, [(0, 1, 2.0), (0, 1, -1.0), (1, 2, 3.0), (1, 0, 0.0),
                                      (0, 2, 1.5), (0, 2, -1.5)])
    assert m.nnz == 2
    np.testing.assert_array_equal(m.to_dense(), [[0.0, 1.0, 0.0], [0.0, 0.0, 3.0]])


def test_sparsemat_matvec_matches_dense(rng):
    a = _random_sparse(rng, 5, 7)
    m = SparseMat.from_dense(a)
    x = rng.standard_normal(7)
    y = rng.standard_normal(5)
    np.testing.assert_allclose(m.matvec(x), a @ x, atol=1e-12)
    np.testing.assert_allclose(m.rmatvec(y), a.T @ y, atol=1e-12)
    np.testing.assert_array_equal(m.transpose().to_dense(), a.T)
    np.testing.assert_allclose(m.row_l1(), np.abs(a).sum(axis=1), atol=1e-12)
    np.testing.assert_allclose(m.col_l1(), np.abs(a).sum(axis=0), atol=1e-12)
    assert m.abs_max() == np.abs(a).max()


def test_sparsemat_validation():
    with pytest.raises(ValueError):
        SparseMat.from_entries(2, 2, [(2, 0, 1.0)])  # row out of range
    with pytest.raises(ValueError):
        SparseMat.from_entries(2, 2, [(0, -1, 1.0)])
    with pytest.raises(ValueError):
        SparseMat.from_entries(2, 2, [(0, 0, math.inf)])
    with pytest.raises(ValueError):
        SparseMat(rows=-1, cols=2, r=np.array([], dtype=np.int64),
                  c=np.array([], dtype=np.int64), v=np.array([]))


def test_sparsemat_is_symmetric():
    assert SparseMat.from_dense([[1.0, 2.0], [2.0, 0.0]]).is_symmetric()
    assert not SparseMat.from_dense([[1.0, 2.0], [0.0, 0.0]]).is_symmetric()
    assert not SparseMat.from_dense([[1.0, 2.0, 0.0], [2.0, 0.0, 0.0]]).is_symmetric()


def test_norm_bound_validation():
    with pytest.raises(ValueError):
        NormBound(lower=2.0, upper=1.0, method="x")
    with pytest.raises(ValueError):
        NormBound(lower=-0.1, upper=1.0, method="x")


def test_spectral_norm_sandwiches_svd(rng):
    for _ in range(40):
        rows = int(rng.integers(1, 9))
        cols = int(rng.integers(1, 9))
        a = _random_sparse(rng, rows, cols)
        m = SparseMat.from_dense(a)
        nb = spectral_norm(m)
        sigma = float(np.linalg.svd(a, compute_uv=False)[0])
        assert nb.lower <= sigma <= nb.upper
        assert nb.upper <= l1_norm_bound(m) * (1 + 1e-11) + 1e-12
        assert nb.upper - nb.lower <= 1e-6 * max(1.0, sigma)


def test_spectral_norm_negative_entry():
    nb = spectral_norm(SparseMat.from_dense([[-3.0]]))
    assert nb.lower == pytest.approx(3.0, rel=1e-11)
    assert nb.upper == pytest.approx(3.0, rel=1e-11)
    assert nb.lower <= 3.0 <= nb.upper


def test_spectral_norm_zero_and_empty():
    nb = spectral_norm(SparseMat.from_dense(np.zeros((2, 2))))
    assert nb.lower == nb.upper == 0.0 and nb.method == "exact-small"
    empty = SparseMat.from_arrays(0, 4, [], [], [])
    assert spectral_norm(empty).upper == 0.0


def test_min_eig_lower_bound_sound(rng):
    for _ in range(25):
        n = int(rng.integers(1, 8))
        a = rng.standard_normal((n, n))
        s = SparseMat.from_dense(a + a.T)
        lam = float(np.linalg.eigvalsh(s.to_dense()).min())
        lb = min_eig_lower_bound(s)
        assert lb <= lam + 1e-12
        assert lam - lb <= 1e-5 * max(1.0, abs(lam))


def test_min_eig_check():
    eye = SparseMat.from_dense(np.eye(3))
    assert min_eig_check(eye, slack=0.0)
    indef = SparseMat.from_dense([[0.0, 2.0], [2.0, 0.0]])  # lambda_min = -2
    assert min_eig_check(indef, slack=2.001)
    assert not min_eig_check(indef, slack=1.0)
    with pytest.raises(ValueError):
        min_eig_check(eye, slack=-1.0)
    with pytest.raises(ValueError):
        min_eig_lower_bound(SparseMat.from_dense([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        min_eig_lower_bound(SparseMat.from_dense(np.ones((2, 3))))


def test_bernstein_tail_edges():
    assert bernstein_tail(1.0, 1.0, 2, 3, 0.0) == 1.0
    assert bernstein_tail(0.0, 0.0, 2, 3, 0.5) == 0.0  # zero variance, zero range
    assert bernstein_tail(1.0, 0.0, 1, 1, 2.0) == pytest.approx(2 * math.exp(-2.0))
    with pytest.raises(ValueError):
        bernstein_tail(-1.0, 0.0, 1, 1, 1.0)
    with pytest.raises(ValueError):
        bernstein_tail(1.0, 0.0, -1, 1, 1.0)


def test_bernstein_tail_monotone_in_t():
    ts = np.linspace(0.0, 10.0, 50)
    vals = [bernstein_tail(2.0, 0.5, 4, 4, float(t)) for t in ts]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_bernstein_threshold_plugs_back():
    for sigma2 in (0.0, 0.3, 2.0):
        for r in (0.0, 0.1, 1.0):
            for d in ((1, 1), (5, 40)):
                for delta in (1.0, 0.5, 1e-3, 1e-9):
                    t = bernstein_threshold(sigma2, r, d[0], d[1], delta)
                    assert bernstein_tail(sigma2, r, d[0], d[1], t) <= delta + 1e-12


def test_bernstein_threshold_degenerate_corner():
    # zero variance and zero range with d1 + d2 > delta: any positive t works
    t = bernstein_threshold(0.0, 0.0, 2, 2, 0.5)
    assert t > 0.0
    assert bernstein_tail(0.0, 0.0, 2, 2, t) == 0.0


def test_bernstein_threshold_validation():
    assert bernstein_threshold(1.0, 1.0, 0, 0, 0.5) == 0.0  # tail is 0 <= delta already
    with pytest.raises(ValueError):
        bernstein_threshold(1.0, 1.0, 1, 1, 0.0)
    with pytest.raises(ValueError):
        bernstein_threshold(1.0, 1.0, 1, 1, 1.5)
    with pytest.raises(ValueError):
        bernstein_threshold(-1.0, 1.0, 1, 1, 0.5)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_spectral_norm_property(seed):
    rng = np.random.default_rng(seed)
    a = np.round(rng.standard_normal((int(rng.integers(1, 6)), int(rng.integers(1, 6)))), 2)
    m = SparseMat.from_dense(a)
    nb = spectral_norm(m)
    sigma = float(np.linalg.svd(a, compute_uv=False)[0])
    assert nb.lower <= sigma <= nb.upper

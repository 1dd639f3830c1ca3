import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from simlasso import lasso
from simlasso.design import build_covariance
from simlasso.errors import NotConvergedWarning, TooFewSamples
from simlasso.models import Dataset, SimModelSpec, generate, make_beta
from simlasso.screening import soft_threshold_fit
from simlasso.support import SignedSupport

from oracles import exhaustive_lasso, lasso_objective, orthonormal_dataset


def _random_dataset(rng, n, p, s=3, noise=1.0):
    X = rng.standard_normal((n, p))
    beta = np.zeros(p)
    beta[rng.choice(p, size=min(s, p), replace=False)] = rng.choice([-1, 1], size=min(s, p))
    return Dataset(X, X @ beta + noise * rng.standard_normal(n))


def _check_kkt(d, f, tol):
    g = d.X.T @ (d.y - d.X @ f.beta) / d.n
    nz = f.beta != 0
    assert np.all(np.abs(g[nz] - f.lam * np.sign(f.beta[nz])) <= tol)
    assert np.all(np.abs(g[~nz]) <= f.lam + tol)


def test_orthonormal_matches_soft_threshold(rng):
    for _ in range(10):
        d = orthonormal_dataset(rng, 60, 15)
        lam = 0.3 * np.max(np.abs(d.X.T @ d.y / d.n))
        f = lasso.fit(d, lam)
        assert np.max(np.abs(f.beta - soft_threshold_fit(d, lam))) < 1e-8


def test_full_shrinkage(rng):
    d = _random_dataset(rng, 30, 10)
    lam_max = np.max(np.abs(d.X.T @ d.y / d.n))
    for lam in (lam_max, 2 * lam_max, 10 * lam_max):
        f = lasso.fit(d, lam)
        assert np.all(f.beta == 0) and f.converged


def test_two_column_hand_solution():
    # orthogonal columns with norm sqrt(n): beta_1 = (1 - 0.25)_+ = 0.75
    X = np.array([[1.0, 1.0], [1.0, -1.0], [1.0, 1.0], [1.0, -1.0]])
    y = X @ np.array([1.0, 0.0])
    f = lasso.fit(Dataset(X, y), 0.25)
    assert np.allclose(f.beta, [0.75, 0.0], atol=1e-12)


def test_rejects_bad_inputs(rng):
    d = _random_dataset(rng, 10, 3)
    with pytest.raises(ValueError):
        lasso.fit(d, 0.0)
    with pytest.raises(ValueError):
        lasso.fit(d, 0.1, tol=0)


def test_not_converged_is_flagged(rng):
    d = _random_dataset(rng, 40, 30)
    with pytest.warns(NotConvergedWarning):
        f = lasso.fit(d, 0.01, max_iter=1, polish=False)
    assert not f.converged and f.kkt_residual > 1e-8


def test_objective_non_increasing_per_sweep(rng):
    X = rng.standard_normal((50, 40))
    X[:, 1] = X[:, 0] + 0.05 * rng.standard_normal(50)
    d = Dataset(X, X[:, :5].sum(axis=1) + rng.standard_normal(50))
    f = lasso.fit(d, 0.02, polish=False, trace=10_000)
    tr = f.trace
    assert tr.size > 3
    assert np.all(np.diff(tr) <= 1e-12 * np.abs(tr[:-1]))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.integers(1, 50), n=st.integers(5, 80),
       frac=st.floats(0.01, 0.9))
def test_kkt_property(seed, p, n, frac):
    rng = np.random.default_rng(seed)
    d = _random_dataset(rng, n, p)
    lam = frac * max(np.max(np.abs(d.X.T @ d.y / d.n)), 1e-3)
    f = lasso.fit(d, lam)
    assert f.converged
    _check_kkt(d, f, 1e-7)


def test_nested_large_lambdas_are_zero(rng):
    d = _random_dataset(rng, 25, 8)
    lam_max = np.max(np.abs(d.X.T @ d.y / d.n))
    assert np.all(lasso.fit(d, 3 * lam_max).beta == 0)
    assert np.all(lasso.fit(d, 1.5 * lam_max).beta == 0)


def test_column_permutation_equivariance(rng):
    d = _random_dataset(rng, 60, 12)
    perm = rng.permutation(12)
    a = lasso.fit(d, 0.05, tol=1e-12)
    b = lasso.fit(Dataset(d.X[:, perm], d.y), 0.05, tol=1e-12)
    assert np.allclose(b.beta, a.beta[perm], atol=1e-9)


@pytest.mark.parametrize("seed", range(8))
def test_matches_exhaustive_oracle(seed):
    rng = np.random.default_rng(seed)
    p = int(rng.integers(2, 7))
    d = _random_dataset(rng, int(rng.integers(p + 1, 9)), p)
    lam = float(rng.uniform(0.05, 0.6)) * np.max(np.abs(d.X.T @ d.y / d.n))
    best, _ = exhaustive_lasso(d.X, d.y, lam)
    f = lasso.fit(d, lam)
    assert abs(lasso_objective(d.X, d.y, f.beta, lam) - best) < 1e-7
    assert f.objective == pytest.approx(lasso_objective(d.X, d.y, f.beta, lam), abs=1e-12)


def test_path_basics(rng):
    d = _random_dataset(rng, 80, 20)
    pth = lasso.path(d, 30, 1e-3)
    lam_max = np.max(np.abs(d.X.T @ d.y / d.n))
    assert pth.grid[0] == lam_max and np.all(pth.fits[0].beta == 0)
    assert np.all(np.diff(pth.grid) < 0)
    assert pth.grid[-1] == pytest.approx(lam_max * 1e-3)
    for f in pth:
        assert f.converged
        _check_kkt(d, f, 1e-7)


def test_path_grid_of_two(rng):
    d = _random_dataset(rng, 40, 5)
    pth = lasso.path(d, 2, 0.1)
    lam_max = np.max(np.abs(d.X.T @ d.y / d.n))
    assert list(pth.grid) == [lam_max, lam_max * 0.1]


def test_path_rejects_bad_grid(rng):
    d = _random_dataset(rng, 40, 5)
    with pytest.raises(ValueError):
        lasso.path(d, 1, 0.1)
    with pytest.raises(ValueError):
        lasso.path(d, 10, 1.0)


def test_path_max_nnz_truncates(rng):
    d = _random_dataset(rng, 100, 30, s=10)
    pth = lasso.path(d, 50, 1e-3, max_nnz=3)
    assert pth.fits[-1].nnz > 3 and all(f.nnz <= 3 for f in pth.fits[:-1])
    assert len(pth.grid) == len(pth.fits)


def test_path_contains_trivial_cases(rng):
    d = _random_dataset(rng, 40, 6)
    pth = lasso.path(d, 20, 0.01)
    ok, lam = lasso.path_contains_true_support(pth, SignedSupport())
    assert ok and lam == pth.grid[0]
    zero = lasso.LassoPath(pth.grid[:1], pth.fits[:1])
    assert lasso.path_contains_true_support(zero, SignedSupport([(0, 1)])) == (False, None)


def test_path_contains_noiseless_truth():
    cov = build_covariance("identity", 30)
    beta = make_beta(cov, [2, 9, 20], [1, -1, 1])
    d = generate(cov, beta, SimModelSpec("linear", noise_scale=0.0), 300, seed=4)
    ok, lam = lasso.path_contains_true_support(lasso.path(d, 100, 1e-3), beta.support)
    assert ok and lam > 0


def test_cv_single_grid(rng):
    d = _random_dataset(rng, 30, 5)
    assert lasso.cross_validate(d, [0.123], k=5, seed=0) == 0.123


def test_cv_too_few_samples(rng):
    d = _random_dataset(rng, 4, 3)
    with pytest.raises(TooFewSamples):
        lasso.cross_validate(d, [0.1, 0.2], k=5)
    with pytest.raises(TooFewSamples):
        lasso.cross_validate(d, [0.1, 0.2], k=1)


def test_cv_deterministic_and_ties_prefer_larger(rng):
    d = _random_dataset(rng, 60, 10)
    lam_max = np.max(np.abs(d.X.T @ d.y / d.n))
    grid = [50 * lam_max, 20 * lam_max, 10 * lam_max]  # all zero fits: exact tie
    assert lasso.cross_validate(d, grid, k=5, seed=3) == 50 * lam_max
    g = lasso.lambda_grid(lam_max, 20, 0.01)
    assert lasso.cross_validate(d, g, 5, seed=1) == lasso.cross_validate(d, g, 5, seed=1)


def test_fold_indices_partition():
    folds = lasso.fold_indices(23, 5, seed=2)
    assert sorted(np.concatenate(folds).tolist()) == list(range(23))
    assert [len(f) for f in folds] == [5, 5, 5, 4, 4]


def _cv_rate(pure_noise, reps=100):
    hits = 0
    for r in range(reps):
        rng = np.random.default_rng([99, r])
        if pure_noise:
            n, p = 100, 20
            X = rng.standard_normal((n, p))
            d = Dataset(X, rng.standard_normal(n))
            truth = set()
        else:
            n, p = 500, 20
            X = rng.standard_normal((n, p))
            beta = np.zeros(p)
            beta[[0, 5, 11]] = [1.0, -1.0, 1.0]
            d = Dataset(X, X @ beta + rng.standard_normal(n))
            truth = {0, 5, 11}
        gram = lasso.Gram.from_data(d.X, d.y)
        grid = lasso.lambda_grid(gram.lambda_max, 50, 1e-2)
        lam = lasso.cross_validate(d, grid, k=5, seed=r)
        beta_hat = lasso.fit_gram(gram, lam).beta
        chosen = set(np.flatnonzero(beta_hat).tolist())
        hits += (not chosen) if pure_noise else truth <= chosen
    return hits / reps


@pytest.mark.slow
def test_cv_strong_signal_keeps_truth():
    assert _cv_rate(False) >= 0.9


@pytest.mark.slow
def test_cv_pure_noise_prefers_null():
    assert _cv_rate(True) >= 0.8

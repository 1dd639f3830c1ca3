"""L1-penalised least squares: single fits, warm-started paths and K-fold CV.

The objective is (1/2n)||y - X b||^2 + lam ||b||_1 with no intercept.  Every
solver entry point works on the sufficient statistics G = X'X/n, c = X'y/n.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _cd
from .errors import NotConvergedWarning, TooFewSamples
from .models import Dataset
from .support import SignedSupport

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True)
class Gram:
    G: np.ndarray = field(repr=False)
    c: np.ndarray = field(repr=False)
    yy: float
    n: int

    @classmethod
    def from_data(cls, X, y, center: bool = False) -> "Gram":
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        if center:
            X = X - X.mean(axis=0)
            y = y - y.mean()
        n = X.shape[0]
        return cls(np.ascontiguousarray(X.T @ X / n), X.T @ y / n, float(y @ y / n), n)

    @property
    def p(self) -> int:
        return self.c.shape[0]

    @property
    def lambda_max(self) -> float:
        return float(np.max(np.abs(self.c))) if self.p else 0.0

    def gradient(self, beta) -> np.ndarray:
        """n^{-1} X'(y - X beta)."""
        return self.c - self.G @ beta

    def objective(self, beta, lam: float) -> float:
        return float(0.5 * self.yy - self.c @ beta + 0.5 * beta @ self.G @ beta
                     + lam * np.abs(beta).sum())

    def kkt(self, beta, lam: float) -> float:
        return float(_cd.kkt_violation(self.gradient(beta), beta, lam))


@dataclass(frozen=True)
class LassoFit:
    lam: float
    beta: np.ndarray = field(repr=False)
    kkt_residual: float
    iterations: int
    converged: bool
    objective: float
    trace: np.ndarray | None = field(default=None, repr=False)

    @property
    def support(self) -> SignedSupport:
        return SignedSupport.of(self.beta)

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.beta))


@dataclass(frozen=True)
class LassoPath:
    grid: np.ndarray = field(repr=False)
    fits: list[LassoFit] = field(repr=False)

    def __len__(self):
        return len(self.fits)

    def __iter__(self):
        return iter(self.fits)


def _polish(gram: Gram, beta: np.ndarray, lam: float, kkt: float):
    """Re-solve the stationarity equations on the active set with the signs fixed.

    Accepted only if the signs survive and the KKT violation does not grow.
    """
    act = np.flatnonzero(beta)
    if act.size == 0 or act.size >= gram.n:
        return beta, kkt
    sg = np.sign(beta[act])
    try:
        L = np.linalg.cholesky(gram.G[np.ix_(act, act)])
    except np.linalg.LinAlgError:
        return beta, kkt
    rhs = gram.c[act] - lam * sg
    sol = np.linalg.solve(L.T, np.linalg.solve(L, rhs))
    if not np.all(np.sign(sol) == sg):
        return beta, kkt
    cand = np.zeros_like(beta)
    cand[act] = sol
    ck = gram.kkt(cand, lam)
    if ck <= kkt:
        return cand, ck
    return beta, kkt


def fit_gram(gram: Gram, lam: float, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
             beta0=None, polish: bool = True, trace: int = 0, warn: bool = True) -> LassoFit:
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    beta = np.zeros(gram.p) if beta0 is None else np.array(beta0, dtype=float)
    tr = np.full(trace, np.nan)
    kkt, sweeps, ok = _cd.cd_solve(gram.G, gram.c, gram.yy, float(lam), beta, float(tol),
                                   int(max_iter), tr)
    if polish:
        beta, kkt = _polish(gram, beta, lam, kkt)
        ok = kkt <= tol
    if not ok and warn:
        warnings.warn(f"coordinate descent stopped at KKT residual {kkt:.2e} (lambda={lam:.4g})",
                      NotConvergedWarning, stacklevel=2)
    return LassoFit(float(lam), beta, float(kkt), int(sweeps), bool(ok),
                    gram.objective(beta, lam), tr[: min(sweeps, trace)] if trace else None)


def fit(dataset: Dataset, lam: float, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
        center: bool = False, **kw) -> LassoFit:
    """Solve the LASSO at one penalty level by cyclic coordinate descent."""
    return fit_gram(Gram.from_data(dataset.X, dataset.y, center), lam, tol, max_iter, **kw)


def lambda_grid(lam_max: float, grid_size: int = 100, lambda_min_ratio: float = 1e-3) -> np.ndarray:
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    if not 0 < lambda_min_ratio < 1:
        raise ValueError("lambda_min_ratio must lie in (0, 1)")
    if not lam_max > 0:
        raise ValueError("lambda_max is zero: response is orthogonal to every column")
    g = lam_max * np.logspace(0.0, math.log10(lambda_min_ratio), grid_size)
    g[0] = lam_max
    g[-1] = lam_max * lambda_min_ratio
    return g


def path_gram(gram: Gram, grid, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
              max_nnz: int | None = None) -> LassoPath:
    grid = np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) >= 0):
        raise ValueError("lambda grid must be strictly descending")
    fits = []
    beta = np.zeros(gram.p)
    for lam in grid:
        f = fit_gram(gram, lam, tol, max_iter, beta0=beta, warn=False)
        fits.append(f)
        beta = f.beta
        if max_nnz is not None and f.nnz > max_nnz:
            break
    return LassoPath(grid[: len(fits)], fits)


def path(dataset: Dataset, grid_size: int = 100, lambda_min_ratio: float = 1e-3,
         tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER, center: bool = False,
         max_nnz: int | None = None) -> LassoPath:
    """Warm-started fits over a log-spaced grid from lambda_max down to lambda_max * ratio.

    With ``max_nnz`` the path stops after the first fit with more nonzeros.
    """
    gram = Gram.from_data(dataset.X, dataset.y, center)
    return path_gram(gram, lambda_grid(gram.lambda_max, grid_size, lambda_min_ratio), tol,
                     max_iter, max_nnz)


def path_contains_true_support(lasso_path: LassoPath, truth: SignedSupport):
    """(True, lambda) for the first fit whose signed support equals ``truth``, else (False, None)."""
    for f in lasso_path.fits:
        if f.support == truth:
            return True, f.lam
    return False, None


def fold_indices(n: int, k: int, seed=None) -> list[np.ndarray]:
    if k < 2 or n < k:
        raise TooFewSamples(f"K-fold CV needs K >= 2 and n >= K (n={n}, K={k})")
    perm = np.random.default_rng(seed).permutation(n)
    return [np.sort(f) for f in np.array_split(perm, k)]


def cv_errors(dataset: Dataset, grid, k: int = 5, seed=None, tol: float = DEFAULT_TOL,
              max_iter: int = DEFAULT_MAX_ITER) -> np.ndarray:
    """Held-out mean squared error for each grid value, averaged over folds."""
    grid = np.asarray(grid, dtype=float)
    order = np.argsort(-grid, kind="stable")
    desc = grid[order]
    errs = np.zeros(grid.size)
    X, y = dataset.X, dataset.y
    for test in fold_indices(dataset.n, k, seed):
        train = np.setdiff1d(np.arange(dataset.n), test, assume_unique=True)
        gram = Gram.from_data(X[train], y[train])
        beta = np.zeros(dataset.p)
        for pos, lam in zip(order, desc):
            beta = fit_gram(gram, lam, tol, max_iter, beta0=beta, warn=False).beta
            resid = y[test] - X[test] @ beta
            errs[pos] += np.mean(resid * resid)
    return errs / k


def cross_validate(dataset: Dataset, grid, k: int = 5, seed=None, **kw) -> float:
    """Grid value with the smallest K-fold error; ties go to the larger lambda."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 1:
        fold_indices(dataset.n, k, seed)
        return float(grid[0])
    errs = cv_errors(dataset, grid, k, seed, **kw)
    best = errs.min()
    tied = np.flatnonzero(errs <= best + 1e-12 * max(abs(best), 1.0))
    return float(grid[tied].max())

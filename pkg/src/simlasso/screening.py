"""Covariance screening and its identity-design soft-threshold counterpart."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadThreshold, TooFewSamples
from .models import Dataset
from .support import SignedSupport


@dataclass(frozen=True)
class ScreeningResult:
    v: np.ndarray
    threshold: float
    selected: SignedSupport

    def to_json(self) -> dict:
        return {"v": self.v.tolist(), "threshold": self.threshold,
                "selected": self.selected.as_list()}


def marginal_covariances(dataset: Dataset) -> np.ndarray:
    """V = n^{-1} sum_i Y_i X_i."""
    return dataset.X.T @ dataset.y / dataset.n


def screening_threshold(nu: float, n: int, p: int) -> float:
    return nu * math.sqrt(math.log(p) / n)


def covariance_screen(dataset: Dataset, nu: float) -> ScreeningResult:
    """Keep coordinates with |V_j| strictly above nu * sqrt(log p / n), signed by V_j."""
    if not nu > 0:
        raise BadThreshold(f"nu must be positive, got {nu}")
    if dataset.n < 2 or dataset.p < 2:
        raise TooFewSamples("screening needs n >= 2 and p >= 2")
    v = marginal_covariances(dataset)
    t = screening_threshold(nu, dataset.n, dataset.p)
    keep = np.flatnonzero(np.abs(v) > t)
    return ScreeningResult(v, t, SignedSupport((j, 1 if v[j] > 0 else -1) for j in keep))


def response_scale(y) -> float:
    """sqrt(n^{-1} sum Y_i^2), the plug-in for sigma = sqrt(E Y^2)."""
    y = np.asarray(y, dtype=float)
    return float(np.sqrt(np.mean(y * y)))


def default_nu(s: int, sigma: float) -> float:
    """nu = 1/sqrt(s) + 2 sqrt(2) sigma, with 1/sqrt(s) the equal-magnitude signal level."""
    if s < 1 or sigma < 0:
        raise ValueError("need s >= 1 and sigma >= 0")
    return 1.0 / math.sqrt(s) + 2.0 * math.sqrt(2.0) * sigma


def auto_nu(dataset: Dataset, s: int) -> float:
    return default_nu(s, response_scale(dataset.y))


def soft_threshold(x, lam: float):
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.maximum(np.abs(x) - lam, 0.0)


def soft_threshold_fit(dataset: Dataset, lam: float) -> np.ndarray:
    """LASSO solution when the sample Gram matrix is replaced by the identity."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    return soft_threshold(marginal_covariances(dataset), lam)

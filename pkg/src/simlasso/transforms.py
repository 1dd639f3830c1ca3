"""Outcome transformations g(Y) applied before fitting."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import TooFewSamples
from .models import Dataset

KINDS = ("identity", "cdf", "cdf-centered", "table")
CLI_NAMES = {"none": "identity", "cdf": "cdf", "cdf-centered": "cdf-centered"}


@dataclass(frozen=True)
class TransformSpec:
    """``table`` maps Y through the piecewise-linear curve (knots, values), clamped at the ends."""

    kind: str = "identity"
    knots: tuple = ()
    values: tuple = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown transform {self.kind!r}")
        if self.kind == "table":
            k, v = np.asarray(self.knots, float), np.asarray(self.values, float)
            if k.size < 1 or k.shape != v.shape:
                raise ValueError("table transform needs matching knots and values")
            if np.any(np.diff(k) <= 0) or np.any(np.diff(v) < 0):
                raise ValueError("table knots must increase and values must not decrease")

    @classmethod
    def from_name(cls, name: str) -> "TransformSpec":
        return cls(CLI_NAMES.get(name, name))


def empirical_cdf(y) -> np.ndarray:
    """F_n(Y_i) with tied observations sharing their average rank."""
    y = np.asarray(y, dtype=float)
    return rankdata(y, method="average") / y.size


def centered_cdf_transform(y) -> np.ndarray:
    return empirical_cdf(y) - 0.5


def apply_transform(y, spec: TransformSpec) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.size < 1:
        raise TooFewSamples("need at least one response")
    if spec.kind == "identity":
        return y.copy()
    if spec.kind == "cdf":
        return empirical_cdf(y)
    if spec.kind == "cdf-centered":
        return centered_cdf_transform(y)
    return np.interp(y, np.asarray(spec.knots, float), np.asarray(spec.values, float))


def transform_dataset(dataset: Dataset, spec: TransformSpec) -> Dataset:
    """Same design and truth with the response replaced by g(Y)."""
    if spec.kind == "identity":
        return dataset
    return dataset.with_response(apply_transform(dataset.y, spec))


def variance_of_conditional_mean(dataset: Dataset, bins: int = 20) -> float:
    """Binned estimate of Var E(X^T beta0 | Y).

    Observations are sorted by Y and cut into ``bins`` equal-count groups; the
    result is the size-weighted variance of the group means of X^T beta0.
    """
    if bins < 2:
        raise ValueError("bins must be >= 2")
    if dataset.n < 2 * bins:
        raise TooFewSamples(f"need at least {2 * bins} observations for {bins} bins")
    u = dataset.X @ dataset.truth.values
    order = np.argsort(dataset.y, kind="stable")
    groups = np.array_split(u[order], bins)
    means = np.array([g.mean() for g in groups])
    sizes = np.array([g.size for g in groups], dtype=float)
    centre = np.sum(sizes * means) / sizes.sum()
    return float(np.sum(sizes * (means - centre) ** 2) / sizes.sum())

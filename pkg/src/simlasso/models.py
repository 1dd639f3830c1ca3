"""Single-index response models Y = f(X^T beta0, eps) and their ground truth."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .design import CovarianceSpec, as_generator, sample_design
from .errors import DimensionMismatch, EmptySupport
from .support import SignedSupport


def _sigmoid(u):
    return 0.5 * (1.0 + np.tanh(0.5 * u))


LINKS: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "sin_linear": lambda u: u + np.sin(u),
    "atan2x": lambda u: 2.0 * np.arctan(u),
    "cube": lambda u: u ** 3,
    "sinh": np.sinh,
    "linear": lambda u: u,
    "logistic": _sigmoid,
}


@dataclass(frozen=True)
class SimModelSpec:
    """Link family plus additive noise scale.

    For ``"logistic"`` the link gives P(Y=1 | X) and ``noise_scale`` is unused.
    """

    link: str = "sin_linear"
    noise_scale: float = 1.0

    def __post_init__(self):
        if self.link not in LINKS:
            raise ValueError(f"unknown link {self.link!r}; choose from {sorted(LINKS)}")

    def mean_function(self, u: np.ndarray) -> np.ndarray:
        return LINKS[self.link](u)


@dataclass(frozen=True)
class CoefficientVector:
    values: np.ndarray = field(repr=False)

    @property
    def p(self) -> int:
        return self.values.shape[0]

    @property
    def s(self) -> int:
        return int(np.count_nonzero(self.values))

    @property
    def support(self) -> SignedSupport:
        return SignedSupport.of(self.values)

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.values)

    @property
    def min_signal(self) -> float:
        return float(np.min(np.abs(self.values[self.indices])))

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    truth: CoefficientVector | None = None
    model: SimModelSpec | None = None
    covariance: CovarianceSpec | None = None

    def __post_init__(self):
        if self.X.ndim != 2:
            raise DimensionMismatch("design must be a 2-d array")
        if self.y.shape != (self.X.shape[0],):
            raise DimensionMismatch(
                f"response length {self.y.shape} does not match {self.X.shape[0]} rows")
        if self.truth is not None and self.truth.p != self.X.shape[1]:
            raise DimensionMismatch("truth dimension does not match design columns")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    def with_response(self, y) -> "Dataset":
        return replace(self, y=np.asarray(y, dtype=float))


def make_beta(spec: CovarianceSpec, support_indices, signs=None, magnitudes=None) -> CoefficientVector:
    """Sparse coefficients normalised so that beta^T Sigma beta = 1.

    By default all nonzeros share one magnitude; ``magnitudes`` gives an
    unequal raw pattern that is rescaled instead.
    """
    idx = np.asarray(list(support_indices), dtype=int)
    if idx.size == 0:
        raise EmptySupport("support must contain at least one index")
    if len(set(idx.tolist())) != idx.size:
        raise ValueError("support indices must be distinct")
    if idx.min() < 0 or idx.max() >= spec.p:
        raise ValueError(f"support indices must lie in [0, {spec.p})")
    sg = np.ones(idx.size) if signs is None else np.asarray(list(signs), dtype=float)
    if sg.shape != idx.shape or not np.all(np.isin(sg, (-1.0, 1.0))):
        raise ValueError("signs must be +-1, one per index")
    mag = np.ones(idx.size) if magnitudes is None else np.abs(np.asarray(magnitudes, dtype=float))
    if mag.shape != idx.shape or np.any(mag == 0):
        raise ValueError("magnitudes must be nonzero, one per index")
    raw = np.zeros(spec.p)
    raw[idx] = sg * mag
    block = spec.matrix[np.ix_(idx, idx)]
    quad = raw[idx] @ block @ raw[idx]
    return CoefficientVector(raw / np.sqrt(quad))


def benchmark_beta(spec: CovarianceSpec, s: int, indices=None) -> CoefficientVector:
    """Equal-magnitude beta0 whose first nonzero is negative and the rest positive.

    Support defaults to the leading ``s`` coordinates.
    """
    idx = list(range(s)) if indices is None else sorted(indices)
    signs = [-1] + [1] * (len(idx) - 1)
    return make_beta(spec, idx, signs)


def generate(covariance: CovarianceSpec, beta: CoefficientVector, model: SimModelSpec,
             n: int, seed=None) -> Dataset:
    """Draw n observations from the single-index model.

    The seed is split into two independent streams, the first for the design
    and the second for the noise (or Bernoulli draws for the logistic link).
    """
    if beta.p != covariance.p:
        raise DimensionMismatch(f"beta has dimension {beta.p}, covariance {covariance.p}")
    design_ss, noise_ss = _split_seed(seed)
    X = sample_design(covariance, n, design_ss)
    u = X @ beta.values
    rng = np.random.default_rng(noise_ss)
    if model.link == "logistic":
        y = (rng.random(n) < model.mean_function(u)).astype(float)
    else:
        y = model.mean_function(u) + model.noise_scale * rng.standard_normal(n)
    return Dataset(X, y, beta, model, covariance)


def _split_seed(seed):
    if isinstance(seed, np.random.Generator):
        return seed, seed
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return ss.spawn(2)


def noise_stream(seed, n: int) -> np.ndarray:
    """Standard normal noise exactly as :func:`generate` draws it for ``seed``."""
    _, noise_ss = _split_seed(seed)
    return np.random.default_rng(noise_ss).standard_normal(n)


def estimate_c0(dataset: Dataset, beta=None) -> float:
    """Empirical c0 = mean of Y_i * X_i^T beta0."""
    b = dataset.truth.values if beta is None else np.asarray(beta, dtype=float)
    return float(np.mean(dataset.y * (dataset.X @ b)))


def estimate_xi2(dataset: Dataset, c0: float | None = None) -> float:
    """Empirical xi^2 = mean of (Y_i - c0 X_i^T beta0)^2, c0 estimated when omitted."""
    if c0 is None:
        c0 = estimate_c0(dataset)
    r = dataset.y - c0 * (dataset.X @ dataset.truth.values)
    return float(np.mean(r * r))


def population_c0(model: SimModelSpec, nodes: int = 160) -> float:
    """E[Z f(Z)] for Z ~ N(0,1), by Gauss-Hermite quadrature (additive noise drops out)."""
    z, w = np.polynomial.hermite_e.hermegauss(nodes)
    w = w / np.sqrt(2 * np.pi)
    return float(np.sum(w * z * model.mean_function(z)))


def recovery_target(beta: CoefficientVector, c0: float) -> SignedSupport:
    """Signed support of c0 * beta0, the object every method tries to recover."""
    if c0 == 0:
        return SignedSupport()
    return beta.support if c0 > 0 else beta.support.flipped()

"""Gaussian design matrices: covariance models and N(0, Sigma) row sampling."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BadCorrelation, NonPositiveDefinite

PIVOT_FLOOR = 1e-12


def as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def toeplitz_matrix(p: int, rho: float) -> np.ndarray:
    idx = np.arange(p)
    return rho ** np.abs(idx[:, None] - idx[None, :]).astype(float)


def cholesky_checked(sigma: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor; raises NonPositiveDefinite if any pivot drops below 1e-12."""
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise NonPositiveDefinite(str(exc)) from None
    pivots = np.diag(chol) ** 2
    if not np.all(pivots >= PIVOT_FLOOR):
        raise NonPositiveDefinite(f"Cholesky pivot {pivots.min():.3e} below {PIVOT_FLOOR}")
    return chol


@dataclass(frozen=True)
class CovarianceSpec:
    """Covariance of the design rows.

    ``kind`` is one of ``"identity"``, ``"toeplitz"`` or ``"explicit"``; build
    instances with :func:`build_covariance` so the Cholesky check runs eagerly.
    """

    kind: str
    p: int
    rho: float | None = None
    explicit: np.ndarray | None = field(default=None, repr=False, compare=False)

    @cached_property
    def matrix(self) -> np.ndarray:
        if self.kind == "identity":
            m = np.eye(self.p)
        elif self.kind == "toeplitz":
            m = toeplitz_matrix(self.p, self.rho)
        else:
            m = np.array(self.explicit, dtype=float)
        m.setflags(write=False)
        return m

    @cached_property
    def chol(self) -> np.ndarray:
        c = cholesky_checked(self.matrix)
        c.setflags(write=False)
        return c

    def to_config(self) -> dict:
        if self.kind == "identity":
            return {"kind": "identity"}
        if self.kind == "toeplitz":
            return {"kind": "toeplitz", "rho": self.rho}
        return {"kind": "explicit", "matrix": self.matrix.tolist()}


def build_covariance(kind: str, p: int | None = None, rho: float | None = None,
                     matrix=None) -> CovarianceSpec:
    kind = kind.lower()
    if kind == "explicit":
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("explicit covariance must be a square matrix")
        if not np.allclose(m, m.T, atol=1e-12, rtol=0):
            raise NonPositiveDefinite("explicit covariance is not symmetric")
        if p is not None and p != m.shape[0]:
            raise ValueError(f"p={p} does not match matrix of size {m.shape[0]}")
        spec = CovarianceSpec("explicit", m.shape[0], explicit=m.copy())
    else:
        if p is None or p < 1:
            raise ValueError("p must be >= 1")
        if kind == "identity":
            spec = CovarianceSpec("identity", int(p))
        elif kind == "toeplitz":
            if rho is None or not abs(rho) < 1:
                raise BadCorrelation(f"Toeplitz correlation must satisfy |rho| < 1, got {rho}")
            spec = CovarianceSpec("toeplitz", int(p), rho=float(rho))
        else:
            raise ValueError(f"unknown covariance kind {kind!r}")
    spec.chol  # fail fast
    return spec


def covariance_from_config(cfg: dict, p: int) -> CovarianceSpec:
    """Parse ``{"kind": "identity"}`` / ``{"kind": "toeplitz", "rho": r}`` config entries."""
    return build_covariance(cfg["kind"], p, rho=cfg.get("rho"), matrix=cfg.get("matrix"))


def sample_design(spec: CovarianceSpec, n: int, seed=None) -> np.ndarray:
    """Draw an (n, p) matrix with i.i.d. N(0, Sigma) rows as Z @ L.T."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = as_generator(seed)
    z = rng.standard_normal((n, spec.p))
    if spec.kind == "identity":
        return z
    return z @ spec.chol.T

"""Primal-dual witness construction, run as a diagnostic on a concrete dataset.

Given the true support S0 the witness solves the LASSO restricted to S0,
then checks strict dual feasibility (|Z_j| < 1 off the support) and sign
consistency (sign(c0 b0_j + Delta_j) = sign(c0 b0_j) on it).  Both passing
certifies that the unrestricted LASSO recovers the signed support of c0*b0.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .design import PIVOT_FLOOR
from .errors import InfeasibleSubgradient, SingularGram
from .lasso import Gram, fit_gram
from .models import Dataset, estimate_c0
from .support import SignedSupport

Z_TOL = 1e-8


def _factor(XS: np.ndarray, n: int):
    gram = XS.T @ XS / n
    try:
        cf = cho_factor(gram, lower=True)
    except np.linalg.LinAlgError:
        raise SingularGram("restricted Gram matrix is not positive definite") from None
    if np.min(np.diag(cf[0])) ** 2 < PIVOT_FLOOR:
        raise SingularGram("restricted Gram matrix is numerically singular")
    return cf


def _support(dataset: Dataset, support) -> np.ndarray:
    if support is None:
        return dataset.truth.indices
    idx = np.unique(np.asarray(list(support), dtype=int))
    if idx.size and (idx[0] < 0 or idx[-1] >= dataset.p):
        raise ValueError("support index out of range")
    return idx


def _residual(dataset: Dataset, c0: float) -> np.ndarray:
    """w = Y - c0 X beta0."""
    return dataset.y - c0 * (dataset.X @ dataset.truth.values)


def projection_complement(XS: np.ndarray) -> np.ndarray:
    """Dense I - X_S (X_S'X_S)^{-1} X_S'; only sensible for small n."""
    n = XS.shape[0]
    cf = _factor(XS, n)
    return np.eye(n) - XS @ cho_solve(cf, XS.T) / n


def restricted_lasso(dataset: Dataset, support, lam: float, tol: float = 1e-10):
    """LASSO on the columns in ``support``; returns (beta_S, z_S) with z_S the KKT subgradient."""
    idx = _support(dataset, support)
    if idx.size >= dataset.n:
        raise SingularGram(f"|S0|={idx.size} is not below n={dataset.n}")
    XS = dataset.X[:, idx]
    _factor(XS, dataset.n)
    gram = Gram.from_data(XS, dataset.y)
    f = fit_gram(gram, lam, tol=tol)
    beta = f.beta
    z = gram.gradient(beta) / lam
    nz = beta != 0
    z[nz] = np.sign(beta[nz])
    if np.any(np.abs(z) > 1 + Z_TOL):
        raise InfeasibleSubgradient(f"forced subgradient {np.abs(z).max():.6g} outside [-1, 1]")
    return beta, z


def dual_variables(dataset: Dataset, support, lam: float, z_check, w=None,
                   c0: float | None = None) -> np.ndarray:
    """Z_j = X_j'[X_S (X_S'X_S)^{-1} z_S + P_perp(w / (lam n))] for every j outside the support.

    ``w`` defaults to Y - c0 X beta0 from the dataset's truth.
    """
    idx = _support(dataset, support)
    n = dataset.n
    if w is None:
        w = _residual(dataset, estimate_c0(dataset) if c0 is None else c0)
    XS = dataset.X[:, idx]
    cf = _factor(XS, n)
    z_check = np.asarray(z_check, dtype=float)
    # (X_S'X_S)^{-1} = G^{-1} / n
    u = XS @ cho_solve(cf, z_check) / n
    pw = w - XS @ cho_solve(cf, XS.T @ w / n)
    comp = np.setdiff1d(np.arange(dataset.p), idx)
    return dataset.X[:, comp].T @ (u + pw / (lam * n))


def sign_perturbations(dataset: Dataset, support, lam: float, c0: float, signs, w=None) -> np.ndarray:
    """Delta = (X_S'X_S/n)^{-1} [X_S'w/n - lam * sign(c0 beta0_S)]."""
    idx = _support(dataset, support)
    if w is None:
        w = _residual(dataset, c0)
    XS = dataset.X[:, idx]
    cf = _factor(XS, dataset.n)
    return cho_solve(cf, XS.T @ w / dataset.n - lam * np.asarray(signs, dtype=float))


@dataclass(frozen=True)
class PdwReport:
    support: np.ndarray = field(repr=False)
    lam: float
    c0: float
    beta0_support: np.ndarray = field(repr=False)
    restricted_beta: np.ndarray = field(repr=False)
    subgradient: np.ndarray = field(repr=False)
    z_values: np.ndarray = field(repr=False)
    delta_values: np.ndarray = field(repr=False)
    max_abs_z: float
    strict_dual_feasible: bool
    sign_consistent: bool

    @property
    def certified(self) -> bool:
        return self.strict_dual_feasible and self.sign_consistent

    @property
    def target(self) -> SignedSupport:
        """Signed support of c0 * beta0."""
        return SignedSupport((int(j), int(s)) for j, s in
                             zip(self.support, np.sign(self.c0 * self.beta0_support)))

    def to_json(self) -> dict:
        return {
            "support": self.support.tolist(),
            "lambda": self.lam,
            "c0": self.c0,
            "restricted_beta": self.restricted_beta.tolist(),
            "subgradient": self.subgradient.tolist(),
            "z_values": self.z_values.tolist(),
            "delta_values": self.delta_values.tolist(),
            "max_abs_z": self.max_abs_z,
            "strict_dual_feasible": self.strict_dual_feasible,
            "sign_consistent": self.sign_consistent,
        }


def pdw_check(dataset: Dataset, lam: float, c0: float | None = None, support=None) -> PdwReport:
    """Run the witness on ``support`` (default: the true support).

    ``c0`` is an oracle input; when omitted it is estimated from the data and truth.
    """
    idx = _support(dataset, support)
    if c0 is None:
        c0 = estimate_c0(dataset)
    b0 = dataset.truth.values[idx]
    signs = np.sign(c0 * b0)
    beta_s, z_s = restricted_lasso(dataset, idx, lam)
    w = _residual(dataset, c0)
    z = dual_variables(dataset, idx, lam, z_s, w=w)
    delta = sign_perturbations(dataset, idx, lam, c0, signs, w=w)
    max_z = float(np.max(np.abs(z))) if z.size else 0.0
    consistent = bool(np.all(np.sign(c0 * b0 + delta) == signs) and np.all(signs != 0))
    return PdwReport(idx, float(lam), float(c0), b0, beta_s, z_s, z, delta, max_z,
                     max_z < 1.0, consistent)

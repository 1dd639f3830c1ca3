"""Population-level quantities that govern LASSO support recovery.

Everything here is deterministic dense linear algebra on Sigma and a support
set.  Constants the theory leaves unspecified (Upsilon_0..2) are inputs with
default 1, so the thresholds are meaningful only up to those constants.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .design import CovarianceSpec
from .errors import BadKappa, BadShape, SingularBlock

EIG_FLOOR = 1e-12


def inf_norm(M) -> float:
    """Induced infinity norm: maximum absolute row sum."""
    M = np.atleast_2d(M)
    if M.size == 0:
        return 0.0
    return float(np.max(np.sum(np.abs(M), axis=1)))


def sym_power(M: np.ndarray, power: float) -> np.ndarray:
    """M^power for symmetric positive definite M via eigendecomposition."""
    w, V = np.linalg.eigh(M)
    if w.min() < EIG_FLOOR:
        raise SingularBlock(f"eigenvalue {w.min():.3e} below floor {EIG_FLOOR}")
    return (V * w ** power) @ V.T


def effective_sample_size(n: float, p: int, s: int) -> float:
    """n / (s log(p - s))."""
    if s < 1 or n < 1 or p - s < 2:
        raise BadShape(f"need s >= 1, n >= 1 and p - s >= 2 (n={n}, p={p}, s={s})")
    return n / (s * math.log(p - s))


def sample_size_for(n_eff: float, p: int, s: int) -> int:
    """Smallest integer n whose effective sample size reaches ``n_eff``."""
    if s < 1 or p - s < 2:
        raise BadShape(f"need s >= 1 and p - s >= 2 (p={p}, s={s})")
    return max(1, math.ceil(n_eff * s * math.log(p - s)))


@dataclass(frozen=True)
class ConditionReport:
    irrep_norm: float
    kappa: float
    lambda_min: float
    lambda_max: float
    d_max_cond: float
    d_max_offsupport: float
    rho_inf: float
    inv_sqrt_inf_norm: float
    n_eff: float | None = None

    @property
    def irrepresentable(self) -> bool:
        return self.kappa > 0

    def to_json(self) -> dict:
        out = asdict(self)
        out["irrepresentable"] = self.irrepresentable
        return out


def schur_complement(sigma: np.ndarray, support) -> np.ndarray:
    """Sigma_{Sc,Sc} - Sigma_{Sc,S} Sigma_{S,S}^{-1} Sigma_{S,Sc}."""
    S, Sc = _split(sigma.shape[0], support)
    A = sigma[np.ix_(S, S)]
    B = sigma[np.ix_(Sc, S)]
    return sigma[np.ix_(Sc, Sc)] - B @ np.linalg.solve(A, B.T)


def _split(p: int, support):
    S = np.unique(np.asarray(list(support), dtype=int))
    if S.size == 0 or S.size >= p:
        raise BadShape("support must be a nonempty proper subset of the coordinates")
    if S[0] < 0 or S[-1] >= p:
        raise BadShape("support index out of range")
    return S, np.setdiff1d(np.arange(p), S)


def check_conditions(sigma, support, n: int | None = None) -> ConditionReport:
    """Irrepresentability, spectrum and conditioning of Sigma around ``support``."""
    if isinstance(sigma, CovarianceSpec):
        sigma = sigma.matrix
    sigma = np.asarray(sigma, dtype=float)
    p = sigma.shape[0]
    S, Sc = _split(p, support)
    A = sigma[np.ix_(S, S)]
    eig = np.linalg.eigvalsh(A)
    if eig[0] < EIG_FLOOR:
        raise SingularBlock(f"Sigma_SS has eigenvalue {eig[0]:.3e}")
    B = sigma[np.ix_(Sc, S)]
    irrep = inf_norm(np.linalg.solve(A, B.T).T)
    cond = sigma[np.ix_(Sc, Sc)] - B @ np.linalg.solve(A, B.T)
    root = sym_power(A, 0.5)
    inv_root = sym_power(A, -0.5)
    inv_root_norm = inf_norm(inv_root)
    return ConditionReport(
        irrep_norm=irrep,
        kappa=1.0 - irrep,
        lambda_min=float(eig[0]),
        lambda_max=float(eig[-1]),
        d_max_cond=float(np.max(np.abs(np.diag(cond)))),
        d_max_offsupport=float(np.max(np.abs(np.diag(sigma)[Sc]))),
        rho_inf=inv_root_norm * inf_norm(root),
        inv_sqrt_inf_norm=inv_root_norm,
        n_eff=None if n is None else effective_sample_size(n, p, S.size),
    )


def theoretical_lambda(xi2: float, c_t: float, d_max_cond: float, kappa: float,
                       n: int, p: int, s: int) -> float:
    """sqrt((xi^2 + 1) * 4 C_T D_max / kappa^2 * log(p - s) / n)."""
    if not kappa > 0:
        raise BadKappa(f"kappa must be positive, got {kappa}")
    if not c_t > 1:
        raise ValueError("C_T must exceed 1")
    if p - s < 2:
        raise BadShape("need p - s >= 2")
    return math.sqrt((xi2 + 1) * 4 * c_t * d_max_cond / kappa ** 2 * math.log(p - s) / n)


def theorem1_part_i_threshold(d_max_cond: float, lambda_min: float, xi2: float, lam: float,
                              kappa: float, s: int) -> float:
    """Effective sample size above which the LASSO support stays inside the truth."""
    return 4 * d_max_cond * (4 / lambda_min + (xi2 + 1) / (lam ** 2 * s)) / kappa ** 2


def lambda_t_sample_threshold(d_max_cond: float, lambda_min: float, kappa: float,
                              c_t: float) -> float:
    """The same condition rewritten for lam = lambda_T: 16 D_max / ((1 - 1/C_T) kappa^2 lambda_min)."""
    return 16 * d_max_cond / ((1 - 1 / c_t) * kappa ** 2 * lambda_min)


def min_signal_threshold(report: ConditionReport, lam: float, beta_inf: float, n: int, p: int,
                         s: int, upsilon0: float = 1.0, upsilon1: float = 1.0,
                         upsilon2: float = 1.0) -> float:
    """Minimal-signal bound for sign consistency, evaluated up to the Upsilon constants."""
    n_eff = effective_sample_size(n, p, s)
    first = report.inv_sqrt_inf_norm ** 2 * lam * upsilon0
    bracket = (upsilon1 * report.rho_inf * math.sqrt(s / (n * math.log(p - s))) * beta_inf
               + upsilon2 * report.inv_sqrt_inf_norm / math.sqrt(s))
    return first + bracket / math.sqrt(n_eff)

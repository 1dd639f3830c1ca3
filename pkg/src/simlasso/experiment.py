"""Monte-Carlo phase-transition experiments: recovery rate against effective sample size."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import conditions, lasso, screening
from .design import CovarianceSpec, covariance_from_config
from .models import (CoefficientVector, SimModelSpec, estimate_c0, estimate_xi2, generate,
                     benchmark_beta, population_c0, recovery_target)
from .support import SignedSupport
from .transforms import TransformSpec, transform_dataset

log = logging.getLogger(__name__)

METHODS = ("screening_auto", "screening", "lasso_path", "lasso_lambda_t", "lasso_cv")
CSV_HEADER = ["p", "s", "n_eff", "n", "replicates", "success_fraction"]


@dataclass
class ExperimentConfig:
    p_values: list[int]
    n_eff_grid: list[float]
    s_rule: str | int = "sqrt"
    covariance: dict = field(default_factory=lambda: {"kind": "toeplitz", "rho": 0.5})
    model: str = "sin_linear"
    noise_scale: float = 1.0
    method: str = "lasso_path"
    nu: float | None = None
    replicates: int = 200
    master_seed: int = 0
    transform: str = "none"
    grid_size: int = 100
    lambda_min_ratio: float = 1e-2
    cv_folds: int = 5
    c_t: float = 2.0

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        g = list(self.n_eff_grid)
        if not g or any(x <= 0 for x in g) or any(b <= a for a, b in zip(g, g[1:])):
            raise ValueError("n_eff_grid must be positive and strictly ascending")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.method == "screening" and not (self.nu and self.nu > 0):
            raise ValueError("method 'screening' needs a positive nu")
        if not (self.s_rule == "sqrt" or (isinstance(self.s_rule, int) and self.s_rule >= 1)):
            raise ValueError("s_rule must be 'sqrt' or a positive integer")
        SimModelSpec(self.model)
        TransformSpec.from_name(self.transform)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(**d)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return asdict(self)

    def sparsity(self, p: int) -> int:
        return int(round(math.sqrt(p))) if self.s_rule == "sqrt" else int(self.s_rule)


@dataclass(frozen=True)
class CurvePoint:
    n_eff: float
    n: int
    success_fraction: float
    replicates: int


@dataclass
class PhaseCurve:
    p: int
    s: int
    points: list[CurvePoint]

    def fraction_at(self, n_eff: float) -> float:
        for pt in self.points:
            if math.isclose(pt.n_eff, n_eff):
                return pt.success_fraction
        raise KeyError(n_eff)


def success_metric(estimated: SignedSupport, truth: SignedSupport) -> bool:
    return SignedSupport(estimated) == SignedSupport(truth)


def replicate_seed(master_seed: int, p: int, k: int, r: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([master_seed, p, k, r])


@dataclass(frozen=True)
class _Setting:
    p: int
    s: int
    covariance: CovarianceSpec
    beta: CoefficientVector
    c0: float


def _estimate(cfg: ExperimentConfig, st: _Setting, data) -> SignedSupport:
    m = cfg.method
    if m == "screening_auto":
        return screening.covariance_screen(data, screening.auto_nu(data, st.s)).selected
    if m == "screening":
        return screening.covariance_screen(data, cfg.nu).selected
    if m == "lasso_lambda_t":
        rep = conditions.check_conditions(st.covariance, st.beta.indices)
        xi2 = estimate_xi2(data)
        lam = conditions.theoretical_lambda(xi2, cfg.c_t, rep.d_max_cond, rep.kappa,
                                            data.n, st.p, st.s)
        return lasso.fit(data, lam, warn=False).support
    if m == "lasso_cv":
        gram = lasso.Gram.from_data(data.X, data.y)
        grid = lasso.lambda_grid(gram.lambda_max, cfg.grid_size, cfg.lambda_min_ratio)
        lam = lasso.cross_validate(data, grid, cfg.cv_folds, seed=0)
        return lasso.fit_gram(gram, lam, warn=False).support
    raise AssertionError(m)


def run_replicate(cfg: ExperimentConfig, st: _Setting, n: int, seed) -> bool:
    """One draw of the data and one recovery attempt; errors count as failures."""
    tf = TransformSpec.from_name(cfg.transform)
    try:
        data = generate(st.covariance, st.beta, SimModelSpec(cfg.model, cfg.noise_scale), n, seed)
        data = transform_dataset(data, tf)
        c0 = st.c0 if tf.kind == "identity" else estimate_c0(data)
        target = recovery_target(st.beta, c0)
        if cfg.method == "lasso_path":
            pth = lasso.path(data, cfg.grid_size, cfg.lambda_min_ratio, max_nnz=min(n, st.p))
            return lasso.path_contains_true_support(pth, target)[0]
        return success_metric(_estimate(cfg, st, data), target)
    except Exception as exc:  # noqa: BLE001 - failures are data, not crashes
        log.warning("replicate failed (p=%d, n=%d): %s", st.p, n, exc)
        return False


def run_experiment(cfg: ExperimentConfig, threads: int = 1) -> list[PhaseCurve]:
    """Success fraction of exact signed-support recovery on every (p, n_eff) point."""
    model = SimModelSpec(cfg.model, cfg.noise_scale)
    c0 = population_c0(model)
    settings = []
    for p in sorted(cfg.p_values):
        s = cfg.sparsity(p)
        cov = covariance_from_config(cfg.covariance, p)
        settings.append(_Setting(p, s, cov, benchmark_beta(cov, s), c0))

    curves = []
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        for st in settings:
            points = []
            for k, n_eff in enumerate(cfg.n_eff_grid):
                n = conditions.sample_size_for(n_eff, st.p, st.s)
                jobs = [pool.submit(run_replicate, cfg, st, n,
                                    replicate_seed(cfg.master_seed, st.p, k, r))
                        for r in range(cfg.replicates)]
                wins = sum(int(j.result()) for j in jobs)
                frac = wins / cfg.replicates
                log.info("p=%d s=%d n_eff=%g n=%d success=%.3f", st.p, st.s, n_eff, n, frac)
                points.append(CurvePoint(float(n_eff), n, frac, cfg.replicates))
            curves.append(PhaseCurve(st.p, st.s, points))
    return curves


def _num(x: float) -> str:
    return f"{x:.12g}"


def curves_to_csv(curves) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in sorted(curves, key=lambda c: c.p):
        for pt in sorted(c.points, key=lambda pt: pt.n_eff):
            w.writerow([c.p, c.s, _num(pt.n_eff), pt.n, pt.replicates, _num(pt.success_fraction)])
    return buf.getvalue()


def emit_csv(curves, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(curves_to_csv(curves))

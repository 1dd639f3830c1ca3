import math

import numpy as np
import pytest

from simlasso.experiment import (CurvePoint, ExperimentConfig, PhaseCurve, curves_to_csv,
                                 emit_csv, replicate_seed, run_experiment, success_metric)
from simlasso.support import SignedSupport


def test_success_metric():
    assert success_metric(SignedSupport([(1, 1)]), SignedSupport([(1, 1)]))
    assert not success_metric(SignedSupport([(1, -1)]), SignedSupport([(1, 1)]))
    assert not success_metric(SignedSupport([(1, 1), (2, 1)]), SignedSupport([(1, 1)]))


def test_csv_empty(tmp_path):
    out = tmp_path / "c.csv"
    emit_csv([], out)
    assert out.read_text() == "p,s,n_eff,n,replicates,success_fraction\n"


def test_csv_single_point(tmp_path):
    n = math.ceil(10 * 4 * math.log(12))
    assert n == 100
    out = tmp_path / "c.csv"
    emit_csv([PhaseCurve(16, 4, [CurvePoint(10.0, n, 0.84, 50)])], out)
    rows = out.read_text().splitlines()
    assert rows[1:] == ["16,4,10,100,50,0.84"]


def test_csv_ordering():
    curves = [PhaseCurve(64, 8, [CurvePoint(5.0, 1, 0.5, 2), CurvePoint(1.0, 1, 0.0, 2)]),
              PhaseCurve(16, 4, [CurvePoint(2.0, 1, 1.0, 2)])]
    rows = curves_to_csv(curves).splitlines()[1:]
    assert [r.split(",")[0] for r in rows] == ["16", "64", "64"]
    assert [r.split(",")[2] for r in rows] == ["2", "1", "5"]


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(p_values=[16], n_eff_grid=[2, 1])
    with pytest.raises(ValueError):
        ExperimentConfig(p_values=[16], n_eff_grid=[1], replicates=0)
    with pytest.raises(ValueError):
        ExperimentConfig(p_values=[16], n_eff_grid=[1], method="screening")
    with pytest.raises(ValueError):
        ExperimentConfig(p_values=[16], n_eff_grid=[1], model="quartic")


def test_config_roundtrip():
    cfg = ExperimentConfig(p_values=[16, 64], n_eff_grid=[1, 5], method="screening", nu=2.0)
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg


def test_replicate_seeds_distinct():
    a = np.random.default_rng(replicate_seed(0, 16, 0, 0)).random()
    b = np.random.default_rng(replicate_seed(0, 16, 0, 1)).random()
    c = np.random.default_rng(replicate_seed(0, 16, 1, 0)).random()
    assert len({a, b, c}) == 3


def _small(**kw):
    base = dict(p_values=[16, 36], n_eff_grid=[1, 8], replicates=6, master_seed=3,
                covariance={"kind": "identity"})
    base.update(kw)
    return ExperimentConfig(**base)


def test_deterministic_across_runs_and_threads():
    cfg = _small()
    a = curves_to_csv(run_experiment(cfg, threads=1))
    b = curves_to_csv(run_experiment(cfg, threads=1))
    c = curves_to_csv(run_experiment(cfg, threads=3))
    assert a == b == c


@pytest.mark.parametrize("method", ["lasso_path", "lasso_lambda_t", "lasso_cv", "screening_auto"])
def test_noiseless_linear_huge_n_eff(method):
    cfg = _small(p_values=[16], n_eff_grid=[200], replicates=1, model="linear", noise_scale=0.0,
                 method=method)
    (curve,) = run_experiment(cfg)
    assert curve.points[0].success_fraction == 1.0
    assert curve.points[0].n == math.ceil(200 * 4 * math.log(12))


def test_tiny_sample_fails():
    cfg = ExperimentConfig(p_values=[64], n_eff_grid=[0.5], replicates=100, master_seed=1)
    (curve,) = run_experiment(cfg)
    assert curve.points[0].n < curve.s * 5
    assert curve.points[0].success_fraction <= 0.1


def test_transform_option_runs():
    cfg = _small(transform="cdf", replicates=3)
    curves = run_experiment(cfg)
    assert all(0 <= pt.success_fraction <= 1 for c in curves for pt in c.points)


def test_unsizable_setting_raises():
    with pytest.raises(ValueError):
        run_experiment(_small(p_values=[3], s_rule=2))


def test_replicate_errors_count_as_failures(monkeypatch):
    import simlasso.experiment as ex

    def boom(*a, **k):
        raise FloatingPointError("synthetic")

    monkeypatch.setattr(ex.lasso, "path", boom)
    (curve,) = run_experiment(_small(p_values=[16], n_eff_grid=[50], replicates=4))
    assert curve.points[0].success_fraction == 0.0
    assert curve.points[0].replicates == 4


@pytest.mark.slow
def test_monotone_trend():
    cfg = ExperimentConfig(p_values=[16, 64], n_eff_grid=[2, 30], replicates=100, master_seed=8)
    for c in run_experiment(cfg):
        assert c.points[-1].success_fraction >= c.points[0].success_fraction


@pytest.mark.slow
def test_identity_dominates_toeplitz():
    grid = [3, 6, 10, 16]
    ident = run_experiment(ExperimentConfig(p_values=[64], n_eff_grid=grid, replicates=100,
                                            covariance={"kind": "identity"}, master_seed=4))
    toep = run_experiment(ExperimentConfig(p_values=[64], n_eff_grid=grid, replicates=100,
                                           covariance={"kind": "toeplitz", "rho": 0.5},
                                           master_seed=4))
    for a, b in zip(ident[0].points, toep[0].points):
        assert a.success_fraction >= b.success_fraction - 0.1

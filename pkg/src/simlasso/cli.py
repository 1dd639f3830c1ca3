"""Command line interface: ``simlasso <command> ...``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

import numpy as np

from . import conditions, experiment, lasso, pdw, screening
from .design import build_covariance
from .models import CoefficientVector, Dataset, SimModelSpec, generate, benchmark_beta
from .transforms import CLI_NAMES, TransformSpec, transform_dataset


def _data_args(ap: argparse.ArgumentParser) -> None:
    g = ap.add_argument_group("data", "either --data FILE.npz (arrays X, y, optional beta) "
                                      "or a simulated single-index model")
    g.add_argument("--data", help="npz file with arrays X, y and optionally beta")
    g.add_argument("--n", type=int, default=200)
    g.add_argument("--p", type=int, default=50)
    g.add_argument("--s", type=int, default=5)
    g.add_argument("--link", default="sin_linear")
    g.add_argument("--cov", choices=["identity", "toeplitz"], default="identity")
    g.add_argument("--rho", type=float, default=0.5)
    g.add_argument("--seed", type=int, default=0)


def _transform_arg(ap):
    ap.add_argument("--transform", choices=sorted(CLI_NAMES), default="none")


def _load_data(args) -> Dataset:
    if args.data:
        with np.load(args.data) as z:
            X, y = np.asarray(z["X"], float), np.asarray(z["y"], float)
            truth = CoefficientVector(np.asarray(z["beta"], float)) if "beta" in z else None
        data = Dataset(X, y, truth)
    else:
        cov = build_covariance(args.cov, args.p, rho=args.rho if args.cov == "toeplitz" else None)
        data = generate(cov, benchmark_beta(cov, args.s), SimModelSpec(args.link), args.n, args.seed)
    if getattr(args, "transform", "none") != "none":
        data = transform_dataset(data, TransformSpec.from_name(args.transform))
    return data


def _dump(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _parse_support(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def cmd_simulate(args):
    data = _load_data(args)
    np.savez(args.out, X=data.X, y=data.y, beta=data.truth.values)


def cmd_screen(args):
    data = _load_data(args)
    if args.auto_nu:
        s = args.s if data.truth is None else data.truth.s
        nu = screening.auto_nu(data, s)
    elif args.nu is None:
        raise SystemExit("screen: give --nu or --auto-nu")
    else:
        nu = args.nu
    out = screening.covariance_screen(data, nu).to_json()
    out["nu"] = nu
    _dump(out)


def cmd_lasso_path(args):
    data = _load_data(args)
    pth = lasso.path(data, args.grid, args.lmin_ratio, center=args.center)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["lambda", "nnz", "kkt_residual", "support_hash"])
    for f in pth:
        w.writerow([f"{f.lam:.12g}", f.nnz, f"{f.kkt_residual:.6g}", f.support.digest()])


def cmd_cv(args):
    data = _load_data(args)
    gram = lasso.Gram.from_data(data.X, data.y)
    grid = lasso.lambda_grid(gram.lambda_max, args.grid, args.lmin_ratio)
    errs = lasso.cv_errors(data, grid, args.k, seed=args.cv_seed)
    best = lasso.cross_validate(data, grid, args.k, seed=args.cv_seed)
    f = lasso.fit_gram(gram, best)
    _dump({"lambda": best, "k": args.k, "grid": grid.tolist(), "cv_error": errs.tolist(),
           "support": f.support.as_list()})


def cmd_pdw_check(args):
    data = _load_data(args)
    if data.truth is None:
        raise SystemExit("pdw-check needs the true beta (npz key 'beta' or a simulated model)")
    support = _parse_support(args.support) if args.support else None
    rep = pdw.pdw_check(data, args.lam, c0=args.c0, support=support)
    out = rep.to_json()
    out["certified"] = rep.certified
    _dump(out)


def cmd_conditions(args):
    if args.rho is None:
        cov = build_covariance("identity", args.p)
    else:
        cov = build_covariance("toeplitz", args.p, rho=args.rho)
    _dump(conditions.check_conditions(cov, _parse_support(args.support), n=args.n).to_json())


def cmd_phase_transition(args):
    cfg = experiment.ExperimentConfig.load(args.config)
    if args.transform is not None:
        cfg.transform = args.transform
    if args.seed is not None:
        cfg.master_seed = args.seed
    curves = experiment.run_experiment(cfg, threads=args.threads)
    if args.out == "-":
        sys.stdout.write(experiment.curves_to_csv(curves))
    else:
        experiment.emit_csv(curves, args.out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="simlasso", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="write a simulated dataset to npz")
    _data_args(sp)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("screen", help="covariance screening")
    _data_args(sp)
    _transform_arg(sp)
    sp.add_argument("--nu", type=float)
    sp.add_argument("--auto-nu", action="store_true", help="nu = 1/sqrt(s) + 2 sqrt(2) sigma_hat")
    sp.set_defaults(func=cmd_screen)

    sp = sub.add_parser("lasso-path", help="LASSO path as CSV")
    _data_args(sp)
    _transform_arg(sp)
    sp.add_argument("--grid", type=int, default=100)
    sp.add_argument("--lmin-ratio", type=float, default=1e-3)
    sp.add_argument("--center", action="store_true")
    sp.set_defaults(func=cmd_lasso_path)

    sp = sub.add_parser("cv", help="K-fold cross-validated lambda")
    _data_args(sp)
    _transform_arg(sp)
    sp.add_argument("--k", type=int, default=5)
    sp.add_argument("--grid", type=int, default=100)
    sp.add_argument("--lmin-ratio", type=float, default=1e-3)
    sp.add_argument("--cv-seed", type=int, default=0)
    sp.set_defaults(func=cmd_cv)

    sp = sub.add_parser("pdw-check", help="primal-dual witness diagnostic")
    _data_args(sp)
    _transform_arg(sp)
    sp.add_argument("--support", help="comma separated indices (default: true support)")
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--c0", type=float)
    sp.set_defaults(func=cmd_pdw_check)

    sp = sub.add_parser("conditions", help="irrepresentability and related constants")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--support", required=True)
    sp.add_argument("--rho", type=float, help="Toeplitz correlation (identity if omitted)")
    sp.add_argument("--n", type=int)
    sp.set_defaults(func=cmd_conditions)

    sp = sub.add_parser("phase-transition", help="Monte-Carlo recovery curves")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True, help="CSV path, or - for stdout")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--seed", type=int, help="override master_seed")
    sp.add_argument("--transform", choices=sorted(CLI_NAMES))
    sp.set_defaults(func=cmd_phase_transition)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(message)s")
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())

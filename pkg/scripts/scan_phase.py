"""Scan recovery rates over a wide n_eff grid to locate the phase-transition knees.

    python scripts/scan_phase.py --method lasso_path --cov toeplitz --reps 50
"""
import argparse
import logging
import sys
import time

from simlasso.experiment import ExperimentConfig, curves_to_csv, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--method", default="lasso_path")
    ap.add_argument("--model", default="sin_linear")
    ap.add_argument("--cov", default="toeplitz")
    ap.add_argument("--rho", type=float, default=0.5)
    ap.add_argument("--p", default="16,64,256")
    ap.add_argument("--s", default="sqrt")
    ap.add_argument("--grid", default="1,2,3,4,6,8,10,13,16,20,25,30,40,50")
    ap.add_argument("--reps", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--grid-size", type=int, default=100)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(message)s")
    cov = {"kind": args.cov, "rho": args.rho} if args.cov == "toeplitz" else {"kind": "identity"}
    cfg = ExperimentConfig(
        p_values=[int(x) for x in args.p.split(",")],
        n_eff_grid=[float(x) for x in args.grid.split(",")],
        s_rule=args.s if args.s == "sqrt" else int(args.s),
        covariance=cov, model=args.model, method=args.method,
        replicates=args.reps, master_seed=args.seed, grid_size=args.grid_size,
    )
    t = time.time()
    sys.stdout.write(curves_to_csv(run_experiment(cfg)))
    print(f"# {time.time() - t:.1f}s", file=sys.stderr)


if __name__ == "__main__":
    main()

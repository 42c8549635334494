"""Wall-clock of the sparsified H0 pipeline as the threshold rises (N=256, n=512).

    python3 scripts/timing_sweep.py
"""
import argparse

from topalign.bench import run_timing_sweep

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-points", type=int, default=256)
    ap.add_argument("--dim", type=int, default=512)
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rows = run_timing_sweep(args.n_points, args.dim, (0.0, 0.5, 1.0, 1.5), args.trials, args.seed)
    print("lambda,mean_seconds")
    for lam, sec in rows:
        print(f"{lam},{sec:.6f}")

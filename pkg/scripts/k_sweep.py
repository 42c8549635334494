"""Monte-Carlo spread and cost of the sliced topological loss as the projection count K grows.

    python3 scripts/k_sweep.py --seeds 100
"""
import argparse

from topalign.bench import run_k_sweep
from topalign.fixtures import noisy_student

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=100)
    ap.add_argument("--n-points", type=int, default=256)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    teacher, student = noisy_student(args.seed, n_points=args.n_points, dim=16)
    rows = run_k_sweep(teacher, student, (5, 10, 30, 50, 100), args.seeds, args.seed)
    print("K,mean_swd,stderr,seconds_per_eval")
    for r in rows:
        print(f"{r.K},{r.mean_swd:.6g},{r.stderr:.3g},{r.seconds_per_eval:.3g}")

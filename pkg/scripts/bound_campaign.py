"""Randomized certification of the sparsification error bound.

    python3 scripts/bound_campaign.py --trials 1000 --out results/bound.json
"""
import argparse
from pathlib import Path

from topalign import __version__
from topalign.bench import run_bound_campaign
from topalign.io import dumps

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--max-n", type=int, default=64)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="results/bound.json")
    args = ap.parse_args()
    res = run_bound_campaign(args.trials, args.max_n, (1.0, 2.0), args.seed)
    payload = {"version": __version__, "seed": args.seed, **res.summary(),
               "certificates": [c.as_dict() for c in res.certificates]}
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text(dumps(payload) + "\n")
    print(dumps(res.summary()))

"""Coefficient ablation of the alignment objective on a synthetic teacher/student pair.

    python3 scripts/ablation.py --fixture bilingual --steps 300
"""
import argparse

from topalign.align import OptimizerConfig, ablation_suite, ablation_table
from topalign.fixtures import bilingual_pair, noisy_student, rigid_student

FIXTURES = {
    "noisy": lambda seed: noisy_student(seed),
    "rigid": lambda seed: rigid_student(seed),
    "bilingual": lambda seed: bilingual_pair(seed, rotate=True),
}

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fixture", choices=sorted(FIXTURES), default="noisy")
    ap.add_argument("--steps", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    teacher, student = FIXTURES[args.fixture](args.seed)
    reports = ablation_suite(teacher, student, OptimizerConfig(steps=args.steps, seed=args.seed))
    cols = ["setting", "final_l_total", "initial_w2_clouds", "final_w2_clouds", "final_w2_h0_diagrams", "final_dm_rmse"]
    print(",".join(cols))
    for row in ablation_table(reports):
        print(",".join(str(row[c]) if isinstance(row[c], str) else f"{row[c]:.6g}" for c in cols))

"""Regenerate the shipped 64-point fixtures and the regression golden for `topalign loss`.

Run from the repository root:  python3 scripts/make_fixtures.py
"""
import argparse
import io
from contextlib import redirect_stdout
from pathlib import Path

from topalign.cli import main
from topalign.fixtures import bilingual_pair, noisy_student
from topalign.io import write_embeddings_csv


def run(data: Path, golden: bool):
    data.mkdir(parents=True, exist_ok=True)
    teacher, student = noisy_student(seed=0, n_points=64, dim=8)
    write_embeddings_csv(data / "teacher64.csv", teacher)
    write_embeddings_csv(data / "student64.csv", student)
    en, ko = bilingual_pair(seed=0, n_points=64, dim=16, rotate=True)
    write_embeddings_csv(data / "bilingual_a.csv", en)
    write_embeddings_csv(data / "bilingual_b.csv", ko)
    if golden:
        buf = io.StringIO()
        with redirect_stdout(buf):
            main(["loss", "--teacher", str(data / "teacher64.csv"), "--student", str(data / "student64.csv")])
        (data / "golden_loss.json").write_text(buf.getvalue())
        buf = io.StringIO()
        with redirect_stdout(buf):
            main(["report", "--a", str(data / "bilingual_a.csv"), "--b", str(data / "bilingual_b.csv")])
        (data / "golden_report.json").write_text(buf.getvalue())


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="tests/data")
    ap.add_argument("--no-golden", action="store_true", help="write fixtures only")
    args = ap.parse_args()
    run(Path(args.out), not args.no_golden)

"""Stratified k-fold CV of the topic-feature SVM on the planted 3-class corpus.

Sweeps the number of topics; prints macro precision/recall per setting.

    python scripts/run_cv_experiment.py --topics 3 5 10 --iters 1000
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from fixhints.classify import SVMHyper, TopicConfig, k_fold_cv  # noqa: E402
from synth import planted_reports  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--topics", type=int, nargs="+", default=[3, 5, 10])
    ap.add_argument("--alpha", type=float, help="document-topic prior (default 50/K)")
    ap.add_argument("--iters", type=int, default=1000)
    ap.add_argument("--folds", type=int, default=10)
    ap.add_argument("--per-class", type=int, default=20)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    reports = planted_reports(per_class=args.per_class)
    print(f"{'K':>3} {'macro P':>8} {'macro R':>8} {'accuracy':>9} {'secs':>6}")
    for K in args.topics:
        start = time.perf_counter()
        rep = k_fold_cv(reports, TopicConfig(K=K, alpha=args.alpha, iterations=args.iters), SVMHyper(),
                        k=args.folds, seed=args.seed)
        secs = time.perf_counter() - start
        print(f"{K:>3} {rep.macro_precision:8.3f} {rep.macro_recall:8.3f} {rep.pooled_precision:9.3f} {secs:6.1f}")


if __name__ == "__main__":
    main()

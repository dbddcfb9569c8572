"""LDA on two disjoint vocabularies: do dominant topics recover the source vocabulary?

    python scripts/run_lda_separation.py --iters 500 --seed 42
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from fixhints.topics import dominant_topic, held_out_log_likelihood, top_words, train_lda  # noqa: E402
from synth import two_vocab_corpus  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--docs", type=int, default=40)
    ap.add_argument("--iters", type=int, default=500)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    docs, truth = two_vocab_corpus(n_docs=args.docs)
    start = time.perf_counter()
    model = train_lda(docs, K=2, iterations=args.iters, seed=args.seed)
    elapsed = time.perf_counter() - start
    dom = [dominant_topic(t) for t in model.thetas]
    agree = sum(d == t for d, t in zip(dom, truth))
    print(f"docs partitioned: {max(agree, len(docs) - agree)}/{len(docs)} in {elapsed:.2f}s")
    print(f"training log-likelihood: {held_out_log_likelihood(model, docs):.2f}")
    for k in range(model.K):
        print(f"Topic {k}: " + " ".join(w for w, _ in top_words(model, k, 6)))


if __name__ == "__main__":
    main()

"""Cluster the fixture patches into fix templates and print the ranking.

    python scripts/run_summarization.py [--patches tests/fixtures/summarize_patches.jsonl]
"""

from __future__ import annotations

import argparse
from pathlib import Path

from fixhints.corpus import ingest_commits_jsonl
from fixhints.patchlang import actions_of_commit, cluster_and_rank, render_template

DEFAULT = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "summarize_patches.jsonl"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--patches", default=str(DEFAULT), help="commit JSONL with diff_text")
    args = ap.parse_args()

    commits = ingest_commits_jsonl(args.patches)
    actions = [a for c in commits for a in actions_of_commit(c)]
    templates = cluster_and_rank(actions)
    print(f"{len(commits)} patches, {len(actions)} fix actions, {len(templates)} templates\n")
    for rank, t in enumerate(templates):
        share = t.support / len(commits)
        print(f"#{rank}  support {t.support} ({share:.0%} of patches)")
        print(render_template(t) + "\n")


if __name__ == "__main__":
    main()

"""Command-line entry point.

Every subcommand prints JSON (or nothing) on stdout and human-readable
notes on stderr. Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .bundle import DEFAULT_SEED, BundleError, load_bundle, save_bundle
from .classify import SVMHyper, TopicConfig, k_fold_cv
from .corpus import BugReport, CorpusError, ingest_commits_jsonl, ingest_gitlog, ingest_reports, write_jsonl
from .linker import DEFAULT_PATTERNS, load_patterns
from .patchlang import DiffError, render_template
from .recommend import (
    DEFAULT_NEIGHBORS,
    DEFAULT_TOP_K,
    UntrainedBundleError,
    attach_links,
    recommend_top_k,
    summarize_bundle,
    train_bundle,
)
from .topics import DEFAULT_BETA, DEFAULT_FOLD_IN_ITERATIONS, DEFAULT_ITERATIONS, DEFAULT_K, top_words

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    reports: str | None = None
    commits: str | None = None
    gitlog: str | None = None
    report: str | None = None
    K: int | None = None
    alpha: float | None = None
    beta: float | None = None
    iterations: int | None = None
    fold_in_iterations: int | None = None
    lam: float | None = None
    epochs: int | None = None
    folds: int = 10
    patterns: str | None = None
    k: int = DEFAULT_TOP_K
    n_neighbors: int = DEFAULT_NEIGHBORS
    gate: bool = True
    seed: int = DEFAULT_SEED
    bundle: str | None = None
    out: str | None = None
    out_dir: str | None = None
    words: int = 6

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        fields = cls.__dataclass_fields__
        return cls(**{k: v for k, v in vars(ns).items() if k in fields})

    def topic_config(self, base: dict | None = None) -> TopicConfig:
        base = base or {}
        return TopicConfig(
            K=self.K if self.K is not None else base.get("K", DEFAULT_K),
            alpha=self.alpha if self.alpha is not None else (base.get("alpha") if self.K is None else None),
            beta=self.beta if self.beta is not None else base.get("beta", DEFAULT_BETA),
            iterations=self.iterations if self.iterations is not None else base.get("iterations", DEFAULT_ITERATIONS),
            fold_in_iterations=(self.fold_in_iterations if self.fold_in_iterations is not None
                                else base.get("fold_in_iterations", DEFAULT_FOLD_IN_ITERATIONS)),
        )

    def svm_hyper(self, base: dict | None = None) -> SVMHyper:
        base = base or {}
        default = SVMHyper()
        return SVMHyper(
            lam=self.lam if self.lam is not None else base.get("lam", default.lam),
            epochs=self.epochs if self.epochs is not None else base.get("epochs", default.epochs),
        )


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _add_topic_flags(p):
    p.add_argument("--topics", dest="K", type=int, help=f"number of topics (default {DEFAULT_K})")
    p.add_argument("--alpha", type=float, help="document-topic prior (default 50/K)")
    p.add_argument("--beta", type=float, help=f"topic-word prior (default {DEFAULT_BETA})")
    p.add_argument("--iters", dest="iterations", type=int,
                   help=f"Gibbs sweeps (default {DEFAULT_ITERATIONS})")
    p.add_argument("--fold-in-iters", dest="fold_in_iterations", type=int,
                   help=f"fold-in sweeps for new reports (default {DEFAULT_FOLD_IN_ITERATIONS})")
    p.add_argument("--lambda", dest="lam", type=float, help="SVM L2 strength (default 0.01)")
    p.add_argument("--epochs", type=int, help="SVM descent epochs (default 200)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fixhints", description="Fix hints mined from bug/fix history.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def seed_flag(p):
        p.add_argument("--seed", type=_seed, default=DEFAULT_SEED,
                       help=f"PRNG seed (default {DEFAULT_SEED})")

    p = sub.add_parser("ingest-reports", help="validate a report JSONL file")
    p.add_argument("--reports", required=True)
    p.add_argument("--out", help="write normalized reports JSONL here")

    p = sub.add_parser("ingest-commits", help="convert a git log (-p) or commit JSONL")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gitlog")
    src.add_argument("--commits")
    p.add_argument("--out", help="write commits JSONL here")

    p = sub.add_parser("train", help="fit topic model and classifier into a new bundle")
    p.add_argument("--reports", required=True)
    _add_topic_flags(p)
    seed_flag(p)
    p.add_argument("--out", required=True, help="bundle path to write")

    p = sub.add_parser("topics", help="inspect topics")
    tsub = p.add_subparsers(dest="topics_command", required=True, parser_class=_Parser)
    show = tsub.add_parser("show", help="list top words of every topic")
    show.add_argument("--bundle", required=True)
    show.add_argument("--words", type=int, default=6)

    p = sub.add_parser("link", help="recover bug links from commit messages")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--gitlog")
    src.add_argument("--commits")
    p.add_argument("--patterns", help="JSONL of {name, regex}; default: Bug # and bugzilla URL")
    p.add_argument("--bundle", help="attach joined links and commits to this bundle (rewritten)")
    p.add_argument("--out", help="write links JSONL here")

    p = sub.add_parser("summarize", help="generalize linked fixes into ranked templates")
    p.add_argument("--bundle", required=True, help="bundle with links (rewritten with templates)")
    p.add_argument("--out-dir", help="write templates.jsonl and .cocci files here")

    p = sub.add_parser("evaluate", help="stratified k-fold cross-validation")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--reports")
    src.add_argument("--bundle")
    p.add_argument("--folds", type=int, default=10)
    _add_topic_flags(p)
    seed_flag(p)

    p = sub.add_parser("recommend", help="top-k fix hints for a new report")
    p.add_argument("--bundle", required=True)
    p.add_argument("--report", required=True, help="JSON file with one bug report")
    p.add_argument("--top-k", dest="k", type=int, default=DEFAULT_TOP_K)
    p.add_argument("--neighbors", dest="n_neighbors", type=int, default=DEFAULT_NEIGHBORS)
    p.add_argument("--no-gate", dest="gate", action="store_false",
                   help="search neighbors project-wide instead of within the predicted category")
    seed_flag(p)
    return parser


def _emit(obj, pretty=False) -> None:
    text = json.dumps(obj, indent=2 if pretty else None, sort_keys=not pretty)
    sys.stdout.write(text + "\n")


def _load_commits(cfg: RunConfig):
    if cfg.gitlog:
        try:
            text = Path(cfg.gitlog).read_text(encoding="utf-8")
        except OSError as exc:
            raise CorpusError(f"cannot read {cfg.gitlog}: {exc}") from exc
        return ingest_gitlog(text)
    return ingest_commits_jsonl(cfg.commits)


def _cmd_ingest_reports(cfg: RunConfig):
    reports = ingest_reports(cfg.reports)
    labels: dict[str, int] = {}
    for r in reports:
        if r.label is not None:
            labels[r.label] = labels.get(r.label, 0) + 1
    if cfg.out:
        write_jsonl(reports, cfg.out)
    _emit({"reports": len(reports), "labels": labels})


def _cmd_ingest_commits(cfg: RunConfig):
    commits = _load_commits(cfg)
    if cfg.out:
        write_jsonl(commits, cfg.out)
    _emit({"commits": len(commits), "with_diff": sum(1 for c in commits if c.diff_text)})


def _cmd_train(cfg: RunConfig):
    reports = ingest_reports(cfg.reports)
    bundle = train_bundle(reports, cfg.topic_config(), cfg.svm_hyper(), cfg.seed)
    save_bundle(bundle, cfg.out)
    clf = bundle.classifier
    _emit({
        "bundle": cfg.out,
        "documents": len(reports),
        "vocabulary": len(bundle.vocabulary),
        "topics": bundle.topic_model.K,
        "classifier_labels": clf.labels if clf else [],
    })


def _cmd_topics(cfg: RunConfig):
    bundle = load_bundle(cfg.bundle)
    if bundle.topic_model is None:
        raise UntrainedBundleError("bundle has no topic model")
    listing = []
    for k in range(bundle.topic_model.K):
        words = top_words(bundle.topic_model, k, cfg.words)
        listing.append({"topic": k, "words": [{"stem": w, "p": p} for w, p in words]})
        print(f"Topic {k}: " + " ".join(w for w, _ in words), file=sys.stderr)
    _emit(listing)


def _cmd_link(cfg: RunConfig):
    commits = _load_commits(cfg)
    patterns = load_patterns(cfg.patterns) if cfg.patterns else list(DEFAULT_PATTERNS)
    if cfg.bundle:
        bundle = load_bundle(cfg.bundle)
        links, dangling = attach_links(bundle, commits, patterns)
        save_bundle(bundle, cfg.bundle)
        for d in dangling:
            print(f"dangling link: bug {d.bug_id} in commit {d.commit_hash}", file=sys.stderr)
    else:
        from .linker import extract_links
        links, dangling = extract_links(commits, patterns), []
    if cfg.out:
        write_jsonl(links, cfg.out)
    _emit({
        "links": [l.to_dict() for l in links],
        "joined": len(links) - len(dangling),
        "dangling": [l.to_dict() for l in dangling],
    })


def _cmd_summarize(cfg: RunConfig):
    bundle = load_bundle(cfg.bundle)
    templates = summarize_bundle(bundle)
    save_bundle(bundle, cfg.bundle)
    if cfg.out_dir:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "templates.jsonl", "w", encoding="utf-8") as fh:
            for t in templates:
                fh.write(json.dumps(t.to_dict(), sort_keys=True) + "\n")
        for i, t in enumerate(templates):
            (out / f"template_{i:03d}.cocci").write_text(render_template(t) + "\n", encoding="utf-8")
    _emit({"templates": [
        {"rank": i, "support": t.support, "rendered": render_template(t)}
        for i, t in enumerate(templates)
    ]})


def _cmd_evaluate(cfg: RunConfig):
    if cfg.bundle:
        bundle = load_bundle(cfg.bundle)
        reports = bundle.reports
        tc = cfg.topic_config(bundle.config.get("topics"))
        hyper = cfg.svm_hyper(bundle.config.get("svm"))
    else:
        reports = ingest_reports(cfg.reports)
        tc, hyper = cfg.topic_config(), cfg.svm_hyper()
    report = k_fold_cv(reports, tc, hyper, cfg.folds, cfg.seed)
    print(report.table(), file=sys.stderr)
    _emit(report.to_dict())


def _cmd_recommend(cfg: RunConfig):
    bundle = load_bundle(cfg.bundle)
    try:
        obj = json.loads(Path(cfg.report).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusError(f"cannot read report {cfg.report}: {exc}") from exc
    report = BugReport.from_dict(obj)
    rec = recommend_top_k(bundle, report, cfg.k, cfg.n_neighbors, cfg.seed, cfg.gate)
    for d in rec.diagnostics:
        print(d, file=sys.stderr)
    _emit(rec.to_dict(), pretty=True)


_COMMANDS = {
    "ingest-reports": _cmd_ingest_reports,
    "ingest-commits": _cmd_ingest_commits,
    "train": _cmd_train,
    "topics": _cmd_topics,
    "link": _cmd_link,
    "summarize": _cmd_summarize,
    "evaluate": _cmd_evaluate,
    "recommend": _cmd_recommend,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig.from_args(ns)
    if cfg.subcommand == "recommend" and cfg.k < 1:
        parser.print_usage(sys.stderr)
        print("fixhints: error: --top-k must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        _COMMANDS[cfg.subcommand](cfg)
    except (CorpusError, BundleError, DiffError, ValueError, IndexError, OSError) as exc:
        print(f"fixhints: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

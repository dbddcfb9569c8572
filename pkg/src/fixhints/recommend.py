"""Pipeline orchestration: train, link, summarize, and recommend fix hints."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from . import topics
from .bundle import ModelBundle
from .classify import SVMHyper, TopicConfig, predict, train_svm
from .corpus import BugReport
from .linker import DEFAULT_PATTERNS, extract_links, join_links
from .patchlang import (
    DiffError,
    FixTemplate,
    actions_of_commit,
    cluster_and_rank,
    matches,
    render_template,
)
from .textprep import preprocess

DEFAULT_TOP_K = 5
DEFAULT_NEIGHBORS = 20


class UntrainedBundleError(ValueError):
    pass


# ------------------------------------------------------------ build stages

def train_bundle(reports, topic_config: TopicConfig = TopicConfig(),
                 svm_hyper: SVMHyper = SVMHyper(), seed: int = 42) -> ModelBundle:
    """Fit the topic model on all reports, and the classifier when >= 2 labels exist."""
    docs = [preprocess(r) for r in reports]
    model = topics.train_lda(docs, K=topic_config.K, alpha=topic_config.alpha,
                             beta=topic_config.beta, iterations=topic_config.iterations,
                             seed=seed)
    labeled = [(model.thetas[i], r.label) for i, r in enumerate(reports) if r.label is not None]
    clf = None
    if len({lab for _, lab in labeled}) >= 2:
        clf = train_svm(labeled, svm_hyper, seed)
    config = {"topics": asdict(topic_config) | {"alpha": model.alpha}, "svm": asdict(svm_hyper)}
    return ModelBundle(reports=list(reports), topic_model=model, classifier=clf,
                       config=config, rng_seed=seed)


def attach_links(bundle: ModelBundle, commits, patterns=DEFAULT_PATTERNS):
    """Store links and the commits they reference; returns (links, dangling links)."""
    links = extract_links(commits, patterns)
    pairs, dangling = join_links(links, bundle.reports, commits)
    dangling_set = set(dangling)
    bundle.links = [l for l in links if l not in dangling_set]
    linked = {c.hash for _, c in pairs}
    bundle.commits = [c for c in commits if c.hash in linked]
    return links, dangling


def summarize_bundle(bundle: ModelBundle) -> list[FixTemplate]:
    """Cluster the fix actions of every linked commit into ranked templates."""
    templates = cluster_and_rank(_actions_by_commit(bundle, [c.hash for c in bundle.commits])[0])
    bundle.templates = templates
    return templates


def _actions_by_commit(bundle, hashes):
    by_hash = {c.hash: c for c in bundle.commits}
    actions, per_commit, diagnostics = [], {}, []
    for h in hashes:
        commit = by_hash.get(h)
        if commit is None:
            continue
        try:
            acts = actions_of_commit(commit)
        except DiffError as exc:
            diagnostics.append(f"commit {h}: unparseable diff ({exc})")
            acts = []
        per_commit[h] = acts
        actions.extend(acts)
    return actions, per_commit, diagnostics


# ---------------------------------------------------------------- recommend

@dataclass
class Hint:
    template: FixTemplate
    score: float
    provenance: list[tuple[str, str]]

    def to_dict(self) -> dict:
        return {
            "rendered": render_template(self.template),
            "score": self.score,
            "provenance": [list(p) for p in self.provenance],
            "template": self.template.to_dict(),
        }


@dataclass
class Recommendation:
    report_id: str
    category: str | None
    neighbors: list[tuple[str, float]]
    hints: list[Hint]
    diagnostics: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "report_id": self.report_id,
            "category": self.category,
            "neighbors": [{"bug_id": b, "similarity": s} for b, s in self.neighbors],
            "hints": [h.to_dict() for h in self.hints],
        }


def similarity(theta_a, theta_b) -> float:
    """Cosine similarity; topic proportions are nonnegative so the result is in [0, 1]."""
    if len(theta_a) != len(theta_b):
        raise ValueError(f"dimension mismatch: {len(theta_a)} vs {len(theta_b)}")
    dot = sum(a * b for a, b in zip(theta_a, theta_b))
    na = math.sqrt(sum(a * a for a in theta_a))
    nb = math.sqrt(sum(b * b for b in theta_b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return min(1.0, max(0.0, dot / (na * nb)))


def _fold_in_iterations(bundle: ModelBundle) -> int:
    return bundle.config.get("topics", {}).get("fold_in_iterations", topics.DEFAULT_FOLD_IN_ITERATIONS)


def _require_trained(bundle: ModelBundle):
    if bundle.topic_model is None:
        raise UntrainedBundleError("bundle has no topic model; run train first")


def report_category(bundle: ModelBundle, report: BugReport, theta) -> str | None:
    if report.label is not None:
        return report.label
    if bundle.classifier is None:
        return None
    return predict(bundle.classifier, theta)[0]


def find_neighbors(bundle: ModelBundle, new_theta, category, n: int,
                   seed: int | None = None, gate: bool = True) -> list[tuple[str, float]]:
    """Most similar linked past reports, restricted to ``category`` when gating.

    Past reports are folded in with the same seed as the query so that equal
    text yields equal topic proportions.
    """
    _require_trained(bundle)
    seed = bundle.rng_seed if seed is None else seed
    iters = _fold_in_iterations(bundle)
    linked_ids = {l.bug_id for l in bundle.links}
    scored = []
    for report in bundle.reports:
        if report.id not in linked_ids:
            continue
        theta = topics.infer_theta(bundle.topic_model, preprocess(report), iters, seed)
        if gate and category is not None and report_category(bundle, report, theta) != category:
            continue
        scored.append((report.id, similarity(new_theta, theta)))
    scored.sort(key=lambda p: (-p[1], p[0]))
    return scored[:n]


def score_template(template: FixTemplate, neighbor_actions, sims) -> tuple[float, list[tuple[str, str]]]:
    """Similarity-weighted support of a template over neighbors.

    ``neighbor_actions`` maps bug id to ``{commit hash: [FixAction]}``; a
    neighbor contributes its similarity once if any of its fixes contains an
    action the template matches.
    """
    score = 0.0
    provenance = []
    for bug_id in sorted(neighbor_actions):
        hit = False
        for h in sorted(neighbor_actions[bug_id]):
            if any(matches(template, a) for a in neighbor_actions[bug_id][h]):
                provenance.append((bug_id, h))
                hit = True
        if hit:
            score += sims[bug_id]
    return score, provenance


def recommend_top_k(bundle: ModelBundle, report: BugReport, k: int = DEFAULT_TOP_K,
                    n_neighbors: int = DEFAULT_NEIGHBORS, seed: int | None = None,
                    gate: bool = True) -> Recommendation:
    _require_trained(bundle)
    if k < 1:
        raise ValueError("k must be >= 1")
    seed = bundle.rng_seed if seed is None else seed
    theta = topics.infer_theta(bundle.topic_model, preprocess(report), _fold_in_iterations(bundle), seed)
    category = predict(bundle.classifier, theta)[0] if bundle.classifier else None
    neighbors = find_neighbors(bundle, theta, category, n_neighbors, seed, gate)
    diagnostics = []
    if not neighbors:
        diagnostics.append("no linked neighbors found")

    commits_of: dict[str, list[str]] = {}
    for link in bundle.links:
        commits_of.setdefault(link.bug_id, []).append(link.commit_hash)
    hashes = []
    for bug_id, _ in neighbors:
        for h in sorted(set(commits_of.get(bug_id, ()))):
            if h not in hashes:
                hashes.append(h)
    actions, per_commit, diag = _actions_by_commit(bundle, hashes)
    diagnostics.extend(diag)
    if neighbors and not actions:
        diagnostics.append("no fix actions recovered")

    sims = dict(neighbors)
    neighbor_actions = {
        bug_id: {h: per_commit.get(h, []) for h in set(commits_of.get(bug_id, ()))}
        for bug_id in sims
    }
    hints = []
    for template in cluster_and_rank(actions):
        score, provenance = score_template(template, neighbor_actions, sims)
        hints.append(Hint(template, score, provenance))
    hints.sort(key=lambda h: (-h.score, render_template(h.template)))
    return Recommendation(report.id, category, neighbors, hints[:k], diagnostics)

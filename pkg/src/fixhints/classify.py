"""One-vs-rest linear SVMs over topic proportions, and stratified k-fold evaluation."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from . import topics
from .rng import SplitMix64, derive_seed
from .textprep import preprocess


@dataclass(frozen=True)
class SVMHyper:
    lam: float = 0.01
    epochs: int = 200
    schedule: str = "1/(lam*t)"


@dataclass(frozen=True)
class TopicConfig:
    K: int = topics.DEFAULT_K
    alpha: float | None = None
    beta: float = topics.DEFAULT_BETA
    iterations: int = topics.DEFAULT_ITERATIONS
    fold_in_iterations: int = topics.DEFAULT_FOLD_IN_ITERATIONS


@dataclass
class LinearClassifier:
    labels: list[str]
    weights: list[list[float]]
    bias: list[float]
    hyper: SVMHyper

    def __post_init__(self):
        if not (len(self.labels) == len(self.weights) == len(self.bias) >= 2):
            raise ValueError("classifier needs >= 2 labels with one weight row and bias each")

    @property
    def dim(self) -> int:
        return len(self.weights[0])

    def to_dict(self) -> dict:
        return {"labels": self.labels, "weights": self.weights, "bias": self.bias,
                "hyper": asdict(self.hyper)}

    @classmethod
    def from_dict(cls, obj: dict) -> "LinearClassifier":
        return cls(labels=obj["labels"], weights=obj["weights"], bias=obj["bias"],
                   hyper=SVMHyper(**obj["hyper"]))


def _dot(w, x):
    s = 0.0
    for a, b in zip(w, x):
        s += a * b
    return s


def objective(w, b, X, y, lam) -> float:
    """lam/2 |w|^2 + mean hinge loss, labels y in {-1, +1}."""
    loss = 0.0
    for x, yi in zip(X, y):
        m = 1.0 - yi * (_dot(w, x) + b)
        if m > 0.0:
            loss += m
    return 0.5 * lam * _dot(w, w) + loss / len(X)


def subgradient(w, b, X, y, lam) -> tuple[list[float], float]:
    n = len(X)
    gw = [lam * wi for wi in w]
    gb = 0.0
    for x, yi in zip(X, y):
        if yi * (_dot(w, x) + b) < 1.0:
            for j, xj in enumerate(x):
                gw[j] -= yi * xj / n
            gb -= yi / n
    return gw, gb


def _train_binary(X, y, hyper: SVMHyper):
    dim = len(X[0])
    w = [0.0] * dim
    b = 0.0
    best = (objective(w, b, X, y, hyper.lam), list(w), b)
    for t in range(1, hyper.epochs + 1):
        gw, gb = subgradient(w, b, X, y, hyper.lam)
        eta = 1.0 / (hyper.lam * t)
        w = [wi - eta * gi for wi, gi in zip(w, gw)]
        b -= eta * gb
        obj = objective(w, b, X, y, hyper.lam)
        # subgradient steps are not monotone; keep the best iterate
        if obj < best[0]:
            best = (obj, list(w), b)
    return best[1], best[2]


def train_svm(samples, hyper: SVMHyper = SVMHyper(), seed: int = 0) -> LinearClassifier:
    """Train one binary hinge-loss model per label (one-vs-rest).

    Descent is full-batch and therefore seed-free; ``seed`` is accepted so
    callers can thread a single seed through every training stage.
    """
    if not samples:
        raise ValueError("no training samples")
    labels = sorted({lab for _, lab in samples})
    if len(labels) < 2:
        raise ValueError(f"need at least 2 distinct labels, got {labels}")
    X = [list(x) for x, _ in samples]
    dim = len(X[0])
    if any(len(x) != dim for x in X):
        raise ValueError("feature vectors have inconsistent dimensions")
    weights, bias = [], []
    for lab in labels:
        y = [1.0 if l == lab else -1.0 for _, l in samples]
        w, b = _train_binary(X, y, hyper)
        weights.append(w)
        bias.append(b)
    return LinearClassifier(labels=labels, weights=weights, bias=bias, hyper=hyper)


def predict(clf: LinearClassifier, x) -> tuple[str, list[float]]:
    if len(x) != clf.dim:
        raise ValueError(f"feature dimension {len(x)} != classifier dimension {clf.dim}")
    scores = [_dot(w, x) + b for w, b in zip(clf.weights, clf.bias)]
    best = 0
    for i in range(1, len(scores)):
        if scores[i] > scores[best]:
            best = i
    return clf.labels[best], scores


@dataclass
class EvalReport:
    labels: list[str]
    confusion: list[list[int]]  # rows: true label, cols: predicted
    precision: dict[str, float]
    recall: dict[str, float]
    macro_precision: float
    macro_recall: float
    pooled_precision: float
    pooled_recall: float
    folds: int
    fold_test_ids: list[list[str]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def table(self) -> str:
        width = max(len(l) for l in self.labels + ["label"]) + 2
        lines = [f"{'label':<{width}}{'precision':>10}{'recall':>10}{'support':>9}"]
        for i, lab in enumerate(self.labels):
            lines.append(f"{lab:<{width}}{self.precision[lab]:>10.3f}{self.recall[lab]:>10.3f}"
                         f"{sum(self.confusion[i]):>9d}")
        lines.append(f"{'macro':<{width}}{self.macro_precision:>10.3f}{self.macro_recall:>10.3f}")
        lines.append(f"{'pooled':<{width}}{self.pooled_precision:>10.3f}{self.pooled_recall:>10.3f}")
        return "\n".join(lines)


def eval_report(y_true, y_pred, labels, folds=1, fold_test_ids=()) -> EvalReport:
    index = {lab: i for i, lab in enumerate(labels)}
    n = len(labels)
    confusion = [[0] * n for _ in range(n)]
    for t, p in zip(y_true, y_pred):
        confusion[index[t]][index[p]] += 1
    precision, recall = {}, {}
    for i, lab in enumerate(labels):
        tp = confusion[i][i]
        predicted = sum(confusion[r][i] for r in range(n))
        actual = sum(confusion[i])
        precision[lab] = tp / predicted if predicted else 0.0
        recall[lab] = tp / actual if actual else 0.0
    total = sum(map(sum, confusion))
    correct = sum(confusion[i][i] for i in range(n))
    # single-label multiclass: pooled precision == pooled recall == accuracy
    pooled = correct / total if total else 0.0
    return EvalReport(
        labels=list(labels), confusion=confusion, precision=precision, recall=recall,
        macro_precision=sum(precision.values()) / n, macro_recall=sum(recall.values()) / n,
        pooled_precision=pooled, pooled_recall=pooled, folds=folds,
        fold_test_ids=[list(f) for f in fold_test_ids],
    )


def stratified_folds(reports, k: int, seed: int) -> list[list[int]]:
    """Indices of each fold's test split; each label is dealt round-robin after a seeded shuffle."""
    if k < 2:
        raise ValueError("need k >= 2 folds")
    by_label: dict[str, list[int]] = {}
    for i, r in enumerate(reports):
        if r.label is None:
            raise ValueError(f"report {r.id!r} is unlabeled")
        by_label.setdefault(r.label, []).append(i)
    rng = SplitMix64(seed)
    folds = [[] for _ in range(k)]
    offset = 0
    for lab in sorted(by_label):
        members = by_label[lab]
        if len(members) < k:
            raise ValueError(f"class {lab!r} has {len(members)} reports, fewer than k={k}")
        rng.shuffle(members)
        for j, idx in enumerate(members):
            folds[(offset + j) % k].append(idx)
        offset += len(members)
    return [sorted(f) for f in folds]


def k_fold_cv(reports, topic_config: TopicConfig = TopicConfig(), svm_hyper: SVMHyper = SVMHyper(),
              k: int = 10, seed: int = 0) -> EvalReport:
    """Stratified k-fold CV; LDA is refit on every training split so test text never leaks."""
    folds = stratified_folds(reports, k, seed)
    labels = sorted({r.label for r in reports})
    docs = [preprocess(r) for r in reports]
    y_true, y_pred = [], []
    for f, test_idx in enumerate(folds):
        fold_seed = derive_seed(seed, f)
        test_set = set(test_idx)
        train_idx = [i for i in range(len(reports)) if i not in test_set]
        model = topics.train_lda(
            [docs[i] for i in train_idx], K=topic_config.K, alpha=topic_config.alpha,
            beta=topic_config.beta, iterations=topic_config.iterations, seed=fold_seed,
        )
        samples = [(model.thetas[j], reports[i].label) for j, i in enumerate(train_idx)]
        clf = train_svm(samples, svm_hyper, fold_seed)
        for i in test_idx:
            theta = topics.infer_theta(model, docs[i], topic_config.fold_in_iterations, fold_seed)
            y_true.append(reports[i].label)
            y_pred.append(predict(clf, theta)[0])
    fold_ids = [[reports[i].id for i in f] for f in folds]
    return eval_report(y_true, y_pred, labels, folds=k, fold_test_ids=fold_ids)

"""LDA topic model trained by collapsed Gibbs sampling.

Pure Python on purpose: the sampler is sequential per token anyway, and
plain float arithmetic in a fixed order keeps runs bit-identical across
platforms (see ``rng.SplitMix64``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .rng import SplitMix64

DEFAULT_K = 10
DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 1000
DEFAULT_FOLD_IN_ITERATIONS = 50
STOCHASTIC_TOL = 1e-9


def default_alpha(K: int) -> float:
    return 50.0 / K


@dataclass
class Vocabulary:
    word_of: list[str] = field(default_factory=list)
    id_of: dict[str, int] = field(default_factory=dict)

    @classmethod
    def from_words(cls, words) -> "Vocabulary":
        vocab = cls()
        for w in words:
            vocab.add(w)
        return vocab

    def add(self, word: str) -> int:
        idx = self.id_of.get(word)
        if idx is None:
            idx = len(self.word_of)
            self.id_of[word] = idx
            self.word_of.append(word)
        return idx

    def __len__(self) -> int:
        return len(self.word_of)

    def __eq__(self, other) -> bool:
        return isinstance(other, Vocabulary) and self.word_of == other.word_of


@dataclass
class TopicModel:
    K: int
    alpha: float
    beta: float
    vocabulary: Vocabulary
    phi: list[list[float]]
    thetas: list[list[float]]
    assignments: list[list[int]]
    seed: int
    iterations: int

    @property
    def V(self) -> int:
        return len(self.vocabulary)

    def to_dict(self) -> dict:
        # vocabulary travels separately in the bundle
        return {
            "K": self.K,
            "alpha": self.alpha,
            "beta": self.beta,
            "phi": self.phi,
            "thetas": self.thetas,
            "assignments": self.assignments,
            "seed": self.seed,
            "iterations": self.iterations,
        }

    @classmethod
    def from_dict(cls, obj: dict, vocabulary: Vocabulary) -> "TopicModel":
        return cls(vocabulary=vocabulary, **obj)


class _GibbsState:
    """Count tables for collapsed Gibbs sampling over integer-coded docs."""

    def __init__(self, docs_ids, K, V, rng):
        self.docs = docs_ids
        self.K = K
        self.V = V
        self.ndk = [[0] * K for _ in docs_ids]
        self.nwk = [[0] * K for _ in range(V)]
        self.nk = [0] * K
        self.z = []
        for d, words in enumerate(docs_ids):
            zd = []
            for w in words:
                k = rng.randbelow(K)
                zd.append(k)
                self.ndk[d][k] += 1
                self.nwk[w][k] += 1
                self.nk[k] += 1
            self.z.append(zd)

    def sweep(self, alpha, beta, rng):
        K = self.K
        Vbeta = self.V * beta
        nk = self.nk
        nwk = self.nwk
        krange = range(K)
        cum = [0.0] * K
        for d, words in enumerate(self.docs):
            zd = self.z[d]
            nd = self.ndk[d]
            for i, w in enumerate(words):
                k = zd[i]
                nw = nwk[w]
                nd[k] -= 1
                nw[k] -= 1
                nk[k] -= 1
                total = 0.0
                for t in krange:
                    total += (nd[t] + alpha) * (nw[t] + beta) / (nk[t] + Vbeta)
                    cum[t] = total
                u = rng.random() * total
                k = K - 1
                for t in krange:
                    if u < cum[t]:
                        k = t
                        break
                zd[i] = k
                nd[k] += 1
                nw[k] += 1
                nk[k] += 1

    def check_counts(self):
        for d, words in enumerate(self.docs):
            assert sum(self.ndk[d]) == len(words)
        for k in range(self.K):
            assert sum(self.nwk[w][k] for w in range(self.V)) == self.nk[k]
            assert sum(self.ndk[d][k] for d in range(len(self.docs))) == self.nk[k]


def _encode(docs, vocab: Vocabulary) -> list[list[int]]:
    return [[vocab.add(w) for w in doc] for doc in docs]


def _check_rows(rows, what):
    for i, row in enumerate(rows):
        s = math.fsum(row)
        if abs(s - 1.0) > STOCHASTIC_TOL:
            raise AssertionError(f"{what} row {i} sums to {s!r}")


def _finish(state: _GibbsState, vocab, alpha, beta, seed, iterations) -> TopicModel:
    K, V = state.K, state.V
    Vbeta = V * beta
    phi = [[(state.nwk[w][k] + beta) / (state.nk[k] + Vbeta) for w in range(V)] for k in range(K)]
    Kalpha = K * alpha
    thetas = [
        [(nd[k] + alpha) / (len(words) + Kalpha) for k in range(K)]
        for nd, words in zip(state.ndk, state.docs)
    ]
    _check_rows(phi, "phi")
    _check_rows(thetas, "theta")
    return TopicModel(
        K=K, alpha=alpha, beta=beta, vocabulary=vocab, phi=phi, thetas=thetas,
        assignments=[list(z) for z in state.z], seed=seed, iterations=iterations,
    )


def _validate(docs, K):
    if K < 2:
        raise ValueError(f"need at least 2 topics, got K={K}")
    if not any(docs):
        raise ValueError("all documents are empty")


def init_lda(docs, K=DEFAULT_K, alpha=None, beta=DEFAULT_BETA, seed=0) -> TopicModel:
    """Model from the random initial assignment only (no sweeps)."""
    _validate(docs, K)
    alpha = default_alpha(K) if alpha is None else alpha
    vocab = Vocabulary()
    ids = _encode(docs, vocab)
    state = _GibbsState(ids, K, len(vocab), SplitMix64(seed))
    return _finish(state, vocab, alpha, beta, seed, 0)


def train_lda(docs, K=DEFAULT_K, alpha=None, beta=DEFAULT_BETA,
              iterations=DEFAULT_ITERATIONS, seed=0) -> TopicModel:
    """Fit LDA with ``iterations`` full Gibbs sweeps; deterministic in ``seed``."""
    _validate(docs, K)
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    alpha = default_alpha(K) if alpha is None else alpha
    vocab = Vocabulary()
    ids = _encode(docs, vocab)
    rng = SplitMix64(seed)
    state = _GibbsState(ids, K, len(vocab), rng)
    for _ in range(iterations):
        state.sweep(alpha, beta, rng)
    return _finish(state, vocab, alpha, beta, seed, iterations)


def infer_theta(model: TopicModel, doc, fold_in_iterations=DEFAULT_FOLD_IN_ITERATIONS,
                seed=0) -> list[float]:
    """Fold a new document in with phi held fixed; OOV tokens are skipped."""
    K, alpha = model.K, model.alpha
    ids = [model.vocabulary.id_of[w] for w in doc if w in model.vocabulary.id_of]
    if not ids:
        return [1.0 / K] * K
    rng = SplitMix64(seed)
    phi = model.phi
    nd = [0] * K
    z = []
    for w in ids:
        k = rng.randbelow(K)
        z.append(k)
        nd[k] += 1
    cum = [0.0] * K
    krange = range(K)
    for _ in range(fold_in_iterations):
        for i, w in enumerate(ids):
            nd[z[i]] -= 1
            total = 0.0
            for t in krange:
                total += (nd[t] + alpha) * phi[t][w]
                cum[t] = total
            u = rng.random() * total
            k = K - 1
            for t in krange:
                if u < cum[t]:
                    k = t
                    break
            z[i] = k
            nd[k] += 1
    denom = len(ids) + K * alpha
    theta = [(nd[k] + alpha) / denom for k in range(K)]
    _check_rows([theta], "fold-in theta")
    return theta


def top_words(model: TopicModel, topic_id: int, n: int) -> list[tuple[str, float]]:
    if not 0 <= topic_id < model.K:
        raise IndexError(f"topic id {topic_id} out of range 0..{model.K - 1}")
    row = model.phi[topic_id]
    order = sorted(range(len(row)), key=lambda w: (-row[w], w))[:n]
    return [(model.vocabulary.word_of[w], row[w]) for w in order]


def held_out_log_likelihood(model: TopicModel, docs,
                            fold_in_iterations=DEFAULT_FOLD_IN_ITERATIONS, seed=0) -> float:
    """Sum of per-token log p(w | theta, phi), theta obtained by fold-in."""
    total = 0.0
    for doc in docs:
        theta = infer_theta(model, doc, fold_in_iterations, seed)
        for w in doc:
            wid = model.vocabulary.id_of.get(w)
            if wid is None:
                continue
            total += math.log(sum(theta[k] * model.phi[k][wid] for k in range(model.K)))
    return total


def dominant_topic(theta) -> int:
    return max(range(len(theta)), key=lambda k: (theta[k], -k))

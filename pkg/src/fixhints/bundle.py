"""Self-contained JSON bundle holding every trained artifact."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .classify import LinearClassifier
from .corpus import BugReport, Commit, CorpusError
from .linker import BugLink
from .patchlang import FixTemplate
from .topics import TopicModel, Vocabulary

SCHEMA_VERSION = 1
DEFAULT_SEED = 42


class BundleError(CorpusError):
    pass


@dataclass
class ModelBundle:
    reports: list[BugReport] = field(default_factory=list)
    topic_model: TopicModel | None = None
    classifier: LinearClassifier | None = None
    commits: list[Commit] = field(default_factory=list)
    links: list[BugLink] = field(default_factory=list)
    templates: list[FixTemplate] = field(default_factory=list)
    config: dict = field(default_factory=dict)
    rng_seed: int = DEFAULT_SEED
    schema_version: int = SCHEMA_VERSION

    @property
    def vocabulary(self) -> Vocabulary | None:
        return self.topic_model.vocabulary if self.topic_model else None

    def to_dict(self) -> dict:
        model = self.topic_model
        return {
            "schema_version": self.schema_version,
            "rng_seed": self.rng_seed,
            "config": self.config,
            "reports": [r.to_dict() for r in self.reports],
            "vocabulary": model.vocabulary.word_of if model else None,
            "topic_model": model.to_dict() if model else None,
            "classifier": self.classifier.to_dict() if self.classifier else None,
            "commits": [c.to_dict() for c in self.commits],
            "links": [l.to_dict() for l in self.links],
            "templates": [t.to_dict() for t in self.templates],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ModelBundle":
        model = None
        if doc["topic_model"] is not None:
            vocab = Vocabulary.from_words(doc["vocabulary"])
            model = TopicModel.from_dict(doc["topic_model"], vocab)
        clf = doc["classifier"]
        return cls(
            schema_version=doc["schema_version"],
            rng_seed=doc["rng_seed"],
            config=doc["config"],
            reports=[BugReport.from_dict(r) for r in doc["reports"]],
            topic_model=model,
            classifier=LinearClassifier.from_dict(clf) if clf is not None else None,
            commits=[Commit.from_dict(c) for c in doc["commits"]],
            links=[BugLink.from_dict(l) for l in doc["links"]],
            templates=[FixTemplate.from_dict(t) for t in doc["templates"]],
        )


def dumps_bundle(bundle: ModelBundle) -> str:
    # json emits floats by repr(), the shortest string that round-trips
    return json.dumps(bundle.to_dict(), sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def save_bundle(bundle: ModelBundle, path) -> None:
    Path(path).write_text(dumps_bundle(bundle), encoding="utf-8")


def load_bundle(path) -> ModelBundle:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise BundleError(f"cannot read bundle {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BundleError(f"corrupt bundle {path}: {exc}") from exc
    if not isinstance(doc, dict) or "schema_version" not in doc:
        raise BundleError(f"corrupt bundle {path}: no schema_version")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise BundleError(
            f"bundle {path} has schema_version {doc['schema_version']}, "
            f"this version reads schema_version {SCHEMA_VERSION}"
        )
    try:
        return ModelBundle.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise BundleError(f"corrupt bundle {path}: {exc!r}") from exc

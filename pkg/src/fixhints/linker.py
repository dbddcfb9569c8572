"""Bug report to fixing-commit links recovered from commit messages."""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass
from pathlib import Path


@dataclass(frozen=True)
class LinkPattern:
    name: str
    regex: str

    def __post_init__(self):
        try:
            compiled = re.compile(self.regex)
        except re.error as exc:
            raise ValueError(f"pattern {self.name!r} does not compile: {exc}") from exc
        if compiled.groups != 1:
            raise ValueError(
                f"pattern {self.name!r} must have exactly one capture group, has {compiled.groups}"
            )

    @property
    def compiled(self) -> re.Pattern:
        return re.compile(self.regex)


DEFAULT_PATTERNS = (
    LinkPattern("bug-hash", r"[Bb]ug\s*#\s*(\d+)"),
    LinkPattern("bugzilla-url", r"bugzilla\.[a-z.]+/show_bug\.cgi\?id=(\d+)"),
)


@dataclass(frozen=True, order=True)
class BugLink:
    bug_id: str
    commit_hash: str
    pattern_name: str
    matched_text: str

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, obj: dict) -> "BugLink":
        return cls(**obj)


def load_patterns(path) -> list[LinkPattern]:
    patterns = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            patterns.append(LinkPattern(name=obj["name"], regex=obj["regex"]))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"{path}:{lineno}: bad link pattern ({exc})") from exc
    if not patterns:
        raise ValueError(f"{path}: no link patterns")
    return patterns


def extract_links(commits, patterns=DEFAULT_PATTERNS) -> list[BugLink]:
    """All (bug id, commit) references, one per distinct pair, sorted by (bug_id, hash)."""
    if not patterns:
        raise ValueError("no link patterns given")
    found: dict[tuple[str, str], BugLink] = {}
    for commit in commits:
        for pat in patterns:
            for m in pat.compiled.finditer(commit.message):
                key = (m.group(1), commit.hash)
                if key not in found:
                    found[key] = BugLink(key[0], commit.hash, pat.name, m.group(0))
    return [found[k] for k in sorted(found)]


def join_links(links, reports, commits):
    """Inner join of links with reports and commits.

    Returns ``(pairs, dangling)``: ``pairs`` lists (report, commit) in link
    order; ``dangling`` holds links whose bug id or commit is unknown.
    """
    by_id = {r.id: r for r in reports}
    by_hash = {c.hash: c for c in commits}
    pairs, dangling = [], []
    for link in links:
        report = by_id.get(link.bug_id)
        commit = by_hash.get(link.commit_hash)
        if report is None or commit is None:
            dangling.append(link)
        else:
            pairs.append((report, commit))
    return pairs, dangling

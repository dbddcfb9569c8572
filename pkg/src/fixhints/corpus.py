"""Bug report and commit records, and their ingestion from JSONL / git log text."""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable

HASH_RE = re.compile(r"[0-9a-f]{7,40}")


class CorpusError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class BugReport:
    id: str
    short_desc: str
    long_desc: str = ""
    label: str | None = None
    created_at: str | None = None

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise CorpusError("bug report id must be a nonempty string")
        if not isinstance(self.short_desc, str) or not self.short_desc.strip():
            raise CorpusError(f"bug report {self.id!r} has an empty short_desc")

    @classmethod
    def from_dict(cls, obj: dict) -> "BugReport":
        if not isinstance(obj, dict):
            raise CorpusError("bug report must be a JSON object")
        missing = {"id", "short_desc"} - obj.keys()
        if missing:
            raise CorpusError(f"bug report missing field(s): {', '.join(sorted(missing))}")
        return cls(
            id=obj["id"],
            short_desc=obj["short_desc"],
            long_desc=obj.get("long_desc", ""),
            label=obj.get("label"),
            created_at=obj.get("created_at"),
        )

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass(frozen=True)
class Commit:
    hash: str
    message: str
    diff_text: str = ""

    def __post_init__(self):
        if not isinstance(self.hash, str) or not HASH_RE.fullmatch(self.hash):
            raise CorpusError(f"invalid commit hash {self.hash!r}")

    @classmethod
    def from_dict(cls, obj: dict) -> "Commit":
        if not isinstance(obj, dict):
            raise CorpusError("commit must be a JSON object")
        missing = {"hash", "message"} - obj.keys()
        if missing:
            raise CorpusError(f"commit missing field(s): {', '.join(sorted(missing))}")
        return cls(hash=obj["hash"], message=obj["message"], diff_text=obj.get("diff_text", ""))

    def to_dict(self) -> dict:
        return asdict(self)


def _read_jsonl(path) -> Iterable[tuple[int, dict]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            yield lineno, json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{path}:{lineno}: malformed JSON ({exc.msg})") from exc


def ingest_reports(path) -> list[BugReport]:
    """Read one report per JSONL line, preserving file order."""
    reports = []
    seen = set()
    for lineno, obj in _read_jsonl(path):
        try:
            report = BugReport.from_dict(obj)
        except CorpusError as exc:
            raise CorpusError(f"{path}:{lineno}: {exc}") from exc
        if report.id in seen:
            raise CorpusError(f"{path}:{lineno}: duplicate bug report id {report.id!r}")
        seen.add(report.id)
        reports.append(report)
    return reports


def ingest_commits_jsonl(path) -> list[Commit]:
    commits = []
    for lineno, obj in _read_jsonl(path):
        try:
            commits.append(Commit.from_dict(obj))
        except CorpusError as exc:
            raise CorpusError(f"{path}:{lineno}: {exc}") from exc
    return commits


def ingest_gitlog(stream) -> list[Commit]:
    """Parse ``git log -p`` output into commits.

    Records start at ``commit <hex>``; 4-space indented lines form the
    message; everything from ``diff --git`` up to the next record is kept
    verbatim as the diff. Other header lines (Author, Date, Merge) are skipped.
    """
    text = stream if isinstance(stream, str) else stream.read()
    lines = text.splitlines(keepends=True)

    commits = []
    current = None  # [hash, message lines, diff lines]

    def flush():
        if current is None:
            return
        h, msg, diff = current
        while msg and not msg[0].strip():
            msg.pop(0)
        while msg and not msg[-1].strip():
            msg.pop()
        commits.append(Commit(hash=h, message="\n".join(msg), diff_text="".join(diff)))

    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if line.startswith("commit "):
            flush()
            parts = line.split()
            h = parts[1] if len(parts) > 1 else ""
            if not HASH_RE.fullmatch(h):
                raise CorpusError(f"line {lineno}: invalid commit hash {h!r}")
            current = [h, [], []]
            continue
        if current is None:
            if not line.strip():
                continue
            raise CorpusError(f"line {lineno}: expected 'commit <hash>' header, got {line[:40]!r}")
        if current[2] or line.startswith("diff --git"):
            current[2].append(raw)
        elif line.startswith("    "):
            current[1].append(line[4:])
        elif not line.strip():
            current[1].append("")
        # other header lines carry nothing we model
    flush()
    return commits


def write_jsonl(records, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")

"""Unified diff parsing into per-file hunks."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

HUNK_RE = re.compile(r"@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@(.*)$")

CONTEXT, ADD, REMOVE = "context", "add", "remove"
_PREFIX = {CONTEXT: " ", ADD: "+", REMOVE: "-"}
_TAG = {" ": CONTEXT, "+": ADD, "-": REMOVE}


class DiffError(ValueError):
    pass


@dataclass
class Hunk:
    old_start: int
    old_len: int
    new_start: int
    new_len: int
    lines: list[tuple[str, str]] = field(default_factory=list)
    section: str = ""
    # indices of lines followed by a "\ No newline at end of file" marker
    no_eol: tuple[int, ...] = ()

    def __post_init__(self):
        old = sum(1 for tag, _ in self.lines if tag != ADD)
        new = sum(1 for tag, _ in self.lines if tag != REMOVE)
        if (old, new) != (self.old_len, self.new_len):
            raise DiffError(
                f"hunk {self.header()} declares {self.old_len}/{self.new_len} old/new lines, "
                f"body has {old}/{new}"
            )

    def header(self) -> str:
        return f"@@ -{self.old_start},{self.old_len} +{self.new_start},{self.new_len} @@{self.section}"

    def body(self) -> str:
        out = []
        marks = set(self.no_eol)
        for i, (tag, text) in enumerate(self.lines):
            out.append(_PREFIX[tag] + text)
            if i in marks:
                out.append("\\ No newline at end of file")
        return "\n".join(out)

    def serialize(self) -> str:
        return self.header() + "\n" + self.body()


def _strip_path(raw: str) -> str:
    path = raw.split("\t", 1)[0].strip()
    if path.startswith(("a/", "b/")):
        path = path[2:]
    return path


def parse_unified_diff(diff_text: str) -> list[tuple[str, list[Hunk]]]:
    """Parse diff text into ``[(file, [Hunk, ...]), ...]`` in input order.

    Git extended header lines (``diff --git``, ``index``, modes) are skipped.
    """
    lines = diff_text.splitlines()
    files: list[tuple[str, list[Hunk]]] = []
    last_hunk: tuple[str, Hunk] | None = None
    i, n = 0, len(lines)
    while i < n:
        line = lines[i]
        if line.startswith("--- ") and i + 1 < n and lines[i + 1].startswith("+++ "):
            old, new = _strip_path(line[4:]), _strip_path(lines[i + 1][4:])
            files.append((new if new != "/dev/null" else old, []))
            last_hunk = None
            i += 2
            continue
        if line.startswith("@@"):
            m = HUNK_RE.match(line)
            if not m:
                raise DiffError(f"line {i + 1}: malformed hunk header {line!r}")
            if not files:
                raise DiffError(f"line {i + 1}: hunk header before any file header")
            fname = files[-1][0]
            old_start, new_start = int(m.group(1)), int(m.group(3))
            old_len = int(m.group(2)) if m.group(2) is not None else 1
            new_len = int(m.group(4)) if m.group(4) is not None else 1
            header = line
            old_left, new_left = old_len, new_len
            body: list[tuple[str, str]] = []
            no_eol = []
            i += 1
            while old_left > 0 or new_left > 0:
                if i >= n:
                    raise DiffError(
                        f"{fname}: hunk {header!r} truncated, missing {old_left} old / {new_left} new lines"
                    )
                raw = lines[i]
                if raw.startswith("\\"):
                    if body:
                        no_eol.append(len(body) - 1)
                    i += 1
                    continue
                tag = _TAG.get(raw[:1], CONTEXT if raw == "" else None)
                if tag is None or raw.startswith("@@"):
                    raise DiffError(
                        f"{fname}: hunk {header!r} body ends early at line {i + 1}, "
                        f"missing {old_left} old / {new_left} new lines"
                    )
                if tag != ADD:
                    old_left -= 1
                if tag != REMOVE:
                    new_left -= 1
                if old_left < 0 or new_left < 0:
                    raise DiffError(
                        f"{fname}: hunk {header!r} body exceeds declared lengths at line {i + 1}"
                    )
                body.append((tag, raw[1:]))
                i += 1
            while i < n and lines[i].startswith("\\"):
                if body:
                    no_eol.append(len(body) - 1)
                i += 1
            hunk = Hunk(old_start, old_len, new_start, new_len, body,
                        section=m.group(5), no_eol=tuple(no_eol))
            files[-1][1].append(hunk)
            last_hunk = (fname, hunk)
            continue
        if last_hunk is not None and line[:1] in ("+", "-"):
            fname, hunk = last_hunk
            raise DiffError(
                f"{fname}: hunk {hunk.header()!r} body exceeds declared lengths at line {i + 1}"
            )
        last_hunk = None if line.startswith("diff ") else last_hunk
        i += 1
    return files

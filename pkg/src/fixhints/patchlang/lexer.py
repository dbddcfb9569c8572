"""Line-level lexer for C-like code."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

IDENTIFIER, KEYWORD, LITERAL, PUNCT = "identifier", "keyword", "literal", "punct"

_PUNCTS = [
    "...", "<<=", ">>=", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "^=", "|=", "##",
]
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<bcomment>/\*)
  | (?P<lcomment>//.*)
  | (?P<string>"(?:\\.|[^"\\])*"?)
  | (?P<char>'(?:\\.|[^'\\])*'?)
  | (?P<number>\.?\d(?:[eEpP][+-]|[\w.])*)
  | (?P<ident>[A-Za-z_]\w*)
  | (?P<punct>"""
    + "|".join(re.escape(p) for p in _PUNCTS)
    + r"""|[\[\](){}.,;:?~!%^&*\-+=<>|/#])
  | (?P<other>.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class CodeToken:
    kind: str
    text: str

    def to_dict(self) -> dict:
        return {"kind": self.kind, "text": self.text}


@lru_cache(maxsize=1)
def c_keywords() -> frozenset[str]:
    text = resources.files("fixhints").joinpath("data/c_keywords.txt").read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def starts_in_comment(line: str) -> bool:
    """Guess whether a line with no prior context is a block-comment continuation."""
    s = line.strip()
    return s.startswith("*/") or s == "*" or s.startswith("* ")


def lex_line(text: str, in_comment: bool = False) -> tuple[list[CodeToken], bool]:
    """Tokens of one line, and whether a block comment is still open after it."""
    tokens = []
    pos, n = 0, len(text)
    keywords = c_keywords()
    while pos < n:
        if in_comment:
            end = text.find("*/", pos)
            if end < 0:
                return tokens, True
            pos = end + 2
            in_comment = False
            continue
        m = _TOKEN_RE.match(text, pos)
        kind = m.lastgroup
        pos = m.end()
        if kind == "ws" or kind == "lcomment":
            continue
        if kind == "bcomment":
            in_comment = True
            continue
        tok = m.group()
        if kind == "ident":
            tokens.append(CodeToken(KEYWORD if tok in keywords else IDENTIFIER, tok))
        elif kind == "punct":
            tokens.append(CodeToken(PUNCT, tok))
        else:
            # strings, chars, numbers and unlexable bytes
            tokens.append(CodeToken(LITERAL, tok))
    return tokens, in_comment


def lex(text: str) -> list[CodeToken]:
    return lex_line(text)[0]

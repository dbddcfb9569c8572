"""SmPL-flavoured text for fix templates.

Grammar::

    @@ <sort> <name>; ... @@        metavariable declarations, pattern order
    + <code line>                   one per line; "-" for remove templates

Code is printed from tokens with C spacing conventions. The body following
an ``if``/``while``/``for``/``switch`` condition goes on its own line,
indented by one tab, unless it starts with ``{``.
"""

from __future__ import annotations

from .generalize import FixTemplate, MetaVar
from .lexer import IDENTIFIER, KEYWORD, CodeToken

_CONTROL = {"if", "while", "for", "switch"}
_NO_SPACE_BEFORE = {")", "]", ";", ",", ".", "->"}
_NO_SPACE_AFTER = {"(", "[", ".", "->"}
_ALWAYS_UNARY = {"!", "~"}
_MAYBE_UNARY = {"-", "+", "*", "&"}
_KEEP_CALL_SPACE = {"sizeof"}


def _word(item) -> tuple[str, str]:
    if isinstance(item, MetaVar):
        return IDENTIFIER, item.name
    return item.kind, item.text


def _operand_end(kind: str, text: str) -> bool:
    """Whether a token can end an operand (so a following -,*,& is binary)."""
    return kind in (IDENTIFIER, "literal") or text in (")", "]", "++", "--")


def render_code(pattern) -> list[str]:
    lines: list[str] = []
    cur = ""
    prev_kind, prev_text = None, None
    prev_unary = False
    depth = 0
    control_depth = None  # paren depth at which a control condition closes
    pending_break = False
    for item in pattern:
        kind, text = _word(item)
        if pending_break:
            pending_break = False
            if text not in ("{", ";"):
                lines.append(cur)
                cur = "\t"
                prev_kind, prev_text, prev_unary = None, None, False
        if prev_text is None:
            space = False
        elif text in _NO_SPACE_BEFORE or prev_text in _NO_SPACE_AFTER or prev_unary:
            space = False
        elif text == "(":
            space = prev_kind == KEYWORD and prev_text not in _KEEP_CALL_SPACE
            space = space or not (_operand_end(prev_kind, prev_text) or prev_kind == KEYWORD)
        elif text == "[":
            space = not _operand_end(prev_kind, prev_text)
        elif text in ("++", "--") and _operand_end(prev_kind, prev_text) and prev_text not in ("++", "--"):
            space = False
        else:
            space = True
        cur += (" " if space else "") + text

        unary = text in _ALWAYS_UNARY or (
            text in _MAYBE_UNARY and (prev_text is None or not _operand_end(prev_kind, prev_text))
        ) or (text in ("++", "--") and (prev_text is None or not _operand_end(prev_kind, prev_text)))
        if text == "(":
            if prev_kind == KEYWORD and prev_text in _CONTROL and control_depth is None:
                control_depth = depth
            depth += 1
        elif text == ")":
            depth -= 1
            if control_depth is not None and depth == control_depth:
                control_depth = None
                pending_break = True
        prev_kind, prev_text, prev_unary = kind, text, unary
    if cur:
        lines.append(cur)
    return lines


def render_header(template: FixTemplate) -> str:
    decls = " ".join(f"{sort} {name};" for name, sort in template.metavars)
    return f"@@ {decls} @@" if decls else "@@ @@"


def render_template(template: FixTemplate) -> str:
    sign = "+" if template.kind == "add" else "-"
    body = [f"{sign} {line}" for line in render_code(template.pattern)]
    return "\n".join([render_header(template)] + body)


def render_tokens(tokens) -> str:
    return "\n".join(render_code([t for t in tokens if isinstance(t, (CodeToken, MetaVar))]))

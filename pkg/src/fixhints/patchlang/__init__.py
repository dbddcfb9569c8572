"""Diff slicing and fix-template generalization."""

from .diff import ADD, CONTEXT, REMOVE, DiffError, Hunk, parse_unified_diff
from .generalize import (
    EXPR_SORT,
    ID_SORT,
    FixAction,
    FixTemplate,
    MetaVar,
    anti_unify,
    cluster_and_rank,
    matches,
    slice_fix_actions,
    slice_hunk,
)
from .lexer import CodeToken, lex, lex_line
from .render import render_code, render_template


def actions_of_commit(commit) -> list[FixAction]:
    return slice_fix_actions(parse_unified_diff(commit.diff_text), commit.hash)


__all__ = [
    "ADD", "CONTEXT", "REMOVE", "DiffError", "Hunk", "parse_unified_diff",
    "EXPR_SORT", "ID_SORT", "FixAction", "FixTemplate", "MetaVar", "anti_unify",
    "cluster_and_rank", "matches", "slice_fix_actions", "slice_hunk",
    "CodeToken", "lex", "lex_line", "render_code", "render_template", "actions_of_commit",
]

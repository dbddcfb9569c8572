"""Fix actions, metavariable templates, anti-unification and recurrence ranking.

Alignment works on *units*: single tokens, or balanced ``( ... )`` groups
that nest. Two sequences anti-unify only if they have the same number of
units at every level. Where units differ:

* identifier vs identifier becomes an identifier metavariable, unless it is
  in call position (followed by a group), which fails;
* group vs group is generalized inside when possible, otherwise the group's
  contents become an expression metavariable;
* anything else fails.

The same pair of mismatched units always maps to the same metavariable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diff import ADD, CONTEXT, REMOVE
from .lexer import IDENTIFIER, CodeToken, lex_line, starts_in_comment

ID_SORT, EXPR_SORT = "identifier", "expression"


@dataclass(frozen=True)
class MetaVar:
    name: str
    sort: str

    def to_dict(self) -> dict:
        return {"metavar": self.name, "sort": self.sort}


@dataclass(frozen=True)
class FixAction:
    kind: str  # "add" | "remove"
    tokens: tuple[CodeToken, ...]
    source: tuple[str, str, int]  # (commit hash, file, line)

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("fix action has no tokens")

    def text_key(self) -> tuple[str, ...]:
        return tuple(t.text for t in self.tokens)


@dataclass(frozen=True)
class FixTemplate:
    kind: str
    pattern: tuple  # CodeToken | MetaVar
    metavars: tuple[tuple[str, str], ...]
    instances: tuple[tuple[str, str, int], ...] = field(default=())

    @property
    def support(self) -> int:
        return len(self.instances)

    @classmethod
    def of_action(cls, action: FixAction) -> "FixTemplate":
        return cls(action.kind, tuple(action.tokens), (), (action.source,))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "pattern": [p.to_dict() for p in self.pattern],
            "metavars": [list(m) for m in self.metavars],
            "support": self.support,
            "instances": [list(s) for s in self.instances],
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "FixTemplate":
        pattern = tuple(
            MetaVar(p["metavar"], p["sort"]) if "metavar" in p else CodeToken(p["kind"], p["text"])
            for p in obj["pattern"]
        )
        return cls(
            kind=obj["kind"],
            pattern=pattern,
            metavars=tuple((m[0], m[1]) for m in obj["metavars"]),
            instances=tuple((s[0], s[1], s[2]) for s in obj["instances"]),
        )


# ---------------------------------------------------------------- slicing

def slice_hunk(hunk, commit_hash: str = "", file: str = "") -> list[FixAction]:
    """Fix actions of one hunk, with comment-only and cosmetic lines dropped."""
    old_line, new_line = hunk.old_start, hunk.new_start
    old_comment = new_comment = None
    candidates = []
    for tag, text in hunk.lines:
        if tag in (CONTEXT, REMOVE):
            if old_comment is None:
                old_comment = starts_in_comment(text)
            old_toks, old_comment = lex_line(text, old_comment)
        if tag in (CONTEXT, ADD):
            if new_comment is None:
                new_comment = starts_in_comment(text)
            new_toks, new_comment = lex_line(text, new_comment)
        if tag == REMOVE and old_toks:
            candidates.append(FixAction(REMOVE, tuple(old_toks), (commit_hash, file, old_line)))
        elif tag == ADD and new_toks:
            candidates.append(FixAction(ADD, tuple(new_toks), (commit_hash, file, new_line)))
        if tag != ADD:
            old_line += 1
        if tag != REMOVE:
            new_line += 1
    added = {a.text_key() for a in candidates if a.kind == ADD}
    removed = {a.text_key() for a in candidates if a.kind == REMOVE}
    moved = added & removed
    return [a for a in candidates if a.text_key() not in moved]


def slice_fix_actions(files, commit_hash: str = "") -> list[FixAction]:
    """Slice parsed diff output ``[(file, hunks), ...]`` into fix actions."""
    actions = []
    for fname, hunks in files:
        for hunk in hunks:
            actions.extend(slice_hunk(hunk, commit_hash, fname))
    return actions


# -------------------------------------------------------- anti-unification

@dataclass(frozen=True)
class _Group:
    units: tuple


class _Fail(Exception):
    pass


def _group(items) -> tuple:
    stack: list[list] = [[]]
    for it in items:
        if isinstance(it, CodeToken) and it.text == "(":
            stack.append([])
        elif isinstance(it, CodeToken) and it.text == ")" and len(stack) > 1:
            inner = stack.pop()
            stack[-1].append(_Group(tuple(inner)))
        else:
            stack[-1].append(it)
    # unclosed groups fall back to plain tokens
    while len(stack) > 1:
        inner = stack.pop()
        stack[-1].append(CodeToken("punct", "("))
        stack[-1].extend(inner)
    return tuple(stack[0])


def _flatten(units) -> list:
    out = []
    for u in units:
        if isinstance(u, _Group):
            out.append(CodeToken("punct", "("))
            out.extend(_flatten(u.units))
            out.append(CodeToken("punct", ")"))
        else:
            out.append(u)
    return out


def _key(unit):
    if isinstance(unit, _Group):
        return ("group",) + tuple(_key(u) for u in unit.units)
    if isinstance(unit, MetaVar):
        return ("metavar", unit.name)
    return ("tok", unit.kind, unit.text)


def _ident_like(unit) -> bool:
    if isinstance(unit, MetaVar):
        return unit.sort == ID_SORT
    return isinstance(unit, CodeToken) and unit.kind == IDENTIFIER


def _opens_call(units, i) -> bool:
    if i + 1 >= len(units):
        return False
    nxt = units[i + 1]
    return isinstance(nxt, _Group) or (isinstance(nxt, CodeToken) and nxt.text == "(")


class _Names:
    def __init__(self):
        self.pairs: dict[tuple, MetaVar] = {}

    def get(self, a, b, sort) -> MetaVar:
        key = (_key(a), _key(b))
        mv = self.pairs.get(key)
        if mv is None:
            mv = MetaVar(f"_{len(self.pairs)}", sort)
            self.pairs[key] = mv
        elif mv.sort != sort:
            raise _Fail
        return mv


def _au(ua, ub, names: _Names) -> tuple:
    if len(ua) != len(ub):
        raise _Fail
    out = []
    for i, (x, y) in enumerate(zip(ua, ub)):
        if x == y and not isinstance(x, MetaVar) and not _contains_metavar(x):
            out.append(x)
        elif _ident_like(x) and _ident_like(y):
            if _opens_call(ua, i) or _opens_call(ub, i):
                raise _Fail
            out.append(names.get(x, y, ID_SORT))
        elif isinstance(x, _Group) and isinstance(y, _Group):
            saved = dict(names.pairs)
            try:
                out.append(_Group(_au(x.units, y.units, names)))
            except _Fail:
                names.pairs = saved
                out.append(_Group((names.get(x, y, EXPR_SORT),)))
        else:
            raise _Fail
    return tuple(out)


def _contains_metavar(unit) -> bool:
    if isinstance(unit, MetaVar):
        return True
    if isinstance(unit, _Group):
        return any(_contains_metavar(u) for u in unit.units)
    return False


def _canonical(pattern) -> tuple[tuple, tuple]:
    """Rename metavariables X0, X1, ... / E0, E1, ... in first-occurrence order."""
    renames: dict[str, MetaVar] = {}
    counts = {ID_SORT: 0, EXPR_SORT: 0}
    out = []
    for p in pattern:
        if isinstance(p, MetaVar):
            if p.name not in renames:
                prefix = "X" if p.sort == ID_SORT else "E"
                renames[p.name] = MetaVar(f"{prefix}{counts[p.sort]}", p.sort)
                counts[p.sort] += 1
            out.append(renames[p.name])
        else:
            out.append(p)
    metavars = tuple((mv.name, mv.sort) for mv in renames.values())
    return tuple(out), metavars


def _as_template(x) -> FixTemplate:
    return FixTemplate.of_action(x) if isinstance(x, FixAction) else x


def anti_unify(a, b) -> FixTemplate | None:
    """Most specific common template of two actions (or templates); None if none exists."""
    ta, tb = _as_template(a), _as_template(b)
    if ta.kind != tb.kind:
        return None
    names = _Names()  # fresh names are '_<n>' until canonicalized
    try:
        units = _au(_group(ta.pattern), _group(tb.pattern), names)
    except _Fail:
        return None
    pattern, metavars = _canonical(_flatten(units))
    return FixTemplate(ta.kind, pattern, metavars, ta.instances + tb.instances)


# ---------------------------------------------------------------- matching

def _balanced(tokens) -> bool:
    depth = 0
    for t in tokens:
        if t.text == "(":
            depth += 1
        elif t.text == ")":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0


def matches(template: FixTemplate, action: FixAction) -> bool:
    """Whether some consistent metavariable substitution turns the template into the action.

    Backtracking search over the flat token list; an identifier metavariable
    binds one identifier token, an expression metavariable binds any
    parenthesis-balanced token run.
    """
    if template.kind != action.kind:
        return False
    pat, toks = template.pattern, action.tokens

    def go(i: int, j: int, env: dict) -> bool:
        if i == len(pat):
            return j == len(toks)
        p = pat[i]
        if isinstance(p, MetaVar):
            if p.sort == ID_SORT:
                if j >= len(toks) or toks[j].kind != IDENTIFIER:
                    return False
                bound = env.get(p.name)
                if bound is not None:
                    return bound == (toks[j],) and go(i + 1, j + 1, env)
                return go(i + 1, j + 1, {**env, p.name: (toks[j],)})
            bound = env.get(p.name)
            if bound is not None:
                n = len(bound)
                return tuple(toks[j:j + n]) == bound and go(i + 1, j + n, env)
            for end in range(j, len(toks) + 1):
                run = tuple(toks[j:end])
                if _balanced(run) and go(i + 1, end, {**env, p.name: run}):
                    return True
            return False
        return j < len(toks) and toks[j] == p and go(i + 1, j + 1, env)

    return go(0, 0, {})


# ------------------------------------------------------- cluster and rank

def cluster_and_rank(actions) -> list[FixTemplate]:
    """Greedy first-fit clustering by anti-unification, ranked by support.

    An action joins the first cluster whose template generalizes with it and
    that holds no instance from the same patch yet, so support counts distinct
    patches. Identical actions repeated inside one patch are kept once.
    """
    from .render import render_template

    seen = set()
    clusters: list[tuple[FixTemplate, set]] = []
    for action in actions:
        patch = action.source[0]
        dedup = (patch, action.kind, action.text_key())
        if dedup in seen:
            continue
        seen.add(dedup)
        for idx, (template, patches) in enumerate(clusters):
            if patch in patches:
                continue
            merged = anti_unify(template, action)
            if merged is not None:
                clusters[idx] = (merged, patches | {patch})
                break
        else:
            clusters.append((FixTemplate.of_action(action), {patch}))
    templates = [t for t, _ in clusters]
    return sorted(templates, key=lambda t: (-t.support, render_template(t)))

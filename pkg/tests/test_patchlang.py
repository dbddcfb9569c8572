import json

import pytest
from hypothesis import given, settings, strategies as st

from fixhints.corpus import Commit
from fixhints.patchlang import (
    ADD, REMOVE, DiffError, FixTemplate, Hunk, MetaVar, actions_of_commit, anti_unify,
    cluster_and_rank, lex, matches, parse_unified_diff, render_template, slice_hunk,
)
from fixhints.rng import SplitMix64
from synth import action, hunk_texts, random_action_pair

ONE_ADD = """\
diff --git a/f.c b/f.c
--- a/f.c
+++ b/f.c
@@ -1,2 +1,3 @@ int f(void)
 \tint x;
+\tif (!rule)
 \treturn x;
"""


def texts(tokens):
    return [t.text for t in tokens]


def fixture_commits(fixtures_dir):
    lines = (fixtures_dir / "summarize_patches.jsonl").read_text().splitlines()
    return [Commit.from_dict(json.loads(l)) for l in lines]


# ---------------------------------------------------------------- diffs

def test_parse_one_hunk():
    [(fname, [hunk])] = parse_unified_diff(ONE_ADD)
    assert fname == "f.c"
    assert [tag for tag, _ in hunk.lines].count(ADD) == 1
    assert (hunk.old_len, hunk.new_len) == (2, 3) and hunk.section == " int f(void)"


def test_parse_empty():
    assert parse_unified_diff("") == []


def test_new_len_mismatch_names_hunk():
    bad = ONE_ADD.replace("+1,3", "+1,4")
    with pytest.raises(DiffError, match=r"@@ -1,2 \+1,4 @@"):
        parse_unified_diff(bad)
    short = ONE_ADD.replace("+1,3", "+1,2")
    with pytest.raises(DiffError, match=r"@@ -1,2 \+1,2 @@"):
        parse_unified_diff(short)


def test_malformed_header():
    with pytest.raises(DiffError, match="malformed"):
        parse_unified_diff("--- a/f.c\n+++ b/f.c\n@@ -x +1 @@\n")


def test_hunk_constructor_checks_counts():
    with pytest.raises(DiffError):
        Hunk(1, 1, 1, 3, [(ADD, "x")])


def test_no_newline_marker_round_trip():
    text = "--- a/f\n+++ b/f\n@@ -1 +1 @@\n-a\n\\ No newline at end of file\n+b\n"
    [(_, [hunk])] = parse_unified_diff(text)
    assert hunk.body() + "\n" == text.split("\n", 3)[3]
    assert hunk.header() == "@@ -1,1 +1,1 @@"


def test_fixture_hunks_round_trip(fixtures_dir):
    for commit in fixture_commits(fixtures_dir):
        hunks = [h for _, hs in parse_unified_diff(commit.diff_text) for h in hs]
        assert [h.serialize() for h in hunks] == hunk_texts(commit.diff_text)


# ------------------------------------------------------------- slicing

def test_lex_null_check():
    [(_, [hunk])] = parse_unified_diff(ONE_ADD)
    [act] = slice_hunk(hunk, "abc1234", "f.c")
    assert act.kind == ADD and texts(act.tokens) == ["if", "(", "!", "rule", ")"]
    assert [t.kind for t in act.tokens] == ["keyword", "punct", "punct", "identifier", "punct"]
    assert act.source == ("abc1234", "f.c", 2)


def test_lexer_kinds():
    toks = lex('p->n = 0x1F + "a\\"b" >>= 3;')
    assert texts(toks) == ["p", "->", "n", "=", "0x1F", "+", '"a\\"b"', ">>=", "3", ";"]
    assert not any(t.text.isspace() for t in toks)


def test_whitespace_only_change_is_cosmetic():
    h = Hunk(1, 1, 1, 1, [(REMOVE, "x=1;"), (ADD, "x = 1;")])
    assert slice_hunk(h) == []


@pytest.mark.parametrize("line", ["/* note */", "\t// trailing", "   ", " * middle of a block"])
def test_comment_and_blank_lines_dropped(line):
    assert slice_hunk(Hunk(1, 0, 1, 1, [(ADD, line)])) == []


def test_multiline_comment_tracked():
    h = Hunk(1, 0, 1, 3, [(ADD, "/* start"), (ADD, "   still comment"), (ADD, "*/ x = 1;")])
    [act] = slice_hunk(h)
    assert texts(act.tokens) == ["x", "=", "1", ";"]


LINES = ["x = 1;", "if (!p) return;", "foo(a, b);", "return 0;", "/* c */", "y++;"]


@given(st.lists(st.sampled_from(LINES), max_size=6), st.randoms(use_true_random=False))
def test_cosmetic_filter_conservative(removed, rnd):
    added = list(removed)
    rnd.shuffle(added)
    # reformat the add side
    added = [a.replace(" ", "  ").replace(";", " ;") for a in added]
    lines = [(REMOVE, r) for r in removed] + [(ADD, a) for a in added]
    assert slice_hunk(Hunk(1, len(removed), 1, len(added), lines)) == []


# --------------------------------------------------- anti-unification

def test_null_check_generalizes():
    t = anti_unify(action("if (!rule) return -ENOMEM;", commit="a" * 7),
                   action("if (!fck) return -ENOMEM;", commit="b" * 7))
    assert t is not None and t.support == 2
    assert t.metavars == (("X0", "identifier"),)
    assert [p.name if isinstance(p, MetaVar) else p.text for p in t.pattern] == \
        ["if", "(", "!", "X0", ")", "return", "-", "ENOMEM", ";"]


def test_identity():
    a = action("p = kmalloc(sz, GFP_KERNEL);")
    t = anti_unify(a, a)
    assert t.metavars == () and t.pattern == a.tokens


def test_call_position_mismatch_fails():
    assert anti_unify(action("p = kmalloc(sz, GFP_KERNEL)"), action("p = kzalloc(sz, GFP_KERNEL)")) is None


def test_different_kind_or_length_fails():
    assert anti_unify(action("x;"), action("x;", kind="remove")) is None
    assert anti_unify(action("x;"), action("x = 1;")) is None
    assert anti_unify(action("x + 1;"), action("x - 1;")) is None


def test_repeated_pair_reuses_metavar():
    t = anti_unify(action("a = a + b;"), action("c = c + d;"))
    names = [p.name for p in t.pattern if isinstance(p, MetaVar)]
    assert names == ["X0", "X0", "X1"]


def test_group_mismatch_becomes_expression():
    t = anti_unify(action("if (a && b) return;"), action("if (c(1)) return;"))
    assert t.metavars == (("E0", "expression"),)
    assert matches(t, action("if (anything(at, all) || x) return;"))


def test_keyword_mismatch_fails():
    assert anti_unify(action("if (x) y;"), action("while (x) y;")) is None


def test_templates_fold():
    t = anti_unify(action("if (!a) return -ENOMEM;", commit="a" * 7),
                   action("if (!b) return -ENOMEM;", commit="b" * 7))
    t3 = anti_unify(t, action("if (!c) return -ENOMEM;", commit="c" * 7))
    assert t3.support == 3 and t3.pattern == t.pattern


def strip_names(t):
    return t.kind, t.pattern, t.metavars


@settings(max_examples=1000, deadline=None)
@given(st.integers(0, 2**63))
def test_generalization_sound_and_symmetric(seed):
    a, b = random_action_pair(SplitMix64(seed))
    t = anti_unify(a, b)
    u = anti_unify(b, a)
    assert (t is None) == (u is None)
    if t is not None:
        assert matches(t, a) and matches(t, b)
        assert strip_names(t) == strip_names(u)


# ------------------------------------------------------------ matches

def test_matches_examples():
    rule = action("if (!rule) return -ENOMEM;")
    t = anti_unify(rule, action("if (!fck) return -ENOMEM;"))
    assert matches(t, rule)
    assert not matches(t, action("if (!rule) return -ENOMEM;", kind="remove"))
    assert not matches(t, action("if (!rule) return -EINVAL;"))
    zero = FixTemplate.of_action(rule)
    assert matches(zero, action("if (!rule) return -ENOMEM;", commit="b" * 7))


def test_matches_enforces_consistency():
    t = anti_unify(action("a = a;"), action("b = b;"))
    assert matches(t, action("c = c;")) and not matches(t, action("c = d;"))


# ------------------------------------------------------ cluster & rank

def test_cluster_empty():
    assert cluster_and_rank([]) == []


def test_cluster_identical():
    acts = [action("return 0;", commit=c * 7) for c in "abcd"]
    acts.append(action("return 0;", commit="a" * 7, line=9))
    [t] = cluster_and_rank(acts)
    assert t.metavars == () and t.support == 4


def test_fixture_top_template(fixtures_dir):
    actions = [a for c in fixture_commits(fixtures_dir) for a in actions_of_commit(c)]
    templates = cluster_and_rank(actions)
    top = templates[0]
    assert top.support == 5
    rendered = render_template(top)
    assert "return" in rendered and "-ENOMEM" in rendered and "identifier X0" in rendered
    for t in templates:
        words = {p.text for p in t.pattern if not isinstance(p, MetaVar)}
        assert not {"kmalloc", "kzalloc"} <= words


ACTION_POOL = ["if (!a) return -ENOMEM;", "if (!b) return -ENOMEM;", "x = kmalloc(n);",
               "x = kzalloc(n);", "return 0;", "f(a, b);", "f(c, d);", "g((a + b));"]


@given(st.lists(st.tuples(st.sampled_from(ACTION_POOL), st.integers(0, 4), st.sampled_from([ADD, REMOVE])),
                max_size=20))
def test_cluster_invariants(rows):
    acts = [action(text, kind=kind, commit=f"{p:07x}", line=i) for i, (text, p, kind) in enumerate(rows)]
    templates = cluster_and_rank(acts)
    distinct = {(a.source[0], a.kind, a.text_key()) for a in acts}
    assert sum(t.support for t in templates) <= len(distinct)
    sources = [s for t in templates for s in t.instances]
    assert len(sources) == len(set(sources))
    by_source = {a.source: a for a in acts}
    for t in templates:
        assert t.support >= 1
        assert len({s[0] for s in t.instances}) == t.support
        assert all(matches(t, by_source[s]) for s in t.instances)
        declared = {m[0] for m in t.metavars}
        assert {p.name for p in t.pattern if isinstance(p, MetaVar)} == declared
    assert [t.support for t in templates] == sorted((t.support for t in templates), reverse=True)


# ------------------------------------------------------------- render

def test_render_null_check():
    t = anti_unify(action("if (!rule) return -ENOMEM;"), action("if (!fck) return -ENOMEM;"))
    assert render_template(t) == "@@ identifier X0; @@\n+ if (!X0)\n+ \treturn -ENOMEM;"


def test_render_zero_metavars():
    assert render_template(FixTemplate.of_action(action("return 0;"))) == "@@ @@\n+ return 0;"


def test_render_remove_and_expression():
    t = anti_unify(action("spin_lock(&a);", kind="remove"), action("spin_lock(b->c);", kind="remove"))
    assert render_template(t) == "@@ expression E0; @@\n- spin_lock(E0);"


def test_render_injective_on_fixture(fixtures_dir):
    actions = [a for c in fixture_commits(fixtures_dir) for a in actions_of_commit(c)]
    templates = cluster_and_rank(actions)
    keys = {(t.kind, t.pattern) for t in templates}
    assert len({render_template(t) for t in templates}) == len(keys)


def test_template_dict_round_trip(fixtures_dir):
    actions = [a for c in fixture_commits(fixtures_dir) for a in actions_of_commit(c)]
    for t in cluster_and_rank(actions):
        assert FixTemplate.from_dict(json.loads(json.dumps(t.to_dict()))) == t

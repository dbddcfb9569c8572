import json

import pytest

from fixhints.bundle import load_bundle
from fixhints.cli import run

TOPIC_FLAGS = ["--topics", "3", "--alpha", "0.5", "--iters", "100"]


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def ok_json(capsys, *argv):
    code, out, err = call(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


@pytest.fixture
def pipeline(tmp_path, fixtures_dir, capsys):
    """A bundle that has gone through train, link and summarize."""
    bundle = tmp_path / "model.json"
    ok_json(capsys, "train", "--reports", fixtures_dir / "e2e_reports.jsonl", *TOPIC_FLAGS,
            "--seed", 42, "--out", bundle)
    ok_json(capsys, "link", "--gitlog", fixtures_dir / "e2e_gitlog.txt", "--bundle", bundle)
    ok_json(capsys, "summarize", "--bundle", bundle)
    return bundle


def test_ingest_reports(capsys, fixtures_dir, tmp_path):
    out = ok_json(capsys, "ingest-reports", "--reports", fixtures_dir / "e2e_reports.jsonl",
                  "--out", tmp_path / "r.jsonl")
    assert out["reports"] == 36 and out["labels"]["network"] == 12
    assert len((tmp_path / "r.jsonl").read_text().splitlines()) == 36


def test_ingest_commits(capsys, fixtures_dir):
    out = ok_json(capsys, "ingest-commits", "--gitlog", fixtures_dir / "e2e_gitlog.txt")
    assert out == {"commits": 20, "with_diff": 20}
    out = ok_json(capsys, "ingest-commits", "--commits", fixtures_dir / "summarize_patches.jsonl")
    assert out["commits"] == 8


def test_train_writes_only_the_bundle(capsys, fixtures_dir, tmp_path):
    out = ok_json(capsys, "train", "--reports", fixtures_dir / "e2e_reports.jsonl", *TOPIC_FLAGS,
                  "--out", tmp_path / "m.json")
    assert out["topics"] == 3 and out["classifier_labels"] == ["network", "null-deref", "paging-fault"]
    assert [p.name for p in tmp_path.iterdir()] == ["m.json"]
    assert load_bundle(tmp_path / "m.json").topic_model.K == 3


def test_topics_show(capsys, pipeline):
    code, out, err = call(capsys, "topics", "show", "--bundle", pipeline, "--words", 4)
    assert code == 0 and len(json.loads(out)) == 3
    assert err.startswith("Topic 0: ")


def test_link(capsys, fixtures_dir, tmp_path):
    out = ok_json(capsys, "link", "--gitlog", fixtures_dir / "linking_gitlog.txt", "--out", tmp_path / "l.jsonl")
    assert len(out["links"]) == 5
    assert len((tmp_path / "l.jsonl").read_text().splitlines()) == 5


def test_link_into_bundle_reports_dangling(capsys, fixtures_dir, pipeline):
    code, out, err = call(capsys, "link", "--gitlog", fixtures_dir / "e2e_gitlog.txt", "--bundle", pipeline)
    data = json.loads(out)
    assert code == 0 and data["joined"] == 18 and [d["bug_id"] for d in data["dangling"]] == ["99999"]
    assert "99999" in err


def test_summarize_out_dir(capsys, pipeline, tmp_path):
    out = ok_json(capsys, "summarize", "--bundle", pipeline, "--out-dir", tmp_path / "t")
    n = len(out["templates"])
    assert n > 0 and len(list((tmp_path / "t").glob("*.cocci"))) == n
    first = (tmp_path / "t" / "template_000.cocci").read_text()
    assert first.startswith("@@") and first.rstrip("\n") == out["templates"][0]["rendered"]


def test_recommend(capsys, pipeline, fixtures_dir):
    code, out, _ = call(capsys, "recommend", "--bundle", pipeline, "--report",
                        fixtures_dir / "e2e_new_report.json", "--top-k", 3)
    rec = json.loads(out)
    assert code == 0 and rec["category"] == "paging-fault" and 0 < len(rec["hints"]) <= 3
    assert out.startswith("{\n  ")


def test_recommend_empty_hints_still_exit_zero(capsys, tmp_path, fixtures_dir):
    bundle = tmp_path / "m.json"
    ok_json(capsys, "train", "--reports", fixtures_dir / "e2e_reports.jsonl", *TOPIC_FLAGS, "--out", bundle)
    code, out, err = call(capsys, "recommend", "--bundle", bundle, "--report", fixtures_dir / "e2e_new_report.json")
    assert code == 0 and json.loads(out)["hints"] == [] and "no linked neighbors" in err


def test_evaluate_deterministic(capsys, fixtures_dir):
    argv = ["evaluate", "--reports", fixtures_dir / "e2e_reports.jsonl", "--folds", 3, *TOPIC_FLAGS, "--seed", 42]
    code1, out1, err = call(capsys, *argv)
    code2, out2, _ = call(capsys, *argv)
    assert code1 == code2 == 0 and out1 == out2
    assert "macro" in err and json.loads(out1)["folds"] == 3


@pytest.mark.parametrize("argv", [
    ["recommend", "--report", "x.json"],
    ["no-such-command"],
    ["train", "--reports", "r.jsonl", "--out", "m.json", "--bogus"],
    ["recommend", "--bundle", "m.json", "--report", "x.json", "--top-k", "0"],
    [],
])
def test_usage_errors_exit_1(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 1 and out == "" and "usage" in err.lower()


def test_data_errors_exit_2(capsys, tmp_path, fixtures_dir):
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"id": "1"}\n')
    code, out, err = call(capsys, "ingest-reports", "--reports", bad)
    assert code == 2 and out == "" and "bad.jsonl:1" in err
    code, _, err = call(capsys, "recommend", "--bundle", tmp_path / "missing.json",
                        "--report", fixtures_dir / "e2e_new_report.json")
    assert code == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert call(capsys, "summarize", "--bundle", junk)[0] == 2

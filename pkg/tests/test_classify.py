import pytest
from hypothesis import given, strategies as st

from fixhints.classify import (
    SVMHyper, TopicConfig, eval_report, k_fold_cv, objective, predict, stratified_folds,
    train_svm,
)
from fixhints.corpus import BugReport
from fixhints.rng import SplitMix64
from synth import gradient_check, planted_reports, random_simplex

TOY = [((0.9, 0.1), "A")] * 10 + [((0.1, 0.9), "B")] * 10


def test_toy_set_is_separated():
    clf = train_svm(TOY)
    assert all(predict(clf, x)[0] == y for x, y in TOY)


def test_objective_beats_zero_weights():
    rng = SplitMix64(4)
    X = [random_simplex(rng, 3) for _ in range(30)]
    y = [1.0 if x[0] > 0.4 else -1.0 for x in X]
    clf = train_svm([(x, "p" if yi > 0 else "n") for x, yi in zip(X, y)])
    w, b = clf.weights[clf.labels.index("p")], clf.bias[clf.labels.index("p")]
    assert objective(w, b, X, y, 0.01) < objective([0.0] * 3, 0.0, X, y, 0.01)


def test_single_class_and_empty_rejected():
    with pytest.raises(ValueError):
        train_svm([((0.5, 0.5), "A")] * 3)
    with pytest.raises(ValueError):
        train_svm([])


def test_training_deterministic():
    a, b = train_svm(TOY, seed=1), train_svm(TOY, seed=1)
    assert a.weights == b.weights and a.bias == b.bias


def test_predict_scores_in_label_order():
    clf = train_svm(TOY)
    label, scores = predict(clf, (0.9, 0.1))
    assert len(scores) == 2 and clf.labels == ["A", "B"] and label == "A"
    assert scores[0] > scores[1]


def test_predict_dimension_mismatch():
    with pytest.raises(ValueError):
        predict(train_svm(TOY), (1.0, 0.0, 0.0))


@given(st.floats(-100, 100, allow_nan=False))
def test_bias_shift_keeps_argmax(c):
    clf = train_svm(TOY)
    shifted = type(clf)(clf.labels, clf.weights, [b + c for b in clf.bias], clf.hyper)
    for x, _ in TOY[::5]:
        assert predict(clf, x)[0] == predict(shifted, x)[0]


def test_subgradient_matches_finite_differences():
    assert gradient_check(100, seed=8) <= 1e-5


def test_eval_report_arithmetic():
    rep = eval_report(["a", "a", "b", "b", "b"], ["a", "b", "b", "b", "a"], ["a", "b"])
    assert rep.confusion == [[1, 1], [1, 2]]
    assert rep.precision == {"a": 0.5, "b": 2 / 3}
    assert rep.recall == {"a": 0.5, "b": 2 / 3}
    assert rep.pooled_precision == rep.pooled_recall == 3 / 5


def test_constant_classifier_recall():
    y_true = ["maj"] * 6 + ["x"] * 2 + ["y"] * 2
    rep = eval_report(y_true, ["maj"] * 10, ["maj", "x", "y"])
    assert rep.recall == {"maj": 1.0, "x": 0.0, "y": 0.0}
    assert rep.precision["maj"] == 0.6


def check_report_consistency(rep, n_per_class=None):
    n = len(rep.labels)
    for i, lab in enumerate(rep.labels):
        tp = rep.confusion[i][i]
        fp = sum(rep.confusion[r][i] for r in range(n)) - tp
        fn = sum(rep.confusion[i]) - tp
        assert rep.precision[lab] == (tp / (tp + fp) if tp + fp else 0.0)
        assert rep.recall[lab] == (tp / (tp + fn) if tp + fn else 0.0)
        assert 0 <= rep.precision[lab] <= 1 and 0 <= rep.recall[lab] <= 1
        if n_per_class is not None:
            assert sum(rep.confusion[i]) == n_per_class[lab]


def test_stratified_folds_disjoint_and_balanced():
    reports = planted_reports()
    folds = stratified_folds(reports, 10, seed=42)
    flat = [i for f in folds for i in f]
    assert sorted(flat) == list(range(len(reports)))
    for f in folds:
        labels = [reports[i].label for i in f]
        assert {lab: labels.count(lab) for lab in set(labels)} == {"network": 2, "nullderef": 2, "paging": 2}


def test_cv_small_run_consistency():
    reports = planted_reports(per_class=5)
    rep = k_fold_cv(reports, TopicConfig(K=3, alpha=0.5, iterations=50), SVMHyper(), k=5, seed=1)
    check_report_consistency(rep, {lab: 5 for lab in rep.labels})
    for test_ids in rep.fold_test_ids:
        train_ids = {r.id for r in reports} - set(test_ids)
        assert not train_ids & set(test_ids)
    again = k_fold_cv(reports, TopicConfig(K=3, alpha=0.5, iterations=50), SVMHyper(), k=5, seed=1)
    assert again == rep


def test_cv_input_errors():
    reports = planted_reports(per_class=3)
    with pytest.raises(ValueError, match="fewer than k"):
        k_fold_cv(reports, k=4)
    with pytest.raises(ValueError, match="unlabeled"):
        k_fold_cv(reports + [BugReport("u", "no label here")], k=2)

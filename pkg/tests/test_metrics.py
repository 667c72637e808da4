import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import auc_pairs, count_confusion
from qperceptron.metrics import (ConfusionMatrix, accuracy, confusion, f1, positive_mask, ppv, report,
                                 roc_auc, tpr)

CM = ConfusionMatrix(2, 1, 1, 6)


def test_confusion_examples():
    assert confusion([True], [True]) == ConfusionMatrix(1, 0, 0, 0)
    assert confusion([1, 1, 1], [0, 0, 0]) == ConfusionMatrix(0, 3, 0, 0)
    preds = "ppnnnpnnnn"
    truths = "pppnnnnnnn"
    assert confusion([c == "p" for c in preds], [c == "p" for c in truths]) == CM
    with pytest.raises(ValueError):
        confusion([1, 0], [1])


def test_labels_accepted():
    assert positive_mask(["positive", "negative"]).tolist() == [True, False]
    with pytest.raises(ValueError):
        positive_mask(["pos"])


def test_scalar_metrics_examples():
    assert accuracy(CM) == pytest.approx(0.8)
    assert accuracy(ConfusionMatrix(0, 0, 0, 5)) == 1.0
    assert accuracy(ConfusionMatrix(0, 5, 0, 0)) == 0.0
    assert accuracy(ConfusionMatrix(0, 0, 0, 0)) is None
    assert tpr(CM) == pytest.approx(2 / 3)
    assert tpr(ConfusionMatrix(0, 5, 0, 5)) is None
    assert tpr(ConfusionMatrix(3, 0, 0, 0)) == 1.0
    assert ppv(CM) == pytest.approx(2 / 3)
    assert ppv(ConfusionMatrix(0, 0, 4, 6)) is None
    assert ppv(ConfusionMatrix(4, 0, 0, 0)) == 1.0
    assert f1(CM) == pytest.approx(2 / 3)
    assert f1(ConfusionMatrix(0, 2, 1, 3)) == 0.0
    assert f1(ConfusionMatrix(1, 1, 1, 0)) == 0.5
    with pytest.raises(ValueError):
        ConfusionMatrix(-1, 0, 0, 0)


def test_auc_examples():
    assert roc_auc([0.0, 0.1, 0.8, 0.9], [1, 1, 0, 0]) == 1.0
    assert roc_auc([0.3] * 6, [1, 0, 1, 0, 1, 0]) == 0.5
    assert roc_auc([0.2, 0.6, 0.4, 0.8], [1, 1, 0, 0]) == 0.75
    assert roc_auc([0.2, 0.3], [1, 1]) is None


vectors = st.integers(1, 20).flatmap(lambda n: st.tuples(
    st.lists(st.booleans(), min_size=n, max_size=n), st.lists(st.booleans(), min_size=n, max_size=n)))


@given(vectors)
def test_metrics_against_counting_oracle(pt):
    preds, truths = pt
    tp, fp, fn, tn = count_confusion(preds, truths)
    cm = confusion(preds, truths)
    assert (cm.tp, cm.fp, cm.fn, cm.tn) == (tp, fp, fn, tn)
    n = len(preds)
    assert accuracy(cm) == (tp + tn) / n
    assert tpr(cm) == (tp / (tp + fn) if tp + fn else None)
    assert ppv(cm) == (tp / (tp + fp) if tp + fp else None)
    assert f1(cm) == (2 * tp / (2 * tp + fp + fn) if 2 * tp + fp + fn else None)
    p, r = ppv(cm), tpr(cm)
    if p and r:
        assert abs(f1(cm) - 2 * p * r / (p + r)) <= 1e-12
    for v in (accuracy(cm), tpr(cm), ppv(cm), f1(cm)):
        assert v is None or 0.0 <= v <= 1.0


readout_sets = st.integers(2, 20).flatmap(lambda n: st.tuples(
    st.lists(st.sampled_from([0.0, 0.0625, 0.25, 0.5, 0.5625, 1.0]) | st.floats(0, 1), min_size=n, max_size=n),
    st.lists(st.booleans(), min_size=n, max_size=n)))


@given(readout_sets)
def test_auc_matches_pair_enumeration(rt):
    r, t = rt
    if all(t) or not any(t):
        assert roc_auc(r, t) is None
        return
    auc = roc_auc(r, t)
    assert auc == float(auc_pairs(r, t))
    assert 0.0 <= auc <= 1.0


grid_readouts = st.integers(2, 20).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 64).map(lambda k: k / 64), min_size=n, max_size=n),
    st.lists(st.booleans(), min_size=n, max_size=n)))


@given(grid_readouts)
def test_auc_invariant_under_increasing_transform(rt):
    r, t = rt
    if all(t) or not any(t):
        return
    # for affinity a = 1 - r, a**3 is strictly increasing; re-express as a readout
    r2 = 1.0 - (1.0 - np.asarray(r)) ** 3
    assert roc_auc(r, t) == pytest.approx(roc_auc(r2, t), abs=0)


def test_report_all_positive_predictions():
    truths = [True] * 3 + [False] * 27
    rep = report([True] * 30, truths, np.zeros(30))
    assert rep.recall == 1.0
    assert rep.precision == pytest.approx(0.1)
    assert rep.auc == 0.5

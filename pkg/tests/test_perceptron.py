import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qperceptron.core import dot, map_to_bits
from qperceptron.perceptron import (Hyperparams, Label, LabeledPattern, ReadoutEngine, TrainedModel,
                                    classify, dumps_model, evaluate, exact_readout, loads_model,
                                    readout_distribution, sampled_readout, train, update_weights)
from qperceptron.simulator import make_rng

HP = Hyperparams()


def signs(*v):
    return np.array(v, dtype=np.int8)


def test_exact_readout_examples():
    i = signs(1, 1, 1, 1)
    assert exact_readout(i, i) == pytest.approx(1.0, abs=1e-12)
    assert exact_readout(i, signs(1, -1, 1, -1)) == pytest.approx(0.0, abs=1e-12)
    assert exact_readout(i, signs(1, 1, -1, 1)) == pytest.approx((2 / 4) ** 2, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_readout_symmetry_and_formula(n, seed):
    rng = np.random.default_rng(seed)
    i, w = rng.choice([-1, 1], size=(2, 2**n))
    r = exact_readout(i, w)
    assert r == pytest.approx((dot(w, i) / 2**n) ** 2, abs=1e-12)
    assert r == pytest.approx(exact_readout(w, i), abs=1e-12)


def test_sampled_readout_examples():
    i = signs(1, 1, 1, 1)
    assert sampled_readout(i, signs(1, -1, 1, -1), 500, make_rng(0)) == 0.0
    assert sampled_readout(i, i, 500, make_rng(0)) == 1.0
    r = sampled_readout(i, signs(1, 1, -1, 1), 10**4, make_rng(5))
    assert abs(r - 0.25) <= 4 * math.sqrt(0.25 * 0.75 / 10**4)
    assert r == sampled_readout(i, signs(1, 1, -1, 1), 10**4, make_rng(5))


def test_readout_distribution_centres_on_exact():
    i = signs(1, 1, 1, 1)
    d = readout_distribution(i, signs(1, 1, -1, 1), 1000, 200, make_rng(1))
    assert d.shape == (200,)
    assert abs(d.mean() - 0.25) < 4 * math.sqrt(0.25 * 0.75 / (1000 * 200))


def test_classify_rule():
    assert classify(0.2, 0.5) is Label.POSITIVE
    assert classify(0.5, 0.5) is Label.NEGATIVE
    assert classify(0.9, 0.5) is Label.NEGATIVE


def test_hyperparam_validation():
    for bad in [dict(threshold=0.0), dict(threshold=1.0), dict(lr_pos=0.0), dict(lr_neg=1.5),
                dict(shots=0), dict(epochs=0), dict(readout_mode="fast"),
                dict(early_stop_metric="auc", early_stop_value=0.9),
                dict(early_stop_metric="f1"), dict(seed=-1)]:
        with pytest.raises(ValueError):
            Hyperparams(**bad)


def test_false_positive_full_rate_copies_pattern():
    rng = make_rng(0)
    w = rng.choice(np.array([-1, 1], dtype=np.int8), 16)
    i = rng.choice(np.array([-1, 1], dtype=np.int8), 16)
    w2 = update_weights(w, i, Label.NEGATIVE, Hyperparams(lr_neg=1.0), rng)
    assert np.array_equal(w2, i)


def test_false_negative_example_enumerated():
    w = signs(1, 1, 1, 1)
    i = signs(1, 1, -1, 1)
    outcomes = set()
    for seed in range(200):
        for lr in (0.05, 0.5, 1.0):
            w2 = update_weights(w, i, Label.POSITIVE, Hyperparams(lr_pos=lr), make_rng(seed))
            changed = np.flatnonzero(w2 != w)
            assert len(changed) == 1 and changed[0] in (0, 1, 3)
            assert dot(w2, i) == 0
            outcomes.add(int(changed[0]))
    assert outcomes == {0, 1, 3}
    assert w.tolist() == [1, 1, 1, 1]


def test_false_negative_at_zero_overlap_is_noop():
    w = signs(1, 1, 1, 1)
    i = signs(1, -1, 1, -1)
    assert np.array_equal(update_weights(w, i, Label.POSITIVE, Hyperparams(lr_pos=1.0), make_rng(0)), w)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.floats(0.01, 1.0), st.booleans())
def test_update_contracts(n, seed, lr, positive):
    rng = np.random.default_rng(seed)
    w, i = rng.choice(np.array([-1, 1], dtype=np.int8), size=(2, 2**n))
    hp = Hyperparams(lr_pos=lr, lr_neg=lr)
    d = dot(w, i)
    w2 = update_weights(w, i, Label.POSITIVE if positive else Label.NEGATIVE, hp, rng)
    flips = int(np.sum(w2 != w))
    d2 = dot(w2, i)
    if not positive:
        disagree = int(np.sum(w != i))
        assert flips == math.ceil(round(lr * disagree, 9))
        assert d2 - d == 2 * flips
    else:
        pool = int(np.sum(w == i)) if d > 0 else int(np.sum(w != i)) if d < 0 else 0
        f = min(math.ceil(round(lr * pool, 9)), abs(d) // 2) if d else 0
        assert flips == f
        assert d2 * d >= 0
        if f:
            assert abs(d2) == abs(d) - 2 * f < abs(d)


def lp(bits, label):
    return LabeledPattern(np.array(bits), label)


def test_train_single_positive_pattern_one_update():
    bits = [0, 1, 1, 0, 1, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 1]
    for seed in range(20):
        hp = Hyperparams(threshold=0.5, lr_pos=1.0, epochs=10, seed=seed)
        model = train([lp(bits, "positive")], hp)
        assert model.history[0].accuracy == 1.0
        assert model.history[0].updates <= 1
        assert sum(h.updates for h in model.history) <= 1


def test_train_negative_pattern_full_rate():
    bits = [1, 0, 0, 1, 0, 1, 1, 0]
    hp = Hyperparams(lr_neg=1.0, epochs=3, seed=4)
    model = train([lp(bits, "negative")], hp)
    preds, readouts = evaluate(model, [lp(bits, "negative")])
    assert preds == [Label.NEGATIVE] and readouts[0] == pytest.approx(1.0, abs=1e-12)
    assert model.history[-1].accuracy == 1.0


def test_early_stop():
    bits = [0, 1, 1, 0]
    hp = Hyperparams(lr_pos=1.0, epochs=10, early_stop_metric="accuracy", early_stop_value=1.0, seed=1)
    assert len(train([lp(bits, "positive")], hp).history) == 1


def _toy(seed=0, n=40, m=16):
    rng = np.random.default_rng(seed)
    return [lp(rng.integers(0, 2, m), "positive" if k % 2 else "negative") for k in range(n)]


@pytest.mark.parametrize("mode", ["exact", "sampled"])
def test_train_is_deterministic(mode):
    data = _toy()
    hp = Hyperparams(readout_mode=mode, shots=200, epochs=4, seed=99)
    a, b = train(data, hp), train(data, hp)
    assert np.array_equal(a.weights, b.weights)
    assert a.history == b.history
    assert len(a.history) == 4


def test_train_errors():
    with pytest.raises(ValueError):
        train([], HP)
    with pytest.raises(ValueError):
        train([lp([0, 1], "positive"), lp([0, 1, 0, 1], "negative")], HP)


def test_evaluate_examples_and_purity():
    i = signs(1, -1, -1, 1, 1, 1, -1, 1)
    model = TrainedModel(i, Hyperparams(threshold=0.5))
    data = [lp(map_to_bits(i), "negative"), lp(map_to_bits(signs(1, -1, 1, -1, 1, -1, -1, -1)), "positive")]
    preds, r = evaluate(model, data)
    assert preds == [Label.NEGATIVE, Label.POSITIVE]
    np.testing.assert_allclose(r, [1.0, 0.0], atol=1e-12)
    preds2, r2 = evaluate(model, data)
    assert preds2 == preds and np.array_equal(r, r2)


def test_engine_matches_full_circuit():
    rng = np.random.default_rng(8)
    S = rng.choice(np.array([-1, 1], dtype=np.int8), size=(12, 32))
    engine = ReadoutEngine(S)
    for _ in range(3):
        w = rng.choice(np.array([-1, 1], dtype=np.int8), 32)
        batch = engine.readouts(w)
        for k in range(len(S)):
            assert batch[k] == pytest.approx(exact_readout(S[k], w), abs=1e-12)
            assert engine.readout(w, k) == pytest.approx(batch[k], abs=1e-15)


def test_model_text_round_trip(tmp_path):
    model = train(_toy(m=8), Hyperparams(epochs=2, seed=2**63 + 5, early_stop_metric="f1",
                                          early_stop_value=0.99))
    text = dumps_model(model)
    assert text.splitlines()[1] == "dimension 8"
    again = loads_model(text)
    assert np.array_equal(again.weights, model.weights)
    assert again.hyperparams == model.hyperparams
    with pytest.raises(ValueError):
        loads_model(text.replace("dimension 8", "dimension 9"))

import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dp2online import (ExponentialMechanismLearner, FiniteHypothesisClass, LabeledSample,
                       audit_privacy, calibrate_sample_complexity, exhaustive_audit,
                       exponential_mechanism_distribution, pac_validate,
                       sample_complexity_formula, train)
from dp2online.dp_learners import (group_audit_ordered, random_realizable_distribution)
from dp2online.exceptions import CalibrationError, EmptySampleError, PreconditionError

from conftest import within_sigmas

# h_0 labels both instances 0, h_1 labels instance 1 as 1
TWO = FiniteHypothesisClass([[0, 0], [0, 1]])
SINGLE = FiniteHypothesisClass([[0, 1, 1]])


def test_symmetric_pair_is_uniform():
    p = exponential_mechanism_distribution(TWO, LabeledSample([0, 0], [0, 0]), 0.1)
    assert np.allclose(p, [0.5, 0.5], atol=1e-15)


def test_two_term_softmax():
    # h_0 perfect, h_1 wrong on both points: weights (1, exp(-0.05 * 2))
    s = LabeledSample([1, 1], [0, 0])
    p = exponential_mechanism_distribution(TWO, s, 0.1)
    expected = 1.0 / (1.0 + math.exp(-0.1))
    assert p[0] == pytest.approx(expected, abs=1e-12)
    assert p[0] == pytest.approx(0.52498, abs=1e-5)
    assert p.sum() == pytest.approx(1.0, abs=1e-12)


def test_single_candidate():
    p = exponential_mechanism_distribution(SINGLE, LabeledSample([0], [1]), 0.1)
    assert p.tolist() == [1.0]
    rng = np.random.default_rng(0)
    assert {train(SINGLE, LabeledSample([0], [1]), 0.1, rng) for _ in range(50)} == {0}


def test_empty_sample_rejected():
    with pytest.raises(EmptySampleError):
        exponential_mechanism_distribution(TWO, LabeledSample([], []), 0.1)
    with pytest.raises(EmptySampleError):
        train(TWO, LabeledSample([], []), 0.1, 0)


@pytest.mark.parametrize("sample,p0", [
    (LabeledSample([0, 0], [0, 0]), 0.5),
    (LabeledSample([1, 1], [0, 0]), 1.0 / (1.0 + math.exp(-0.1))),
])
def test_train_frequencies(sample, p0):
    rng = np.random.default_rng(2024)
    n = 100_000
    zeros = sum(train(TWO, sample, 0.1, rng) == 0 for _ in range(n))
    assert within_sigmas(zeros / n, p0, n)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 1)), min_size=1, max_size=12),
       st.floats(0.01, 5.0), st.randoms(use_true_random=False))
def test_distribution_normalized_and_equivariant(pairs, eps, rnd):
    hc = FiniteHypothesisClass.intervals(6)
    s = LabeledSample.from_examples(pairs)
    p = exponential_mechanism_distribution(hc, s, eps)
    assert abs(p.sum() - 1.0) <= 1e-12
    perm = list(range(len(hc)))
    rnd.shuffle(perm)
    permuted = FiniteHypothesisClass(hc.table[perm])
    assert np.allclose(exponential_mechanism_distribution(permuted, s, eps), p[perm],
                       rtol=0, atol=1e-15)


def test_estimator_api(thresholds4):
    est = ExponentialMechanismLearner(thresholds4, epsilon=0.5, random_state=3)
    assert est.get_params()["epsilon"] == 0.5
    est.fit([0, 1, 2, 3] * 25, [0, 0, 1, 1] * 25)
    assert 0 <= est.hypothesis_ < len(thresholds4)
    assert est.predict([0, 3]).shape == (2,)
    # reseeding reproduces the released hypothesis
    again = ExponentialMechanismLearner(thresholds4, epsilon=0.5, random_state=3)
    assert again.fit([0, 1, 2, 3] * 25, [0, 0, 1, 1] * 25).hypothesis_ == est.hypothesis_


def test_formula_example():
    hc = FiniteHypothesisClass([[0, 0], [0, 1]])
    manual = 8 / (0.1 * 0.25) * (math.log(2) + math.log(4))
    assert manual == pytest.approx(665.42, abs=0.01)
    assert sample_complexity_formula(hc, 0.25, 0.5, 0.1) == 666


def test_formula_monotone_and_limit():
    values = [sample_complexity_formula(2 ** k, 0.25, 0.5, 0.1) for k in range(1, 12)]
    assert values == sorted(values)
    alpha = 1 - 1e-12
    expected = math.ceil(8 / 0.1 * (math.log(9) + math.log(4)))
    assert sample_complexity_formula(9, alpha, 0.5, 0.1) == expected


def test_random_realizable_distribution(thresholds8, rng):
    for _ in range(20):
        dist, c = random_realizable_distribution(thresholds8, rng)
        assert np.array_equal(thresholds8.evaluate(c, dist.x), dist.y)
        assert dist.mass.sum() == pytest.approx(1.0, abs=1e-12)


def test_pac_validate_preconditions(thresholds4):
    with pytest.raises(PreconditionError):
        pac_validate(thresholds4, 0, 0.25, 0.5, 0.1, 1000, 0)
    with pytest.raises(PreconditionError):
        pac_validate(thresholds4, 10, 0.25, 0.5, 0.1, 999, 0)


def test_pac_validate_forced_success():
    est = pac_validate(SINGLE, 1, 0.25, 0.5, 0.1, 1000, 0)
    assert est.frequency == 1.0 and est.stderr == 0.0


def test_calibration_single_hypothesis():
    assert calibrate_sample_complexity(SINGLE, 0.25, 0.5, 0.1, 1000, 0) == 1


def test_calibration_bounded_by_formula(thresholds8, m0_thresholds8):
    assert 1 <= m0_thresholds8 <= sample_complexity_formula(thresholds8, 0.25, 0.5, 0.1)


def test_calibration_is_smallest_passing(thresholds4, m0_thresholds4):
    target = 0.5 + 2 * math.sqrt(0.25 / 2000)
    ss = np.random.SeedSequence(0)
    at = pac_validate(thresholds4, m0_thresholds4, 0.25, 0.5, 0.1, 2000, ss)
    below = pac_validate(thresholds4, m0_thresholds4 - 1, 0.25, 0.5, 0.1, 2000, ss)
    assert at.frequency >= target > below.frequency


def test_calibration_ceiling(thresholds8):
    with pytest.raises(CalibrationError):
        calibrate_sample_complexity(thresholds8, 0.25, 0.5, 0.1, 1000, 5, m_max=2)


def test_calibration_disk_cache(tmp_path, thresholds4):
    path = tmp_path / "cal.json"
    m0 = calibrate_sample_complexity(thresholds4, 0.3, 0.5, 0.1, 1000, 7, cache_path=path)
    data = json.loads(path.read_text())
    (entry,) = data.values()
    assert entry["m0"] == m0 and entry["class"]["kind"] == "thresholds"


def test_audit_identical():
    s = LabeledSample([0, 1], [0, 1])
    r = audit_privacy(TWO, s, s, 0.1)
    assert (r.q, r.max_log_ratio, r.passed) == (0, 0.0, True)


def test_audit_one_flip():
    s, t = LabeledSample([1, 1], [0, 0]), LabeledSample([1, 1], [0, 1])
    r = audit_privacy(TWO, s, t, 0.1)
    # enumeration by hand: (1, e^-0.1)/Z versus (1, 1)/2
    p = np.array([1, math.exp(-0.1)]) / (1 + math.exp(-0.1))
    expected = np.max(np.abs(np.log(p) - np.log([0.5, 0.5])))
    assert r.q == 1 and r.max_log_ratio == pytest.approx(expected, abs=1e-12)
    assert r.max_log_ratio <= 0.1 and r.passed
    report = json.loads(r.to_json())
    assert set(report) == {"q", "eps", "max_log_ratio", "bound", "pass"}


def test_audit_group_three(thresholds8):
    s = LabeledSample([0, 1, 2, 3], [0, 0, 0, 0])
    t = LabeledSample([7, 6, 5, 3], [1, 1, 1, 0])
    r = audit_privacy(thresholds8, s, t, 0.1)
    assert r.q == 3 and r.bound == pytest.approx(0.3) and r.passed


def test_audit_length_mismatch():
    with pytest.raises(PreconditionError):
        audit_privacy(TWO, LabeledSample([0], [0]), LabeledSample([0, 1], [0, 0]), 0.1)


def test_audit_detects_non_private_mechanism():
    # eps=0.1 scores audited against a 0.05 budget must fail somewhere
    s, t = LabeledSample([1, 1], [0, 0]), LabeledSample([1, 1], [0, 1])
    r = audit_privacy(TWO, s, t, 0.1)
    assert r.max_log_ratio > 0.05 * r.q


@pytest.mark.parametrize("m", [1, 2])
def test_multiset_group_audit_matches_ordered(m):
    hc = FiniteHypothesisClass.thresholds(3)
    fast = exhaustive_audit(hc, m, 0.1, group=True)
    worst_excess, violations = group_audit_ordered(hc, m, 0.1)
    assert fast.violations == violations == 0
    assert fast.max_excess == pytest.approx(worst_excess, abs=1e-12)


def test_exhaustive_neighbor_audit_small():
    hc = FiniteHypothesisClass.points(3)
    r = exhaustive_audit(hc, 2, 0.1)
    assert r.passed and r.pairs_checked == 36 * 2 * 5
    assert 0.0 < r.max_log_ratio <= 0.1

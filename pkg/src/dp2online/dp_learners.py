"""A pure epsilon-DP PAC learner over finite classes, with exact auditing.

The learner is the exponential mechanism with score ``m * L_S(h)`` (the
number of mistakes on the sample, sensitivity 1). Because the output space
is finite, its output distribution can be enumerated exactly, which is what
the auditor and the expert pool rely on.
"""

import functools
import itertools
import json
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import logsumexp
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .core import FiniteDistribution, LabeledSample, population_risk_exact
from .exceptions import CalibrationError, EmptySampleError, PreconditionError
from .utils import (as_seed_sequence, check_positive_int, check_random_state,
                    check_unit_interval, child_seed)

DEFAULT_EPSILON = 0.1
AUDIT_TOLERANCE = 1e-9


def _check_epsilon(epsilon):
    epsilon = float(epsilon)
    if not epsilon > 0:
        raise PreconditionError(f"epsilon must be positive, got {epsilon}")
    return epsilon


def _as_sample(sample):
    if isinstance(sample, LabeledSample):
        return sample
    x, y = sample
    return LabeledSample(x, y)


def exponential_mechanism_log_distribution(hypothesis_class, sample, epsilon=DEFAULT_EPSILON):
    """Natural-log output probabilities of the exponential mechanism."""
    sample = _as_sample(sample)
    if sample.m == 0:
        raise EmptySampleError("the private learner needs a nonempty sample")
    epsilon = _check_epsilon(epsilon)
    scores = -0.5 * epsilon * hypothesis_class.mistake_counts(sample.x, sample.y)
    return scores - logsumexp(scores)


def exponential_mechanism_distribution(hypothesis_class, sample, epsilon=DEFAULT_EPSILON):
    """Probability of each hypothesis, proportional to ``exp(-(eps/2) m L_S(h))``."""
    logp = exponential_mechanism_log_distribution(hypothesis_class, sample, epsilon)
    p = np.exp(logp)
    return p / p.sum()


def train(hypothesis_class, sample, epsilon, random_state):
    """Run the private learner once; returns a hypothesis index."""
    p = exponential_mechanism_distribution(hypothesis_class, sample, epsilon)
    return int(check_random_state(random_state).choice(p.size, p=p))


@functools.lru_cache(maxsize=1024)
def _cached_distribution(hypothesis_class, epsilon, x_bytes, y_bytes):
    # the same dummy sample is queried once per expert-pool draw
    x = np.frombuffer(x_bytes, dtype=np.int64)
    y = np.frombuffer(y_bytes, dtype=np.int64)
    hypothesis_class.check_instances(x)
    p = exponential_mechanism_distribution(hypothesis_class, LabeledSample(x, y), epsilon)
    p.setflags(write=False)
    return p


class ExponentialMechanismLearner(ClassifierMixin, BaseEstimator):
    """Pure epsilon-DP learner over a finite hypothesis class.

    Parameters
    ----------
    hypothesis_class : FiniteHypothesisClass
    epsilon : float, default=0.1
    random_state : int, Generator or None

    Attributes
    ----------
    hypothesis_ : int
        Index of the hypothesis released by the last call to ``fit``.
    """

    def __init__(self, hypothesis_class, epsilon=DEFAULT_EPSILON, random_state=None):
        self.hypothesis_class = hypothesis_class
        self.epsilon = epsilon
        self.random_state = random_state

    def output_distribution(self, X, y):
        X = np.ascontiguousarray(X, dtype=np.int64)
        y = np.ascontiguousarray(y, dtype=np.int64)
        return _cached_distribution(self.hypothesis_class, float(self.epsilon),
                                    X.tobytes(), y.tobytes()).copy()

    def fit(self, X, y):
        rng = check_random_state(self.random_state)
        sample = LabeledSample(X, y)
        self.hypothesis_class.check_instances(sample.x)
        self.hypothesis_ = train(self.hypothesis_class, sample, self.epsilon, rng)
        self.classes_ = np.array([0, 1])
        return self

    def predict(self, X):
        check_is_fitted(self, "hypothesis_")
        return self.hypothesis_class.evaluate(self.hypothesis_, np.asarray(X))

    def sample_outputs(self, X, y, n, random_state=None):
        """Indices released by ``n`` independent runs on the same input.

        Same law as calling ``fit`` ``n`` times; batched for speed.
        """
        p = self.output_distribution(X, y)
        rng = check_random_state(random_state)
        return rng.choice(p.size, size=check_positive_int(n, "n"), p=p)


def sample_complexity_formula(hypothesis_class, alpha, beta, epsilon=DEFAULT_EPSILON):
    """Conservative bound ``ceil(8/(eps*alpha) * (ln|H| + ln(2/beta)))``."""
    n = hypothesis_class if isinstance(hypothesis_class, int) else len(hypothesis_class)
    alpha = check_unit_interval(alpha, "alpha")
    beta = check_unit_interval(beta, "beta")
    epsilon = _check_epsilon(epsilon)
    value = 8.0 / (epsilon * alpha) * (math.log(n) + math.log(2.0 / beta))
    return max(1, math.ceil(value - 1e-9))


def random_realizable_distribution(hypothesis_class, random_state, max_atoms=16):
    """Draw a target uniformly from the class and a Dirichlet(1) instance marginal.

    The marginal lives on an evenly spaced grid of at most ``max_atoms``
    instances. Returns ``(distribution, target_index)``.
    """
    rng = check_random_state(random_state)
    d = hypothesis_class.domain_size
    target = int(rng.integers(len(hypothesis_class)))
    atoms = np.unique(np.linspace(0, d - 1, num=min(d, max_atoms)).round().astype(int))
    marginal = np.zeros(d)
    marginal[atoms] = rng.dirichlet(np.ones(atoms.size))
    dist = FiniteDistribution.labeled_by(hypothesis_class.hypothesis(target), marginal)
    return dist, target


class MonteCarloEstimate(NamedTuple):
    frequency: float
    stderr: float
    trials: int


def _estimate(successes, trials):
    p = successes / trials
    return MonteCarloEstimate(p, math.sqrt(p * (1.0 - p) / trials), trials)


def pac_validate(hypothesis_class, m, alpha, beta, epsilon=DEFAULT_EPSILON, trials=1000,
                 random_state=None, learner=None):
    """Monte Carlo estimate of ``Pr[L_D(A(S)) <= alpha]`` over random realizable D.

    Trial ``i`` draws its distribution from child stream ``i``, so two calls
    with the same seed and different ``m`` face the same distributions.
    ``beta`` is accepted for signature symmetry and validated only.
    """
    m = check_positive_int(m, "m")
    alpha = check_unit_interval(alpha, "alpha")
    check_unit_interval(beta, "beta")
    trials = check_positive_int(trials, "trials", minimum=1000)
    if learner is None:
        learner = ExponentialMechanismLearner(hypothesis_class, epsilon)
    ss = as_seed_sequence(random_state)
    successes = 0
    for i in range(trials):
        rng = np.random.default_rng(child_seed(ss, i))
        dist, _ = random_realizable_distribution(hypothesis_class, rng)
        sample = dist.sample(m, rng)
        h = int(learner.sample_outputs(sample.x, sample.y, 1, rng)[0])
        if population_risk_exact(hypothesis_class.hypothesis(h), dist) <= alpha:
            successes += 1
    return _estimate(successes, trials)


_CALIBRATION_CACHE = {}


def calibrate_sample_complexity(hypothesis_class, alpha=0.25, beta=0.5,
                                epsilon=DEFAULT_EPSILON, trials=2000, random_state=0,
                                m_max=None, cache_path=None):
    """Smallest m whose PAC success frequency clears ``(1-beta) + 2 sigma``.

    Doubles m until it passes, then binary searches the last bracket for the
    smallest passing value. ``m_max`` defaults to the formula bound, so the
    result never exceeds :func:`sample_complexity_formula`.

    Results for integer seeds are cached in memory and, when ``cache_path``
    is given, in a JSON file keyed by the class descriptor.
    """
    alpha = check_unit_interval(alpha, "alpha")
    beta = check_unit_interval(beta, "beta")
    epsilon = _check_epsilon(epsilon)
    trials = check_positive_int(trials, "trials", minimum=1000)
    if m_max is None:
        m_max = sample_complexity_formula(hypothesis_class, alpha, beta, epsilon)
    key = None
    if isinstance(random_state, int):
        desc = hypothesis_class.descriptor()
        key = (f"{desc['kind']}:{desc['domain_size']}:{desc['n_hypotheses']}:"
               f"{hash(hypothesis_class)}:{alpha!r}:{beta!r}:{epsilon!r}:{trials}:"
               f"{random_state}:{m_max}")
        if key in _CALIBRATION_CACHE:
            return _CALIBRATION_CACHE[key]
        disk = _read_cache(cache_path)
        if key in disk:
            _CALIBRATION_CACHE[key] = int(disk[key]["m0"])
            return _CALIBRATION_CACHE[key]

    ss = as_seed_sequence(random_state)
    target = (1.0 - beta) + 2.0 * math.sqrt(beta * (1.0 - beta) / trials)

    def passes(m):
        est = pac_validate(hypothesis_class, m, alpha, beta, epsilon, trials, ss)
        return est.frequency >= target

    lo, hi = 0, 1
    while not passes(hi):
        lo = hi
        if hi >= m_max:
            raise CalibrationError(
                f"no m <= {m_max} reached success frequency {target:.4f} "
                f"for {hypothesis_class!r}")
        hi = min(2 * hi, m_max)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if passes(mid):
            hi = mid
        else:
            lo = mid

    if key is not None:
        _CALIBRATION_CACHE[key] = hi
        if cache_path is not None:
            disk = _read_cache(cache_path)
            disk[key] = {"m0": hi, "class": hypothesis_class.descriptor(), "alpha": alpha,
                         "beta": beta, "epsilon": epsilon, "trials": trials}
            with open(cache_path, "w") as fh:
                json.dump(disk, fh, indent=2, sort_keys=True)
    return hi


def _read_cache(path):
    if path is None:
        return {}
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        return {}


@dataclass(frozen=True)
class PrivacyAuditReport:
    q: int
    eps: float
    max_log_ratio: float
    bound: float
    passed: bool

    def to_dict(self):
        out = asdict(self)
        out["pass"] = out.pop("passed")
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def audit_privacy(hypothesis_class, sample, other, epsilon=DEFAULT_EPSILON):
    """Compare the exact output distributions on two equal-length samples."""
    sample, other = _as_sample(sample), _as_sample(other)
    if sample.m != other.m:
        raise PreconditionError(f"samples differ in length ({sample.m} vs {other.m})")
    epsilon = _check_epsilon(epsilon)
    q = int(np.count_nonzero((sample.x != other.x) | (sample.y != other.y)))
    logp = exponential_mechanism_log_distribution(hypothesis_class, sample, epsilon)
    logq = exponential_mechanism_log_distribution(hypothesis_class, other, epsilon)
    ratio = float(np.max(np.abs(logp - logq)))
    bound = epsilon * q
    return PrivacyAuditReport(q, epsilon, ratio, bound, ratio <= bound + AUDIT_TOLERANCE)


@dataclass(frozen=True)
class ExhaustiveAuditReport:
    m: int
    eps: float
    group: bool
    pairs_checked: int
    max_log_ratio: float
    max_excess: float
    violations: int
    passed: bool

    def to_dict(self):
        out = asdict(self)
        out["pass"] = out.pop("passed")
        return out


def _mistake_table(hypothesis_class):
    # Column z = 2x + y holds each hypothesis's loss on example (x, y).
    t = hypothesis_class.table.astype(np.int64)
    return np.stack([t != 0, t != 1], axis=2).reshape(len(hypothesis_class), -1)


def exhaustive_audit(hypothesis_class, m, epsilon=DEFAULT_EPSILON, group=False):
    """Audit every pair of samples of length ``m`` over the whole domain.

    With ``group=False`` the pairs are all 1-neighbors in ordered-sample
    space. With ``group=True`` all pairs are checked against ``eps * q``.
    The output law depends on a sample only through its multiset, and the
    smallest Hamming distance between orderings of two multisets is
    ``m - |intersection|``; checking every multiset pair at that distance
    therefore covers every ordered pair.
    """
    m = check_positive_int(m, "m")
    epsilon = _check_epsilon(epsilon)
    loss = _mistake_table(hypothesis_class)
    base = loss.shape[1]
    if not group:
        digits = np.array(list(itertools.product(range(base), repeat=m)), dtype=np.int64)
        errs = loss[:, digits].sum(axis=2).T
        scores = -0.5 * epsilon * errs
        logp = scores - logsumexp(scores, axis=1, keepdims=True)
        idx = np.arange(len(digits))
        worst, pairs = 0.0, 0
        for i in range(m):
            place = base ** (m - 1 - i)
            for k in range(1, base):
                new_digit = (digits[:, i] + k) % base
                nb = idx + (new_digit - digits[:, i]) * place
                r = np.abs(logp - logp[nb]).max()
                worst = max(worst, float(r))
                pairs += len(idx)
        excess = worst - epsilon
        violations = int(excess > AUDIT_TOLERANCE)
        return ExhaustiveAuditReport(m, epsilon, False, pairs, worst, excess,
                                     violations, violations == 0)

    combos = np.array(list(itertools.combinations_with_replacement(range(base), m)))
    counts = np.zeros((len(combos), base), dtype=np.int64)
    np.add.at(counts, (np.repeat(np.arange(len(combos)), m), combos.ravel()), 1)
    scores = -0.5 * epsilon * (counts @ loss.T)
    logp = scores - logsumexp(scores, axis=1, keepdims=True)
    worst, worst_excess, violations, pairs = 0.0, -np.inf, 0, 0
    block = max(1, 4_000_000 // (len(combos) * loss.shape[0]))
    for start in range(0, len(combos), block):
        a = slice(start, start + block)
        ratio = np.abs(logp[a, None, :] - logp[None, :, :]).max(axis=2)
        q = m - np.minimum(counts[a, None, :], counts[None, :, :]).sum(axis=2)
        excess = ratio - epsilon * q
        worst = max(worst, float(ratio.max()))
        # identical multisets (q = 0) have ratio 0; leave them out of the slack
        worst_excess = max(worst_excess, float(np.where(q > 0, excess, -np.inf).max()))
        violations += int((excess > AUDIT_TOLERANCE).sum())
        pairs += ratio.size
    return ExhaustiveAuditReport(m, epsilon, True, pairs, worst, worst_excess,
                                 violations, violations == 0)


def group_audit_ordered(hypothesis_class, m, epsilon=DEFAULT_EPSILON):
    """Brute-force group audit over ordered sample pairs (small ``m`` only).

    Independent of the multiset reduction in :func:`exhaustive_audit`;
    used to cross-check it.
    """
    loss = _mistake_table(hypothesis_class)
    base = loss.shape[1]
    digits = np.array(list(itertools.product(range(base), repeat=m)), dtype=np.int64)
    errs = loss[:, digits].sum(axis=2).T
    scores = -0.5 * epsilon * errs
    logp = scores - logsumexp(scores, axis=1, keepdims=True)
    worst_excess, violations = -np.inf, 0
    block = max(1, 2_000_000 // (len(digits) * loss.shape[0]))
    for start in range(0, len(digits), block):
        a = slice(start, start + block)
        ratio = np.abs(logp[a, None, :] - logp[None, :, :]).max(axis=2)
        q = (digits[a, None, :] != digits[None, :, :]).sum(axis=2)
        excess = ratio - epsilon * q
        worst_excess = max(worst_excess, float(np.where(q > 0, excess, -np.inf).max()))
        violations += int((excess > AUDIT_TOLERANCE).sum())
    return worst_excess, violations

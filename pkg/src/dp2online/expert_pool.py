"""Expert pools drawn from the private learner's output on a dummy sample.

Running the private learner on ``m0`` copies of ``(x_bar, 0)`` induces a
distribution over hypotheses. Group privacy (the dummy and any real sample
of length ``m0`` are ``m0``-neighbors) gives every realizable distribution
a good hypothesis with mass at least ``exp(-eps*m0)/2`` under it, so a pool
of ``N`` draws contains a good expert with probability ``>= 15/16`` once
``N >= 2 exp(eps*m0) ln 16``.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import LabeledSample, is_realizable, population_risk_exact
from .dp_learners import DEFAULT_EPSILON, MonteCarloEstimate, _estimate
from .exceptions import InfeasiblePoolError, NonRealizableError, PreconditionError
from .utils import as_seed_sequence, check_positive_int, check_random_state, child_seed

DEFAULT_MAX_POOL = 10_000_000
COVERAGE_RISK = 0.25


@dataclass(frozen=True)
class DummySample:
    """``m0`` copies of ``(x_bar, label)``."""

    m0: int
    x_bar: int = 0
    label: int = 0

    def to_sample(self):
        return LabeledSample(np.full(self.m0, self.x_bar), np.full(self.m0, self.label))


@dataclass(frozen=True, eq=False)
class ExpertPool:
    experts: np.ndarray
    m0: int
    seed: object = None

    def __post_init__(self):
        experts = np.array(self.experts, dtype=np.int64, ndmin=1)
        if experts.size == 0:
            raise PreconditionError("an expert pool needs at least one expert")
        experts.setflags(write=False)
        object.__setattr__(self, "experts", experts)

    @property
    def N(self):
        return self.experts.size

    def __len__(self):
        return self.N

    def __eq__(self, other):
        if not isinstance(other, ExpertPool):
            return NotImplemented
        return self.m0 == other.m0 and np.array_equal(self.experts, other.experts)

    def to_json(self):
        return json.dumps({"m0": self.m0, "N": self.N, "seed": self.seed,
                           "experts": self.experts.tolist()})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        if data["N"] != len(data["experts"]):
            raise PreconditionError("pool JSON: N does not match the expert list")
        return cls(data["experts"], data["m0"], data.get("seed"))


def pool_size(m0, epsilon=DEFAULT_EPSILON, max_pool=DEFAULT_MAX_POOL):
    """Smallest N with ``exp(-N exp(-eps*m0) / 2) <= 1/16``: ``ceil(2 e^{eps m0} ln 16)``."""
    m0 = check_positive_int(m0, "m0")
    epsilon = float(epsilon)
    if epsilon < 0:
        raise PreconditionError("epsilon must be nonnegative")
    exponent = epsilon * m0
    # log-space comparison avoids overflow in exp() for absurd m0
    if exponent + math.log(2.0 * math.log(16.0)) > math.log(max_pool) + 1e-12:
        raise InfeasiblePoolError(
            f"pool for m0={m0}, eps={epsilon} exceeds the ceiling of {max_pool} experts")
    return max(1, math.ceil(2.0 * math.exp(exponent) * math.log(16.0) - 1e-9))


def sample_pool(learner, m0, N, random_state=None, x_bar=0):
    """Draw ``N`` i.i.d. hypotheses by running ``learner`` on the dummy sample.

    ``learner`` is any object exposing ``sample_outputs(X, y, n, random_state)``
    (the batched form of ``n`` independent ``fit`` calls).
    """
    N = check_positive_int(N, "N")
    dummy = DummySample(check_positive_int(m0, "m0"), x_bar).to_sample()
    seed = random_state if isinstance(random_state, int) else None
    experts = learner.sample_outputs(dummy.x, dummy.y, N, check_random_state(random_state))
    return ExpertPool(experts, m0, seed)


def coverage_estimate(learner, m0, N, distribution, trials=200, random_state=None,
                      hypothesis_class=None, threshold=COVERAGE_RISK):
    """Frequency over fresh pools of ``{some expert has L_D <= threshold}``."""
    hypothesis_class = hypothesis_class or learner.hypothesis_class
    trials = check_positive_int(trials, "trials", minimum=200)
    if not is_realizable(hypothesis_class, distribution):
        raise NonRealizableError("coverage is only defined for realizable distributions")
    risks = np.array([population_risk_exact(hypothesis_class.hypothesis(j), distribution)
                      for j in range(len(hypothesis_class))])
    good = risks <= threshold
    ss = as_seed_sequence(random_state)
    hits = 0
    for i in range(trials):
        pool = sample_pool(learner, m0, N, np.random.default_rng(child_seed(ss, i)))
        hits += bool(good[pool.experts].any())
    return _estimate(hits, trials)

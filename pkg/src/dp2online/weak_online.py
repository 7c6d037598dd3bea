"""Weak online learner for oblivious adversaries.

Draws a pool of experts from the private learner's output on a dummy
sample, then runs Multiplicative Weights over the pool.
"""

import math
from dataclasses import dataclass

import numpy as np

from .base import OnlineEstimator
from .dp_learners import DEFAULT_EPSILON, ExponentialMechanismLearner
from .exceptions import HorizonExhaustedError
from .expert_pool import DEFAULT_MAX_POOL, pool_size, sample_pool
from .mw import MultiplicativeWeights
from .utils import as_seed_sequence, check_positive_int

EDGE = 1.0 / 8.0
# Smallest C with 2 sqrt(T L) + T/4 + T/16 <= 3T/8 + C L for every T:
# the left-minus-linear part peaks at T = 256 L with value 16 L.
EXCESS_LOSS_CONSTANT = 16.0


@dataclass(frozen=True)
class WeakGuarantee:
    gamma: float
    excess_loss: float

    def bound(self, T):
        """Mistake budget ``(1/2 - gamma) T + T0``."""
        return (0.5 - self.gamma) * T + self.excess_loss


def weak_guarantee(n_experts, constant=EXCESS_LOSS_CONSTANT):
    return WeakGuarantee(EDGE, constant * math.log(n_experts))


def oblivious_mistake_bound(T, n_experts):
    """``2 sqrt(T ln N) + T/4 + T/16``, the bound the pool argument yields."""
    return 2.0 * math.sqrt(T * math.log(n_experts)) + T / 4.0 + T / 16.0


class WeakOnlineLearner(OnlineEstimator):
    """Expert pool from a private learner, played with Multiplicative Weights.

    Parameters
    ----------
    hypothesis_class : FiniteHypothesisClass
    m0 : int
        Dummy-sample length (the private learner's sample complexity at
        accuracy 1/4, confidence 1/2).
    horizon : int
    learner : estimator, optional
        Private learner oracle exposing ``sample_outputs``. Defaults to
        :class:`ExponentialMechanismLearner` with ``epsilon``.
    epsilon : float, default=0.1
    n_experts : int, optional
        Pool size override; ``pool_size(m0, epsilon)`` when omitted.
    max_pool : int
    random_state : int, SeedSequence, Generator or None
        One stream draws the pool first, then drives predictions.

    Attributes
    ----------
    pool_ : ExpertPool
    mw_ : MultiplicativeWeights
    rounds_ : int
        Number of labeled rounds consumed.
    """

    def __init__(self, hypothesis_class, m0, horizon, learner=None,
                 epsilon=DEFAULT_EPSILON, n_experts=None, max_pool=DEFAULT_MAX_POOL,
                 random_state=None):
        self.hypothesis_class = hypothesis_class
        self.m0 = m0
        self.horizon = horizon
        self.learner = learner
        self.epsilon = epsilon
        self.n_experts = n_experts
        self.max_pool = max_pool
        self.random_state = random_state

    def _oracle(self):
        if self.learner is not None:
            return self.learner
        return ExponentialMechanismLearner(self.hypothesis_class, self.epsilon)

    def _pool_size(self):
        if self.n_experts is not None:
            return check_positive_int(self.n_experts, "n_experts")
        return pool_size(self.m0, self.epsilon, self.max_pool)

    def _reset(self):
        horizon = check_positive_int(self.horizon, "horizon")
        rng = np.random.default_rng(as_seed_sequence(self.random_state))
        N = self._pool_size()
        self.pool_ = sample_pool(self._oracle(), self.m0, N, rng)
        self.mw_ = MultiplicativeWeights(N, horizon)
        self._pred_rng = rng
        self._expert_table = self.hypothesis_class.table[self.pool_.experts]
        self.rounds_ = 0
        self._initialized = True

    @property
    def guarantee(self):
        return weak_guarantee(self._pool_size())

    def _check_budget(self):
        if self.rounds_ >= self.horizon:
            raise HorizonExhaustedError(
                f"weak learner already consumed its horizon of {self.horizon} rounds")

    def _predict_one(self, x):
        self._check_budget()
        j = self.mw_.sample(self._pred_rng)
        return int(self._expert_table[j, x])

    def predict_proba_one(self, x):
        """Probability that the next prediction on ``x`` is 1."""
        self._ensure_state()
        return float(self.mw_.distribution() @ self._expert_table[:, x])

    def _update_one(self, x, y):
        self._check_budget()
        self.mw_.update(self._expert_table[:, x] != y)
        self.rounds_ += 1

    def replay(self, X, y):
        """Consume a labeled history without predicting on it.

        Equivalent to calling ``partial_fit`` on each pair in order.
        """
        self._ensure_state()
        X = np.asarray(X, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if len(X) == 0:
            return self
        if self.rounds_ + len(X) > self.horizon:
            raise HorizonExhaustedError("history longer than the remaining horizon")
        per_hypothesis = self.hypothesis_class.mistake_counts(X, y)
        self.mw_.advance(per_hypothesis[self.pool_.experts], len(X))
        self.rounds_ += len(X)
        return self

"""Strong online learner assembled from a private-learner oracle.

Weak learner = expert pool + Multiplicative Weights, made robust to
adaptive adversaries by the replica wrapper, then boosted by online
Boosting-by-Majority with ``N = ceil(2 ln T / gamma^2)`` copies.
"""

import math

from .adaptive import AdaptiveWrapper
from .base import OnlineEstimator
from .boosting import OnlineBBM, boost_schedule
from .dp_learners import DEFAULT_EPSILON
from .expert_pool import DEFAULT_MAX_POOL, pool_size
from .utils import as_seed_sequence, check_positive_int
from .weak_online import EDGE, WeakOnlineLearner

PIPELINE_MODES = ("faithful", "fast")


class PrivateOnlineLearner(OnlineEstimator):
    """Online learner for a finite class built only from a private learner.

    Parameters
    ----------
    hypothesis_class : FiniteHypothesisClass
    m0 : int
        Sample complexity of the private learner at ``(1/4, 1/2)``.
    horizon : int
    learner : estimator, optional
        Private learner oracle; exponential mechanism by default.
    mode : {"faithful", "fast"}
        ``"fast"`` drops the adaptive wrapper; only sound against
        oblivious adversaries.
    wrapper_mode : {"replay", "live"}
    n_learners : int, optional
        Booster size override.
    n_experts : int, optional
        Pool size override for every weak learner.
    epsilon, max_pool, random_state
        Forwarded to the weak learners.
    """

    def __init__(self, hypothesis_class, m0, horizon, learner=None, mode="faithful",
                 wrapper_mode="replay", n_learners=None, n_experts=None,
                 epsilon=DEFAULT_EPSILON, max_pool=DEFAULT_MAX_POOL, random_state=None):
        self.hypothesis_class = hypothesis_class
        self.m0 = m0
        self.horizon = horizon
        self.learner = learner
        self.mode = mode
        self.wrapper_mode = wrapper_mode
        self.n_learners = n_learners
        self.n_experts = n_experts
        self.epsilon = epsilon
        self.max_pool = max_pool
        self.random_state = random_state

    def weak_template(self):
        weak = WeakOnlineLearner(self.hypothesis_class, self.m0, self.horizon,
                                 learner=self.learner, epsilon=self.epsilon,
                                 n_experts=self.n_experts, max_pool=self.max_pool)
        if self.mode == "fast":
            return weak
        return AdaptiveWrapper(weak, self.horizon, mode=self.wrapper_mode)

    def _reset(self):
        if self.mode not in PIPELINE_MODES:
            raise ValueError(f"mode must be one of {PIPELINE_MODES}, got {self.mode!r}")
        horizon = check_positive_int(self.horizon, "horizon")
        check_positive_int(self.m0, "m0")
        template = self.weak_template()
        # surfaces an infeasible pool before any copies are built
        WeakOnlineLearner(self.hypothesis_class, self.m0, horizon, epsilon=self.epsilon,
                          n_experts=self.n_experts, max_pool=self.max_pool)._pool_size()
        self.booster_ = OnlineBBM(template, horizon, n_learners=self.n_learners,
                                  gamma=EDGE,
                                  random_state=as_seed_sequence(self.random_state))
        self.booster_.reset()
        self._initialized = True

    def _predict_one(self, x):
        return self.booster_._predict_one(x)

    def _update_one(self, x, y):
        self.booster_._update_one(x, y)

    @property
    def n_learners_(self):
        self._ensure_state()
        return self.booster_.n_learners_


def build_pipeline(hypothesis_class, m0, T, learner=None, random_state=None, **kwargs):
    """Fresh :class:`PrivateOnlineLearner` for horizon ``T``."""
    return PrivateOnlineLearner(hypothesis_class, m0, T, learner=learner,
                                random_state=random_state, **kwargs)


def component_counts(m0, T, epsilon=DEFAULT_EPSILON, gamma=EDGE):
    """``(booster size, pool size per weak learner)`` for the given parameters."""
    return boost_schedule(T, gamma), pool_size(m0, epsilon)


def theorem1_bound(m0, T, c1=1.0, c2=0.0):
    """Reference curve ``c1 * m0 * ln T + c2``; constants are illustrative, not derived."""
    return c1 * m0 * math.log(T) + c2

"""Small deterministic learners and oracles shared by the tests."""

import numpy as np

from dp2online.base import OnlineEstimator


class FixedPoolOracle:
    """Private-learner stand-in whose pool is a fixed list, repeated."""

    def __init__(self, hypothesis_class, experts):
        self.hypothesis_class = hypothesis_class
        self.experts = list(experts)

    def sample_outputs(self, X, y, n, random_state=None):
        return np.resize(np.asarray(self.experts, dtype=np.int64), n)


class ConstantLearner(OnlineEstimator):
    def __init__(self, label=0, random_state=None):
        self.label = label
        self.random_state = random_state

    def _reset(self):
        self._initialized = True

    def _predict_one(self, x):
        return int(self.label)

    def _update_one(self, x, y):
        pass


class LastLabelLearner(OnlineEstimator):
    """Deterministic: predicts the last label seen on ``x`` (0 if none)."""

    def __init__(self, random_state=None):
        self.random_state = random_state

    def _reset(self):
        self.memory_ = {}
        self._initialized = True

    def _predict_one(self, x):
        return self.memory_.get(int(x), 0)

    def _update_one(self, x, y):
        self.memory_[int(x)] = int(y)


class TargetLearner(OnlineEstimator):
    """Always correct for a threshold target; stateless."""

    def __init__(self, threshold=0, random_state=None):
        self.threshold = threshold
        self.random_state = random_state

    def _reset(self):
        self._initialized = True

    def _predict_one(self, x):
        return int(x >= self.threshold)

    def _update_one(self, x, y):
        pass


class FixedVotes:
    """Bank with constant votes; records how often each learner is passed."""

    def __init__(self, votes=(0,), n_learners=None, random_state=None):
        self.votes = tuple(votes)
        self.n_learners = len(self.votes)
        self.random_state = random_state
        self.passed_ = np.zeros(self.n_learners, dtype=np.int64)

    def get_params(self, deep=False):
        return {"votes": self.votes, "n_learners": self.n_learners,
                "random_state": self.random_state}

    def __len__(self):
        return self.n_learners

    def predict_all(self, x):
        return np.array(self.votes, dtype=np.int64)

    def update_mask(self, x, y, mask):
        self.passed_ += np.asarray(mask, dtype=np.int64)

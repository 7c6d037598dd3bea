"""Oblivious-to-adaptive conversion by independent replicas.

Round ``t`` is answered by replica ``t``, a fresh instance of the base
learner with its own seed that has only seen the labeled history
``(x_1, y_1), ..., (x_{t-1}, y_{t-1})``. Its answer is therefore a function
of the adversary's moves alone, so the adversary gains nothing by adapting.

Two execution modes give the same transcripts:

``replay`` (default)
    Replica ``t`` is built when round ``t`` starts and fast-forwarded over
    the history. O(T) memory, O(T^2) learner updates overall.
``live``
    All ``T`` replicas exist from the start and every pending replica is
    updated every round.

Learners whose updates ignore their own predictions advertise a
``replay(X, y)`` method; for them the discarded predictions are skipped in
both modes. Any other learner is driven through predict-then-update for
every history item, again in both modes.
"""

import copy
from typing import NamedTuple

import numpy as np

from .base import OnlineEstimator
from .exceptions import HorizonExhaustedError, ProtocolError
from .utils import as_seed_sequence, check_positive_int, child_seed

MODES = ("replay", "live")


def _spawn(estimator, seed):
    # shallow copy: constructor params are shared read-only, fitted state is
    # rebuilt by reset(); clone() would re-introspect the signature every round
    replica = copy.copy(estimator)
    replica.random_state = seed
    replica._initialized = False
    return replica


def _skips_discarded_predictions(learner):
    return callable(getattr(learner, "replay", None))


class AdaptiveWrapper(OnlineEstimator):
    """Run ``horizon`` independent copies of ``estimator``; copy ``t`` answers round ``t``.

    Parameters
    ----------
    estimator : online estimator
        Template; copies are rebuilt from its ``get_params()`` with a fresh
        ``random_state``.
    horizon : int
    mode : {"replay", "live"}
    random_state : int, SeedSequence, Generator or None
        Replica ``t`` receives child seed ``t`` of this seed.
    """

    def __init__(self, estimator, horizon, mode="replay", random_state=None):
        self.estimator = estimator
        self.horizon = horizon
        self.mode = mode
        self.random_state = random_state

    def _reset(self):
        check_positive_int(self.horizon, "horizon")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        self._ss = as_seed_sequence(self.random_state)
        self.history_x_ = []
        self.history_y_ = []
        self.t_ = 1
        self._predicted = False
        self._current = None
        self.replicas_ = None
        if self.mode == "live":
            self.replicas_ = [None] + [self.replica_seeded(j)
                                       for j in range(1, self.horizon + 1)]
        self._initialized = True

    def replica_seeded(self, j):
        """A fresh copy of the base learner carrying replica ``j``'s seed."""
        return _spawn(self.estimator, child_seed(self._ss, j))

    def build_replica(self, j):
        """Replica ``j`` fast-forwarded over the first ``j - 1`` history items."""
        replica = self.replica_seeded(j)
        hx, hy = self.history_x_[:j - 1], self.history_y_[:j - 1]
        if _skips_discarded_predictions(replica):
            replica.replay(np.asarray(hx, dtype=np.int64), np.asarray(hy, dtype=np.int64))
        else:
            for x, y in zip(hx, hy):
                replica.predict(x)
                replica.partial_fit(x, y)
        return replica

    def current_replica(self):
        self._ensure_state()
        if self.t_ > self.horizon:
            raise HorizonExhaustedError(f"wrapper horizon {self.horizon} exhausted")
        if self.mode == "live":
            return self.replicas_[self.t_]
        if self._current is None:
            self._current = self.build_replica(self.t_)
        return self._current

    def _predict_one(self, x):
        replica = self.current_replica()
        self._predicted = True
        return int(replica.predict(x))

    def _update_one(self, x, y):
        if self.t_ > self.horizon:
            raise HorizonExhaustedError(f"wrapper horizon {self.horizon} exhausted")
        if not self._predicted:
            raise ProtocolError(f"round {self.t_}: update before predict")
        self.history_x_.append(x)
        self.history_y_.append(y)
        if self.mode == "live":
            for replica in self.replicas_[self.t_ + 1:]:
                if not _skips_discarded_predictions(replica):
                    replica.predict(x)
                replica.partial_fit(x, y)
            self.replicas_[self.t_] = None
        self._current = None
        self.t_ += 1
        self._predicted = False


class ReplicaProfile(NamedTuple):
    """``mean[t-1, j-1]`` estimates the loss of replica ``j`` at round ``t``.

    Entries with ``j < t`` are NaN.
    """

    mean: np.ndarray
    stderr: np.ndarray
    trials: int
    losses: np.ndarray


def replica_loss_profile(estimator, adversary_factory, T, trials=200, random_state=None):
    """Monte Carlo estimate of each pending replica's loss, round by round.

    The game is driven by the wrapper's actual predictions (replica ``t`` at
    round ``t``); replicas ``j > t`` are queried on ``x_t`` on the side and
    their answers are never shown to the adversary.

    ``adversary_factory(seed)`` must return a fresh adversary.
    """
    T = check_positive_int(T, "T")
    trials = check_positive_int(trials, "trials", minimum=200)
    ss = as_seed_sequence(random_state)
    losses = np.full((trials, T, T), np.nan)
    for k in range(trials):
        wrapper = AdaptiveWrapper(estimator, T, mode="live",
                                  random_state=child_seed(ss, k, 0)).reset()
        adversary = adversary_factory(child_seed(ss, k, 1))
        adversary.reset()
        for t in range(1, T + 1):
            x = adversary.next_instance()
            yhat = wrapper.predict(x)
            y = adversary.label(x)
            losses[k, t - 1, t - 1] = yhat != y
            for j in range(t + 1, T + 1):
                losses[k, t - 1, j - 1] = wrapper.replicas_[j].predict(x) != y
            adversary.observe(x, y, yhat)
            wrapper.partial_fit(x, y)
    mean = losses.mean(axis=0)
    stderr = losses.std(axis=0, ddof=1) / np.sqrt(trials) if trials > 1 else np.zeros((T, T))
    return ReplicaProfile(mean, stderr, trials, losses)

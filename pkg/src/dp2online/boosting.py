"""Online Boosting-by-Majority.

The booster keeps ``N`` weak online learners, predicts by unweighted
majority, and passes each labeled example to learner ``i`` with a
probability read off a biased-random-walk potential. Labels are mapped to
``+1/-1`` here only, to count margins.

Potential: ``Phi_k(s)`` is the probability that a walk started at ``s``,
stepping ``+1`` with probability ``1/2 + gamma`` and ``-1`` otherwise, sits
at a position ``<= 0`` after ``k`` steps. Learner ``i`` (1-based) facing
margin ``s`` from learners ``1..i-1`` gets weight
``w_i(s) = (Phi_{N-i}(s-1) - Phi_{N-i}(s+1)) / 2`` and pass probability
``w_i(s) / max_s' w_i(s')``.
"""

import csv
import io
import math

import numpy as np

from .base import OnlineEstimator
from .exceptions import HorizonExhaustedError, PreconditionError, ProtocolError
from .utils import (as_seed_sequence, check_positive_int, check_random_state,
                    child_seed)

DEFAULT_GAMMA = 1.0 / 8.0


def _check_gamma(gamma):
    gamma = float(gamma)
    if not 0.0 < gamma < 0.5:
        raise PreconditionError(f"gamma must lie in (0, 1/2), got {gamma}")
    return gamma


def _normalize_rows(w):
    """Divide each row by its max; all-zero rows become all ones."""
    peak = w.max(axis=1, keepdims=True)
    out = np.ones_like(w)
    np.divide(w, peak, out=out, where=peak > 0)
    return out


class PotentialTable:
    """Potentials ``Phi_k(s)`` for ``k = 0..N`` and ``s`` in ``[-N-1, N+1]``.

    Outside the stored range ``Phi_k(s)`` is 1 below and 0 above, which is
    exact because a walk of ``k <= N`` steps cannot cross the gap.
    """

    def __init__(self, n_learners, gamma):
        self.n_learners = N = check_positive_int(n_learners, "n_learners")
        self.gamma = gamma = _check_gamma(gamma)
        self.offset = N + 1
        width = 2 * N + 3
        s = np.arange(width) - self.offset
        phi = np.empty((N + 1, width))
        phi[0] = (s <= 0).astype(np.float64)
        up, down = 0.5 + gamma, 0.5 - gamma
        for k in range(1, N + 1):
            prev = phi[k - 1]
            above = np.append(prev[1:], 0.0)
            below = np.insert(prev[:-1], 0, 1.0)
            phi[k] = up * above + down * below
        self.phi = phi
        # weights/pass probabilities for learner i (row i-1) at margins -N..N
        idx = np.arange(2 * N + 1) + 1
        ks = N - np.arange(1, N + 1)
        self.weights = 0.5 * (phi[ks][:, idx - 1] - phi[ks][:, idx + 1])
        self.pass_table = _normalize_rows(self.weights)

    def potential(self, k, s):
        if not 0 <= k <= self.n_learners:
            raise PreconditionError(f"k must lie in [0, {self.n_learners}]")
        if s < -self.offset:
            return 1.0
        if s > self.offset:
            return 0.0
        return float(self.phi[k, s + self.offset])

    def weight(self, i, s):
        """``w_i(s)`` for learner ``i`` in ``1..N`` and margin ``|s| <= N``."""
        return float(self.weights[i - 1, s + self.n_learners])

    def pass_probability(self, i, s):
        return float(self.pass_table[i - 1, s + self.n_learners])

    def pass_probabilities(self, margins):
        """Vector of ``p_i(margins[i-1])`` for ``i = 1..N``."""
        margins = np.asarray(margins, dtype=np.int64)
        return self.pass_table[np.arange(self.n_learners), margins + self.n_learners]

    def to_csv(self, path=None):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("k", "s", "phi"))
        s_values = np.arange(self.phi.shape[1]) - self.offset
        for k in range(self.n_learners + 1):
            for s, v in zip(s_values, self.phi[k]):
                writer.writerow((k, int(s), repr(float(v))))
        if path is None:
            return buf.getvalue()
        with open(path, "w", newline="") as fh:
            fh.write(buf.getvalue())
        return None


def walk_potential_bruteforce(k, s, gamma):
    """Enumerate all ``2^k`` paths; probability the walk ends at ``<= 0``."""
    if k == 0:
        return float(s <= 0)
    steps = ((np.arange(2 ** k)[:, None] >> np.arange(k)) & 1).astype(np.int64)
    ups = steps.sum(axis=1)
    end = s + 2 * ups - k
    prob = (0.5 + gamma) ** ups * (0.5 - gamma) ** (k - ups)
    return float(prob[end <= 0].sum())


def bbm_mistake_bound(n_learners, gamma, T, excess_loss, c=1.0):
    """``exp(-N gamma^2 / 2) T + c sqrt(N) (T0 + 1/gamma) ln(N + 1)``.

    ``c`` stands in for the constant hidden by the soft-O.
    """
    N = check_positive_int(n_learners, "n_learners")
    gamma = _check_gamma(gamma)
    if T < 0:
        raise PreconditionError("T must be nonnegative")
    return (math.exp(-0.5 * N * gamma ** 2) * T
            + c * math.sqrt(N) * (excess_loss + 1.0 / gamma) * math.log(N + 1))


def boost_schedule(T, gamma=DEFAULT_GAMMA):
    """Number of weak learners for horizon ``T``: ``ceil(2 ln T / gamma^2)``, at least 1."""
    if T < 1:
        raise PreconditionError(f"T must be >= 1, got {T}")
    gamma = _check_gamma(gamma)
    return max(1, math.ceil(2.0 * math.log(T) / gamma ** 2 - 1e-9))


class LearnerBank:
    """Adapts a list of online learners to the booster's vectorized calls."""

    def __init__(self, learners):
        self.learners = list(learners)

    def __len__(self):
        return len(self.learners)

    def predict_all(self, x):
        return np.fromiter((learner.predict(x) for learner in self.learners),
                           dtype=np.int64, count=len(self.learners))

    def update_mask(self, x, y, mask):
        for i in np.flatnonzero(mask):
            self.learners[i].partial_fit(x, y)


class SyntheticEdgeLearners:
    """``n_learners`` oracle learners, each right with probability ``1/2 + gamma``.

    Votes are independent across learners and rounds and ignore updates.
    Acts as its own bank. ``target`` is any callable instance -> label.
    """

    def __init__(self, target, n_learners=1, gamma=DEFAULT_GAMMA, random_state=None):
        self.target = target
        self.n_learners = n_learners
        self.gamma = gamma
        self.random_state = random_state
        self._rng = check_random_state(random_state)
        self.passed_ = np.zeros(n_learners, dtype=np.int64)

    def get_params(self, deep=False):
        return {"target": self.target, "n_learners": self.n_learners,
                "gamma": self.gamma, "random_state": self.random_state}

    def __len__(self):
        return self.n_learners

    def predict_all(self, x):
        label = int(self.target(x))
        correct = self._rng.random(self.n_learners) < 0.5 + self.gamma
        return np.where(correct, label, 1 - label)

    def update_mask(self, x, y, mask):
        self.passed_ += np.asarray(mask, dtype=np.int64)


class OnlineBBM(OnlineEstimator):
    """Online Boosting-by-Majority over copies of a weak online learner.

    Parameters
    ----------
    estimator : online estimator or bank
        Weak-learner template, copied ``n_learners`` times with independent
        seeds. An object with ``predict_all``/``update_mask`` is instead
        used as a ready-made bank (copied once with ``n_learners`` set).
    horizon : int
    n_learners : int, optional
        Defaults to ``boost_schedule(horizon, gamma)``.
    gamma : float, default=1/8
    random_state : int, SeedSequence, Generator or None
        Child stream 0 drives example passing; learner ``i`` gets child
        ``(1, i)``.

    Attributes
    ----------
    table_ : PotentialTable
    bank_ : LearnerBank or bank
    last_votes_ : ndarray
        Votes cached by the most recent ``predict``.
    passed_counts_ : ndarray
        Number of examples each weak learner has been trained on.
    """

    def __init__(self, estimator, horizon, n_learners=None, gamma=DEFAULT_GAMMA,
                 random_state=None):
        self.estimator = estimator
        self.horizon = horizon
        self.n_learners = n_learners
        self.gamma = gamma
        self.random_state = random_state

    def _reset(self):
        horizon = check_positive_int(self.horizon, "horizon")
        N = (boost_schedule(horizon, self.gamma) if self.n_learners is None
             else check_positive_int(self.n_learners, "n_learners"))
        self.n_learners_ = N
        self.table_ = PotentialTable(N, self.gamma)
        ss = as_seed_sequence(self.random_state)
        self._rng = np.random.default_rng(child_seed(ss, 0))
        if hasattr(self.estimator, "predict_all"):
            params = self.estimator.get_params(deep=False)
            params.update(n_learners=N, random_state=child_seed(ss, 1, 0))
            self.bank_ = type(self.estimator)(**params)
        else:
            self.bank_ = LearnerBank(self._copy(child_seed(ss, 1, i)) for i in range(N))
        self.last_votes_ = None
        self.passed_counts_ = np.zeros(N, dtype=np.int64)
        self.rounds_ = 0
        self._initialized = True

    def _copy(self, seed):
        params = self.estimator.get_params(deep=False)
        params["random_state"] = seed
        return type(self.estimator)(**params)

    def _predict_one(self, x):
        if self.rounds_ >= self.horizon:
            raise HorizonExhaustedError(f"booster horizon {self.horizon} exhausted")
        votes = self.bank_.predict_all(x)
        self.last_votes_ = votes
        return int(2 * int(votes.sum()) >= votes.size)

    def _update_one(self, x, y):
        if self.rounds_ >= self.horizon:
            raise HorizonExhaustedError(f"booster horizon {self.horizon} exhausted")
        if self.last_votes_ is None:
            raise ProtocolError("booster update before predict")
        signed = np.where(self.last_votes_ == y, 1, -1)
        margins = np.concatenate(([0], np.cumsum(signed)[:-1]))
        p = self.table_.pass_probabilities(margins)
        mask = self._rng.random(self.n_learners_) < p
        self.bank_.update_mask(x, y, mask)
        self.passed_counts_ += mask
        self.last_votes_ = None
        self.rounds_ += 1

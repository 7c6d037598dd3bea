"""Adversaries for the online game.

Every adversary exposes ``reset()``, ``next_instance() -> x``,
``label(x) -> y`` and ``observe(x, y, yhat)``. Adaptive adversaries only
ever see past predictions, never learner internals, and are deterministic
functions of what they have observed.
"""

import numpy as np

from ..core import FiniteDistribution
from ..exceptions import NonRealizableError, PreconditionError
from ..utils import check_positive_int, check_random_state

ADVERSARY_KINDS = ("iid", "fixed", "tracker", "bisect", "consistency")


class Adversary:
    oblivious = False
    lazy_target = False

    def __init__(self, hypothesis_class, target):
        self.hypothesis_class = hypothesis_class
        self.target = target

    def reset(self):
        return self

    def label(self, x):
        return self.hypothesis_class.evaluate(self.target, x)

    def observe(self, x, y, yhat):
        pass


class ObliviousSequence(Adversary):
    """Plays a sequence fixed before the game, labeled by the target."""

    oblivious = True

    def __init__(self, hypothesis_class, target, instances):
        super().__init__(hypothesis_class, target)
        self.instances = hypothesis_class.check_instances(np.asarray(instances))
        self.labels = hypothesis_class.evaluate(target, self.instances)

    def reset(self):
        self._t = 0
        return self

    def next_instance(self):
        if self._t >= len(self.instances):
            raise PreconditionError("oblivious sequence exhausted")
        x = int(self.instances[self._t])
        self._t += 1
        return x


def make_oblivious_iid(hypothesis_class, target, T, random_state, distribution=None):
    """T i.i.d. instances from a marginal, labeled by ``target``.

    ``distribution`` is either an instance marginal of length ``d`` or a
    :class:`FiniteDistribution` whose labels must agree with the target.
    Uniform over the domain when omitted.
    """
    T = check_positive_int(T, "T")
    rng = check_random_state(random_state)
    d = hypothesis_class.domain_size
    if distribution is None:
        xs, p = np.arange(d), np.full(d, 1.0 / d)
    elif isinstance(distribution, FiniteDistribution):
        if not np.array_equal(hypothesis_class.evaluate(target, distribution.x),
                              distribution.y):
            raise NonRealizableError("distribution labels disagree with the target")
        xs, p = distribution.x, distribution.mass
    else:
        p = np.asarray(distribution, dtype=np.float64)
        if p.shape != (d,):
            raise PreconditionError("instance marginal must have one mass per instance")
        xs = np.arange(d)
    instances = xs[rng.choice(len(xs), size=T, p=p)]
    return ObliviousSequence(hypothesis_class, target, instances)


def make_oblivious_fixed(hypothesis_class, target, T):
    """Round-robin sweep ``0, 1, ..., d-1, 0, ...`` of length T."""
    return ObliviousSequence(hypothesis_class, target,
                             np.arange(T) % hypothesis_class.domain_size)


class TrackerAdversary(Adversary):
    """Replays the instance on which the learner has erred most often.

    Unseen instances come first, in increasing order; afterwards the
    instance with the highest observed error rate is played, ties to the
    lowest index.
    """

    def reset(self):
        d = self.hypothesis_class.domain_size
        self.plays_ = np.zeros(d, dtype=np.int64)
        self.errors_ = np.zeros(d, dtype=np.int64)
        return self

    def next_instance(self):
        unseen = np.flatnonzero(self.plays_ == 0)
        if unseen.size:
            return int(unseen[0])
        return int(np.argmax(self.errors_ / self.plays_))

    def observe(self, x, y, yhat):
        self.plays_[x] += 1
        self.errors_[x] += int(yhat != y)


def _require_thresholds(hypothesis_class):
    if hypothesis_class.kind != "thresholds":
        raise PreconditionError(
            f"bisection adversaries need a thresholds class, got {hypothesis_class.kind!r}")


class BisectionAdversary(Adversary):
    """Bisects the interval of thresholds consistent with the revealed labels.

    ``lo_..hi_`` is the set of thresholds ``k`` (``h_k(x) = 1`` iff
    ``x >= k``) still consistent; each round queries instance
    ``(lo + hi) // 2``, which splits it into two nonempty halves.
    """

    def __init__(self, hypothesis_class, target):
        _require_thresholds(hypothesis_class)
        super().__init__(hypothesis_class, target)

    def reset(self):
        self.lo_, self.hi_ = 0, self.hypothesis_class.domain_size
        return self

    def next_instance(self):
        if self.lo_ < self.hi_:
            return (self.lo_ + self.hi_) // 2
        return min(self.lo_, self.hypothesis_class.domain_size - 1)

    def _shrink(self, x, y):
        if y == 1:
            self.hi_ = min(self.hi_, x)
        else:
            self.lo_ = max(self.lo_, x + 1)

    def observe(self, x, y, yhat):
        self._shrink(x, y)


class ConsistencyAdversary(BisectionAdversary):
    """Thresholds adversary that commits to the target lazily.

    Queries like :class:`BisectionAdversary`; whenever both labels keep the
    version space nonempty it answers the opposite of the learner's previous
    prediction (0 on round 1). ``target`` is only meaningful after the game:
    the smallest threshold still consistent.
    """

    lazy_target = True

    def __init__(self, hypothesis_class, target=None):
        _require_thresholds(hypothesis_class)
        Adversary.__init__(self, hypothesis_class, target)

    def reset(self):
        super().reset()
        self._last_prediction = 1
        self.target = self.lo_
        return self

    def label(self, x):
        can_be_one = self.lo_ <= x
        can_be_zero = self.hi_ > x
        if can_be_one and can_be_zero:
            return 1 - self._last_prediction
        return 1 if can_be_one else 0

    def observe(self, x, y, yhat):
        self._shrink(x, y)
        self._last_prediction = int(yhat)
        self.target = self.lo_


def make_adversary(kind, hypothesis_class, target, T, random_state=None):
    if kind == "iid":
        return make_oblivious_iid(hypothesis_class, target, T, random_state)
    if kind == "fixed":
        return make_oblivious_fixed(hypothesis_class, target, T)
    if kind == "tracker":
        return TrackerAdversary(hypothesis_class, target)
    if kind == "bisect":
        return BisectionAdversary(hypothesis_class, target)
    if kind == "consistency":
        return ConsistencyAdversary(hypothesis_class)
    raise PreconditionError(f"unknown adversary {kind!r}; expected one of {ADVERSARY_KINDS}")

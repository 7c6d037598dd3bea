"""Shared value types, the 0/1 loss and exact risk oracles.

Labels are ``{0, 1}`` everywhere outside the boosting module. Instances
are indices into a finite grid, which keeps every population quantity an
exact finite sum.
"""

import csv
import io
import json
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .exceptions import EmptySampleError, PreconditionError
from .utils import check_label, check_labels


class Example(NamedTuple):
    x: int
    y: int


def _frozen(a, dtype=np.int64):
    a = np.array(a, dtype=dtype, ndmin=1)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class LabeledSample:
    """An ordered sample ``((x_1, y_1), ..., (x_m, y_m))`` stored column-wise."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = _frozen(self.x)
        y = _frozen(check_labels(self.y))
        if x.shape != y.shape or x.ndim != 1:
            raise PreconditionError("x and y must be 1-d and of equal length")
        if x.size and x.min() < 0:
            raise PreconditionError("instances must be nonnegative indices")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_examples(cls, examples):
        examples = list(examples)
        return cls([e[0] for e in examples], [e[1] for e in examples])

    @property
    def m(self):
        return len(self.x)

    def __len__(self):
        return self.m

    @property
    def examples(self):
        return [Example(int(a), int(b)) for a, b in zip(self.x, self.y)]

    def __eq__(self, other):
        if not isinstance(other, LabeledSample):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)

    def __repr__(self):
        return f"LabeledSample(m={self.m})"


@dataclass(frozen=True, eq=False)
class FiniteDistribution:
    """A distribution over labeled examples with finite support."""

    x: np.ndarray
    y: np.ndarray
    mass: np.ndarray

    def __post_init__(self):
        x, y = _frozen(self.x), _frozen(check_labels(self.y))
        mass = _frozen(self.mass, dtype=np.float64)
        if not (x.shape == y.shape == mass.shape) or x.ndim != 1 or x.size == 0:
            raise PreconditionError("support arrays must be nonempty, 1-d, equal length")
        if (mass < 0).any():
            raise PreconditionError("masses must be nonnegative")
        if abs(mass.sum() - 1.0) > 1e-12:
            raise PreconditionError(f"masses must sum to 1, got {mass.sum()!r}")
        if len({(int(a), int(b)) for a, b in zip(x, y)}) != x.size:
            raise PreconditionError("support entries must be distinct")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "mass", mass)

    @classmethod
    def from_dict(cls, masses):
        """Build from ``{(x, y): mass}``."""
        keys = list(masses)
        return cls([k[0] for k in keys], [k[1] for k in keys], [masses[k] for k in keys])

    @classmethod
    def labeled_by(cls, hypothesis, marginal):
        """Instance marginal ``marginal`` (length ``d``) labeled by ``hypothesis``.

        Zero-mass instances are dropped from the support.
        """
        marginal = np.asarray(marginal, dtype=np.float64)
        xs = np.flatnonzero(marginal > 0)
        mass = marginal[xs]
        return cls(xs, np.asarray(hypothesis(xs)), mass / mass.sum())

    @classmethod
    def uniform_on(cls, sample):
        """Uniform distribution on the multiset of ``sample``'s examples."""
        pairs, counts = np.unique(np.stack([sample.x, sample.y], axis=1), axis=0,
                                  return_counts=True)
        return cls(pairs[:, 0], pairs[:, 1], counts / counts.sum())

    @property
    def support(self):
        return [(Example(int(a), int(b)), float(p))
                for a, b, p in zip(self.x, self.y, self.mass)]

    def sample(self, m, random_state):
        """Draw ``m`` i.i.d. examples."""
        idx = random_state.choice(self.x.size, size=m, p=self.mass)
        return LabeledSample(self.x[idx], self.y[idx])


def zero_one_loss(a, b):
    """``1`` if the labels differ, else ``0``."""
    return int(check_label(a) != check_label(b))


def empirical_risk(h, sample):
    """Mean 0/1 loss of hypothesis ``h`` over ``sample``."""
    if sample.m == 0:
        raise EmptySampleError("empirical risk of an empty sample is undefined")
    return float(np.mean(np.asarray(h(sample.x)) != sample.y))


def population_risk_exact(h, distribution):
    """Exact expected 0/1 loss of ``h`` under a finite distribution."""
    wrong = np.asarray(h(distribution.x)) != distribution.y
    return float(np.dot(distribution.mass, wrong))


def is_realizable(hypothesis_class, distribution):
    """True if some hypothesis in the class has zero population risk."""
    return hypothesis_class.consistent(distribution.x, distribution.y).size > 0


TRANSCRIPT_HEADER = ("round", "x", "y", "yhat", "loss")


@dataclass(frozen=True, eq=False)
class Transcript:
    """Per-round record of one learner-vs-adversary game."""

    x: np.ndarray
    y: np.ndarray
    yhat: np.ndarray
    seed: object = None
    horizon: int = field(default=None)

    def __post_init__(self):
        x, y, yhat = _frozen(self.x), _frozen(self.y), _frozen(self.yhat)
        if not (x.shape == y.shape == yhat.shape):
            raise PreconditionError("transcript columns must have equal length")
        check_labels(y, "y")
        check_labels(yhat, "yhat")
        horizon = len(x) if self.horizon is None else int(self.horizon)
        if len(x) > horizon:
            raise PreconditionError("transcript longer than its horizon")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "yhat", yhat)
        object.__setattr__(self, "horizon", horizon)

    @property
    def loss(self):
        return (self.y != self.yhat).astype(np.int64)

    @property
    def rounds(self):
        return [(int(a), int(b), int(c), int(d))
                for a, b, c, d in zip(self.x, self.y, self.yhat, self.loss)]

    @property
    def T(self):
        return len(self.x)

    @property
    def mistakes(self):
        return int(self.loss.sum())

    def __eq__(self, other):
        if not isinstance(other, Transcript):
            return NotImplemented
        return (np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)
                and np.array_equal(self.yhat, other.yhat))

    def to_csv(self, path=None):
        """CSV with header ``round,x,y,yhat,loss``; 1-based rounds.

        Returns the text when ``path`` is None.
        """
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRANSCRIPT_HEADER)
        for t, row in enumerate(self.rounds, start=1):
            writer.writerow((t,) + row)
        text = buf.getvalue()
        if path is None:
            return text
        with open(path, "w", newline="") as fh:
            fh.write(text)
        return None

    @classmethod
    def from_csv(cls, source, seed=None, horizon=None):
        """Parse CSV text or a path; the loss column is checked, not trusted."""
        if "\n" not in str(source):
            with open(source, newline="") as fh:
                source = fh.read()
        reader = csv.reader(io.StringIO(source))
        header = tuple(next(reader))
        if header != TRANSCRIPT_HEADER:
            raise PreconditionError(f"unexpected transcript header {header}")
        rows = np.array([[int(v) for v in row] for row in reader], dtype=np.int64)
        if rows.size == 0:
            rows = rows.reshape(0, 5)
        if not np.array_equal(rows[:, 0], np.arange(1, len(rows) + 1)):
            raise PreconditionError("round column must be 1..T")
        out = cls(rows[:, 1], rows[:, 2], rows[:, 3], seed=seed, horizon=horizon)
        if not np.array_equal(out.loss, rows[:, 4]):
            raise PreconditionError("loss column disagrees with y/yhat")
        return out

    def summary(self):
        return {"T": self.T, "mistakes": self.mistakes, "seed": self.seed}

    def summary_json(self):
        return json.dumps(self.summary(), sort_keys=True)

"""Finite hypothesis classes over the instance grid ``{0, ..., d-1}``.

A class is stored as a dense label table of shape ``(n_hypotheses, d)``;
every other module evaluates hypotheses by indexing into it.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import PreconditionError
from .utils import check_positive_int

KINDS = ("thresholds", "points", "intervals")


@dataclass(frozen=True)
class Hypothesis:
    """Callable handle for hypothesis ``index`` of ``hypothesis_class``."""

    hypothesis_class: "FiniteHypothesisClass"
    index: int

    def __call__(self, x):
        return self.hypothesis_class.evaluate(self.index, x)


class FiniteHypothesisClass:
    """An enumerable family of deterministic instance-to-label maps.

    Parameters
    ----------
    table : array-like of shape (n_hypotheses, domain_size)
        ``table[j, x]`` is the 0/1 label hypothesis ``j`` gives instance ``x``.
    kind : str
        Descriptor used for caching and serialization.
    """

    def __init__(self, table, kind="custom"):
        table = np.array(table, dtype=np.int8, ndmin=2)
        if table.size == 0:
            raise PreconditionError("hypothesis table must be nonempty")
        if not np.isin(table, (0, 1)).all():
            raise PreconditionError("hypothesis table must hold 0/1 labels")
        table.setflags(write=False)
        self._table = table
        self.kind = kind
        self._hash = hash((kind, table.shape, table.tobytes()))

    @classmethod
    def thresholds(cls, domain_size):
        """``h_k(x) = 1`` iff ``x >= k`` for ``k = 0..d`` (``d + 1`` hypotheses)."""
        d = check_positive_int(domain_size, "domain_size")
        k = np.arange(d + 1)[:, None]
        return cls(np.arange(d)[None, :] >= k, kind="thresholds")

    @classmethod
    def points(cls, domain_size):
        """``h_k(x) = 1`` iff ``x == k`` (``d`` hypotheses)."""
        d = check_positive_int(domain_size, "domain_size")
        return cls(np.eye(d, dtype=np.int8), kind="points")

    @classmethod
    def intervals(cls, domain_size):
        """Indicators of ``[a, b]`` for ``0 <= a <= b < d``, plus the empty interval.

        The empty (all-zero) hypothesis is index 0; the rest follow in
        lexicographic ``(a, b)`` order, ``d(d+1)/2 + 1`` hypotheses in total.
        """
        d = check_positive_int(domain_size, "domain_size")
        xs = np.arange(d)
        rows = [np.zeros(d, dtype=np.int8)]
        for a in range(d):
            for b in range(a, d):
                rows.append(((xs >= a) & (xs <= b)).astype(np.int8))
        return cls(np.stack(rows), kind="intervals")

    @classmethod
    def from_kind(cls, kind, domain_size):
        if kind not in KINDS:
            raise PreconditionError(f"unknown class kind {kind!r}; expected one of {KINDS}")
        return getattr(cls, kind)(domain_size)

    @property
    def table(self):
        return self._table

    @property
    def n_hypotheses(self):
        return self._table.shape[0]

    @property
    def domain_size(self):
        return self._table.shape[1]

    def __len__(self):
        return self.n_hypotheses

    def __repr__(self):
        return (f"FiniteHypothesisClass(kind={self.kind!r}, "
                f"domain_size={self.domain_size}, n_hypotheses={self.n_hypotheses})")

    def __eq__(self, other):
        if not isinstance(other, FiniteHypothesisClass):
            return NotImplemented
        return self.kind == other.kind and np.array_equal(self._table, other._table)

    def __hash__(self):
        return self._hash

    def descriptor(self):
        return {"kind": self.kind, "domain_size": self.domain_size,
                "n_hypotheses": self.n_hypotheses}

    def check_instances(self, x):
        x = np.asarray(x)
        if x.size and (x.min() < 0 or x.max() >= self.domain_size):
            raise PreconditionError(
                f"instances must lie in [0, {self.domain_size}), got range "
                f"[{x.min()}, {x.max()}]")
        return x.astype(np.int64, copy=False)

    def evaluate(self, index, x):
        """Labels hypothesis ``index`` assigns to ``x`` (scalar or array)."""
        if not 0 <= index < self.n_hypotheses:
            raise PreconditionError(f"hypothesis index {index} out of range")
        if np.isscalar(x):
            return int(self._table[index, x])
        return self._table[index, self.check_instances(x)].astype(np.int64)

    def hypothesis(self, index):
        if not 0 <= index < self.n_hypotheses:
            raise PreconditionError(f"hypothesis index {index} out of range")
        return Hypothesis(self, int(index))

    def mistake_counts(self, x, y):
        """Number of mistakes of every hypothesis on the labeled points ``(x, y)``."""
        x = self.check_instances(x)
        return (self._table[:, x] != np.asarray(y)[None, :]).sum(axis=1)

    def consistent(self, x, y):
        """Indices of hypotheses with zero mistakes on ``(x, y)``."""
        return np.flatnonzero(self.mistake_counts(x, y) == 0)

"""Common machinery for the online estimators.

Online learners follow a predict-then-update protocol: ``predict(x)``
returns a (possibly randomized) label for one instance, ``partial_fit(x, y)``
reveals its label. ``fit(X, y)`` plays a whole fixed sequence through that
protocol, which is how an oblivious adversary looks to the learner.
"""

import numbers

import numpy as np
from sklearn.base import BaseEstimator

from .utils import check_labels


class OnlineLearnerMixin:
    """Adds sequence-level ``fit`` and array-friendly wrappers.

    Subclasses implement ``_predict_one(x)``, ``_update_one(x, y)`` and
    ``_reset()``.
    """

    def predict(self, X):
        if isinstance(X, numbers.Integral):
            self._ensure_state()
            return self._predict_one(int(X))
        X = np.asarray(X, dtype=np.int64)
        self._ensure_state()
        return np.array([self._predict_one(int(x)) for x in X.ravel()], dtype=np.int64)

    def partial_fit(self, X, y):
        self._ensure_state()
        if isinstance(X, numbers.Integral):
            self._update_one(int(X), int(y))
            return self
        for x, label in zip(np.asarray(X).ravel(), check_labels(y).ravel()):
            self._update_one(int(x), int(label))
        return self

    def fit(self, X, y):
        """Reset, then play the sequence ``(X, y)`` round by round.

        Sets ``predictions_`` and ``mistakes_``.
        """
        X = np.asarray(X, dtype=np.int64).ravel()
        y = check_labels(y).ravel()
        self._reset()
        preds = np.empty(len(X), dtype=np.int64)
        for t, (x, label) in enumerate(zip(X, y)):
            preds[t] = self._predict_one(int(x))
            self._update_one(int(x), int(label))
        self.predictions_ = preds
        self.mistakes_ = int((preds != y).sum())
        return self

    def reset(self):
        self._reset()
        return self

    def _ensure_state(self):
        if not getattr(self, "_initialized", False):
            self._reset()


class OnlineEstimator(OnlineLearnerMixin, BaseEstimator):
    pass

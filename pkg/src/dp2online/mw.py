"""Multiplicative Weights over a finite set of experts.

State is kept as cumulative losses; weights are ``w_j = w0_j * exp(-eta L_j)``.
For 0/1 losses the cumulative losses are exact integers, so a learner that
is fast-forwarded over a history lands on bit-identical weights to one that
was updated round by round.
"""

import math

import numpy as np

from .exceptions import PreconditionError
from .utils import check_positive_int


def step_size(n_experts, horizon):
    """``eta = sqrt(ln N / T)``."""
    return math.sqrt(math.log(n_experts) / horizon)


class MultiplicativeWeights:
    """Exponential-weights forecaster with a known horizon.

    Parameters
    ----------
    n_experts : int
    horizon : int
        Sets ``eta = sqrt(ln(n_experts) / horizon)`` unless ``eta`` is given.
    eta : float, optional
        Override of the step size.
    initial_weights : array-like, optional
        Positive starting weights, all ones by default.
    """

    def __init__(self, n_experts, horizon, eta=None, initial_weights=None):
        self.n_experts = check_positive_int(n_experts, "n_experts")
        self.horizon = check_positive_int(horizon, "horizon")
        self.eta = step_size(self.n_experts, self.horizon) if eta is None else float(eta)
        if initial_weights is None:
            self._log_w0 = np.zeros(self.n_experts)
        else:
            w0 = np.asarray(initial_weights, dtype=np.float64)
            if w0.shape != (self.n_experts,) or not (w0 > 0).all():
                raise PreconditionError("initial weights must be positive, one per expert")
            self._log_w0 = np.log(w0)
        self.cumulative_loss = np.zeros(self.n_experts)
        self.t = 0
        self._cdf = None

    @property
    def log_weights(self):
        return self._log_w0 - self.eta * self.cumulative_loss

    @property
    def weights(self):
        return np.exp(self.log_weights)

    def distribution(self):
        lw = self.log_weights
        w = np.exp(lw - lw.max())
        return w / w.sum()

    def sample(self, random_state):
        """Draw an expert index with probability proportional to its weight."""
        if self._cdf is None:
            self._cdf = np.cumsum(self.distribution())
        cdf = self._cdf
        j = int(np.searchsorted(cdf, random_state.random() * cdf[-1], side="right"))
        return min(j, self.n_experts - 1)

    def update(self, losses):
        losses = np.asarray(losses, dtype=np.float64)
        if losses.shape != (self.n_experts,):
            raise PreconditionError(
                f"expected {self.n_experts} losses, got shape {losses.shape}")
        self.cumulative_loss = self.cumulative_loss + losses
        self.t += 1
        self._cdf = None
        return self

    def advance(self, cumulative_losses, rounds):
        """Apply ``rounds`` updates whose losses sum to ``cumulative_losses``."""
        cumulative_losses = np.asarray(cumulative_losses, dtype=np.float64)
        if cumulative_losses.shape != (self.n_experts,):
            raise PreconditionError("cumulative losses must have one entry per expert")
        self.cumulative_loss = self.cumulative_loss + cumulative_losses
        self.t += int(rounds)
        self._cdf = None
        return self


def regret_bound(n_experts, horizon):
    """``sqrt(2 T ln N)``."""
    n_experts = check_positive_int(n_experts, "n_experts")
    horizon = check_positive_int(horizon, "horizon")
    return math.sqrt(2.0 * horizon * math.log(n_experts))


def expected_loss_exact(loss_matrix, eta=None):
    """Expected loss of MW on a fixed ``T x N`` loss matrix.

    Sums ``<p_t, loss_t>`` along the deterministic weight recursion; the
    step size defaults to the known-horizon choice for the matrix's shape.
    """
    try:
        losses = np.array(loss_matrix, dtype=np.float64)
    except ValueError as exc:
        raise PreconditionError("loss matrix is ragged") from exc
    if losses.ndim != 2 or losses.size == 0:
        raise PreconditionError("loss matrix must be a nonempty 2-d array")
    T, N = losses.shape
    mw = MultiplicativeWeights(N, T, eta=eta)
    total = 0.0
    for row in losses:
        total += float(mw.distribution() @ row)
        mw.update(row)
    return total

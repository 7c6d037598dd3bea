"""The repeated prediction game between an online learner and an adversary."""

import numpy as np

from ..core import Transcript
from ..exceptions import NonRealizableError
from ..utils import check_positive_int


def run_game(learner, adversary, T, seed=None):
    """Play ``T`` rounds and return the transcript.

    Each round: the adversary picks ``x_t``, the learner predicts, the label
    is revealed, the learner updates, the adversary sees ``yhat_t``. When
    ``seed`` is given it replaces the learner's ``random_state`` first.
    Labels must stay realizable by the adversary's class.
    """
    T = check_positive_int(T, "T")
    if seed is not None:
        learner.set_params(random_state=seed)
    learner.reset()
    adversary.reset()
    xs = np.empty(T, dtype=np.int64)
    ys = np.empty(T, dtype=np.int64)
    yhats = np.empty(T, dtype=np.int64)
    fixed_target = not adversary.lazy_target
    for t in range(T):
        x = adversary.next_instance()
        yhat = int(learner.predict(x))
        y = int(adversary.label(x))
        if fixed_target and y != adversary.hypothesis_class.evaluate(adversary.target, x):
            raise NonRealizableError(f"round {t + 1}: label {y} is not the target's")
        learner.partial_fit(x, y)
        adversary.observe(x, y, yhat)
        xs[t], ys[t], yhats[t] = x, y, yhat
    transcript = Transcript(xs, ys, yhats, seed=seed, horizon=T)
    check_realizable(adversary.hypothesis_class, transcript)
    return transcript


def check_realizable(hypothesis_class, transcript):
    """Raise unless some hypothesis labels the whole transcript correctly."""
    if hypothesis_class.consistent(transcript.x, transcript.y).size == 0:
        raise NonRealizableError("no hypothesis in the class is consistent with the game")
    return True

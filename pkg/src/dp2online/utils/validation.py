"""Input validation and seeding helpers shared by the estimators.

Every randomized routine in the package takes an explicit ``random_state``.
These helpers normalise whatever the caller passed (``None``, an int, a
``SeedSequence`` or a ``Generator``) so that derived streams are splittable
and reproducible.
"""

import numbers

import numpy as np

from ..exceptions import PreconditionError


def as_seed_sequence(random_state):
    """Return a ``numpy.random.SeedSequence`` for ``random_state``.

    A ``Generator`` is consumed (one 63-bit draw) to seed the new sequence,
    which keeps callers that thread a single generator reproducible.
    """
    if isinstance(random_state, np.random.SeedSequence):
        return random_state
    if random_state is None:
        return np.random.SeedSequence()
    if isinstance(random_state, np.random.Generator):
        return np.random.SeedSequence(int(random_state.integers(2**63)))
    if isinstance(random_state, numbers.Integral):
        if random_state < 0:
            raise PreconditionError(f"seed must be nonnegative, got {random_state}")
        return np.random.SeedSequence(int(random_state))
    raise PreconditionError(f"cannot seed from {random_state!r}")


def child_seed(seed_seq, *keys):
    """Derive the child of ``seed_seq`` addressed by ``keys``.

    Equivalent to indexing into ``seed_seq.spawn(...)`` but stateless, so
    child ``k`` can be produced without materialising children ``0..k-1``.
    """
    return np.random.SeedSequence(
        entropy=seed_seq.entropy,
        spawn_key=tuple(seed_seq.spawn_key) + tuple(int(k) for k in keys),
        pool_size=seed_seq.pool_size,
    )


def check_random_state(random_state):
    """Turn ``random_state`` into a ``numpy.random.Generator``.

    Generators are passed through untouched (shared state, like sklearn's
    helper does for ``RandomState``).
    """
    if isinstance(random_state, np.random.Generator):
        return random_state
    return np.random.default_rng(as_seed_sequence(random_state))


def check_label(y, name="label"):
    if y not in (0, 1):
        raise PreconditionError(f"{name} must be 0 or 1, got {y!r}")
    return int(y)


def check_labels(y, name="labels"):
    y = np.asarray(y)
    if y.size and not np.isin(y, (0, 1)).all():
        raise PreconditionError(f"{name} must contain only 0/1 values")
    return y.astype(np.int64, copy=False)


def check_positive_int(value, name, minimum=1):
    if not isinstance(value, numbers.Integral) or isinstance(value, bool):
        raise PreconditionError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise PreconditionError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def check_unit_interval(value, name):
    """Require ``0 < value < 1``."""
    value = float(value)
    if not 0.0 < value < 1.0:
        raise PreconditionError(f"{name} must lie strictly inside (0, 1), got {value}")
    return value

from .validation import (
    as_seed_sequence,
    check_label,
    check_labels,
    check_positive_int,
    check_random_state,
    check_unit_interval,
    child_seed,
)

__all__ = [
    "as_seed_sequence",
    "check_label",
    "check_labels",
    "check_positive_int",
    "check_random_state",
    "check_unit_interval",
    "child_seed",
]

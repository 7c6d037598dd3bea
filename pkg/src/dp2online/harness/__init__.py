from .adversaries import (BisectionAdversary, ConsistencyAdversary, ObliviousSequence,
                          TrackerAdversary, make_adversary, make_oblivious_fixed,
                          make_oblivious_iid)
from .experiment import (ExperimentConfig, MetricsSummary, run_experiment, run_sweep,
                         run_trial)
from .game import check_realizable, run_game

__all__ = [
    "BisectionAdversary", "ConsistencyAdversary", "ExperimentConfig", "MetricsSummary",
    "ObliviousSequence", "TrackerAdversary", "check_realizable", "make_adversary",
    "make_oblivious_fixed", "make_oblivious_iid", "run_experiment", "run_game",
    "run_sweep", "run_trial",
]

"""Online learning from a pure differentially private learner oracle.

Pipeline: exponential-mechanism private learner -> expert pool on a dummy
sample -> Multiplicative Weights (weak learner, oblivious adversaries) ->
independent-replica wrapper (adaptive adversaries) -> online
Boosting-by-Majority.
"""

from .adaptive import AdaptiveWrapper, replica_loss_profile
from .boosting import (OnlineBBM, PotentialTable, SyntheticEdgeLearners,
                       bbm_mistake_bound, boost_schedule)
from .core import (Example, FiniteDistribution, LabeledSample, Transcript,
                   empirical_risk, population_risk_exact, zero_one_loss)
from .dp_learners import (ExponentialMechanismLearner, audit_privacy,
                          calibrate_sample_complexity, exhaustive_audit,
                          exponential_mechanism_distribution, pac_validate,
                          sample_complexity_formula, train)
from .expert_pool import ExpertPool, coverage_estimate, pool_size, sample_pool
from .hypotheses import FiniteHypothesisClass
from .mw import MultiplicativeWeights, expected_loss_exact, regret_bound
from .pipeline import PrivateOnlineLearner, build_pipeline, theorem1_bound
from .weak_online import WeakGuarantee, WeakOnlineLearner, weak_guarantee

__version__ = "0.1.0"

__all__ = [
    "AdaptiveWrapper", "Example", "ExpertPool", "ExponentialMechanismLearner",
    "FiniteDistribution", "FiniteHypothesisClass", "LabeledSample",
    "MultiplicativeWeights", "OnlineBBM", "PotentialTable", "PrivateOnlineLearner",
    "SyntheticEdgeLearners", "Transcript", "WeakGuarantee", "WeakOnlineLearner",
    "audit_privacy", "bbm_mistake_bound", "boost_schedule", "build_pipeline",
    "calibrate_sample_complexity", "coverage_estimate", "empirical_risk",
    "exhaustive_audit", "expected_loss_exact", "exponential_mechanism_distribution",
    "pac_validate", "pool_size", "population_risk_exact", "regret_bound",
    "replica_loss_profile", "sample_complexity_formula", "sample_pool",
    "theorem1_bound", "train", "weak_guarantee", "zero_one_loss",
]

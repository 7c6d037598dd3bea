"""Multi-trial experiments: configuration, execution, metrics and artifacts."""

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields

import numpy as np
from joblib import Parallel, delayed

from ..adaptive import AdaptiveWrapper
from ..boosting import bbm_mistake_bound, boost_schedule
from ..dp_learners import calibrate_sample_complexity
from ..exceptions import PreconditionError
from ..expert_pool import pool_size
from ..hypotheses import FiniteHypothesisClass
from ..mw import regret_bound
from ..pipeline import PrivateOnlineLearner, theorem1_bound
from ..utils import check_positive_int, child_seed
from ..weak_online import EDGE, WeakOnlineLearner, weak_guarantee
from .adversaries import make_adversary
from .game import run_game

LEARNERS = ("pipeline", "weak", "wrapped")
# child-stream keys reserved for the harness; learners use small keys
_ADVERSARY_KEY, _TARGET_KEY = 1000, 1001


@dataclass
class ExperimentConfig:
    class_kind: str = "thresholds"
    domain_size: int = 4
    T: int = 200
    trials: int = 1
    seed: int = 0
    seeds: list = None
    adversary: str = "tracker"
    learner: str = "pipeline"
    mode: str = "faithful"
    wrapper_mode: str = "replay"
    m0: int = None
    epsilon: float = 0.1
    alpha: float = 0.25
    beta: float = 0.5
    calibration_trials: int = 2000
    calibration_cache: str = None
    n_learners: int = None
    n_experts: int = None
    target: int = None
    out: str = None
    n_jobs: int = 1
    bbm_c: float = 1.0
    theorem_c1: float = 1.0
    theorem_c2: float = 0.0

    def __post_init__(self):
        check_positive_int(self.T, "T")
        check_positive_int(self.trials, "trials")
        if self.seeds is None:
            self.seeds = [int(self.seed) + i for i in range(self.trials)]
        self.seeds = [int(s) for s in self.seeds]
        if len(self.seeds) != self.trials:
            raise PreconditionError(
                f"need one seed per trial ({self.trials}), got {len(self.seeds)}")
        if self.learner not in LEARNERS:
            raise PreconditionError(f"learner must be one of {LEARNERS}, got {self.learner!r}")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    def hypothesis_class(self):
        return FiniteHypothesisClass.from_kind(self.class_kind, self.domain_size)


def resolve_m0(config, hypothesis_class=None):
    if config.m0 is not None:
        return check_positive_int(config.m0, "m0")
    hypothesis_class = hypothesis_class or config.hypothesis_class()
    return calibrate_sample_complexity(
        hypothesis_class, config.alpha, config.beta, config.epsilon,
        trials=config.calibration_trials, random_state=0,
        cache_path=config.calibration_cache)


def make_learner(config, hypothesis_class, m0, random_state=None):
    if config.learner == "pipeline":
        return PrivateOnlineLearner(
            hypothesis_class, m0, config.T, mode=config.mode,
            wrapper_mode=config.wrapper_mode, n_learners=config.n_learners,
            n_experts=config.n_experts, epsilon=config.epsilon, random_state=random_state)
    weak = WeakOnlineLearner(hypothesis_class, m0, config.T, epsilon=config.epsilon,
                             n_experts=config.n_experts, random_state=random_state)
    if config.learner == "weak":
        return weak
    return AdaptiveWrapper(weak, config.T, mode=config.wrapper_mode,
                           random_state=random_state)


def run_trial(config, trial, hypothesis_class=None, m0=None):
    """Play trial ``trial`` (0-based) of ``config``; returns its transcript."""
    hypothesis_class = hypothesis_class or config.hypothesis_class()
    m0 = resolve_m0(config, hypothesis_class) if m0 is None else m0
    seed = config.seeds[trial]
    ss = np.random.SeedSequence(seed)
    target = config.target
    if target is None:
        target = int(np.random.default_rng(child_seed(ss, _TARGET_KEY))
                     .integers(len(hypothesis_class)))
    adversary = make_adversary(config.adversary, hypothesis_class, target, config.T,
                               np.random.default_rng(child_seed(ss, _ADVERSARY_KEY)))
    learner = make_learner(config, hypothesis_class, m0)
    return run_game(learner, adversary, config.T, seed=seed)


def _stderr(values):
    values = np.asarray(values, dtype=np.float64)
    if values.size < 2:
        return 0.0
    return float(values.std(ddof=1) / math.sqrt(values.size))


@dataclass
class MetricsSummary:
    config_echo: dict
    T: int
    trials: int
    mistakes: list
    mean_mistakes: float
    stderr: float
    bounds: dict
    pass_flags: dict
    m0: int
    pool_size: int
    n_learners: int
    extra: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.pass_flags.values())

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls(**json.loads(text))


def reference_bounds(config, m0):
    """Bound curves for ``config``'s parameters, keyed mw/weak/bbm/theorem1."""
    N = config.n_experts or pool_size(m0, config.epsilon)
    n_boost = config.n_learners or boost_schedule(config.T, EDGE)
    guarantee = weak_guarantee(N)
    return {
        "mw": regret_bound(N, config.T),
        "weak": guarantee.bound(config.T),
        "bbm": bbm_mistake_bound(n_boost, EDGE, config.T, guarantee.excess_loss,
                                 c=config.bbm_c),
        "theorem1": theorem1_bound(m0, config.T, config.theorem_c1, config.theorem_c2),
    }, N, n_boost


def summarize(config, transcripts, m0):
    mistakes = [t.mistakes for t in transcripts]
    mean = float(np.mean(mistakes))
    stderr = _stderr(mistakes)
    bounds, N, n_boost = reference_bounds(config, m0)
    flags = {"realizable": True}
    if config.learner in ("weak", "wrapped"):
        flags["weak_bound"] = bool(mean <= bounds["weak"] + 3.0 * stderr)
    return MetricsSummary(config.to_dict(), config.T, config.trials, mistakes, mean,
                          stderr, bounds, flags, m0, N, n_boost)


def run_experiment(config):
    """Run every trial, write transcripts and ``summary.json`` under ``config.out``."""
    hypothesis_class = config.hypothesis_class()
    m0 = resolve_m0(config, hypothesis_class)
    transcripts = Parallel(n_jobs=config.n_jobs)(
        delayed(run_trial)(config, i, hypothesis_class, m0) for i in range(config.trials))
    summary = summarize(config, transcripts, m0)
    if config.out:
        try:
            os.makedirs(config.out, exist_ok=True)
            for i, transcript in enumerate(transcripts):
                transcript.to_csv(os.path.join(config.out, f"transcript_{i}.csv"))
            with open(os.path.join(config.out, "summary.json"), "w") as fh:
                fh.write(summary.to_json())
        except OSError as exc:
            raise OSError(f"cannot write experiment artifacts to {config.out!r}: {exc}") from exc
    return summary


def log_fit(Ts, means):
    """Least-squares fit ``M(T) ~ a + b ln T``; returns slope, intercept, residual fraction."""
    x = np.log(np.asarray(Ts, dtype=np.float64))
    y = np.asarray(means, dtype=np.float64)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (intercept + slope * x)
    total = float(((y - y.mean()) ** 2).sum())
    frac = float((resid ** 2).sum() / total) if total > 0 else 0.0
    return {"slope": float(slope), "intercept": float(intercept), "residual_fraction": frac}


def growth_ratio(small, large):
    if small == 0:
        return 0.0 if large == 0 else math.inf
    return large / small


def run_sweep(config, T_list, ratio_limit=3.0):
    """Repeat ``run_experiment`` for each horizon; flags ``M(4T)/M(T) < ratio_limit``."""
    T_list = sorted(int(T) for T in T_list)
    summaries = {}
    for T in T_list:
        sub_out = os.path.join(config.out, f"T_{T}") if config.out else None
        sub = ExperimentConfig(**{**config.to_dict(), "T": T, "out": sub_out})
        summaries[T] = run_experiment(sub)
    flags, ratios = {}, {}
    for T in T_list:
        if 4 * T in summaries:
            r = growth_ratio(summaries[T].mean_mistakes, summaries[4 * T].mean_mistakes)
            ratios[str(T)] = r
            flags[f"sublinear_{T}_{4 * T}"] = bool(r < ratio_limit)
    for T, s in summaries.items():
        for name, value in s.pass_flags.items():
            flags[f"{name}_{T}"] = value
    result = {
        "T_list": T_list,
        "mean_mistakes": {str(T): s.mean_mistakes for T, s in summaries.items()},
        "stderr": {str(T): s.stderr for T, s in summaries.items()},
        "ratios": ratios,
        "log_fit": log_fit(T_list, [summaries[T].mean_mistakes for T in T_list])
        if len(T_list) >= 2 else None,
        "pass_flags": flags,
    }
    if config.out:
        os.makedirs(config.out, exist_ok=True)
        with open(os.path.join(config.out, "sweep.json"), "w") as fh:
            json.dump(result, fh, indent=2, sort_keys=True)
    return result, summaries

"""Command-line entry point: ``dp2online {run,sweep,calibrate,audit-privacy}``.

A ``--config`` file holds flat ``key=value`` lines named like the flags
(dashes or underscores); explicit flags win over it.
"""

import argparse
import json
import sys

import numpy as np

from ..dp_learners import (audit_privacy, calibrate_sample_complexity,
                           exhaustive_audit, sample_complexity_formula)
from ..exceptions import Dp2OnlineError
from ..hypotheses import KINDS, FiniteHypothesisClass
from .adversaries import ADVERSARY_KINDS
from .experiment import LEARNERS, ExperimentConfig, run_experiment, run_sweep


def read_config_file(path):
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _class_args(p):
    p.add_argument("--class", dest="class_kind", choices=KINDS, default="thresholds")
    p.add_argument("--domain-size", type=int, default=4)


def _game_args(p):
    _class_args(p)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--adversary", choices=ADVERSARY_KINDS, default="tracker")
    p.add_argument("--learner", choices=LEARNERS, default="pipeline")
    p.add_argument("--mode", choices=("faithful", "fast"), default="faithful",
                   help="faithful keeps the adaptive wrapper (O(T^2 N) work; "
                        "keep T below ~2000); fast drops it")
    p.add_argument("--wrapper-mode", choices=("replay", "live"), default="replay")
    p.add_argument("--m0", type=int, default=None,
                   help="dummy-sample length; calibrated when omitted")
    p.add_argument("--n-learners", type=int, default=None)
    p.add_argument("--n-experts", type=int, default=None)
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--eps", dest="epsilon", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-jobs", type=int, default=1)
    p.add_argument("--calibration-cache", default=None)
    p.add_argument("--out", default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="dp2online", description=__doc__.splitlines()[0])
    parser.add_argument("--config", default=None, help="key=value file of defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="play trials and write transcripts + summary.json")
    _game_args(run)
    run.add_argument("--T", type=int, default=200)

    sweep = sub.add_parser("sweep", help="repeat run over several horizons")
    _game_args(sweep)
    sweep.add_argument("--T-list", type=str, default="200,800")

    cal = sub.add_parser("calibrate", help="empirical sample complexity m0")
    _class_args(cal)
    cal.add_argument("--alpha", type=float, default=0.25)
    cal.add_argument("--beta", type=float, default=0.5)
    cal.add_argument("--eps", dest="epsilon", type=float, default=0.1)
    cal.add_argument("--trials", type=int, default=2000)
    cal.add_argument("--seed", type=int, default=0)
    cal.add_argument("--calibration-cache", default=None)

    audit = sub.add_parser("audit-privacy", help="exact privacy audit of the learner")
    _class_args(audit)
    audit.add_argument("--m", type=int, default=2)
    audit.add_argument("--eps", dest="epsilon", type=float, default=0.1)
    audit.add_argument("--group", action="store_true", help="check q-neighbors too")
    audit.add_argument("--exhaustive-limit", type=int, default=1_000_000,
                       help="enumerate every sample when (2d)^m is at most this; "
                            "otherwise audit that many random neighbor pairs")
    audit.add_argument("--seed", type=int, default=0)
    return parser


def parse_args(argv=None):
    parser = build_parser()
    pre, _ = parser.parse_known_args(argv)
    if pre.config:
        defaults = read_config_file(pre.config)
        sub = parser._subparsers._group_actions[0].choices[pre.command]
        known = {a.dest: a for a in sub._actions}
        typed = {}
        for key, value in defaults.items():
            if key not in known:
                parser.error(f"unknown config key {key!r}")
            action = known[key]
            typed[key] = action.type(value) if action.type else value
        sub.set_defaults(**typed)
    return parser.parse_args(argv)


def _experiment_config(args, T):
    return ExperimentConfig(
        class_kind=args.class_kind, domain_size=args.domain_size, T=T,
        trials=args.trials, seed=args.seed, adversary=args.adversary,
        learner=args.learner, mode=args.mode, wrapper_mode=args.wrapper_mode,
        m0=args.m0, epsilon=args.epsilon, n_learners=args.n_learners,
        n_experts=args.n_experts, target=args.target, out=args.out,
        n_jobs=args.n_jobs, calibration_cache=args.calibration_cache)


def _cmd_run(args):
    summary = run_experiment(_experiment_config(args, args.T))
    print(json.dumps({"mean_mistakes": summary.mean_mistakes, "stderr": summary.stderr,
                      "bounds": summary.bounds, "pass_flags": summary.pass_flags},
                     indent=2, sort_keys=True))
    return 0 if summary.passed else 1


def _cmd_sweep(args):
    T_list = [int(v) for v in args.T_list.split(",") if v.strip()]
    result, _ = run_sweep(_experiment_config(args, T_list[0]), T_list)
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0 if all(result["pass_flags"].values()) else 1


def _cmd_calibrate(args):
    hc = FiniteHypothesisClass.from_kind(args.class_kind, args.domain_size)
    m0 = calibrate_sample_complexity(hc, args.alpha, args.beta, args.epsilon,
                                     trials=args.trials, random_state=args.seed,
                                     cache_path=args.calibration_cache)
    print(json.dumps({"class": hc.descriptor(), "alpha": args.alpha, "beta": args.beta,
                      "eps": args.epsilon, "trials": args.trials, "m0": m0,
                      "formula_m": sample_complexity_formula(hc, args.alpha, args.beta,
                                                             args.epsilon)},
                     indent=2, sort_keys=True))
    return 0


def _cmd_audit(args):
    hc = FiniteHypothesisClass.from_kind(args.class_kind, args.domain_size)
    if (2 * args.domain_size) ** args.m <= args.exhaustive_limit:
        report = exhaustive_audit(hc, args.m, args.epsilon, group=args.group)
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
        return 0 if report.passed else 1
    rng = np.random.default_rng(args.seed)
    worst, all_pass = None, True
    for _ in range(args.exhaustive_limit):
        x = rng.integers(args.domain_size, size=args.m)
        y = rng.integers(2, size=args.m)
        x2, y2 = x.copy(), y.copy()
        q = int(rng.integers(1, args.m + 1)) if args.group else 1
        pos = rng.choice(args.m, size=q, replace=False)
        x2[pos] = rng.integers(args.domain_size, size=q)
        y2[pos] = rng.integers(2, size=q)
        report = audit_privacy(hc, (x, y), (x2, y2), args.epsilon)
        all_pass &= report.passed
        if worst is None or report.max_log_ratio - report.bound > worst.max_log_ratio - worst.bound:
            worst = report
    print(json.dumps({"sampled_pairs": args.exhaustive_limit, "worst": worst.to_dict(),
                      "pass": bool(all_pass)}, indent=2, sort_keys=True))
    return 0 if all_pass else 1


COMMANDS = {"run": _cmd_run, "sweep": _cmd_sweep, "calibrate": _cmd_calibrate,
            "audit-privacy": _cmd_audit}


def main(argv=None):
    args = parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (Dp2OnlineError, OSError) as exc:
        print(f"dp2online: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

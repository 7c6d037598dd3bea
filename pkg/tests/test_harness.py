import json
import math

import numpy as np
import pytest

from dp2online import FiniteDistribution, FiniteHypothesisClass, Transcript
from dp2online.boosting import bbm_mistake_bound, boost_schedule
from dp2online.exceptions import NonRealizableError, PreconditionError
from dp2online.expert_pool import pool_size
from dp2online.harness import (BisectionAdversary, ConsistencyAdversary, ExperimentConfig,
                               MetricsSummary, TrackerAdversary, make_adversary,
                               make_oblivious_fixed, make_oblivious_iid, run_experiment,
                               run_game, run_sweep, run_trial)
from dp2online.harness.cli import main, read_config_file
from dp2online.harness.experiment import growth_ratio, log_fit
from dp2online.mw import regret_bound
from dp2online.pipeline import theorem1_bound
from dp2online.weak_online import weak_guarantee

from conftest import within_sigmas
from helpers import ConstantLearner, LastLabelLearner

TH4 = FiniteHypothesisClass.thresholds(4)
TH8 = FiniteHypothesisClass.thresholds(8)


class AlwaysWrongOn0(ConstantLearner):
    def _predict_one(self, x):
        return 1 if x == 0 else int(x >= 2)


def play(adversary, learner, T):
    return run_game(learner, adversary, T)


def test_iid_point_mass_and_labels():
    adv = make_oblivious_iid(TH4, 2, 50, 0, distribution=[0, 0, 1, 0]).reset()
    assert [adv.next_instance() for _ in range(50)] == [2] * 50
    assert np.array_equal(adv.labels, TH4.evaluate(2, adv.instances))


def test_iid_uniform_frequencies():
    adv = make_oblivious_iid(TH4, 1, 10_000, 3)
    freq = np.bincount(adv.instances, minlength=4) / 10_000
    assert all(within_sigmas(f, 0.25, 10_000) for f in freq)


def test_iid_rejects_inconsistent_distribution():
    d = FiniteDistribution([3], [0], [1.0])
    with pytest.raises(NonRealizableError):
        make_oblivious_iid(TH4, 2, 5, 0, distribution=d)


def test_fixed_round_robin():
    adv = make_oblivious_fixed(TH4, 0, 9).reset()
    assert [adv.next_instance() for _ in range(9)] == [0, 1, 2, 3, 0, 1, 2, 3, 0]


def test_tracker_rules():
    adv = TrackerAdversary(TH4, 2)
    t = play(adv, AlwaysWrongOn0(), 40)
    assert t.x[:4].tolist() == [0, 1, 2, 3]
    assert np.all(t.x[4:] == 0) and t.mistakes == 37


def test_bisection_sequence():
    adv = BisectionAdversary(TH8, 5)
    t = play(adv, ConstantLearner(0), 5)
    assert t.x[:3].tolist() == [4, 6, 5]
    assert (adv.lo_, adv.hi_) == (5, 5)


@pytest.mark.parametrize("target", range(9))
def test_bisection_never_excludes_target_and_halves(target):
    adv = BisectionAdversary(TH8, target).reset()
    sizes = [adv.hi_ - adv.lo_ + 1]
    for _ in range(6):
        x = adv.next_instance()
        adv.observe(x, adv.label(x), 0)
        assert adv.lo_ <= target <= adv.hi_
        sizes.append(adv.hi_ - adv.lo_ + 1)
    for i in range(len(sizes) - 2):
        assert sizes[i + 2] <= max(1, sizes[i] // 2)


def test_bisection_requires_thresholds():
    with pytest.raises(PreconditionError):
        BisectionAdversary(FiniteHypothesisClass.points(4), 0)


def test_consistency_adversary_realizable_and_adversarial():
    adv = ConsistencyAdversary(TH8)
    t = play(adv, LastLabelLearner(), 30)
    assert adv.target in TH8.consistent(t.x, t.y)
    # round 2 answers against the round-1 prediction of 0
    assert t.y[1] == 1


def test_make_adversary_unknown():
    with pytest.raises(PreconditionError):
        make_adversary("sneaky", TH4, 0, 10)


def test_run_game_aligned_and_opposed():
    adv = make_oblivious_fixed(FiniteHypothesisClass([[0, 0, 0, 0]]), 0, 25)
    assert play(adv, ConstantLearner(0), 25).mistakes == 0
    assert play(adv, ConstantLearner(1), 25).mistakes == 25


def test_run_game_reproducible():
    from dp2online import WeakOnlineLearner
    w = WeakOnlineLearner(TH4, 16, 60)
    a = run_game(w, TrackerAdversary(TH4, 1), 60, seed=4)
    b = run_game(w, TrackerAdversary(TH4, 1), 60, seed=4)
    assert a.to_csv() == b.to_csv() and a.seed == 4


def test_run_game_rejects_non_realizable():
    class Liar(TrackerAdversary):
        def label(self, x):
            return 1 - super().label(x)
    with pytest.raises(NonRealizableError):
        run_game(ConstantLearner(0), Liar(TH4, 1), 5)


def test_adaptive_adversary_pure_in_predictions():
    t = run_game(LastLabelLearner(), TrackerAdversary(TH8, 3), 50)
    adv = TrackerAdversary(TH8, 3).reset()
    for x, y, yhat in zip(t.x, t.y, t.yhat):
        assert adv.next_instance() == x
        adv.observe(x, y, yhat)


def test_trial_matches_run_game():
    cfg = ExperimentConfig(T=40, trials=1, seed=5, adversary="tracker", learner="weak",
                           m0=16, target=2)
    summary = run_experiment(cfg)
    from dp2online import WeakOnlineLearner
    direct = run_game(WeakOnlineLearner(TH4, 16, 40), TrackerAdversary(TH4, 2), 40, seed=5)
    assert summary.mistakes == [direct.mistakes]
    assert run_trial(cfg, 0).to_csv() == direct.to_csv()


def test_constant_mistakes_summary():
    # points on a one-instance domain: a single hypothesis, so no randomness
    cfg = ExperimentConfig(T=12, trials=3, adversary="fixed", learner="weak", m0=4,
                           class_kind="points", domain_size=1, target=0)
    s = run_experiment(cfg)
    assert s.mistakes == [0, 0, 0] and s.stderr == 0.0 and s.mean_mistakes == 0.0


def test_summary_bounds_cross_check():
    cfg = ExperimentConfig(T=30, trials=2, adversary="iid", learner="wrapped", m0=16)
    s = run_experiment(cfg)
    N = pool_size(16, 0.1)
    g = weak_guarantee(N)
    assert s.bounds["mw"] == regret_bound(N, 30)
    assert s.bounds["weak"] == g.bound(30)
    assert s.bounds["bbm"] == bbm_mistake_bound(boost_schedule(30), 1 / 8, 30, g.excess_loss)
    assert s.bounds["theorem1"] == theorem1_bound(16, 30)
    assert set(s.pass_flags) == {"realizable", "weak_bound"}
    assert s.stderr == pytest.approx(np.std(s.mistakes, ddof=1) / math.sqrt(2))


def test_config_validation():
    with pytest.raises(PreconditionError):
        ExperimentConfig(trials=2, seeds=[1])
    with pytest.raises(PreconditionError):
        ExperimentConfig(learner="oracle")
    assert ExperimentConfig(trials=3, seed=10).seeds == [10, 11, 12]


def test_artifacts_round_trip(tmp_path):
    cfg = ExperimentConfig(T=20, trials=2, learner="pipeline", mode="fast", m0=16,
                           n_learners=3, out=str(tmp_path))
    s = run_experiment(cfg)
    text = (tmp_path / "summary.json").read_text()
    back = MetricsSummary.from_json(text)
    assert back == s and back.to_json() == text
    assert {"config_echo", "mean_mistakes", "stderr", "bounds", "pass_flags"} <= set(json.loads(text))
    for i in range(2):
        csv_text = (tmp_path / f"transcript_{i}.csv").read_text()
        t = Transcript.from_csv(tmp_path / f"transcript_{i}.csv")
        assert t.to_csv() == csv_text and t.mistakes == s.mistakes[i]


def test_unwritable_output_reports_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cfg = ExperimentConfig(T=5, m0=4, learner="weak", out=str(blocker / "sub"))
    with pytest.raises(OSError, match="sub"):
        run_experiment(cfg)


def test_log_fit_and_ratio():
    Ts = [200, 400, 800, 1600]
    fit = log_fit(Ts, [3 + 2 * math.log(T) for T in Ts])
    assert fit["slope"] == pytest.approx(2) and fit["residual_fraction"] == pytest.approx(0, abs=1e-12)
    assert growth_ratio(0, 0) == 0.0 and growth_ratio(0, 1) == math.inf
    assert growth_ratio(10, 25) == 2.5


def test_sweep(tmp_path):
    cfg = ExperimentConfig(trials=2, learner="weak", adversary="iid", m0=16, out=str(tmp_path))
    result, summaries = run_sweep(cfg, [10, 40])
    assert set(summaries) == {10, 40}
    assert "sublinear_10_40" in result["pass_flags"]
    assert (tmp_path / "T_40" / "summary.json").exists()
    assert json.loads((tmp_path / "sweep.json").read_text())["T_list"] == [10, 40]


def test_cli_run_and_reproducible(tmp_path, capsys):
    argv = ["run", "--T", "25", "--trials", "2", "--m0", "16", "--mode", "fast",
            "--n-learners", "3", "--seed", "9"]
    assert main(argv + ["--out", str(tmp_path / "a")]) == 0
    assert main(argv + ["--out", str(tmp_path / "b")]) == 0
    for i in range(2):
        a = (tmp_path / "a" / f"transcript_{i}.csv").read_bytes()
        assert a == (tmp_path / "b" / f"transcript_{i}.csv").read_bytes()
    assert "mean_mistakes" in capsys.readouterr().out


def test_cli_config_file_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nT = 7\ntrials=2\nlearner = weak\nm0=16\n")
    assert read_config_file(cfg)["T"] == "7"
    assert main(["--config", str(cfg), "run", "--trials", "1", "--out", str(tmp_path / "o")]) == 0
    s = json.loads((tmp_path / "o" / "summary.json").read_text())
    assert s["T"] == 7 and s["trials"] == 1
    capsys.readouterr()


def test_cli_calibrate_and_audit(capsys):
    assert main(["calibrate", "--domain-size", "2", "--trials", "1000"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert 1 <= out["m0"] <= out["formula_m"]
    assert main(["audit-privacy", "--domain-size", "3", "--m", "2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["pass"] is True and report["max_log_ratio"] <= 0.1 + 1e-9
    assert main(["audit-privacy", "--domain-size", "8", "--m", "6", "--group",
                 "--exhaustive-limit", "200"]) == 0
    sampled = json.loads(capsys.readouterr().out)
    assert sampled["sampled_pairs"] == 200 and sampled["pass"] is True


def test_cli_error_exit(capsys):
    assert main(["run", "--T", "5", "--m0", "100000", "--learner", "weak"]) == 2
    assert "error" in capsys.readouterr().err

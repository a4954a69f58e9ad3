import math
from fractions import Fraction

import numpy as np
import pytest

from degproc.confgraph import MultiGraph, small_edge_count
from degproc.exact import enumerate_simple_graphs, standard_outcomes
from degproc.experiments import (
    TrialRecord,
    binomial_floor,
    calibrate_beta,
    calibration_split,
    classify,
    distinguish,
    one_sided_lower,
    records_to_rows,
    run_trials,
    summarize,
    target,
)

SMALL = (1, 1, 2, 2, 3, 3, 2)


def _uniform_mean(d, k):
    graphs = enumerate_simple_graphs(d)
    return Fraction(sum(small_edge_count(g, k) for g in graphs), len(graphs))


def _standard_conditioned_mean(d, k):
    m = sum(d) // 2
    law = {E: p for E, p in standard_outcomes(d).items() if len(E) == m}
    total = sum(law.values())
    acc = Fraction(0)
    for E, p in law.items():
        acc += p * small_edge_count(MultiGraph(len(d), tuple(tuple(e) for e in E), degrees=d), k)
    return acc / total


def test_same_seed_same_records():
    a = run_trials(SMALL, 2, "standard", 20, seed=7, workers=1)
    b = run_trials(SMALL, 2, "standard", 20, seed=7, workers=1)
    assert a == b
    c = run_trials(SMALL, 2, "standard", 20, seed=8, workers=1)
    assert [r.trial for r in c] == list(range(20))


def test_worker_count_does_not_change_results():
    one = run_trials(SMALL, 2, "relaxed", 12, seed=3, workers=1)
    two = run_trials(SMALL, 2, "relaxed", 12, seed=3, workers=2)
    assert one == two


@pytest.mark.parametrize("variant,oracle", [("uniform", _uniform_mean),
                                            ("standard", _standard_conditioned_mean)])
def test_empirical_mean_matches_exact(variant, oracle):
    k = 2
    exact = float(oracle(SMALL, k))
    recs = run_trials(SMALL, k, variant, 3000, seed=11, workers=1)
    assert all(r.completed for r in recs)
    xs = np.array([r.small_edges for r in recs], dtype=float)
    se = xs.std(ddof=1) / math.sqrt(len(xs))
    assert abs(xs.mean() - exact) <= 4 * se + 1e-12


def test_bad_arguments():
    with pytest.raises(ValueError):
        run_trials(SMALL, 2, "lazy", 3)
    with pytest.raises(ValueError):
        run_trials(SMALL, 2, "uniform", 0)


def test_summarize_against_numpy():
    counts = [3, 5, 4, 4, 9, 1]
    recs = [TrialRecord(i, c, True, 10, 1) for i, c in enumerate(counts)]
    s = summarize(recs, Fraction(4), eps=Fraction(1, 4))
    xs = np.array(counts, dtype=float)
    assert s["mean"] == pytest.approx(xs.mean())
    assert s["variance"] == pytest.approx(xs.var(ddof=1))
    assert s["within_eps"] == pytest.approx(2 / 6)  # strict band: 3 and 5 sit on its edge
    assert s["completed"] == 6 and s["trials"] == 6
    assert records_to_rows(recs[:1]) == [{"trial": 0, "small_edges": 3, "completed": True,
                                          "steps": 10, "attempts": 1}]


def test_binomial_floor_value():
    assert binomial_floor(0.99, 500) == pytest.approx(0.99 - 3 * math.sqrt(0.99 * 0.01 / 500))
    assert 0.976 < binomial_floor(0.99, 500) < 0.977


def test_one_sided_lower():
    xs = [1.0, 2.0, 3.0, 4.0]
    assert one_sided_lower(xs, 2) == pytest.approx(2.5 - 2 * np.std(xs, ddof=1) / 2)


def test_calibration_split_partitions():
    cal, ev = calibration_split(50, 0.2, seed=4)
    assert len(cal) == 10 and len(ev) == 40
    assert sorted(np.concatenate([cal, ev]).tolist()) == list(range(50))
    again = calibration_split(50, 0.2, seed=4)
    assert np.array_equal(cal, again[0])


def test_classify_band():
    assert classify(10, 10, 0.1) == "uniform"
    assert classify(11, 10, 0.1) == "uniform"
    assert classify(11.5, 10, 0.1) == "process"


def test_calibrated_beta_sits_between_means():
    beta = calibrate_beta([10, 10, 10], [20, 20, 20], 10)
    assert beta == pytest.approx(0.5)


def test_distinguish_separable_classes():
    rng = np.random.default_rng(0)
    uni = rng.normal(60, 7, 300)
    pro = rng.normal(150, 10, 300)
    counts = np.concatenate([uni, pro])
    labels = ["uniform"] * 300 + ["process"] * 300
    out = distinguish(counts, labels, 62.5)
    assert out["accuracy"] == 1.0 and out["evaluated"] == 480
    fixed = distinguish(counts, None, 62.5, beta=0.5)
    assert fixed["evaluated"] == 600 and "accuracy" not in fixed
    with pytest.raises(ValueError):
        distinguish(counts, None, 62.5)


def test_target_is_uniform_mean_formula():
    assert target({1: 1000, 7: 1000}, 1) == Fraction(125, 2)

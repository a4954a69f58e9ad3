"""End-to-end acceptance checks, one test per criterion, each printing a PASS/FAIL line.

The n = 2000 samples are shared module-wide: 500 uniform graphs and 200
conditioned standard-process graphs on the half-degree-one, half-degree-seven
sequence with k = 1.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from degproc.cli import PUBLISHED_RELAXED, PUBLISHED_STANDARD, counterexample_report, load_switch_pair, tvd_sweep
from degproc.exact import (
    completion_probability,
    enumerate_config_graphs,
    graph_weight,
    relaxed_load_outcomes,
    relaxed_probability,
)
from degproc.experiments import binomial_floor, distinguish, one_sided_lower, run_trials, summarize
from degproc.degseq import small_edge_mean
from degproc.odemethod import (
    closed_form_error,
    end_values,
    integrate,
    mu_hat,
    parse_profile,
    rho,
    sufficient_condition,
)
from degproc.process import completion_count
from degproc.switching.counting import count_upper, count_upper_bruteforce
from degproc.switching.verify import run_suite
from oracles import relaxed_law_by_points, tiny_sequences

# published decimals and the rounding slack on them
RATIO_TOL = Fraction(5, 100000)
DP_SECONDS = 10
PERMUTATION_SECONDS = 60
NORMALIZATION_SECONDS = 60
CLUSTER_SWITCH_SECONDS = 30 * 60
TWIN_INSTANCES = 10_000
TWIN_MAX_EDGES = 10
ENUMERABLE_MAX_EDGES = 7
ENUMERABLE_SEQUENCES = 70_000
COUNT_INSTANCES = 1000
FIXTURE_UPPER_COUNT = 16

N = 2000
DEGREES = {1: N // 2, 7: N // 2}
K = 1
EPS = Fraction(1, 10)
UNIFORM_TRIALS = 500
UNIFORM_TARGET = 0.99
SIGMAS = 3
UNIFORM_SECONDS = 5 * 60
PROCESS_TRIALS = 200

CLOSED_FORM_TOL = 1e-6
CLOSED_FORM_MARGIN = 0.05
MASS_TOL = 1e-4
MC_ODE_RELATIVE = 0.02

COMPLETION_DEGREES = (2, 2, 2, 2)
COMPLETION_TRIALS = 10**6

DISTINGUISH_PER_CLASS = 200
DISTINGUISH_ACCURACY = 0.99

TVD_MAX_N = 8


@pytest.fixture(scope="module")
def uniform_sample():
    t0 = time.perf_counter()
    recs = run_trials(DEGREES, K, "uniform", UNIFORM_TRIALS, seed=20240601)
    return recs, time.perf_counter() - t0


@pytest.fixture(scope="module")
def process_sample():
    return run_trials(DEGREES, K, "standard", PROCESS_TRIALS, seed=20240602)


@pytest.fixture(scope="module")
def half_trajectory():
    return integrate(parse_profile("1:1/2 7:1/2"))


def test_counterexample_ratios(verdict):
    rep = counterexample_report(permutation_check=True)
    relaxed = Fraction(rep["relaxed_ratio"]["exact"])
    standard = Fraction(rep["standard_ratio"]["exact"])
    ok = (abs(relaxed - PUBLISHED_RELAXED) <= RATIO_TOL
          and abs(standard - PUBLISHED_STANDARD) <= RATIO_TOL
          and rep["engines_agree"]
          and rep["dp_seconds"] < DP_SECONDS
          and rep["permutation_seconds"] < PERMUTATION_SECONDS)
    verdict(1, "counterexample ratios", ok,
            f"relaxed {rep['relaxed_ratio']['decimal']}, standard {rep['standard_ratio']['decimal']}, "
            f"dp {rep['dp_seconds']}s, permutations {rep['permutation_seconds']}s")
    assert ok, rep


def test_probability_normalization(verdict):
    t0 = time.perf_counter()
    bad = []
    count = 0
    for d in tiny_sequences(5, 3):
        count += 1
        graphs = enumerate_config_graphs(d)
        complete = sum((relaxed_probability(G) for G in graphs), Fraction(0))
        loads = relaxed_load_outcomes(d)
        stuck = sum((p for load, p in loads.items() if list(load) != list(d)), Fraction(0))
        law = relaxed_law_by_points(d)
        ratios = {law.get(frozenset(G.pairs), Fraction(0)) / graph_weight(G) for G in graphs}
        if complete + stuck != 1 or len(ratios) > 1:
            bad.append(d)
    seconds = time.perf_counter() - t0
    ok = not bad and seconds < NORMALIZATION_SECONDS
    verdict(2, "probability normalization", ok,
            f"{count} sequences, {len(bad)} violations, {seconds:.1f}s")
    assert ok, bad[:5]


def test_cluster_switch_exhaustive(verdict):
    t0 = time.perf_counter()
    *recs, summary = run_suite("cluster-switch", max_edges=7, max_degree=4, literal_edges=5)
    seconds = time.perf_counter() - t0
    ok = summary["pass"] and seconds < CLUSTER_SWITCH_SECONDS
    verdict(3, "cluster switch weights", ok,
            ", ".join(f"{k} {v}" for k, v in summary.items() if k not in ("summary", "pass"))
            + f", {seconds:.0f}s")
    assert ok, [r for r in recs if not r.get("pass", True)][:5]


def test_twin_identities_and_partition(verdict):
    *_, ident = run_suite("twin-identities", count=TWIN_INSTANCES, seed=0, max_edges=TWIN_MAX_EDGES)
    *parts, part = run_suite("twin-partition", max_edges=ENUMERABLE_MAX_EDGES, max_degree=4,
                             max_sequences=ENUMERABLE_SEQUENCES)
    ok = ident["pass"] and ident["quadruplets"] > 0 and part["pass"] and part["clusters"] > 0
    verdict(4, "twin identities", ok,
            f"{ident['instances']} instances, {ident['with_twin']} with twins, "
            f"{ident['quadruplets']} quadruplets; {part['clusters']} clusters partitioned, "
            f"{part['skipped_over_budget']} over the enumeration budget")
    assert ok, (ident, part, [r for r in parts if not r["pass"]][:3])


def test_counting_formulas(verdict):
    *_, summary = run_suite("cluster-counts", count=COUNT_INSTANCES, seed=0)
    pair = load_switch_pair()
    upper = count_upper(pair.upper, pair.k)
    brute = count_upper_bruteforce(pair.upper, pair.k)
    ok = summary["pass"] and upper == brute == FIXTURE_UPPER_COUNT
    verdict(5, "counting formulas", ok,
            f"{summary['instances']} instances, {summary['failures']} failures, fixture U = {upper}")
    assert ok


def test_uniform_concentration(verdict, uniform_sample):
    recs, seconds = uniform_sample
    mu = small_edge_mean(DEGREES, K)
    s = summarize(recs, mu, EPS)
    floor = binomial_floor(UNIFORM_TARGET, UNIFORM_TRIALS, SIGMAS)
    ok = s["within_eps"] >= floor and seconds < UNIFORM_SECONDS
    verdict(6, "uniform concentration", ok,
            f"{s['within_eps']:.3f} of {s['trials']} within eps*mu (need >= {floor:.4f}); "
            f"mu {float(mu)}, mean {s['mean']:.2f}, sd {s['sd']:.2f}, {seconds:.0f}s")
    assert ok, s


def test_process_excess(verdict, process_sample):
    mu = small_edge_mean(DEGREES, K)
    xs = [r.small_edges for r in process_sample]
    lower = one_sided_lower(xs, SIGMAS)
    alpha = np.mean(xs) / float(mu) - 1
    ok = all(r.completed for r in process_sample) and lower > float(mu)
    verdict(7, "process small-edge excess", ok,
            f"mean {np.mean(xs):.2f}, 3-sigma lower {lower:.2f} vs mu {float(mu)}, alpha {alpha:.3f}")
    assert ok


def test_ode_pipeline(verdict, half_trajectory, process_sample):
    prof = half_trajectory.profile
    cf_err = closed_form_error(prof, float(prof.end_time) - CLOSED_FORM_MARGIN)
    ends = end_values(half_trajectory)
    mass_gap = abs(ends.values.sum() - float(prof.end_time))
    rho_1 = rho(half_trajectory, K, ends)
    target = mu_hat(prof, K)
    cond, margin = sufficient_condition(prof, K)
    mc = np.mean([r.small_edges for r in process_sample]) / N
    rel = abs(mc - rho_1) / rho_1
    ok = (cf_err <= CLOSED_FORM_TOL and mass_gap <= MASS_TOL and target == Fraction(1, 32)
          and rho_1 > target and cond and rel <= MC_ODE_RELATIVE)
    verdict(8, "fluid limit", ok,
            f"closed-form gap {cf_err:.1e}, mass gap {mass_gap:.1e}, rho_1 {rho_1:.5f} > {target}, "
            f"condition margin {margin:.3f}, simulated X_1/n {mc:.5f} ({rel:.2%} off)")
    assert ok


def test_completion_probability(verdict):
    parts, ok = [], True
    for seed, variant in enumerate(("standard", "relaxed")):
        p = float(completion_probability(COMPLETION_DEGREES, variant))
        freq = completion_count(COMPLETION_DEGREES, variant, COMPLETION_TRIALS, seed=seed) / COMPLETION_TRIALS
        se = math.sqrt(p * (1 - p) / COMPLETION_TRIALS)
        ok &= abs(freq - p) <= SIGMAS * se
        parts.append(f"{variant} exact {p:.5f} simulated {freq:.5f} ({abs(freq - p) / se:.2f} se)")
    verdict(9, "completion probability", ok, "; ".join(parts))
    assert ok


def test_distinguisher(verdict, uniform_sample, process_sample):
    uni = [r.small_edges for r in uniform_sample[0][:DISTINGUISH_PER_CLASS]]
    pro = [r.small_edges for r in process_sample[:DISTINGUISH_PER_CLASS]]
    labels = ["uniform"] * len(uni) + ["process"] * len(pro)
    res = distinguish(uni + pro, labels, small_edge_mean(DEGREES, K), seed=7)
    ok = res["accuracy"] >= DISTINGUISH_ACCURACY
    verdict(10, "distinguisher", ok,
            f"accuracy {res['accuracy']:.4f} on {res['evaluated']} held-out graphs, beta {res['beta']:.3f}")
    assert ok


def test_tvd_search(verdict):
    rows = list(tvd_sweep(TVD_MAX_N))
    positive = [r for r in rows if r["positive"]]
    ok = bool(positive)
    first = positive[0] if positive else None
    verdict(11, "positive total variation", ok,
            f"{len(positive)} of {len(rows)} sequences; first {first['degrees']} "
            f"tvd {first['tvd']['exact']}" if first else f"none among {len(rows)} sequences")
    assert ok

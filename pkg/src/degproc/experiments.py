"""Seeded Monte Carlo trials of the small-edge count and the small-edge distinguisher.

Every trial draws from its own stream spawned from the master seed, so results
do not depend on the number of workers or on scheduling order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .confgraph import small_edge_count
from .degseq import as_sequence, small_edge_mean
from .process import _sample_uniform_simple, run_conditioned, run_relaxed, run_standard

VARIANTS = ("uniform", "standard", "relaxed")


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    small_edges: int
    completed: bool
    steps: int
    attempts: int


def _one_trial(args) -> TrialRecord:
    degrees, k, variant, conditioned, index, seed_seq = args
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    if variant == "uniform":
        g, attempts = _sample_uniform_simple(degrees, rng, 10_000_000)
        return TrialRecord(index, small_edge_count(g, k), True, g.m, attempts)
    if conditioned:
        res = run_conditioned(degrees, rng, variant)
    else:
        res = (run_standard if variant == "standard" else run_relaxed)(degrees, rng)
    return TrialRecord(index, small_edge_count(res.graph, k, degrees), res.completed,
                       res.steps, res.attempts)


def default_workers() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def run_trials(d, k: int, variant: str, trials: int, seed=0, workers: int | None = None,
               conditioned: bool = True) -> list[TrialRecord]:
    """``trials`` independent samples of the small-edge count, in trial order."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from {', '.join(VARIANTS)}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    degrees = as_sequence(d).degrees
    children = np.random.SeedSequence(seed).spawn(trials)
    jobs = [(degrees, k, variant, conditioned, i, s) for i, s in enumerate(children)]
    workers = default_workers() if workers is None else workers
    if workers <= 1 or trials == 1:
        return [_one_trial(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_one_trial, jobs, chunksize=max(1, trials // (4 * workers))))


def summarize(records, mu, eps=Fraction(1, 10)) -> dict:
    xs = np.array([r.small_edges for r in records], dtype=float)
    mu_f = float(mu)
    band = float(Fraction(eps) * Fraction(mu))
    n = len(xs)
    return {
        "trials": n,
        "mu": mu_f,
        "mean": float(xs.mean()),
        "variance": float(xs.var(ddof=1)) if n > 1 else 0.0,
        "sd": float(xs.std(ddof=1)) if n > 1 else 0.0,
        "within_eps": float(np.mean(np.abs(xs - mu_f) < band)),
        "completed": int(sum(r.completed for r in records)),
        "relative_excess": float(xs.mean() / mu_f - 1),
    }


def one_sided_lower(values, sigmas: float = 3.0) -> float:
    """Mean minus ``sigmas`` standard errors."""
    xs = np.asarray(values, dtype=float)
    return float(xs.mean() - sigmas * xs.std(ddof=1) / math.sqrt(len(xs)))


def binomial_floor(p: float, trials: int, sigmas: float = 3.0) -> float:
    """Smallest observed success fraction consistent with rate ``p`` at ``sigmas`` standard deviations."""
    return p - sigmas * math.sqrt(p * (1 - p) / trials)


def records_to_rows(records):
    return [asdict(r) for r in records]


# -- distinguisher ---------------------------------------------------------------------

def calibrate_beta(uniform_counts, process_counts, mu) -> float:
    """Relative band half-width whose edge sits midway between the two empirical means."""
    mid = (np.mean(uniform_counts) + np.mean(process_counts)) / 2
    return abs(float(mid) - float(mu)) / float(mu)


def classify(count, mu, beta) -> str:
    return "uniform" if abs(count - float(mu)) <= beta * float(mu) else "process"


def calibration_split(n: int, fraction=0.2, seed=0) -> tuple[np.ndarray, np.ndarray]:
    """Indices (calibration, evaluation) from a seeded shuffle."""
    idx = np.random.default_rng(seed).permutation(n)
    cut = max(1, int(round(n * float(fraction))))
    return np.sort(idx[:cut]), np.sort(idx[cut:])


def distinguish(counts, labels, mu, beta=None, calibration=0.2, seed=0) -> dict:
    """Label each count; calibrate ``beta`` on a held-out split unless it is given.

    ``labels`` may be None when no ground truth is known (then ``beta`` must be given).
    Accuracy is measured on the evaluation part only.
    """
    counts = np.asarray(counts, dtype=float)
    if beta is None:
        if labels is None:
            raise ValueError("calibration needs ground-truth labels or a fixed beta")
        cal, ev = calibration_split(len(counts), calibration, seed)
        lab = np.asarray(labels)
        uni = counts[cal][lab[cal] == "uniform"]
        pro = counts[cal][lab[cal] == "process"]
        if not len(uni) or not len(pro):
            raise ValueError("calibration split lacks one of the two classes")
        beta = calibrate_beta(uni, pro, mu)
    else:
        ev = np.arange(len(counts))
    decisions = [classify(c, mu, beta) for c in counts]
    out = {"beta": float(beta), "mu": float(mu), "decisions": decisions, "evaluated": len(ev)}
    if labels is not None:
        lab = list(labels)
        out["accuracy"] = float(np.mean([decisions[i] == lab[i] for i in ev]))
    return out


def target(d, k) -> Fraction:
    return small_edge_mean(d, k)

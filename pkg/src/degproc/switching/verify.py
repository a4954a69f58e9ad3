"""Brute-force verifiers for the switching machinery and the sweep suites
driven from the command line.

Each suite yields JSON-ready records ``{instance, check, anchor, ratio, pass}``
and finishes with a summary record.
"""

from __future__ import annotations

import itertools
import math
import json
from fractions import Fraction
from typing import Iterator


from ..confgraph import ConfigGraph, small_edge_count
from ..exact import (
    enumerate_config_graphs,
    gamma_profile,
    sequence_weight,
)
from ..process import make_rng
from .anchor import AnchorError, SwitchAnchor, anchors_of, switch_graph
from .clusters import (
    Cluster,
    cluster_key,
    cluster_weight,
    enumerate_cluster,
    representative_clusters,
    switching_partner,
)
from .counting import (
    count_lower,
    count_lower_bruteforce,
    count_upper,
    count_upper_bruteforce,
    is_good_cluster,
    lower_count_bounds,
)
from .fixtures import random_anchored_instance
from .patterns import (
    first_count,
    first_words,
    in_second,
    pattern_injection,
    second_count,
    second_words,
)
from .sequences import (
    anchor_times,
    bar,
    counterpart,
    family,
    has_twin,
    normalize,
    twin,
    twin_preimage,
)


# Fixed constant for the window-width scaling of the cluster-count mismatch.
COUNT_RATIO_BOUND = 8


def _fmt(q) -> str | None:
    if q is None:
        return None
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def _anchor_str(anchor: SwitchAnchor) -> str:
    return " ".join(p.token() for p in (anchor.a, anchor.b, anchor.x, anchor.y))


def record(instance, check, anchor=None, ratio=None, ok=True, **extra) -> dict:
    out = {"instance": instance, "check": check,
           "anchor": _anchor_str(anchor) if anchor is not None else None,
           "ratio": _fmt(ratio), "pass": bool(ok)}
    out.update(extra)
    return out


def to_json_lines(records) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


# -- single-object verifiers ------------------------------------------------------------

def verify_cluster_switch(C: Cluster, z=None) -> dict:
    """Weights of an upper cluster and its partner; passes when the upper side is not lighter."""
    if C.kind != "upper":
        raise ValueError("expected an upper cluster")
    lower = switching_partner(C)
    zp, zm = cluster_weight(C), cluster_weight(lower)
    out = {"zC_plus": zp, "zC_minus": zm, "ratio": zp / zm if zm else None,
           "pass": zp >= zm, "size": len(C)}
    if z is not None:
        out["good"] = is_good_cluster(C, z)
    return out


def verify_completeswitch(seq, seq_c, degrees, anchor: SwitchAnchor, z) -> dict:
    """Compare a sequence plus its anchor-swapped version against its counterpart pair."""
    seq, seq_c = normalize(seq), normalize(seq_c)
    if counterpart(seq, anchor) != seq_c:
        raise AnchorError("sequences are not counterparts")
    t = anchor_times(seq, degrees, anchor)
    if not (t.t_a <= t.t_y and t.t_b <= t.t_x):
        raise AnchorError("needs t_a <= t_y and t_b <= t_x")
    lhs = sequence_weight(seq, degrees) + sequence_weight(bar(seq, anchor), degrees)
    rhs = sequence_weight(seq_c, degrees) + sequence_weight(bar(seq_c, anchor), degrees)
    ab, xy = anchor.upper_edges()
    i_ab, i_xy = seq.index(ab) + 1, seq.index(xy) + 1
    gap = min(i_xy, t.t_x, t.t_y) - max(i_ab, t.t_a, t.t_b)
    wide = 3 * gap >= Fraction(z) * len(seq)
    out = {"lhs": lhs, "rhs": rhs, "ratio": lhs / rhs, "gap": gap, "wide_gap": wide,
           "pass": lhs >= rhs and (lhs > rhs or not wide)}
    return out


def _sequences(C: Cluster):
    for g in C.sorted_members():
        yield from itertools.permutations(g.pairs)


def verify_twin_partition(C: Cluster, injection=None, max_sequences: int = 400_000) -> dict:
    """Build the twin-paired set over all orderings of an upper cluster and its
    partner, and check the equal-weight split, commutation of the two twin maps,
    and the membership rules."""
    if C.kind != "upper":
        raise ValueError("expected an upper cluster")
    lower = switching_partner(C)
    n_seq = 2 * len(C) * math.factorial(next(iter(C.members)).m)
    if n_seq > max_sequences:
        raise AnchorError(f"{n_seq} sequences exceed the budget {max_sequences}")
    deg, anc = C.degrees, C.anchor
    plus = [normalize(s) for s in _sequences(C)]
    minus = [normalize(s) for s in _sequences(lower)]
    universe = {"upper": set(plus), "lower": set(minus)}
    weight = {}
    paired = set()
    failures = []
    images = {"bx": {}, "ay": {}}
    for s in plus + minus:
        weight[s] = sequence_weight(s, deg)
    for s in plus + minus:
        fam = "upper" if s in universe["upper"] else "lower"
        other = "lower" if fam == "upper" else "upper"
        tw = {}
        for which in ("bx", "ay"):
            u = twin(s, deg, anc, which, injection)
            if u is None:
                continue
            tw[which] = u
            paired.update((s, u))
            if u not in universe[other]:
                failures.append(("twin-outside-partner", s))
            if gamma_profile(u, deg) != gamma_profile(s, deg):
                failures.append(("profile", s))
            prev = images[which].setdefault(u, s)
            if prev != s:
                failures.append(("two-preimages", s))
        if len(tw) == 2:
            a = twin(tw["bx"], deg, anc, "ay", injection)
            b = twin(tw["ay"], deg, anc, "bx", injection)
            if a is None or a != b:
                failures.append(("quadruplet", s))
    sum_plus = sum((weight[s] for s in plus if s in paired), Fraction(0))
    sum_minus = sum((weight[s] for s in minus if s in paired), Fraction(0))
    if sum_plus != sum_minus:
        failures.append(("weight-split", None))
    for s in plus + minus:
        t = anchor_times(s, deg, anc)
        if s not in paired and not (t.t_a <= t.t_y and t.t_b <= t.t_x):
            failures.append(("unpaired-times", s))
        if (s in paired) != has_twin(s, deg, anc, injection):
            failures.append(("membership", s))
    return {"plus": len(plus), "minus": len(minus), "paired": len(paired),
            "sum_plus": sum_plus, "sum_minus": sum_minus,
            "failures": failures, "pass": not failures}


# -- suites ------------------------------------------------------------------------------

def _degree_multisets(max_edges: int, max_degree: int):
    """Non-increasing degree tuples with even sum at most ``2*max_edges``."""
    def rec(left, cap):
        yield ()
        for p in range(min(cap, left), 0, -1):
            for rest in rec(left - p, p):
                yield (p,) + rest
    for d in rec(2 * max_edges, max_degree):
        if d and sum(d) % 2 == 0 and len(d) >= 4:
            yield d


def literal_upper_clusters(max_edges: int, max_degree: int):
    """Every distinct upper cluster over every configuration-graph (no symmetry reduction)."""
    for degs in _degree_multisets(max_edges, max_degree):
        if max(degs) == min(degs):
            continue
        seen = set()
        for G in enumerate_config_graphs(degs):
            for anc in anchors_of(G, "upper"):
                key = (anc, cluster_key(G, anc))
                if key in seen:
                    continue
                seen.add(key)
                yield enumerate_cluster(G, anc, "upper")


def suite_cluster_switch(max_edges=7, max_degree=4, literal_edges=5, **_) -> Iterator[dict]:
    fails = n = 0
    worst = None
    for i, (G, anc) in enumerate(representative_clusters(max_edges, max_degree)):
        rep = verify_cluster_switch(enumerate_cluster(G, anc, "upper"))
        n += 1
        fails += not rep["pass"]
        if worst is None or rep["ratio"] < worst:
            worst = rep["ratio"]
        yield record(f"rep-{i}", "cluster-switch", anc, rep["ratio"], rep["pass"],
                     degrees=list(G.degrees), size=rep["size"])
    lit = 0
    for j, C in enumerate(literal_upper_clusters(literal_edges, max_degree)):
        rep = verify_cluster_switch(C)
        lit += 1
        fails += not rep["pass"]
        yield record(f"lit-{j}", "cluster-switch-literal", C.anchor, rep["ratio"], rep["pass"],
                     degrees=list(C.degrees), size=rep["size"])
    yield {"summary": "cluster-switch", "representatives": n, "literal": lit,
           "min_ratio": _fmt(worst), "failures": fails, "pass": fails == 0}


def check_twin_instance(inst, injection=None) -> list[str]:
    """All single-sequence twin properties for one anchored instance; returns failed check names."""
    deg, anc, s = inst.degrees, inst.anchor, normalize(inst.sequence)
    bad = []
    times = anchor_times(s, deg, anc)
    fam = family(s, anc)
    made = {}
    for which in ("bx", "ay"):
        u = twin(s, deg, anc, which, injection)
        if u is None:
            continue
        made[which] = u
        if gamma_profile(u, deg) != gamma_profile(s, deg):
            bad.append(f"{which}-profile")
        if sequence_weight(u, deg) != sequence_weight(s, deg):
            bad.append(f"{which}-weight")
        if family(u, anc) == fam:
            bad.append(f"{which}-family")
        g_s, g_u = ConfigGraph(deg, s), ConfigGraph(deg, u)
        if cluster_key(g_s, anc) != cluster_key(g_u, anc):
            bad.append(f"{which}-cluster")
        tu = anchor_times(u, deg, anc)
        want = ((times.t_a, times.t_x, times.t_b, times.t_y) if which == "bx"
                else (times.t_y, times.t_b, times.t_x, times.t_a))
        if tu.as_tuple() != want:
            bad.append(f"{which}-times")
        if twin_preimage(u, deg, anc, which, injection) != s:
            bad.append(f"{which}-preimage")
        c = counterpart(s, anc)
        uc = twin(c, deg, anc, which, injection)
        if uc is None or counterpart(uc, anc) != u:
            bad.append(f"{which}-counterpart")
    if len(made) == 2:
        a = twin(made["bx"], deg, anc, "ay", injection)
        b = twin(made["ay"], deg, anc, "bx", injection)
        if a is None or a != b:
            bad.append("quadruplet")
    return bad


def suite_twin_identities(count=10_000, seed=0, max_edges=10, **_) -> Iterator[dict]:
    rng = make_rng(seed)
    fails = with_twin = quads = 0
    for i in range(count):
        inst = random_anchored_instance(rng, max_edges, upper=bool(rng.integers(0, 2)))
        t = anchor_times(inst.sequence, inst.degrees, inst.anchor)
        has = (t.t_x < t.t_b) + (t.t_y < t.t_a)
        with_twin += has > 0
        quads += has == 2
        bad = check_twin_instance(inst)
        fails += bool(bad)
        if bad or has:
            yield record(f"rand-{i}", "twin-identities", inst.anchor, None, not bad,
                         failed=bad, degrees=list(inst.degrees))
    yield {"summary": "twin-identities", "instances": count, "with_twin": with_twin,
           "quadruplets": quads, "failures": fails, "pass": fails == 0}


def suite_twin_partition(max_edges=7, max_degree=4, max_sequences=60_000, **_) -> Iterator[dict]:
    fails = done = skipped = 0
    for i, (G, anc) in enumerate(representative_clusters(max_edges, max_degree)):
        if max(G.degrees[0], G.degrees[1]) < 2:
            continue  # degree-one low side: no twins exist
        C = enumerate_cluster(G, anc, "upper")
        try:
            rep = verify_twin_partition(C, max_sequences=max_sequences)
        except AnchorError:
            skipped += 1
            continue
        done += 1
        fails += not rep["pass"]
        yield record(f"rep-{i}", "twin-partition", anc,
                     rep["sum_plus"] / rep["sum_minus"] if rep["sum_minus"] else None,
                     rep["pass"], paired=rep["paired"], sequences=rep["plus"] + rep["minus"],
                     failed=sorted({f[0] for f in rep["failures"]}))
    yield {"summary": "twin-partition", "clusters": done, "skipped_over_budget": skipped,
           "failures": fails, "pass": fails == 0}


def suite_sequence_switch(max_edges=5, max_degree=4, z="1/1024", max_sequences=60_000, **_):
    fails = checked = strict = 0
    for i, (G, anc) in enumerate(representative_clusters(max_edges, max_degree)):
        C = enumerate_cluster(G, anc, "upper")
        total = len(C) * math.factorial(G.m)
        if total > max_sequences:
            continue
        for s in _sequences(C):
            s = normalize(s)
            t = anchor_times(s, C.degrees, anc)
            if not (t.t_a <= t.t_y and t.t_b <= t.t_x):
                continue
            rep = verify_completeswitch(s, counterpart(s, anc), C.degrees, anc, Fraction(z))
            checked += 1
            strict += rep["wide_gap"]
            if not rep["pass"]:
                fails += 1
                yield record(f"rep-{i}", "sequence-switch", anc, rep["ratio"], False, gap=rep["gap"])
    yield {"summary": "sequence-switch", "pairs": checked, "wide_gap_pairs": strict,
           "failures": fails, "pass": fails == 0}


def suite_counterparts(count=2000, seed=0, max_edges=10, **_):
    rng = make_rng(seed)
    fails = 0
    for i in range(count):
        inst = random_anchored_instance(rng, max_edges, upper=True)
        s, anc, deg = normalize(inst.sequence), inst.anchor, inst.degrees
        c = counterpart(s, anc)
        ok = (bar(bar(s, anc), anc) == s
              and counterpart(bar(s, anc), anc) == bar(c, anc)
              and counterpart(c, anc) == s
              and len({anchor_times(x, deg, anc) for x in (s, c, bar(s, anc), bar(c, anc))}) == 1)
        fails += not ok
        if not ok:
            yield record(f"rand-{i}", "counterparts", anc, None, False)
    yield {"summary": "counterparts", "instances": count, "failures": fails, "pass": fails == 0}


def suite_pattern_injection(max_letters=12, **_):
    fails = triples = 0
    for total in range(3, max_letters + 1):
        for n_low in range(1, total):
            n_high = total - n_low
            if not n_low < n_high:
                continue
            for t in range(n_high, total):
                triples += 1
                src = first_words(t, n_low, n_high)
                dst = [pattern_injection(t, n_low, n_high, w) for w in src]
                ok = (len(set(dst)) == len(src)
                      and all(in_second(w, t, n_low, n_high) for w in dst)
                      and len(src) == first_count(t, n_low, n_high)
                      and len(second_words(t, n_low, n_high)) == second_count(t, n_low, n_high)
                      and len(src) <= len(second_words(t, n_low, n_high)))
                fails += not ok
                yield record(f"t{t}-l{n_low}-h{n_high}", "pattern-injection", None, None, ok,
                             first=len(src), second=second_count(t, n_low, n_high))
    yield {"summary": "pattern-injection", "triples": triples, "failures": fails, "pass": fails == 0}


def _random_config_graph(rng, degrees, tries=1000):
    from ..process import sample_config_model, pairing_loops
    for _ in range(tries):
        pairs = sample_config_model(degrees, rng)
        if not pairing_loops(pairs):
            return ConfigGraph(degrees, pairs)
    return None


def _random_degrees(rng, max_edges, max_degree):
    while True:
        n = int(rng.integers(4, 2 * max_edges + 1))
        d = tuple(int(x) for x in rng.integers(1, max_degree + 1, size=n))
        if sum(d) % 2 == 0 and sum(d) <= 2 * max_edges and max(d) > min(d):
            return d


def suite_cluster_counts(count=1000, seed=0, max_edges=10, max_degree=4, **_):
    rng = make_rng(seed)
    fails = 0
    for i in range(count):
        d = _random_degrees(rng, max_edges, max_degree)
        G = _random_config_graph(rng, d)
        if G is None:
            continue
        k = int(rng.integers(min(d), max(d)))
        U, L = count_upper(G, k), count_lower(G, k)
        lo, hi = lower_count_bounds(G, k)
        ok = (U == count_upper_bruteforce(G, k) and L == count_lower_bruteforce(G, k)
              and lo <= L // 2 <= hi and L % 2 == 0)
        fails += not ok
        yield record(f"rand-{i}", "cluster-counts", None, None, ok, upper=U, lower=L, k=k)
    yield {"summary": "cluster-counts", "instances": count, "failures": fails, "pass": fails == 0}


def suite_small_edge_drift(count=500, seed=0, max_edges=10, max_degree=4, **_):
    """Switching drops the small-edge count by one, and graphs across a pair of
    partner clusters differ by at most 4 * max degree small edges."""
    rng = make_rng(seed)
    fails = 0
    for i in range(count):
        inst = random_anchored_instance(rng, min(max_edges, 8), max_degree)
        G, anc = inst.graph, inst.anchor
        k = max(G.degrees[0], G.degrees[1])
        ok = small_edge_count(switch_graph(G, anc, k), k) == small_edge_count(G, k) - 1
        C = enumerate_cluster(G, anc, "upper")
        counts = [small_edge_count(g, k) for g in C.members]
        counts += [small_edge_count(g, k) for g in switching_partner(C).members]
        ok = ok and max(counts) - min(counts) <= 4 * max(G.degrees)
        fails += not ok
        yield record(f"rand-{i}", "small-edge-drift", anc, None, ok,
                     spread=max(counts) - min(counts), bound=4 * max(G.degrees))
    yield {"summary": "small-edge-drift", "instances": count, "failures": fails, "pass": fails == 0}


def suite_good_clusters(count=200, seed=0, max_edges=7, z="1/10", **_):
    """Subset-DP good-cluster decision against the permutation-sum oracle."""
    rng = make_rng(seed)
    fails = 0
    for i in range(count):
        inst = random_anchored_instance(rng, max_edges, 4)
        C = enumerate_cluster(inst.graph, inst.anchor, "upper")
        if len(C) > 12:
            continue
        fast = is_good_cluster(C, Fraction(z))
        slow = is_good_cluster(C, Fraction(z), bruteforce=True)
        fails += fast != slow
        yield record(f"rand-{i}", "good-clusters", inst.anchor, None, fast == slow, good=fast)
    yield {"summary": "good-clusters", "failures": fails, "pass": fails == 0}


def _window_graphs(rng, n, gamma, samples, k=2):
    """Loop-free configuration-graphs on the half-2, half-3 profile whose small-edge
    count is within ``gamma * mu`` of its target."""
    from ..degseq import small_edge_mean
    from ..process import sample_config_graph
    degrees = (2,) * (n // 2) + (3,) * (n - n // 2)
    if sum(degrees) % 2:
        degrees = degrees[:-1] + (2,)
    mu = small_edge_mean(degrees, k)
    kept = []
    for _ in range(samples):
        G = sample_config_graph(degrees, rng)
        if abs(small_edge_count(G, k) - mu) <= gamma * mu:
            kept.append(G)
    return degrees, mu, kept


def suite_count_ratio(sizes=(200, 500, 1000), gammas=("1/20", "1/10"), samples=20, seed=0,
                      bound=COUNT_RATIO_BOUND, **_):
    """Inside the small-edge window, lower and upper cluster counts of any two graphs
    agree up to a relative error proportional to the window width."""
    rng = make_rng(seed)
    k = 2
    worst_all = 0.0
    fails = 0
    for n in sizes:
        for g in gammas:
            gamma = Fraction(g)
            _, mu, kept = _window_graphs(rng, n, gamma, samples, k)
            lows = [count_lower(G, k) for G in kept]
            ups = [count_upper(G, k) for G in kept]
            if not kept:
                yield record(f"n{n}-g{g}", "count-ratio", None, None, True, kept=0)
                continue
            worst = max(max(abs(Fraction(L, U) - 1) for U in ups) for L in lows) / gamma
            ok = worst <= bound
            fails += not ok
            worst_all = max(worst_all, float(worst))
            yield record(f"n{n}-g{g}", "count-ratio", None, worst, ok, kept=len(kept),
                         mu=_fmt(mu), normalized_max=float(worst))
    yield {"summary": "count-ratio", "bound": bound, "max_normalized": worst_all,
           "failures": fails, "pass": fails == 0}


def suite_good_choices(sizes=(200, 500, 1000), gamma="1/10", samples=10, orders=5, xi="1/2",
                       seed=0, **_):
    """For window graphs and random edge orderings, at least half of the ordered
    (small edge, large edge) choices are good."""
    from .counting import good_choice_fraction, zeta
    rng = make_rng(seed)
    k = 2
    fails = checked = 0
    lowest = None
    for n in sizes:
        degrees, _, kept = _window_graphs(rng, n, Fraction(gamma), samples, k)
        z = zeta(Fraction(xi), max(degrees))
        for i, G in enumerate(kept):
            for _ in range(orders):
                seq = tuple(G.pairs[j] for j in rng.permutation(G.m))
                good, total = good_choice_fraction(seq, degrees, k, z)
                ok = total == 0 or 2 * good >= total
                checked += 1
                fails += not ok
                frac = Fraction(good, total) if total else Fraction(1)
                lowest = frac if lowest is None else min(lowest, frac)
                yield record(f"n{n}-g{i}", "good-choices", None, frac, ok)
    yield {"summary": "good-choices", "orderings": checked, "min_fraction": _fmt(lowest),
           "failures": fails, "pass": fails == 0}


SUITES = {
    "cluster-switch": suite_cluster_switch,
    "twin-identities": suite_twin_identities,
    "twin-partition": suite_twin_partition,
    "sequence-switch": suite_sequence_switch,
    "counterparts": suite_counterparts,
    "pattern-injection": suite_pattern_injection,
    "cluster-counts": suite_cluster_counts,
    "small-edge-drift": suite_small_edge_drift,
    "good-clusters": suite_good_clusters,
    "count-ratio": suite_count_ratio,
    "good-choices": suite_good_choices,
}


def run_suite(name: str, **params) -> Iterator[dict]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    yield from SUITES[name](**params)

"""Cluster counts per graph, good edge-sequences and good clusters."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, floor

from ..confgraph import ConfigGraph, edge_class_counts, small_edge_count
from ..degseq import small_degree_sum
from ..exact import good_mass, graph_weight, positions, sequence_weight
from .anchor import SwitchAnchor
from .clusters import Cluster


def count_upper(G: ConfigGraph, k: int) -> int:
    """Closed form: four orientations per (small edge, large edge) pair."""
    ell = small_edge_count(G, k)
    s = small_degree_sum(G.degrees, k)
    return 4 * ell * (ell + G.m - s)


def count_upper_bruteforce(G: ConfigGraph, k: int) -> int:
    d = G.degrees
    total = 0
    for p, q in G.pairs:
        for a, b in ((p, q), (q, p)):
            if d[a.vertex] > k or d[b.vertex] > k:
                continue
            for r, s in G.pairs:
                for x, y in ((r, s), (s, r)):
                    if d[x.vertex] > k and d[y.vertex] > k:
                        total += 1
    return total


def count_lower(G: ConfigGraph, k: int) -> int:
    """Ordered pairs of mixed edges on four distinct vertices."""
    d = G.degrees
    mixed = []
    for p, q in G.pairs:
        lo, hi = (p, q) if d[p.vertex] <= k else (q, p)
        if d[lo.vertex] <= k < d[hi.vertex]:
            mixed.append((lo.vertex, hi.vertex))
    pairs = sum(1 for (A, X), (B, Y) in itertools.combinations(mixed, 2) if A != B and X != Y)
    return 2 * pairs


def count_lower_bruteforce(G: ConfigGraph, k: int) -> int:
    """Literal count of point choices (a, b, x, y) with ax, by in G."""
    d = G.degrees
    pts = [p for e in G.pairs for p in e]
    total = 0
    for a, x, b, y in itertools.product(pts, repeat=4):
        if not (d[a.vertex] <= k and d[b.vertex] <= k and d[x.vertex] > k and d[y.vertex] > k):
            continue
        if a.vertex == b.vertex or x.vertex == y.vertex:
            continue
        if G.partner.get(a) == x and G.partner.get(b) == y:
            total += 1
    return total


def lower_count_bounds(G: ConfigGraph, k: int) -> tuple[int, int]:
    """Bounds on half the lower count in terms of the number of mixed edges."""
    ell = small_edge_count(G, k)
    mixed = small_degree_sum(G.degrees, k) - 2 * ell
    delta = max(G.degrees)
    return comb(mixed, 2) - mixed * 2 * delta, comb(mixed, 2)


def mixed_edge_count(G: ConfigGraph, k: int) -> int:
    return edge_class_counts(G, k)["mixed"]


# -- good edge-sequences --------------------------------------------------------------

def zeta(xi, max_degree: int) -> Fraction:
    xi = Fraction(xi)
    return xi * xi / (16 * max_degree ** 3)


def early_cutoff(m: int, z) -> int:
    return floor((1 - Fraction(z)) * m)


def _touches_anchor_sides(G: ConfigGraph, anchor: SwitchAnchor) -> bool:
    A, B, X, Y = anchor.vertices
    low, high = {A, B}, {X, Y}
    for p, q in G.pairs:
        if (p.vertex in low and q.vertex in high) or (p.vertex in high and q.vertex in low):
            return True
    return False


def is_good_sequence(seq, degrees, anchor: SwitchAnchor, z) -> bool:
    """Anchor sides non-adjacent, and A, B saturated within the early cutoff."""
    G = ConfigGraph(degrees, tuple(seq))
    if _touches_anchor_sides(G, anchor):
        return False
    m = len(seq)
    cut = early_cutoff(m, z)
    pos = positions(seq)
    A, B = anchor.a.vertex, anchor.b.vertex
    done_a = max(pos[(A, c)] for c in range(degrees[A]))
    done_b = max(pos[(B, c)] for c in range(degrees[B]))
    return done_a <= cut and done_b <= cut


def good_weight(G: ConfigGraph, anchor: SwitchAnchor, z) -> tuple[Fraction, Fraction]:
    """(weight of good orderings of G, total weight of G)."""
    if _touches_anchor_sides(G, anchor):
        return Fraction(0), graph_weight(G)
    A, B = anchor.a.vertex, anchor.b.vertex
    early = [i for i, (p, q) in enumerate(G.pairs) if {p.vertex, q.vertex} & {A, B}]
    return good_mass(G, early, early_cutoff(G.m, z))


def good_weight_bruteforce(G: ConfigGraph, anchor: SwitchAnchor, z) -> tuple[Fraction, Fraction]:
    good = total = Fraction(0)
    for order in itertools.permutations(G.pairs):
        w = sequence_weight(order, G.degrees)
        total += w
        if is_good_sequence(order, G.degrees, anchor, z):
            good += w
    return good, total


def cluster_good_fraction(C: Cluster, z, bruteforce: bool = False) -> tuple[Fraction, Fraction]:
    if C.kind != "upper":
        raise ValueError("goodness is defined for upper clusters")
    fn = good_weight_bruteforce if bruteforce else good_weight
    good = total = Fraction(0)
    for g in C.members:
        a, b = fn(g, C.anchor, z)
        good += a
        total += b
    return good, total


def is_good_cluster(C: Cluster, z, bruteforce: bool = False) -> bool:
    good, total = cluster_good_fraction(C, z, bruteforce)
    return 4 * good >= total


def good_choice_fraction(seq, degrees, k: int, z) -> tuple[int, int]:
    """(good ordered (small, large) edge choices, all such choices) for one sequence."""
    G = ConfigGraph(degrees, tuple(seq))
    d = G.degrees
    cut = early_cutoff(len(seq), z)
    pos = positions(seq)
    sat = [0] * len(d)
    for p, i in pos.items():
        sat[p.vertex] = max(sat[p.vertex], i)
    adj = [set() for _ in d]
    for p, q in G.pairs:
        adj[p.vertex].add(q.vertex)
        adj[q.vertex].add(p.vertex)
    small = [(p.vertex, q.vertex) for p, q in G.pairs if d[p.vertex] <= k and d[q.vertex] <= k]
    large = [(p.vertex, q.vertex) for p, q in G.pairs if d[p.vertex] > k and d[q.vertex] > k]
    good = 0
    for A, B in small:
        if sat[A] > cut or sat[B] > cut:
            continue
        near = adj[A] | adj[B]
        good += sum(1 for X, Y in large if X not in near and Y not in near)
    return 4 * good, 4 * len(small) * len(large)

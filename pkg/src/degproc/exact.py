"""Exact probability engine for small instances.

Everything here is rational arithmetic. Trajectory weights depend on a
prefix only through its edge *set*, so sums over orderings are computed by
a forward dynamic program over bitmasks of the graph's edges.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterable, Sequence

from .confgraph import ConfigGraph, MultiGraph, Point, points_of
from .degseq import as_sequence

SUBSET_DP_MAX_EDGES = 24
PERMUTATION_MAX_EDGES = 10


class BudgetExceeded(RuntimeError):
    pass


class MalformedSequence(ValueError):
    pass


def _vertex(e) -> tuple[int, int]:
    """Vertex pair of an edge given either as a point pair or a vertex pair."""
    p, q = e
    if isinstance(p, tuple):
        return p[0], q[0]
    return p, q


# -- profiles and single-sequence weights -----------------------------------

def gamma_profile(seq: Sequence, degrees: Sequence[int]) -> list[int]:
    """Unsaturated-vertex counts ``[G_0, ..., G_m]`` along an edge sequence."""
    load = [0] * len(degrees)
    unsat = sum(1 for d in degrees if d > 0)
    out = [unsat]
    for e in seq:
        for v in _vertex(e):
            load[v] += 1
            if load[v] > degrees[v]:
                raise MalformedSequence(f"vertex {v} exceeds its degree")
            if load[v] == degrees[v]:
                unsat -= 1
        out.append(unsat)
    return out


def sequence_weight(seq: Sequence, degrees: Sequence[int]) -> Fraction:
    """Product over steps of ``2 / (G_i (G_i - 1))`` for a complete edge sequence."""
    prof = gamma_profile(seq, degrees)
    if prof[-1] != 0:
        raise MalformedSequence("sequence does not saturate every vertex")
    den = 1
    for g in prof[:-1]:
        if g < 2:
            raise MalformedSequence("fewer than two unsaturated vertices before a step")
        den *= g * (g - 1) // 2
    return Fraction(1, den)


def relaxed_sequence_probability(seq: Sequence, degrees: Sequence[int]) -> Fraction:
    """Probability that the relaxed process picks exactly these point pairs in this order."""
    return sequence_weight(seq, degrees) / prod(factorial(d) for d in degrees)


# -- subset dynamic programs --------------------------------------------------

def _forward(vedges: tuple, degrees: tuple, step_weight) -> list[Fraction]:
    """``F[S]`` = sum over orderings of ``S`` of the product of step weights."""
    m = len(vedges)
    if m > SUBSET_DP_MAX_EDGES:
        raise BudgetExceeded(f"subset DP refuses m={m} > {SUBSET_DP_MAX_EDGES}")
    F: list = [0] * (1 << m)
    F[0] = Fraction(1)
    n = len(degrees)
    for S in range(1 << m):
        f = F[S]
        if not f:
            continue
        load = [0] * n
        for i in range(m):
            if S >> i & 1:
                u, v = vedges[i]
                load[u] += 1
                load[v] += 1
        w = step_weight(S, load)
        if w is None:
            continue
        g = f * w
        for i in range(m):
            if not S >> i & 1:
                T = S | (1 << i)
                F[T] = F[T] + g
    return F


def _backward(vedges: tuple, degrees: tuple, step_weight) -> list[Fraction]:
    """``B[S]`` = sum over orderings of the complement of ``S``, starting from prefix ``S``."""
    m = len(vedges)
    if m > SUBSET_DP_MAX_EDGES:
        raise BudgetExceeded(f"subset DP refuses m={m} > {SUBSET_DP_MAX_EDGES}")
    full = (1 << m) - 1
    B: list = [Fraction(0)] * (1 << m)
    B[full] = Fraction(1)
    n = len(degrees)
    for S in range(full - 1, -1, -1):
        load = [0] * n
        for i in range(m):
            if S >> i & 1:
                u, v = vedges[i]
                load[u] += 1
                load[v] += 1
        w = step_weight(S, load)
        if w is None:
            continue
        acc = 0
        for i in range(m):
            if not S >> i & 1:
                acc += B[S | (1 << i)]
        B[S] = w * acc
    return B


def _relaxed_step(degrees):
    def weight(S, load):
        g = sum(1 for v, d in enumerate(degrees) if load[v] < d)
        if g < 2:
            return None
        return Fraction(2, g * (g - 1))
    return weight


def _standard_step(degrees, vedges):
    n = len(degrees)
    m = len(vedges)

    def weight(S, load):
        adj = {vedges[i] for i in range(m) if S >> i & 1}
        unsat = [v for v in range(n) if load[v] < degrees[v]]
        q = sum(1 for a, b in itertools.combinations(unsat, 2) if (a, b) not in adj)
        if q == 0:
            return None
        return Fraction(1, q)
    return weight


@lru_cache(maxsize=200_000)
def _weight_of_multigraph(degrees: tuple, vedges: tuple) -> Fraction:
    F = _forward(vedges, degrees, _relaxed_step(degrees))
    return F[-1]


def graph_weight(G: ConfigGraph) -> Fraction:
    """Sum of trajectory weights over all orderings of the edges of ``G``.

    The value depends on ``G`` only through its projection, so results are
    cached on the sorted vertex-edge list.
    """
    if not G.is_complete:
        raise ValueError("graph weight needs a complete configuration-graph")
    return _weight_of_multigraph(G.degrees, tuple(sorted(G.vertex_edges())))


def graph_weight_bruteforce(G: ConfigGraph, max_edges: int = PERMUTATION_MAX_EDGES) -> Fraction:
    """Literal sum over all ``m!`` orderings (depth-first, shared prefixes)."""
    if not G.is_complete:
        raise ValueError("graph weight needs a complete configuration-graph")
    vedges = G.vertex_edges()
    m = len(vedges)
    if m > max_edges:
        raise BudgetExceeded(f"permutation sum refuses m={m} > {max_edges}")
    degrees = list(G.degrees)
    load = [0] * len(degrees)
    used = [False] * m
    tally: Counter = Counter()

    def rec(depth, unsat, den):
        if depth == m:
            tally[den] += 1
            return
        step_den = den * (unsat * (unsat - 1) // 2)
        for i in range(m):
            if used[i]:
                continue
            u, v = vedges[i]
            used[i] = True
            load[u] += 1
            load[v] += 1
            drop = (load[u] == degrees[u]) + (load[v] == degrees[v])
            rec(depth + 1, unsat - drop, step_den)
            load[u] -= 1
            load[v] -= 1
            used[i] = False

    rec(0, sum(1 for d in degrees if d > 0), 1)
    return sum((Fraction(c, den) for den, c in tally.items()), Fraction(0))


def relaxed_probability(G: ConfigGraph) -> Fraction:
    """Unconditional probability that the relaxed process ends in exactly ``G``."""
    return graph_weight(G) / prod(factorial(d) for d in G.degrees)


def standard_probability(G, degrees=None) -> Fraction:
    """Probability that the standard process builds exactly the simple graph ``G``."""
    if isinstance(G, ConfigGraph):
        degrees, vedges = G.degrees, G.vertex_edges()
    else:
        vedges = list(G.edges)
        degrees = tuple(degrees) if degrees is not None else G.target_degrees()
    vedges = tuple(sorted(vedges))
    if len(set(vedges)) != len(vedges):
        raise ValueError("standard process only produces simple graphs")
    loads = Counter(v for e in vedges for v in e)
    if any(loads[v] != d for v, d in enumerate(degrees)):
        raise ValueError("graph does not have the requested degree sequence")
    return _standard_probability(tuple(degrees), vedges)


@lru_cache(maxsize=100_000)
def _standard_probability(degrees: tuple, vedges: tuple) -> Fraction:
    F = _forward(vedges, degrees, _standard_step(degrees, vedges))
    return F[-1]


def standard_probability_bruteforce(G: MultiGraph, degrees=None,
                                    max_edges: int = PERMUTATION_MAX_EDGES) -> Fraction:
    degrees = tuple(degrees) if degrees is not None else G.target_degrees()
    vedges = list(G.edges)
    if len(vedges) > max_edges:
        raise BudgetExceeded("too many edges for permutation sum")
    n = len(degrees)
    total = Fraction(0)
    for order in itertools.permutations(vedges):
        load = [0] * n
        present: set = set()
        p = Fraction(1)
        for e in order:
            unsat = [v for v in range(n) if load[v] < degrees[v]]
            q = sum(1 for a, b in itertools.combinations(unsat, 2) if (a, b) not in present)
            p /= q
            present.add(e)
            load[e[0]] += 1
            load[e[1]] += 1
        total += p
    return total


def good_mass(G: ConfigGraph, early_edges: Iterable[int], cutoff: int) -> tuple[Fraction, Fraction]:
    """Weight of orderings placing every edge index in ``early_edges`` within the first ``cutoff`` steps.

    Returns ``(restricted_weight, total_weight)``.
    """
    vedges = tuple(G.vertex_edges())
    step = _relaxed_step(G.degrees)
    F = _forward(vedges, G.degrees, step)
    B = _backward(vedges, G.degrees, step)
    need = 0
    for i in early_edges:
        need |= 1 << i
    mass = Fraction(0)
    for S in range(1 << len(vedges)):
        if bin(S).count("1") == cutoff and S & need == need and F[S]:
            mass += F[S] * B[S]
    return mass, F[-1]


# -- enumeration of outcomes ----------------------------------------------------

def enumerate_config_graphs(degrees) -> list[ConfigGraph]:
    """All complete configuration-graphs (perfect matchings without intra-vertex pairs)."""
    degrees = tuple(as_sequence(degrees).degrees) if not isinstance(degrees, tuple) else degrees
    pts = points_of(degrees)
    if len(pts) % 2:
        return []
    out: list[ConfigGraph] = []

    def rec(remaining: list[Point], acc: list):
        if not remaining:
            out.append(ConfigGraph(degrees, tuple(acc)))
            return
        p = remaining[0]
        for j in range(1, len(remaining)):
            q = remaining[j]
            if q.vertex == p.vertex:
                continue
            acc.append((p, q))
            rec(remaining[1:j] + remaining[j + 1:], acc)
            acc.pop()

    rec(pts, [])
    return out


def enumerate_simple_graphs(degrees, limit: int = 200_000) -> list[MultiGraph]:
    """All simple labelled graphs with the given degree sequence."""
    degrees = tuple(degrees) if not hasattr(degrees, "degrees") else degrees.degrees
    n = len(degrees)
    out: list[MultiGraph] = []
    residual = list(degrees)

    def rec(v: int, edges: list):
        if v == n:
            out.append(MultiGraph(n, tuple(edges), degrees=tuple(degrees)))
            if len(out) > limit:
                raise BudgetExceeded("too many simple graphs to enumerate")
            return
        need = residual[v]
        later = [w for w in range(v + 1, n) if residual[w] > 0]
        if need > len(later):
            return
        for chosen in itertools.combinations(later, need):
            for w in chosen:
                residual[w] -= 1
            residual[v] = 0
            rec(v + 1, edges + [(v, w) for w in chosen])
            residual[v] = need
            for w in chosen:
                residual[w] += 1

    rec(0, [])
    return out


def standard_outcomes(degrees, max_states: int = 2_000_000) -> dict[frozenset, Fraction]:
    """Exact law of the final edge set of the standard process (complete or stuck)."""
    degrees = tuple(degrees) if not hasattr(degrees, "degrees") else degrees.degrees
    n = len(degrees)
    layer: dict[frozenset, Fraction] = {frozenset(): Fraction(1)}
    final: dict[frozenset, Fraction] = defaultdict(Fraction)
    seen = 0
    while layer:
        nxt: dict[frozenset, Fraction] = defaultdict(Fraction)
        for edges, p in layer.items():
            load = [0] * n
            for u, v in edges:
                load[u] += 1
                load[v] += 1
            unsat = [v for v in range(n) if load[v] < degrees[v]]
            options = [(a, b) for a, b in itertools.combinations(unsat, 2) if (a, b) not in edges]
            if not options:
                final[edges] += p
                continue
            share = p / len(options)
            for e in options:
                nxt[edges | {e}] += share
        seen += len(nxt)
        if seen > max_states:
            raise BudgetExceeded("standard-process state space too large")
        layer = nxt
    return dict(final)


def relaxed_load_outcomes(degrees, max_states: int = 2_000_000) -> dict[tuple, Fraction]:
    """Exact law of the final load vector of the relaxed process.

    Transitions depend only on which vertices are unsaturated, so the load
    vector is a sufficient state.
    """
    degrees = tuple(degrees) if not hasattr(degrees, "degrees") else degrees.degrees
    n = len(degrees)
    layer: dict[tuple, Fraction] = {tuple([0] * n): Fraction(1)}
    final: dict[tuple, Fraction] = defaultdict(Fraction)
    seen = 0
    while layer:
        nxt: dict[tuple, Fraction] = defaultdict(Fraction)
        for load, p in layer.items():
            unsat = [v for v in range(n) if load[v] < degrees[v]]
            g = len(unsat)
            if g < 2:
                final[load] += p
                continue
            share = p * Fraction(2, g * (g - 1))
            for a, b in itertools.combinations(unsat, 2):
                new = list(load)
                new[a] += 1
                new[b] += 1
                nxt[tuple(new)] += share
        seen += len(nxt)
        if seen > max_states:
            raise BudgetExceeded("relaxed-process state space too large")
        layer = nxt
    return dict(final)


def completion_probability(degrees, variant: str = "standard", max_states: int = 2_000_000) -> Fraction:
    """Exact probability that the unconditioned process saturates every vertex."""
    degrees = tuple(degrees) if not hasattr(degrees, "degrees") else degrees.degrees
    if variant == "standard":
        outs = standard_outcomes(degrees, max_states)
        return sum((p for es, p in outs.items() if len(es) * 2 == sum(degrees)), Fraction(0))
    if variant == "relaxed":
        outs = relaxed_load_outcomes(degrees, max_states)
        return sum((p for load, p in outs.items() if list(load) == list(degrees)), Fraction(0))
    raise ValueError(f"unknown variant {variant!r}")


# -- saturation times ------------------------------------------------------------

@dataclass(frozen=True)
class SaturationTimes:
    t_a: int
    t_b: int
    t_x: int
    t_y: int

    def as_tuple(self):
        return (self.t_a, self.t_b, self.t_x, self.t_y)


def positions(seq: Sequence) -> dict[Point, int]:
    """1-based step at which each point is matched."""
    pos = {}
    for i, (p, q) in enumerate(seq, start=1):
        pos[p if type(p) is Point else Point(*p)] = i
        pos[q if type(q) is Point else Point(*q)] = i
    return pos


def last_other_time(seq: Sequence, point, degree: int, pos=None) -> int:
    """Last step at which a point of ``point``'s vertex other than ``point`` is matched (0 if none)."""
    pos = positions(seq) if pos is None else pos
    point = Point(*point)
    if point not in pos:
        raise KeyError(f"point {point} not in sequence")
    others = [pos[Point(point.vertex, c)] for c in range(degree) if c != point.copy]
    return max(others, default=0)


def saturation_times(seq: Sequence, degrees: Sequence[int], a, b, x, y) -> SaturationTimes:
    pos = positions(seq)
    return SaturationTimes(*(last_other_time(seq, p, degrees[p[0]], pos) for p in (a, b, x, y)))


# -- distances --------------------------------------------------------------------

def tv_distance(degrees, limit: int = 200_000) -> Fraction:
    """Exact total-variation distance between the conditioned standard process and the uniform law."""
    degrees = tuple(degrees) if not hasattr(degrees, "degrees") else degrees.degrees
    graphs = enumerate_simple_graphs(degrees, limit)
    if not graphs:
        raise ValueError("degree sequence is not graphic")
    probs = [standard_probability(G, degrees) for G in graphs]
    c = sum(probs)
    uni = Fraction(1, len(graphs))
    return sum((abs(p / c - uni) for p in probs), Fraction(0)) / 2


# -- rendering ----------------------------------------------------------------

def render(q: Fraction, digits: int = 6) -> dict:
    """Exact ``"p/q"`` string plus a round-half-even decimal rendering."""
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = max(50, digits + 30)
        dec = (Decimal(q.numerator) / Decimal(q.denominator)).quantize(
            Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN)
    return {"exact": f"{q.numerator}/{q.denominator}", "decimal": str(dec)}

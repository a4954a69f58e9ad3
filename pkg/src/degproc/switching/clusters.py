"""Clusters: classes of configuration-graphs that agree away from the anchor
vertices, and the member-wise switching-partner map between them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..confgraph import ConfigGraph, Point, neighbors, points_of
from ..exact import graph_weight
from .anchor import AnchorError, SwitchAnchor, kind_of

MAX_CLUSTER_MEMBERS = 200_000


@dataclass(frozen=True)
class Cluster:
    kind: str
    anchor: SwitchAnchor
    degrees: tuple
    members: frozenset

    def __len__(self):
        return len(self.members)

    def sorted_members(self) -> list[ConfigGraph]:
        return sorted(self.members, key=lambda g: g.pairs)


def _anchor_pairs(anchor: SwitchAnchor, kind: str):
    return anchor.upper_edges() if kind == "upper" else anchor.lower_edges()


def cluster_key(G: ConfigGraph, anchor: SwitchAnchor) -> tuple:
    """Invariant shared by exactly the members of one cluster (given the kind)."""
    core = set(anchor.vertices)
    outside = tuple(e for e in G.pairs if e[0].vertex not in core and e[1].vertex not in core)
    ext = frozenset(neighbors(G, points_of(G.degrees, sorted(core))))
    return outside, ext


def _perfect_matchings(pts: list[Point]):
    """All matchings of ``pts`` with no pair inside one vertex."""
    if not pts:
        yield []
        return
    p = pts[0]
    for j in range(1, len(pts)):
        q = pts[j]
        if q.vertex == p.vertex:
            continue
        rest = pts[1:j] + pts[j + 1:]
        for m in _perfect_matchings(rest):
            yield [(p, q)] + m


def enumerate_cluster(G: ConfigGraph, anchor: SwitchAnchor, kind: str | None = None,
                      limit: int = MAX_CLUSTER_MEMBERS) -> Cluster:
    """Every completion that keeps the outside edges, the anchor pair and the
    external neighbour points of the anchor vertices."""
    anchor.validate(G.degrees)
    actual = kind_of(G, anchor)
    if actual is None or (kind is not None and kind != actual):
        raise AnchorError(f"graph does not contain the {kind or 'anchor'} edges")
    kind = actual
    core = set(anchor.vertices)
    fixed = list(_anchor_pairs(anchor, kind))
    outside, ext = cluster_key(G, anchor)
    used = {anchor.a, anchor.b, anchor.x, anchor.y}
    free = [p for p in points_of(G.degrees, sorted(core)) if p not in used]
    ext = sorted(ext)
    base = list(outside) + fixed
    members = set()
    for slots in itertools.permutations(free, len(ext)):
        joined = [(e, s) for e, s in zip(ext, slots)]
        taken = set(slots)
        rest = [p for p in free if p not in taken]
        for m in _perfect_matchings(rest):
            members.add(ConfigGraph(G.degrees, tuple(base + joined + m)))
            if len(members) > limit:
                raise AnchorError("cluster too large to enumerate")
    return Cluster(kind, anchor, G.degrees, frozenset(members))


def _replace_all(members, remove, add):
    return frozenset(g.replace(remove, add) for g in members)


def switching_partner(C: Cluster) -> Cluster:
    """Member-wise ab, xy -> ax, by (or the reverse for a lower cluster)."""
    up, low = C.anchor.upper_edges(), C.anchor.lower_edges()
    if C.kind == "upper":
        return Cluster("lower", C.anchor, C.degrees, _replace_all(C.members, up, low))
    return Cluster("upper", C.anchor, C.degrees, _replace_all(C.members, low, up))


def cluster_weight(C: Cluster) -> Fraction:
    return sum((graph_weight(g) for g in C.members), Fraction(0))


# -- representative clusters for exhaustive sweeps ----------------------------------

def _loopless_multigraphs(caps: list[int], max_edges: int):
    """Multisets of vertex pairs on ``range(len(caps))`` with degree at most ``caps``."""
    pairs = list(itertools.combinations(range(len(caps)), 2))

    def rec(i, load, acc):
        yield list(acc)
        if len(acc) == max_edges:
            return
        for j in range(i, len(pairs)):
            u, v = pairs[j]
            if load[u] < caps[u] and load[v] < caps[v]:
                load[u] += 1
                load[v] += 1
                acc.append(pairs[j])
                yield from rec(j, load, acc)
                acc.pop()
                load[u] -= 1
                load[v] -= 1

    yield from rec(0, [0] * len(caps), [])


def _nonincreasing(total: int, max_part: int, min_part: int = 1):
    """Non-increasing tuples of parts in [min_part, max_part] summing to at most ``total``."""
    def rec(left, cap):
        yield ()
        for p in range(min(cap, left), min_part - 1, -1):
            for rest in rec(left - p, p):
                yield (p,) + rest
    yield from rec(total, max_part)


def representative_clusters(max_edges: int, max_degree: int):
    """One upper cluster from each relabelling class with at most ``max_edges`` edges.

    Vertices 0..3 are A, B, X, Y with anchor points at copy 0.  Outside vertices
    carry an arbitrary loopless multigraph ``H``; their leftover points are the
    external neighbours of the anchor vertices.  Permuting copies inside a vertex
    maps clusters to clusters and preserves every trajectory weight, so each
    cluster is equivalent to one of these.
    """
    total = 2 * max_edges
    for dA, dB, dX, dY in itertools.product(range(1, max_degree + 1), repeat=4):
        if max(dA, dB) >= min(dX, dY):
            continue
        core_pts = dA + dB + dX + dY
        if core_pts > total:
            continue
        free = core_pts - 4
        for out in _nonincreasing(total - core_pts, max_degree):
            if (core_pts + sum(out)) % 2:
                continue
            degrees = (dA, dB, dX, dY) + out
            for H in _loopless_multigraphs(list(out), (total - core_pts) // 2):
                load = [0] * len(out)
                for u, v in H:
                    load[u] += 1
                    load[v] += 1
                ext = [Point(4 + i, c) for i, d in enumerate(out) for c in range(load[i], d)]
                if len(ext) > free or (free - len(ext)) % 2:
                    continue
                G = _seed_member(degrees, H, ext)
                if G is not None:
                    yield G, SwitchAnchor((0, 0), (1, 0), (2, 0), (3, 0))


def _seed_member(degrees, H, ext):
    used = [0] * len(degrees)
    for v in range(4):
        used[v] = 1
    pairs = [((0, 0), (1, 0)), ((2, 0), (3, 0))]
    for u, v in H:
        u, v = u + 4, v + 4
        pairs.append(((u, used[u]), (v, used[v])))
        used[u] += 1
        used[v] += 1
    free = [Point(v, c) for v in range(4) for c in range(1, degrees[v])]
    for slots in itertools.permutations(free, len(ext)):
        rest = [p for p in free if p not in set(slots)]
        for m in _perfect_matchings(rest):
            return ConfigGraph(degrees, tuple(pairs + list(zip(ext, slots)) + m))
    return None

"""Configuration-graphs (point-level matchings) and their multigraph projections.

Points are ``Point(vertex, copy)`` with 0-based vertex and copy indices.
The text formats are 1-based: a matched pair is written ``i.p-j.q``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .degseq import DegreeSequence, parse_degrees


class GraphError(ValueError):
    pass


class Point(NamedTuple):
    vertex: int
    copy: int

    def token(self) -> str:
        return f"{self.vertex + 1}.{self.copy + 1}"


PointPair = tuple[Point, Point]


def _degree_tuple(degrees) -> tuple[int, ...]:
    if isinstance(degrees, DegreeSequence):
        return degrees.degrees
    if isinstance(degrees, str):
        return parse_degrees(degrees).degrees
    return tuple(int(x) for x in degrees)


def make_pair(p, q) -> PointPair:
    if type(p) is not Point:
        p = Point(*p)
    if type(q) is not Point:
        q = Point(*q)
    return (p, q) if p <= q else (q, p)


def points_of(degrees: Iterable[int], vertices: Iterable[int] | None = None) -> list[Point]:
    degrees = tuple(degrees)
    vs = range(len(degrees)) if vertices is None else vertices
    return [Point(v, c) for v in vs for c in range(degrees[v])]


@dataclass(frozen=True)
class ConfigGraph:
    """A partial or perfect matching of points with no intra-vertex pairs.

    Pairs are normalized (``p < q`` within a pair, pairs sorted) so that
    equality and hashing are structural.
    """

    degrees: tuple[int, ...]
    pairs: tuple[PointPair, ...] = ()

    def __post_init__(self):
        degs = _degree_tuple(self.degrees)
        pairs = tuple(sorted(make_pair(p, q) for p, q in self.pairs))
        seen: set[Point] = set()
        for p, q in pairs:
            for pt in (p, q):
                if not (0 <= pt.vertex < len(degs) and 0 <= pt.copy < degs[pt.vertex]):
                    raise GraphError(f"point {pt} outside degree bounds")
                if pt in seen:
                    raise GraphError(f"point {pt} matched twice")
                seen.add(pt)
            if p.vertex == q.vertex:
                raise GraphError(f"pair {p}-{q} joins points of one vertex")
        object.__setattr__(self, "degrees", degs)
        object.__setattr__(self, "pairs", pairs)

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def m(self) -> int:
        return len(self.pairs)

    @property
    def is_complete(self) -> bool:
        return 2 * len(self.pairs) == sum(self.degrees)

    @cached_property
    def partner(self) -> dict[Point, Point]:
        out = {}
        for p, q in self.pairs:
            out[p] = q
            out[q] = p
        return out

    @cached_property
    def pair_set(self) -> frozenset[PointPair]:
        return frozenset(self.pairs)

    def has_pair(self, p, q) -> bool:
        return make_pair(p, q) in self.pair_set

    def vertex_edges(self) -> list[tuple[int, int]]:
        return [(min(p.vertex, q.vertex), max(p.vertex, q.vertex)) for p, q in self.pairs]

    def replace(self, remove: Iterable[PointPair], add: Iterable[PointPair]) -> "ConfigGraph":
        drop = {make_pair(*e) for e in remove}
        missing = drop - self.pair_set
        if missing:
            raise GraphError(f"pairs not present: {sorted(missing)}")
        kept = [e for e in self.pairs if e not in drop]
        return ConfigGraph(self.degrees, tuple(kept) + tuple(make_pair(*e) for e in add))


@dataclass(frozen=True)
class MultiGraph:
    """Loopless multigraph on ``range(n)``; edges are sorted vertex pairs with repetition."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    degrees: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        es = []
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u},{v}) outside vertex range")
            es.append((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", tuple(sorted(es)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree_vector(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    def target_degrees(self) -> tuple[int, ...]:
        return self.degrees if self.degrees is not None else self.degree_vector()

    def multiplicities(self) -> Counter:
        return Counter(self.edges)

    def is_simple(self) -> bool:
        return len(set(self.edges)) == len(self.edges)


def project(G: ConfigGraph) -> MultiGraph:
    """Contract each vertex's points to a single vertex."""
    return MultiGraph(G.n, tuple(G.vertex_edges()), degrees=G.degrees)


def _edges_and_degrees(G, degrees=None):
    if isinstance(G, ConfigGraph):
        return G.vertex_edges(), G.degrees
    if isinstance(G, MultiGraph):
        return list(G.edges), tuple(degrees) if degrees is not None else G.target_degrees()
    raise TypeError(f"unsupported graph type {type(G).__name__}")


def small_edge_count(G, k: int, degrees=None) -> int:
    """Number of edges (with multiplicity) whose endpoints both have degree at most ``k``."""
    edges, degs = _edges_and_degrees(G, degrees)
    return sum(1 for u, v in edges if degs[u] <= k and degs[v] <= k)


def classify_edge(G, e, k: int, degrees=None) -> str:
    """Return ``"small"``, ``"large"`` or ``"mixed"`` for an edge of ``G``.

    ``e`` may be a vertex pair or (for configuration-graphs) a point pair.
    """
    edges, degs = _edges_and_degrees(G, degrees)
    p, q = e
    if isinstance(p, tuple):
        if not isinstance(G, ConfigGraph) or not G.has_pair(p, q):
            raise GraphError(f"pair {e} not in graph")
        u, v = p[0], q[0]
    else:
        u, v = p, q
        if (min(u, v), max(u, v)) not in set(edges):
            raise GraphError(f"edge {e} not in graph")
    lo_u, lo_v = degs[u] <= k, degs[v] <= k
    if lo_u and lo_v:
        return "small"
    if not lo_u and not lo_v:
        return "large"
    return "mixed"


def edge_class_counts(G, k: int, degrees=None) -> dict[str, int]:
    edges, degs = _edges_and_degrees(G, degrees)
    out = {"small": 0, "large": 0, "mixed": 0}
    for u, v in edges:
        s = (degs[u] <= k) + (degs[v] <= k)
        out[("large", "mixed", "small")[s]] += 1
    return out


def neighbors(G: ConfigGraph, S: Iterable) -> set[Point]:
    """Points outside ``S`` matched to some point of ``S``."""
    S = {Point(*p) for p in S}
    out = set()
    for p in S:
        q = G.partner.get(p)
        if q is not None and q not in S:
            out.add(q)
    return out


def vertex_points(G: ConfigGraph, vertices: Iterable[int]) -> set[Point]:
    return set(points_of(G.degrees, vertices))


# -- text formats ----------------------------------------------------------

def _parse_point(tok: str) -> Point:
    i, p = tok.split(".")
    return Point(int(i) - 1, int(p) - 1)


def format_config(G: ConfigGraph) -> str:
    """Degree header line followed by one line of ``i.p-j.q`` tokens."""
    body = " ".join(f"{p.token()}-{q.token()}" for p, q in G.pairs)
    return " ".join(map(str, G.degrees)) + "\n" + body + "\n"


def parse_config(text: str) -> ConfigGraph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphError("missing degree header")
    degs = parse_degrees(lines[0]).degrees
    pairs = []
    for ln in lines[1:]:
        for tok in ln.split():
            a, b = tok.split("-")
            pairs.append((_parse_point(a), _parse_point(b)))
    return ConfigGraph(degs, tuple(pairs))


def format_edge_list(G: MultiGraph) -> str:
    head = f"# n {G.n}\n"
    return head + "".join(f"{u + 1} {v + 1}\n" for u, v in G.edges)


def parse_edge_list(text: str, n: int | None = None) -> MultiGraph:
    edges = []
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln:
            continue
        if ln.startswith("#"):
            parts = ln[1:].split()
            if len(parts) == 2 and parts[0] == "n" and n is None:
                n = int(parts[1])
            continue
        u, v = ln.split()[:2]
        edges.append((int(u) - 1, int(v) - 1))
    if n is None:
        n = 1 + max((max(e) for e in edges), default=-1)
    return MultiGraph(n, tuple(edges))


def from_vertex_edges(degrees, edges) -> ConfigGraph:
    """Build a configuration-graph from vertex pairs, using copies in increasing order."""
    degs = _degree_tuple(degrees)
    used = [0] * len(degs)
    pairs = []
    for u, v in edges:
        pairs.append((Point(u, used[u]), Point(v, used[v])))
        used[u] += 1
        used[v] += 1
    return ConfigGraph(degs, tuple(pairs))


__all__ = [
    "ConfigGraph", "DegreeSequence", "GraphError", "MultiGraph", "Point",
    "classify_edge", "edge_class_counts", "format_config", "format_edge_list",
    "from_vertex_edges", "make_pair", "neighbors", "parse_config", "parse_edge_list",
    "points_of", "project", "small_edge_count", "vertex_points",
]

"""Switch anchors (a, b, x, y) and the two-edge switch ab, xy -> ax, by."""

from __future__ import annotations

from dataclasses import dataclass

from ..confgraph import ConfigGraph, GraphError, Point, make_pair


class AnchorError(ValueError):
    pass


@dataclass(frozen=True)
class SwitchAnchor:
    """Points ``a, b`` on low-degree vertices and ``x, y`` on high-degree vertices."""

    a: Point
    b: Point
    x: Point
    y: Point

    def __post_init__(self):
        for name in "abxy":
            object.__setattr__(self, name, Point(*getattr(self, name)))

    @property
    def vertices(self) -> tuple[int, int, int, int]:
        return (self.a.vertex, self.b.vertex, self.x.vertex, self.y.vertex)

    def upper_edges(self):
        return make_pair(self.a, self.b), make_pair(self.x, self.y)

    def lower_edges(self):
        return make_pair(self.a, self.x), make_pair(self.b, self.y)

    def validate(self, degrees, k: int | None = None) -> "SwitchAnchor":
        """Check distinct vertices and the degree split; ``k=None`` only asks
        that both low degrees are below both high degrees."""
        A, B, X, Y = self.vertices
        if len({A, B, X, Y}) != 4:
            raise AnchorError("anchor vertices must be distinct")
        for p in (self.a, self.b, self.x, self.y):
            if not (0 <= p.vertex < len(degrees) and 0 <= p.copy < degrees[p.vertex]):
                raise AnchorError(f"point {p} outside degree bounds")
        lo = max(degrees[A], degrees[B])
        hi = min(degrees[X], degrees[Y])
        if k is None:
            if lo >= hi:
                raise AnchorError("deg(A), deg(B) must be below deg(X), deg(Y)")
        elif not (lo <= k < hi):
            raise AnchorError(f"degrees do not straddle k={k}")
        return self

    def swapped_ab(self) -> "SwitchAnchor":
        return SwitchAnchor(self.b, self.a, self.x, self.y)

    def swapped_xy(self) -> "SwitchAnchor":
        return SwitchAnchor(self.a, self.b, self.y, self.x)


def kind_of(G: ConfigGraph, anchor: SwitchAnchor) -> str | None:
    """``"upper"`` if ``G`` holds ab and xy, ``"lower"`` if it holds ax and by."""
    if all(e in G.pair_set for e in anchor.upper_edges()):
        return "upper"
    if all(e in G.pair_set for e in anchor.lower_edges()):
        return "lower"
    return None


def switch_graph(G: ConfigGraph, anchor: SwitchAnchor, k: int | None = None) -> ConfigGraph:
    """Replace ab, xy by ax, by."""
    anchor.validate(G.degrees, k)
    try:
        return G.replace(anchor.upper_edges(), anchor.lower_edges())
    except GraphError as exc:
        raise AnchorError(f"anchor edges absent: {exc}") from None


def unswitch_graph(G: ConfigGraph, anchor: SwitchAnchor, k: int | None = None) -> ConfigGraph:
    """Inverse replacement ax, by -> ab, xy."""
    anchor.validate(G.degrees, k)
    try:
        return G.replace(anchor.lower_edges(), anchor.upper_edges())
    except GraphError as exc:
        raise AnchorError(f"anchor edges absent: {exc}") from None


def anchors_of(G: ConfigGraph, kind: str = "upper", k: int | None = None):
    """Yield every ordered anchor for which ``G`` is an upper (or lower) graph."""
    d = G.degrees

    def low(v):
        return d[v] <= k if k is not None else True

    def high(v):
        return d[v] > k if k is not None else True

    for p, q in G.pairs:
        for a, b in ((p, q), (q, p)):
            for r, s in G.pairs:
                for x, y in ((r, s), (s, r)):
                    if kind == "upper":
                        anc = SwitchAnchor(a, b, x, y)
                    else:
                        # pair (p,q) plays ax, pair (r,s) plays by
                        anc = SwitchAnchor(a, x, b, y)
                    A, B, X, Y = anc.vertices
                    if len({A, B, X, Y}) != 4:
                        continue
                    if not (low(A) and low(B) and high(X) and high(Y)):
                        continue
                    if max(d[A], d[B]) >= min(d[X], d[Y]):
                        continue
                    yield anc

"""Random and hand-built anchored instances for the switching checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..confgraph import ConfigGraph, Point, make_pair
from .anchor import SwitchAnchor


@dataclass(frozen=True)
class AnchoredInstance:
    degrees: tuple
    anchor: SwitchAnchor
    sequence: tuple  # normalized point pairs, in order

    @property
    def graph(self) -> ConfigGraph:
        return ConfigGraph(self.degrees, self.sequence)


def _random_completion(free: list[Point], rng: np.random.Generator, tries: int = 200):
    for _ in range(tries):
        order = [free[i] for i in rng.permutation(len(free))]
        pairs = [(order[i], order[i + 1]) for i in range(0, len(order), 2)]
        if all(p.vertex != q.vertex for p, q in pairs):
            return pairs
    return None


def random_anchored_instance(rng: np.random.Generator, max_edges: int = 10, max_degree: int = 5,
                             upper: bool = True) -> AnchoredInstance:
    """Vertices 0..3 play A, B, X, Y; the rest get random degrees.  The graph
    holds ab, xy (or ax, by when ``upper`` is false) and is otherwise random."""
    while True:
        lo = int(rng.integers(1, max_degree))
        dA = int(rng.integers(1, lo + 1))
        dB = int(rng.integers(1, lo + 1))
        if rng.random() < 0.5:
            dA, dB = lo, dB
        dX = int(rng.integers(lo + 1, max_degree + 1))
        dY = int(rng.integers(lo + 1, max_degree + 1))
        core = dA + dB + dX + dY
        if core > 2 * max_edges:
            continue
        budget = 2 * max_edges - core
        extra = []
        target = int(rng.integers(0, budget + 1))
        while sum(extra) < target:
            extra.append(int(rng.integers(1, max_degree + 1)))
        if sum(extra) > budget:
            extra.pop()
        if (core + sum(extra)) % 2:
            if extra and extra[-1] > 1:
                extra[-1] -= 1
            elif sum(extra) < budget:
                extra.append(1)
            else:
                continue
        degrees = (dA, dB, dX, dY) + tuple(extra)
        anchor = SwitchAnchor((0, 0), (1, 0), (2, 0), (3, 0))
        fixed = list(anchor.upper_edges() if upper else anchor.lower_edges())
        free = [Point(v, c) for v, d in enumerate(degrees) for c in range(d)
                if not (v < 4 and c == 0)]
        rest = _random_completion(free, rng)
        if rest is None:
            continue
        pairs = [make_pair(p, q) for p, q in fixed + rest]
        order = rng.permutation(len(pairs))
        seq = tuple(pairs[i] for i in order)
        return AnchoredInstance(degrees, anchor, seq)


def timing_example() -> tuple[tuple, SwitchAnchor, tuple, dict]:
    """Low vertex of degree 4 and high vertex of degree 6, not adjacent, with
    their ten edges interleaved as ``q x1, r b1, ab, s x2, t x3, u x4, v x5, xy,
    w b2, z b3``.  Y's remaining points go to pendant vertices first.

    Returns ``(degrees, anchor, sequence, names)`` where ``names`` maps the
    pendant letters to vertex indices.
    """
    A, B, X, Y = range(4)
    names = dict(zip("qrstuvwz", range(4, 12)))
    degrees = (1, 4, 6, 5) + (1,) * 12
    P = Point
    seq = [(P(Y, i), P(11 + i, 0)) for i in range(1, 5)]
    seq += [
        (P(names["q"], 0), P(X, 1)), (P(names["r"], 0), P(B, 1)), (P(A, 0), P(B, 0)),
        (P(names["s"], 0), P(X, 2)), (P(names["t"], 0), P(X, 3)), (P(names["u"], 0), P(X, 4)),
        (P(names["v"], 0), P(X, 5)), (P(X, 0), P(Y, 0)), (P(names["w"], 0), P(B, 2)),
        (P(names["z"], 0), P(B, 3)),
    ]
    anchor = SwitchAnchor((A, 0), (B, 0), (X, 0), (Y, 0))
    return degrees, anchor, tuple(make_pair(p, q) for p, q in seq), names

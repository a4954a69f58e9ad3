"""Degree sequences: validity, degree counts and small-edge functionals."""

from __future__ import annotations

from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction


class DegreeSequenceError(ValueError):
    pass


@dataclass(frozen=True)
class DegreeSequence:
    """An immutable degree vector ``d_1..d_n`` (stored 0-based).

    Degrees must be at least one unless ``allow_zero`` is set, which is
    used for residual sequences where saturated vertices have degree 0.
    """

    degrees: tuple[int, ...]
    allow_zero: bool = False

    def __post_init__(self):
        degs = tuple(int(d) for d in self.degrees)
        object.__setattr__(self, "degrees", degs)
        low = 0 if self.allow_zero else 1
        for d in degs:
            if d < low:
                raise DegreeSequenceError(f"degree {d} below {low}")

    def __len__(self) -> int:
        return len(self.degrees)

    def __iter__(self):
        return iter(self.degrees)

    def __getitem__(self, i):
        return self.degrees[i]

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def total(self) -> int:
        """Degree sum, i.e. twice the edge count."""
        return sum(self.degrees)

    @property
    def m(self) -> int:
        if self.total % 2:
            raise DegreeSequenceError("odd degree sum has no edge count")
        return self.total // 2

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    @classmethod
    def from_counts(cls, counts: dict[int, int], allow_zero: bool = False) -> "DegreeSequence":
        degs: list[int] = []
        for j in sorted(counts):
            degs.extend([j] * counts[j])
        return cls(tuple(degs), allow_zero)

    def to_text(self) -> str:
        return " ".join(str(d) for d in self.degrees)


def parse_degrees(text: str, allow_zero: bool = False) -> DegreeSequence:
    """Parse ``"2 2 3"`` or block form ``"1:500 7:500"`` (tokens may mix)."""
    degs: list[int] = []
    for tok in text.split():
        if ":" in tok:
            j, c = tok.split(":", 1)
            degs.extend([int(j)] * int(c))
        else:
            degs.append(int(tok))
    if not degs:
        raise DegreeSequenceError("empty degree sequence")
    return DegreeSequence(tuple(degs), allow_zero)


def as_sequence(d) -> DegreeSequence:
    if isinstance(d, DegreeSequence):
        return d
    if isinstance(d, str):
        return parse_degrees(d)
    if isinstance(d, Mapping):  # {degree: count}, as returned by degree_counts
        return DegreeSequence(tuple(j for j, c in sorted(d.items()) for _ in range(c)))
    return DegreeSequence(tuple(d))


def degree_counts(d) -> dict[int, int]:
    """Map degree ``j`` to the number ``n_j`` of vertices of that degree."""
    return dict(sorted(Counter(as_sequence(d).degrees).items()))


def is_graphic(d) -> bool:
    """Erdős–Gallai test: is ``d`` the degree sequence of a simple graph?"""
    if isinstance(d, DegreeSequence):
        degs = sorted(d.degrees, reverse=True)
    elif isinstance(d, str):
        degs = sorted(parse_degrees(d, allow_zero=True).degrees, reverse=True)
    else:
        degs = sorted((int(x) for x in d), reverse=True)
    if degs and degs[-1] < 0:
        return False
    if sum(degs) % 2:
        return False
    n = len(degs)
    prefix = 0
    for r in range(1, n + 1):
        prefix += degs[r - 1]
        rhs = r * (r - 1) + sum(min(x, r) for x in degs[r:])
        if prefix > rhs:
            return False
    return True


def small_degree_sum(d, k: int) -> int:
    """``sum_{j<=k} j n_j``: the number of points on vertices of degree at most k."""
    return sum(x for x in as_sequence(d).degrees if x <= k)


def _check_cut(d: DegreeSequence, k: int) -> None:
    if not 1 <= k < d.max_degree:
        raise DegreeSequenceError(f"cut degree k={k} must satisfy 1 <= k < {d.max_degree}")


def small_edge_mean(d, k: int) -> Fraction:
    """Target small-edge count ``(sum_{j<=k} j n_j)^2 / (4m)`` as an exact rational."""
    d = as_sequence(d)
    _check_cut(d, k)
    if d.total == 0:
        raise DegreeSequenceError("empty edge set")
    s = small_degree_sum(d, k)
    return Fraction(s * s, 2 * d.total)


def in_window(d, k: int, xi) -> bool:
    """Whether the fraction of vertices with degree at most ``k`` lies in [xi, 1-xi]."""
    d = as_sequence(d)
    xi = Fraction(xi)
    frac = Fraction(sum(1 for x in d.degrees if x <= k), d.n)
    return xi <= frac <= 1 - xi

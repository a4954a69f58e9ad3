"""Edge-sequence operations around an anchor: counterparts, anchor-position
swaps, and the weight-preserving twin maps that exchange the saturation
times of a low vertex and a high vertex.

A sequence is a tuple of normalized point pairs.  It is ``"upper"`` when it
holds ab and xy and ``"lower"`` when it holds ax and by.
"""

from __future__ import annotations

from typing import Callable

from ..confgraph import Point, make_pair
from ..exact import gamma_profile, last_other_time, positions, saturation_times
from .anchor import AnchorError, SwitchAnchor
from .patterns import first_words, in_second, pattern_injection

Injection = Callable[[int, int, int, str], str]


def normalize(seq) -> tuple:
    if type(seq) is tuple and all(type(p) is Point and type(q) is Point and p < q for p, q in seq):
        return seq
    return tuple(make_pair(p, q) for p, q in seq)


def family(seq, anchor: SwitchAnchor) -> str:
    s = set(seq)
    if all(e in s for e in anchor.upper_edges()):
        return "upper"
    if all(e in s for e in anchor.lower_edges()):
        return "lower"
    raise AnchorError("sequence holds neither ab, xy nor ax, by")


def _anchor_edges(anchor: SwitchAnchor, fam: str):
    return anchor.upper_edges() if fam == "upper" else anchor.lower_edges()


def counterpart(seq, anchor: SwitchAnchor) -> tuple:
    """Swap ab, xy for ax, by in place (or back)."""
    seq = normalize(seq)
    fam = family(seq, anchor)
    ab, xy = anchor.upper_edges()
    ax, by = anchor.lower_edges()
    swap = {ab: ax, xy: by} if fam == "upper" else {ax: ab, by: xy}
    return tuple(swap.get(e, e) for e in seq)


def bar(seq, anchor: SwitchAnchor) -> tuple:
    """Exchange the positions of the two anchor edges."""
    seq = list(normalize(seq))
    e, f = _anchor_edges(anchor, family(seq, anchor))
    i, j = seq.index(e), seq.index(f)
    seq[i], seq[j] = seq[j], seq[i]
    return tuple(seq)


def anchor_times(seq, degrees, anchor: SwitchAnchor):
    return saturation_times(seq, degrees, anchor.a, anchor.b, anchor.x, anchor.y)


# -- twins ---------------------------------------------------------------------------

def _roles(anchor: SwitchAnchor, which: str):
    """(low point, high point) whose vertices are re-timed by the twin map."""
    if which == "bx":
        return anchor.b, anchor.x
    if which == "ay":
        return anchor.a, anchor.y
    raise ValueError(f"unknown twin kind {which!r}")


def _replacement(anchor: SwitchAnchor, which: str, fam: str) -> dict:
    ab, xy = anchor.upper_edges()
    ax, by = anchor.lower_edges()
    if which == "bx":
        return {ab: ax, xy: by} if fam == "upper" else {ax: ab, by: xy}
    return {ab: by, xy: ax} if fam == "upper" else {ax: xy, by: ab}


def side_word(seq, anchor: SwitchAnchor, which: str) -> tuple[str, list[int]]:
    """Letters for the non-anchor edges touching exactly one of the two re-timed
    vertices, in sequence order, with their positions (0-based)."""
    low, high = _roles(anchor, which)
    L, H = low.vertex, high.vertex
    skip = set(_anchor_edges(anchor, family(seq, anchor)))
    letters, where = [], []
    for i, (p, q) in enumerate(seq):
        if (p, q) in skip:
            continue
        vs = {p.vertex, q.vertex}
        if L in vs and H in vs:
            continue
        if L in vs:
            letters.append("B")
            where.append(i)
        elif H in vs:
            letters.append("X")
            where.append(i)
    return "".join(letters), where


def _side_sizes(seq, degrees, anchor: SwitchAnchor, which: str) -> tuple[int, int]:
    low, high = _roles(anchor, which)
    L, H = low.vertex, high.vertex
    shared = sum(1 for p, q in seq if {p.vertex, q.vertex} == {L, H})
    return degrees[L] - 1 - shared, degrees[H] - 1 - shared


def _rebuild(seq, anchor: SwitchAnchor, which: str, target: str) -> tuple:
    """Apply the anchor replacement, move endpoints where the words differ, then
    relabel the non-anchor points of both vertices in their original time order."""
    low, high = _roles(anchor, which)
    L, H = low.vertex, high.vertex
    fam = family(seq, anchor)
    repl = _replacement(anchor, which, fam)
    word, where = side_word(seq, anchor, which)
    change = {i: (word[j], target[j]) for j, i in enumerate(where) if word[j] != target[j]}

    def order_of(vertex, anchor_pt):
        return [p.copy for e in seq for p in e if p.vertex == vertex and p != anchor_pt]

    low_labels = iter(order_of(L, low))
    high_labels = iter(order_of(H, high))
    out = []
    for i, e in enumerate(seq):
        if e in repl:
            out.append(repl[e])
            continue
        ends = list(e)
        if i in change:
            old, new = change[i]
            src, dst = (H, L) if old == "X" else (L, H)
            ends = [Point(dst, -1) if p.vertex == src else p for p in ends]
        fixed = []
        for p in ends:
            if p.vertex == L:
                p = Point(L, next(low_labels))
            elif p.vertex == H:
                p = Point(H, next(high_labels))
            fixed.append(p)
        out.append(make_pair(*fixed))
    return tuple(out)


def _canonical(t, n_low, n_high, word):
    return pattern_injection(t, n_low, n_high, word)


def twin(seq, degrees, anchor: SwitchAnchor, which: str = "bx",
         injection: Injection | None = None) -> tuple | None:
    """Forward twin; defined when the high vertex's other points finish before the low one's."""
    seq = normalize(seq)
    low, high = _roles(anchor, which)
    pos = positions(seq)
    t_low = last_other_time(seq, low, degrees[low.vertex], pos)
    t_high = last_other_time(seq, high, degrees[high.vertex], pos)
    if not t_high < t_low:
        return None
    n_low, n_high = _side_sizes(seq, degrees, anchor, which)
    word, _ = side_word(seq, anchor, which)
    t = word.rindex("X") + 1
    target = (injection or _canonical)(t, n_low, n_high, word)
    return _rebuild(seq, anchor, which, target)


def bx_twin(seq, degrees, anchor, injection=None):
    return twin(seq, degrees, anchor, "bx", injection)


def ay_twin(seq, degrees, anchor, injection=None):
    return twin(seq, degrees, anchor, "ay", injection)


def twin_preimage(seq, degrees, anchor: SwitchAnchor, which: str = "bx",
                  injection: Injection | None = None) -> tuple | None:
    """The sequence whose forward twin is ``seq``, if any."""
    seq = normalize(seq)
    low, high = _roles(anchor, which)
    pos = positions(seq)
    t_low = last_other_time(seq, low, degrees[low.vertex], pos)
    t_high = last_other_time(seq, high, degrees[high.vertex], pos)
    if not t_low < t_high:
        return None
    n_low, n_high = _side_sizes(seq, degrees, anchor, which)
    if not 0 < n_low < n_high:
        return None
    word, _ = side_word(seq, anchor, which)
    if "B" not in word:
        return None
    t = word.rindex("B") + 1
    if not (n_high <= t < n_low + n_high) or not in_second(word, t, n_low, n_high):
        return None
    inj = injection or _canonical
    source = next((w for w in first_words(t, n_low, n_high) if inj(t, n_low, n_high, w) == word), None)
    if source is None:
        return None
    cand = _rebuild(seq, anchor, which, source)
    return cand if twin(cand, degrees, anchor, which, injection) == seq else None


def has_twin(seq, degrees, anchor: SwitchAnchor, injection: Injection | None = None) -> bool:
    """Membership in the set of sequences paired with a twin."""
    seq = normalize(seq)
    t = anchor_times(seq, degrees, anchor)
    if t.t_x < t.t_b or t.t_y < t.t_a:
        return True
    return (twin_preimage(seq, degrees, anchor, "bx", injection) is not None
            or twin_preimage(seq, degrees, anchor, "ay", injection) is not None)


def same_profile(s1, s2, degrees) -> bool:
    return gamma_profile(s1, degrees) == gamma_profile(s2, degrees)

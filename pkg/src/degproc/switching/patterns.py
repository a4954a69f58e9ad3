"""Two-letter words used to re-time the points of a low/high vertex pair.

Words are strings over ``"B"`` (low side) and ``"X"`` (high side).  ``first``
words end in B, have X at position ``t`` and only B after it; ``second`` words
end in X, have B at position ``t`` and only X after it.  Positions are 1-based.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb


class PatternError(ValueError):
    pass


def check_params(t: int, n_low: int, n_high: int) -> None:
    if not (0 < n_low < n_high <= t < n_low + n_high):
        raise PatternError(f"need 0 < n_low < n_high <= t < n_low + n_high, got t={t}, "
                           f"n_low={n_low}, n_high={n_high}")


def in_first(word: str, t: int, n_low: int, n_high: int) -> bool:
    return (len(word) == n_low + n_high and word.count("B") == n_low
            and word[-1] == "B" and word[t - 1] == "X" and set(word[t:]) <= {"B"})


def in_second(word: str, t: int, n_low: int, n_high: int) -> bool:
    return (len(word) == n_low + n_high and word.count("B") == n_low
            and word[-1] == "X" and word[t - 1] == "B" and set(word[t:]) <= {"X"})


def _words(prefix_len: int, n_b: int):
    """All words of length ``prefix_len`` with ``n_b`` B's, in lexicographic order (B < X)."""
    for pos in itertools.combinations(range(prefix_len), n_b):
        w = ["X"] * prefix_len
        for i in pos:
            w[i] = "B"
        yield "".join(w)


@lru_cache(maxsize=4096)
def first_words(t: int, n_low: int, n_high: int) -> tuple[str, ...]:
    check_params(t, n_low, n_high)
    tail = n_low + n_high - t
    # the first t-1 letters carry n_high-1 X's; then X, then tail B's
    out = [w + "X" + "B" * tail for w in _words(t - 1, t - 1 - (n_high - 1))]
    return tuple(sorted(out))


@lru_cache(maxsize=4096)
def second_words(t: int, n_low: int, n_high: int) -> tuple[str, ...]:
    check_params(t, n_low, n_high)
    tail = n_low + n_high - t
    out = [w + "B" + "X" * tail for w in _words(t - 1, n_low - 1)]
    return tuple(sorted(out))


def first_count(t: int, n_low: int, n_high: int) -> int:
    return comb(t - 1, n_high - 1)


def second_count(t: int, n_low: int, n_high: int) -> int:
    return comb(t - 1, n_low - 1)


@lru_cache(maxsize=4096)
def _rank_maps(t: int, n_low: int, n_high: int):
    src, dst = first_words(t, n_low, n_high), second_words(t, n_low, n_high)
    fwd = dict(zip(src, dst))
    return fwd, {v: k for k, v in fwd.items()}


def pattern_injection(t: int, n_low: int, n_high: int, word: str) -> str:
    """Map a first-family word to a second-family word by lexicographic rank."""
    if not in_first(word, t, n_low, n_high):
        raise PatternError(f"{word!r} is not in the first family for t={t}")
    return _rank_maps(t, n_low, n_high)[0][word]


def pattern_preimage(t: int, n_low: int, n_high: int, word: str) -> str | None:
    """Inverse of :func:`pattern_injection`; ``None`` if ``word`` is not an image."""
    if not in_second(word, t, n_low, n_high):
        return None
    return _rank_maps(t, n_low, n_high)[1].get(word)

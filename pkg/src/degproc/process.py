"""Random generators: the standard and relaxed degree-restricted processes,
the configuration model, and uniform simple graphs by rejection.

Every sampler accepts ``seed`` as an int, a ``numpy.random.SeedSequence``
or an existing ``numpy.random.Generator`` (PCG64, which supports
``jumped`` and ``spawn`` for independent parallel streams).
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .confgraph import ConfigGraph, MultiGraph, Point
from .degseq import as_sequence, is_graphic

DEFAULT_RETRIES = 1000


class RetriesExhausted(RuntimeError):
    pass


def make_rng(seed=None) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def spawn_streams(seed, count: int) -> list[np.random.Generator]:
    """Independent generators, one per trial or worker."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [np.random.Generator(np.random.PCG64(s)) for s in ss.spawn(count)]


class _Uniform:
    """Buffered uniform integers drawn from a numpy generator."""

    __slots__ = ("rng", "buf", "i")

    def __init__(self, rng: np.random.Generator, block: int = 4096):
        self.rng = rng
        self.buf = rng.random(block).tolist()
        self.i = 0

    def below(self, n: int) -> int:
        if self.i == len(self.buf):
            self.buf = self.rng.random(len(self.buf)).tolist()
            self.i = 0
        u = self.buf[self.i]
        self.i += 1
        r = int(u * n)
        return r if r < n else n - 1


@dataclass(frozen=True)
class RunResult:
    graph: object
    trajectory: tuple
    completed: bool
    steps: int
    attempts: int = 1


def _degrees(d) -> tuple[int, ...]:
    return as_sequence(d).degrees


def _random_pair(U: int, src: _Uniform) -> tuple[int, int]:
    i = src.below(U)
    j = src.below(U - 1)
    if j >= i:
        j += 1
    return i, j


def _standard_core(degrees, src: _Uniform, rejection_tries: int = 32):
    n = len(degrees)
    load = [0] * n
    unsat = [v for v in range(n) if degrees[v] > 0]
    pos = [-1] * n
    for i, v in enumerate(unsat):
        pos[v] = i
    adj = [set() for _ in range(n)]
    traj = []

    def saturate(v):
        i = pos[v]
        last = unsat.pop()
        if last != v:
            unsat[i] = last
            pos[last] = i
        pos[v] = -1

    while len(unsat) >= 2:
        U = len(unsat)
        edge = None
        for _ in range(rejection_tries):
            i, j = _random_pair(U, src)
            u, v = unsat[i], unsat[j]
            if v not in adj[u]:
                edge = (u, v)
                break
        if edge is None:
            # exact fallback: sample from the explicit list of addable pairs
            opts = [(unsat[i], unsat[j]) for i in range(U) for j in range(i + 1, U)
                    if unsat[j] not in adj[unsat[i]]]
            if not opts:
                break
            edge = opts[src.below(len(opts))]
        u, v = edge
        adj[u].add(v)
        adj[v].add(u)
        traj.append((min(u, v), max(u, v)))
        load[u] += 1
        load[v] += 1
        if load[u] == degrees[u]:
            saturate(u)
        if load[v] == degrees[v]:
            saturate(v)
    return traj, not unsat


def _relaxed_core(degrees, src: _Uniform):
    n = len(degrees)
    free = [list(range(d)) for d in degrees]
    unsat = [v for v in range(n) if degrees[v] > 0]
    pos = [-1] * n
    for i, v in enumerate(unsat):
        pos[v] = i
    traj = []
    while len(unsat) >= 2:
        i, j = _random_pair(len(unsat), src)
        u, v = unsat[i], unsat[j]
        ends = []
        for w in (u, v):
            fw = free[w]
            k = src.below(len(fw))
            c = fw[k]
            fw[k] = fw[-1]
            fw.pop()
            ends.append(Point(w, c))
        p, q = ends
        traj.append((p, q) if p <= q else (q, p))
        for w in (u, v):
            if not free[w]:
                k = pos[w]
                last = unsat.pop()
                if last != w:
                    unsat[k] = last
                    pos[last] = k
                pos[w] = -1
    return traj, not unsat


def run_standard(d, seed=None) -> RunResult:
    """One run of the standard process: uniform addable simple edges until none remain."""
    degrees = _degrees(d)
    traj, done = _standard_core(degrees, _Uniform(make_rng(seed)))
    g = MultiGraph(len(degrees), tuple(traj), degrees=degrees)
    return RunResult(g, tuple(traj), done, len(traj))


def run_relaxed(d, seed=None) -> RunResult:
    """One run of the relaxed process: uniform pair of distinct unsaturated vertices,
    then a uniform free point inside each."""
    degrees = _degrees(d)
    traj, done = _relaxed_core(degrees, _Uniform(make_rng(seed)))
    g = ConfigGraph(degrees, tuple(traj))
    return RunResult(g, tuple(traj), done, len(traj))


_RUNNERS = {"standard": run_standard, "relaxed": run_relaxed}


def run_conditioned(d, seed=None, variant: str = "standard",
                    max_retries: int = DEFAULT_RETRIES) -> RunResult:
    """Re-run the process until it completes; ``attempts`` records the number of runs."""
    if variant not in _RUNNERS:
        raise ValueError(f"unknown variant {variant!r}")
    degrees = _degrees(d)
    if variant == "standard" and not is_graphic(degrees):
        raise ValueError("degree sequence is not graphic")
    if sum(degrees) % 2:
        raise ValueError("odd degree sum")
    rng = make_rng(seed)
    src = _Uniform(rng)
    for attempt in range(1, max_retries + 1):
        if variant == "standard":
            traj, done = _standard_core(degrees, src)
        else:
            traj, done = _relaxed_core(degrees, src)
        if done:
            if variant == "standard":
                g = MultiGraph(len(degrees), tuple(traj), degrees=degrees)
            else:
                g = ConfigGraph(degrees, tuple(traj))
            return RunResult(g, tuple(traj), True, len(traj), attempt)
    raise RetriesExhausted(f"no completed run in {max_retries} attempts")


def completion_count(d, variant: str, trials: int, seed=None) -> int:
    """Number of completed runs among ``trials`` unconditioned runs (one stream)."""
    degrees = _degrees(d)
    src = _Uniform(make_rng(seed), block=1 << 16)
    core = _standard_core if variant == "standard" else _relaxed_core
    return sum(1 for _ in range(trials) if core(degrees, src)[1])


def sample_config_model(d, seed=None) -> tuple[tuple[Point, Point], ...]:
    """Uniform perfect matching of all points; loops and multi-edges allowed."""
    degrees = _degrees(d)
    pts = [Point(v, c) for v, dv in enumerate(degrees) for c in range(dv)]
    if len(pts) % 2:
        raise ValueError("odd degree sum")
    perm = make_rng(seed).permutation(len(pts))
    pairs = []
    for i in range(0, len(pts), 2):
        p, q = pts[perm[i]], pts[perm[i + 1]]
        pairs.append((p, q) if p <= q else (q, p))
    return tuple(pairs)


def pairing_loops(pairs) -> int:
    return sum(1 for p, q in pairs if p[0] == q[0])


@numba.njit(cache=True)
def _simple_pairing(point_vertex, order, n, max_deg, seed, max_attempts):
    """Rejection sampler for a simple pairing with early abort on the first loop or repeat.

    Draws from numba's own generator (seeded here), which is several times
    faster inside the loop than a numpy Generator passed in from Python.
    """
    np.random.seed(seed)
    L = point_vertex.shape[0]
    arr = order.copy()
    nbr = np.empty((n, max_deg), dtype=np.int64)
    cnt = np.zeros(n, dtype=np.int64)
    picks = np.empty(L // 2, dtype=np.int64)
    out = np.empty((L // 2, 2), dtype=np.int64)
    for attempt in range(1, max_attempts + 1):
        size = L
        steps = 0
        ok = True
        while size > 0:
            p = arr[size - 1]
            r = np.random.randint(0, size - 1)
            q = arr[r]
            arr[r] = arr[size - 2]
            arr[size - 2] = q
            picks[steps] = r
            steps += 1
            size -= 2
            u = point_vertex[p]
            v = point_vertex[q]
            bad = u == v
            if not bad:
                for t in range(cnt[u]):
                    if nbr[u, t] == v:
                        bad = True
                        break
            out[steps - 1, 0] = u
            out[steps - 1, 1] = v
            if bad:
                ok = False
                break
            nbr[u, cnt[u]] = v
            cnt[u] += 1
            nbr[v, cnt[v]] = u
            cnt[v] += 1
        # undo the touched state so the next attempt starts fresh
        for s in range(steps - 1, -1, -1):
            u = out[s, 0]
            v = out[s, 1]
            if s < steps - 1 or ok:
                cnt[u] -= 1
                cnt[v] -= 1
            size += 2
            r = picks[s]
            tmp = arr[r]
            arr[r] = arr[size - 2]
            arr[size - 2] = tmp
        if ok:
            return attempt, out
    return -1, out


def sample_uniform_simple(d, seed=None, max_retries: int = 10_000_000) -> MultiGraph:
    """Uniform simple graph with degree sequence ``d`` (configuration model + rejection).

    Points of high-degree vertices are paired first so that rejections are
    detected early; the accepted law is unchanged by the pairing order.
    """
    degrees = _degrees(d)
    if not is_graphic(degrees):
        raise ValueError("degree sequence is not graphic")
    g, _ = _sample_uniform_simple(degrees, make_rng(seed), max_retries)
    return g


def _sample_uniform_simple(degrees, rng, max_retries):
    n = len(degrees)
    point_vertex = np.repeat(np.arange(n, dtype=np.int64), degrees)
    # stable sort so the highest-degree points sit at the end and are paired first
    order = np.argsort(np.asarray(degrees, dtype=np.int64)[point_vertex], kind="stable").astype(np.int64)
    if len(point_vertex) == 0:
        return MultiGraph(n, (), degrees=degrees), 1
    seed = int(rng.integers(0, 2**32))
    attempts, out = _simple_pairing(point_vertex, order, n, max(degrees), seed, max_retries)
    if attempts < 0:
        raise RetriesExhausted(f"no simple pairing in {max_retries} attempts")
    edges = tuple((int(u), int(v)) for u, v in out)
    return MultiGraph(n, edges, degrees=degrees), attempts


def sample_config_graph(d, seed=None, max_retries: int = 100_000) -> ConfigGraph:
    """Uniform loop-free configuration-graph (multi-edges kept) by rejecting loops."""
    degrees = _degrees(d)
    rng = make_rng(seed)
    for _ in range(max_retries):
        pairs = sample_config_model(degrees, rng)
        if not pairing_loops(pairs):
            return ConfigGraph(degrees, pairs)
    raise RetriesExhausted("no loop-free pairing found")

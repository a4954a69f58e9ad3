"""Fluid-limit trajectories of the relaxed process for a limiting degree profile.

Time ``t`` counts edges per vertex, so the process ends at ``T = sum(j r_j) / 2``.
``u_j(t)`` is the fraction of vertices of degree ``j`` that are still
unsaturated, ``u = sum_j u_j``, and ``x_{a,b}(t)`` is the number of edges
between degree ``a`` and degree ``b`` vertices per vertex.  With
``lambda' = 2/u`` the unsaturated fractions have the closed form
``u_j = r_j * Q(j, lambda)`` where ``Q`` is the regularized upper incomplete
gamma function.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate as sp_integrate
from scipy.special import gammaincc

MIN_GRID_POINTS = 1000
DEFAULT_GRID_POINTS = 4000
DEFAULT_GUARD = Fraction(1, 1000)  # endpoint guard, as a fraction of T
BOUND_RTOL = 1e-4  # slack for RK4 error where u is tiny, near the guard


class ProfileError(ValueError):
    pass


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class LimitProfile:
    """Limiting degree fractions ``r_1..r_Delta`` (index 0 holds degree 1)."""

    fractions: tuple[Fraction, ...]

    def __post_init__(self):
        fr = tuple(Fraction(f) for f in self.fractions)
        while fr and fr[-1] == 0:
            fr = fr[:-1]
        if not fr:
            raise ProfileError("empty profile")
        if any(f < 0 for f in fr):
            raise ProfileError("negative degree fraction")
        if sum(fr) != 1:
            raise ProfileError(f"degree fractions sum to {sum(fr)}, not 1")
        object.__setattr__(self, "fractions", fr)

    @property
    def max_degree(self) -> int:
        return len(self.fractions)

    def r(self, j: int) -> Fraction:
        return self.fractions[j - 1] if 1 <= j <= self.max_degree else Fraction(0)

    @property
    def mean_degree(self) -> Fraction:
        return sum((j * f for j, f in enumerate(self.fractions, start=1)), Fraction(0))

    @property
    def end_time(self) -> Fraction:
        return self.mean_degree / 2

    def check_cut(self, k: int) -> None:
        if not 1 <= k < self.max_degree:
            raise ProfileError(f"cut degree k={k} needs 1 <= k < {self.max_degree}")
        low = sum(self.fractions[:k])
        if not 0 < low < 1:
            raise ProfileError(f"cut degree k={k} leaves one side of the profile empty")

    def to_text(self) -> str:
        return " ".join(f"{j}:{f}" for j, f in enumerate(self.fractions, start=1) if f)


def parse_profile(text: str) -> LimitProfile:
    """Parse ``"1:1/2 7:1/2"`` (degree:fraction pairs)."""
    out: dict[int, Fraction] = {}
    for tok in text.replace(",", " ").split():
        if ":" not in tok:
            raise ProfileError(f"expected degree:fraction, got {tok!r}")
        j, f = tok.split(":", 1)
        j = int(j)
        if j < 1:
            raise ProfileError("degrees must be at least 1")
        out[j] = out.get(j, Fraction(0)) + Fraction(f)
    if not out:
        raise ProfileError("empty profile")
    return LimitProfile(tuple(out.get(j, Fraction(0)) for j in range(1, max(out) + 1)))


def profile_from_counts(counts: dict[int, int]) -> LimitProfile:
    n = sum(counts.values())
    top = max(counts)
    return LimitProfile(tuple(Fraction(counts.get(j, 0), n) for j in range(1, top + 1)))


def degree_pairs(max_degree: int) -> list[tuple[int, int]]:
    return [(a, b) for a in range(1, max_degree + 1) for b in range(a, max_degree + 1)]


def closed_form_u(profile: LimitProfile, lam) -> np.ndarray:
    """Unsaturated fractions by degree at the given lambda values; shape (..., Delta)."""
    lam = np.asarray(lam, dtype=float)
    r = np.array([float(f) for f in profile.fractions])
    j = np.arange(1, profile.max_degree + 1, dtype=float)
    return r * gammaincc(j, lam[..., None])


@dataclass
class OdeTrajectory:
    profile: LimitProfile
    t: np.ndarray
    lam: np.ndarray
    u_by_degree: np.ndarray  # (len(t), Delta)
    x: np.ndarray  # (len(t), number of degree pairs), pairs in lex order
    pairs: list[tuple[int, int]] = field(default_factory=list)
    guard: float = 0.0

    @property
    def u(self) -> np.ndarray:
        return self.u_by_degree.sum(axis=1)

    @property
    def step(self) -> float:
        return float(self.t[1] - self.t[0])

    def x_of(self, a: int, b: int) -> np.ndarray:
        a, b = min(a, b), max(a, b)
        return self.x[:, self.pairs.index((a, b))]


def _pair_factors(pairs):
    ia = np.array([a - 1 for a, _ in pairs])
    ib = np.array([b - 1 for _, b in pairs])
    c = np.array([1.0 if a == b else 2.0 for a, b in pairs])
    return ia, ib, c


def _grid(profile: LimitProfile, step, guard) -> tuple[np.ndarray, float]:
    T = float(profile.end_time)
    delta = float(Fraction(guard) * profile.end_time)
    stop = T - delta
    if step is None:
        n = DEFAULT_GRID_POINTS
    else:
        step = float(Fraction(step))
        if step <= 0:
            raise ValueError("step must be positive")
        n = math.ceil(stop / step)
    if n < MIN_GRID_POINTS:
        raise ValueError(f"step gives {n} grid intervals; need at least {MIN_GRID_POINTS}")
    return np.linspace(0.0, stop, n + 1), delta


def integrate(profile: LimitProfile, step=None, guard=DEFAULT_GUARD) -> OdeTrajectory:
    """Classical RK4 on (lambda, x) with ``u_j`` from the closed form, stopping ``guard*T`` short of T."""
    t, delta = _grid(profile, step, guard)
    pairs = degree_pairs(profile.max_degree)
    ia, ib, c = _pair_factors(pairs)
    r = np.array([float(f) for f in profile.fractions])
    j = np.arange(1, profile.max_degree + 1, dtype=float)

    def rhs(lam):
        uj = r * gammaincc(j, lam)
        u = uj.sum()
        if not u > 0 or not math.isfinite(u):
            raise IntegrationError(f"unsaturated mass vanished at lambda={lam}")
        return 2.0 / u, c * uj[ia] * uj[ib] / (u * u)

    h = t[1] - t[0]
    lam = np.empty(len(t))
    x = np.zeros((len(t), len(pairs)))
    lam[0] = 0.0
    for i in range(len(t) - 1):
        l0 = lam[i]
        k1l, k1x = rhs(l0)
        k2l, k2x = rhs(l0 + h / 2 * k1l)
        k3l, k3x = rhs(l0 + h / 2 * k2l)
        k4l, k4x = rhs(l0 + h * k3l)
        lam[i + 1] = l0 + h / 6 * (k1l + 2 * k2l + 2 * k3l + k4l)
        x[i + 1] = x[i] + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
    uj = closed_form_u(profile, lam)
    traj = OdeTrajectory(profile, t, lam, uj, x, pairs, delta)
    floor = 2 * (float(profile.end_time) - t) / profile.max_degree
    if np.any(traj.u < floor * (1 - BOUND_RTOL)):
        raise IntegrationError("unsaturated mass fell below its guaranteed lower bound")
    return traj


def occupancy_u(profile: LimitProfile, t_end: float, intervals: int = 20_000) -> tuple[np.ndarray, np.ndarray]:
    """Unsaturated fractions from the load-occupancy system, integrated directly.

    ``v[j, i]`` is the fraction of vertices of degree ``j`` carrying ``i < j``
    edges; each unsaturated vertex gains an edge at rate ``2/u``.  Returns the
    grid and ``u_j`` on it, independent of the closed form.
    """
    D = profile.max_degree
    v0 = np.zeros((D, D))
    for jj in range(1, D + 1):
        v0[jj - 1, 0] = float(profile.r(jj))
    mask = np.array([[i < jj for i in range(D)] for jj in range(1, D + 1)])

    def rhs(v):
        rate = 2.0 / v.sum()
        inflow = np.zeros_like(v)
        inflow[:, 1:] = v[:, :-1]
        return rate * (inflow - v) * mask

    t = np.linspace(0.0, t_end, intervals + 1)
    h = t[1] - t[0]
    out = np.empty((len(t), D))
    v = v0
    out[0] = v.sum(axis=1)
    for i in range(intervals):
        k1 = rhs(v)
        k2 = rhs(v + h / 2 * k1)
        k3 = rhs(v + h / 2 * k2)
        k4 = rhs(v + h * k3)
        v = v + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i + 1] = v.sum(axis=1)
    return t, out


def closed_form_error(profile: LimitProfile, t_end: float, intervals: int = 20_000) -> float:
    """Sup-norm gap between the occupancy system and the closed form on ``[0, t_end]``.

    The closed form is evaluated at lambda from a separate fine RK4 run of ``lambda' = 2/u``.
    """
    t, occ = occupancy_u(profile, t_end, intervals)
    r = np.array([float(f) for f in profile.fractions])
    j = np.arange(1, profile.max_degree + 1, dtype=float)
    h = t[1] - t[0]
    lam = np.empty(len(t))
    lam[0] = 0.0

    def f(l):
        return 2.0 / (r * gammaincc(j, l)).sum()

    for i in range(len(t) - 1):
        l0 = lam[i]
        k1 = f(l0)
        k2 = f(l0 + h / 2 * k1)
        k3 = f(l0 + h / 2 * k2)
        k4 = f(l0 + h * k3)
        lam[i + 1] = l0 + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return float(np.max(np.abs(occ - closed_form_u(profile, lam))))


@dataclass(frozen=True)
class EndValues:
    """``x_{a,b}(T)`` as the grid value at ``T - guard`` plus a quadrature tail."""

    pairs: list
    at_guard: np.ndarray
    tail: np.ndarray
    tail_error: float  # quadrature error estimate plus the time-consistency residual

    @property
    def values(self) -> np.ndarray:
        return self.at_guard + self.tail

    def get(self, a: int, b: int) -> float:
        return float(self.values[self.pairs.index((min(a, b), max(a, b)))])


def end_values(traj: OdeTrajectory) -> EndValues:
    """Finish each ``x_{a,b}`` to ``t = T`` by integrating in lambda, where the tail is smooth.

    Along the tail ``dt = u/2 dlambda``, so the remaining increment is
    ``int c u_a u_b / (2u) dlambda`` from ``lambda(T - guard)`` to infinity.
    """
    prof = traj.profile
    lam0 = float(traj.lam[-1])
    ia, ib, c = _pair_factors(traj.pairs)

    def integrand(lam, idx):
        uj = closed_form_u(prof, lam)
        u = uj.sum()
        return c[idx] * uj[ia[idx]] * uj[ib[idx]] / (2 * u) if u > 0 else 0.0

    tail = np.zeros(len(traj.pairs))
    err = 0.0
    for idx in range(len(traj.pairs)):
        if prof.r(traj.pairs[idx][0]) == 0 or prof.r(traj.pairs[idx][1]) == 0:
            continue
        val, e = sp_integrate.quad(integrand, lam0, np.inf, args=(idx,), limit=200)
        tail[idx] = val
        err += e
    # the remaining time computed the same way should equal the guard
    rest, e = sp_integrate.quad(lambda l: closed_form_u(prof, l).sum() / 2, lam0, np.inf, limit=200)
    err += e + abs(rest - traj.guard)
    return EndValues(traj.pairs, traj.x[-1].copy(), tail, err)


def rho(traj: OdeTrajectory, k: int, ends: EndValues | None = None) -> float:
    """Limiting small edges per vertex for the process: sum of ``x_{a,b}(T)`` over ``a <= b <= k``."""
    ends = end_values(traj) if ends is None else ends
    return float(sum(v for (a, b), v in zip(ends.pairs, ends.values) if b <= k))


def mu_hat(profile: LimitProfile, k: int) -> Fraction:
    """Limiting small edges per vertex under the uniform model."""
    small = sum((j * profile.r(j) for j in range(1, k + 1)), Fraction(0))
    return small * small / (2 * profile.mean_degree)


def sufficient_condition(profile: LimitProfile, k: int) -> tuple[bool, float]:
    """Whether the mean degree exceeds ``k * sqrt(2 Delta + 1)``, decided by comparing squares.

    Returns the verdict and the margin ``mean - k sqrt(2 Delta + 1)``.
    """
    profile.check_cut(k)
    mean = profile.mean_degree
    bound_sq = k * k * (2 * profile.max_degree + 1)
    return mean * mean > bound_sq, float(mean) - math.sqrt(bound_sq)


def rho_lower_bound(profile: LimitProfile, k: int) -> float:
    low = sum((profile.r(j) for j in range(1, k + 1)), Fraction(0))
    return float(profile.end_time * low * low / (2 * profile.max_degree + 1))


def invariant_report(traj: OdeTrajectory, tol: float = 1e-9) -> dict[str, bool]:
    prof = traj.profile
    T = float(prof.end_time)
    D = prof.max_degree
    u = traj.u
    r = np.array([float(f) for f in prof.fractions])
    left = T - traj.t
    return {
        "initial_u": bool(abs(u[0] - 1) <= tol),
        "initial_u_by_degree": bool(np.allclose(traj.u_by_degree[0], r, atol=tol)),
        "initial_x": bool(np.all(traj.x[0] == 0)),
        "u_nonincreasing": bool(np.all(np.diff(u) <= tol)),
        "u_lower_bound": bool(np.all(u >= 2 * left / D * (1 - BOUND_RTOL) - tol)),
        "lambda_upper_bound": bool(np.all(traj.lam <= D * np.log(T / left) + BOUND_RTOL)),
        "u_by_degree_lower_bound": bool(np.all(traj.u_by_degree >= r * np.exp(-traj.lam)[:, None] - tol)),
    }


def summary(traj: OdeTrajectory, k: int) -> dict:
    prof = traj.profile
    prof.check_cut(k)
    ends = end_values(traj)
    rho_k = rho(traj, k, ends)
    target = mu_hat(prof, k)
    verdict, margin = sufficient_condition(prof, k)
    return {
        "profile": prof.to_text(),
        "k": k,
        "T": float(prof.end_time),
        "T_exact": str(prof.end_time),
        "rho_k": rho_k,
        "mu_hat_k": float(target),
        "mu_hat_k_exact": str(target),
        "discrepancy": rho_k > target,
        "rho_lower_bound": rho_lower_bound(prof, k),
        "sufficient_condition": verdict,
        "condition_margin": margin,
        "mass_total": float(ends.values.sum()),
        "tail_error_bound": ends.tail_error,
        "step": traj.step,
        "guard": traj.guard,
        "invariants": invariant_report(traj),
    }


def trajectory_header(traj: OdeTrajectory) -> list[str]:
    D = traj.profile.max_degree
    return (["t", "u"] + [f"u_{j}" for j in range(1, D + 1)] + ["lambda"]
            + [f"x_{a}_{b}" for a, b in traj.pairs])


def write_trajectory_csv(traj: OdeTrajectory, fh, every: int = 1) -> None:
    w = csv.writer(fh)
    w.writerow(trajectory_header(traj))
    u = traj.u
    for i in range(0, len(traj.t), every):
        w.writerow([repr(float(traj.t[i])), repr(float(u[i]))]
                   + [repr(float(v)) for v in traj.u_by_degree[i]]
                   + [repr(float(traj.lam[i]))] + [repr(float(v)) for v in traj.x[i]])

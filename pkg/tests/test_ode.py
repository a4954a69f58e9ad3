import io
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degproc.degseq import small_edge_mean
from degproc.odemethod import (
    LimitProfile,
    ProfileError,
    closed_form_error,
    closed_form_u,
    end_values,
    integrate,
    invariant_report,
    mu_hat,
    occupancy_u,
    parse_profile,
    profile_from_counts,
    rho,
    rho_lower_bound,
    sufficient_condition,
    summary,
    trajectory_header,
    write_trajectory_csv,
)

HALF_ONE_SEVEN = "1:1/2 7:1/2"


@pytest.fixture(scope="module")
def half_traj():
    return integrate(parse_profile(HALF_ONE_SEVEN))


def test_parse_and_basic_scalars():
    p = parse_profile(HALF_ONE_SEVEN)
    assert p.max_degree == 7
    assert p.r(1) == p.r(7) == Fraction(1, 2) and p.r(3) == 0
    assert p.mean_degree == 4 and p.end_time == 2
    assert p.to_text() == HALF_ONE_SEVEN
    assert profile_from_counts({1: 1000, 7: 1000}) == p


@pytest.mark.parametrize("text", ["", "1:1/2", "0:1", "1:-1/2 2:3/2", "12"])
def test_bad_profiles(text):
    with pytest.raises(ProfileError):
        parse_profile(text)


def test_cut_must_split_profile():
    with pytest.raises(ProfileError):
        parse_profile("2:1").check_cut(1)
    with pytest.raises(ProfileError):
        parse_profile(HALF_ONE_SEVEN).check_cut(7)
    parse_profile(HALF_ONE_SEVEN).check_cut(1)


def test_closed_form_special_cases():
    p = parse_profile("1:1/4 2:1/4 5:1/2")
    lam = np.linspace(0, 6, 13)
    u = closed_form_u(p, lam)
    assert np.allclose(u[0], [0.25, 0.25, 0, 0, 0.5])
    assert np.allclose(u[:, 0], 0.25 * np.exp(-lam), rtol=1e-12)
    # degree 2: r e^{-l} (1 + l)
    assert np.allclose(u[:, 1], 0.25 * np.exp(-lam) * (1 + lam), rtol=1e-12)
    five = sum(lam ** i / math.factorial(i) for i in range(5))
    assert np.allclose(u[:, 4], 0.5 * np.exp(-lam) * five, rtol=1e-12)


def test_occupancy_system_starts_at_profile():
    p = parse_profile(HALF_ONE_SEVEN)
    t, occ = occupancy_u(p, 1.0, intervals=1000)
    assert t[0] == 0 and np.allclose(occ[0], [0.5, 0, 0, 0, 0, 0, 0.5])


def test_closed_form_matches_occupancy_system():
    p = parse_profile(HALF_ONE_SEVEN)
    assert closed_form_error(p, float(p.end_time) - 0.05) <= 1e-6


def test_uniform_limit_matches_finite_target():
    p = parse_profile(HALF_ONE_SEVEN)
    assert mu_hat(p, 1) == Fraction(1, 32)
    for n in (2000, 20000):
        assert small_edge_mean({1: n // 2, 7: n // 2}, 1) / n == Fraction(1, 32)


def test_process_exceeds_uniform_for_half_profile(half_traj):
    assert rho(half_traj, 1) > 1 / 32


def test_sufficient_condition_half_profile():
    ok, margin = sufficient_condition(parse_profile(HALF_ONE_SEVEN), 1)
    assert ok and margin == pytest.approx(4 - math.sqrt(15))


def test_sufficient_condition_fails_below_seven():
    ok, _ = sufficient_condition(parse_profile("1:1/2 6:1/2"), 1)
    assert not ok  # mean 7/2, bound sqrt 13


def test_mass_conservation(half_traj):
    ends = end_values(half_traj)
    assert abs(ends.values.sum() - 2.0) <= 1e-4
    assert ends.tail_error < 1e-6


def test_step_halving(half_traj):
    p = half_traj.profile
    finer = integrate(p, step=half_traj.step / 2)
    assert abs(rho(half_traj, 1) - rho(finer, 1)) < 1e-4


def test_coarse_grid_rejected():
    with pytest.raises(ValueError):
        integrate(parse_profile(HALF_ONE_SEVEN), step=Fraction(1, 10))


def test_invariants_half_profile(half_traj):
    assert all(invariant_report(half_traj).values())
    assert rho(half_traj, 1) >= rho_lower_bound(half_traj.profile, 1)


@st.composite
def profiles(draw):
    top = draw(st.integers(2, 6))
    weights = draw(st.lists(st.integers(0, 4), min_size=top, max_size=top))
    weights[0] = max(weights[0], 1)
    weights[-1] = max(weights[-1], 1)
    total = sum(weights)
    return LimitProfile(tuple(Fraction(w, total) for w in weights))


@settings(max_examples=12, deadline=None)
@given(profiles(), st.data())
def test_invariants_and_lower_bound_hold(p, data):
    traj = integrate(p, step=float(p.end_time) / 1500)
    report = invariant_report(traj)
    assert all(report.values()), report
    ends = end_values(traj)
    assert abs(ends.values.sum() - float(p.end_time)) <= 1e-4
    k = data.draw(st.integers(1, p.max_degree - 1))
    if 0 < sum(p.fractions[:k]) < 1:
        assert rho(traj, k, ends) >= rho_lower_bound(p, k) * (1 - 1e-9)


def test_summary_fields(half_traj):
    s = summary(half_traj, 1)
    assert s["T"] == 2.0 and s["mu_hat_k_exact"] == "1/32"
    assert s["discrepancy"] and s["sufficient_condition"]
    assert abs(s["mass_total"] - 2.0) <= 1e-4
    assert all(s["invariants"].values())


def test_trajectory_csv(half_traj):
    buf = io.StringIO()
    write_trajectory_csv(half_traj, buf, every=100)
    lines = buf.getvalue().splitlines()
    header = lines[0].split(",")
    assert header == trajectory_header(half_traj)
    assert header[:3] == ["t", "u", "u_1"] and header[9] == "lambda" and header[10] == "x_1_1"
    assert len(header) == 2 + 7 + 1 + 28
    assert len(lines) - 1 == len(range(0, len(half_traj.t), 100))
    first = [float(v) for v in lines[1].split(",")]
    assert first[0] == 0 and first[1] == pytest.approx(1.0)

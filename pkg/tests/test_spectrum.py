"""Dispersion relation and coupling-to-wavenumber inversion."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltabox.errors import SingularPoint
from deltabox.lattice import classify_mode, partition, singular_guard_radius
from deltabox.model import RationalX0, RealX0, make_setup, nu_n
from deltabox.spectrum import alpha_from_nu, dispersion, dispersion_value, solve_nu


def setup_pq(p, q, L=1.0, c=1.0):
    return make_setup(L=L, x0=RationalX0(p, q), c=c)


def raw_dispersion(setup, nu):
    """Direct textbook evaluation, valid away from poles and from nu = 0."""
    w1, w2 = setup.width_right, setup.width_left
    if nu > 0:
        return (
            -(nu / 2)
            * math.sin(nu * setup.L / 2)
            / (math.sin(nu * w2 / 2) * math.sin(nu * w1 / 2))
        )
    t = -nu
    return (
        -(t / 2)
        * math.sinh(t * setup.L / 2)
        / (math.sinh(t * w2 / 2) * math.sinh(t * w1 / 2))
    ) * (-1.0)


# ======================================================================
# Pointwise values
# ======================================================================


@pytest.mark.parametrize("nu", [0.7, 3.1, 9.0, 23.456, 47.0])
def test_dispersion_matches_raw_formula_oscillatory(nu):
    s = setup_pq(1, 4)
    assert dispersion(s, nu) == pytest.approx(raw_dispersion(s, nu), rel=1e-12)


@pytest.mark.parametrize("nu", [-0.5, -2.0, -17.3, -300.0])
def test_dispersion_matches_raw_formula_evanescent(nu):
    s = setup_pq(3, 4)
    w1, w2 = s.width_right, s.width_left
    t = -nu
    raw = -(nu / 2) * (1 / math.tanh(t * w1 / 2) + 1 / math.tanh(t * w2 / 2)) * (-1.0)
    assert dispersion(s, nu) == pytest.approx(raw, rel=1e-12)


def test_dispersion_value_at_zero_is_the_removable_limit():
    s = setup_pq(1, 4)
    expected = -s.L / (s.width_right * s.width_left)
    assert dispersion(s, 0.0) == pytest.approx(expected, rel=1e-14)


def test_dispersion_series_switch_is_continuous():
    """Values straddling the small-|nu| series threshold agree closely."""
    s = setup_pq(1, 4)
    threshold = 2 * 1e-4 / s.width_left
    below = dispersion(s, threshold * 0.999)
    above = dispersion(s, threshold * 1.001)
    assert below == pytest.approx(above, rel=1e-9)
    below = dispersion(s, -threshold * 0.999)
    above = dispersion(s, -threshold * 1.001)
    assert below == pytest.approx(above, rel=1e-9)


def test_dispersion_vanishes_at_free_modes():
    s = setup_pq(1, 4)
    for n in (1, 2, 3, 4, 5, 6, 7, 9):  # 8 is a shared singular point
        value = dispersion(s, nu_n(s, n))
        assert abs(value) < 1e-9 * nu_n(s, n)


def test_dispersion_rejects_lattice_points():
    s = setup_pq(1, 4)
    from deltabox.lattice import overline_nu, underline_nu

    with pytest.raises(SingularPoint):
        dispersion(s, underline_nu(s, 1))
    with pytest.raises(SingularPoint):
        dispersion(s, overline_nu(s, 2))
    with pytest.raises(SingularPoint):
        dispersion(s, 16 * math.pi)


def test_dispersion_value_carries_branch_and_coupling():
    s = setup_pq(1, 4, c=2.5)
    dv = dispersion_value(s, 5.0)
    assert dv.alpha == pytest.approx(2.5 * dv.two_g, rel=1e-15)
    assert alpha_from_nu(s, 5.0) == pytest.approx(dv.alpha, rel=1e-15)


def test_dispersion_asymptote_down_the_evanescent_branch():
    """f(nu) approaches nu as nu goes far negative."""
    s = setup_pq(1, 4)
    for nu in (-50.0, -500.0, -5000.0):
        assert dispersion(s, nu) == pytest.approx(nu, rel=1e-6)


# ======================================================================
# Monotone structure
# ======================================================================


def test_dispersion_is_increasing_on_each_interval():
    s = setup_pq(3, 5)
    _, intervals = partition(s, nu_max=50.0)
    guard = 1e-6
    for iv in intervals[:6]:
        lower = iv.upper.nu - 10.0 if iv.lower is None else iv.lower.nu
        span = iv.upper.nu - lower
        grid = [lower + span * (guard + t * (1 - 2 * guard) / 40) for t in range(41)]
        values = [dispersion(s, nu) for nu in grid]
        assert all(b > a for a, b in zip(values, values[1:]))


def test_dispersion_blows_up_at_interval_ends():
    s = setup_pq(1, 4)
    _, intervals = partition(s, nu_max=40.0)
    iv = intervals[2]
    eps = 1e-9 * iv.upper.nu
    assert dispersion(s, iv.lower.nu + eps) < -1e6
    assert dispersion(s, iv.upper.nu - eps) > 1e6


# ======================================================================
# Inversion
# ======================================================================


def test_solve_roundtrip_randomized():
    rng = random.Random(20260814)
    configs = [
        setup_pq(0, 1),
        setup_pq(1, 4),
        setup_pq(3, 4),
        make_setup(L=1.0, x0=RealX0(1 / (10 * math.sqrt(2))), c=1.0),
    ]
    for s in configs:
        _, intervals = partition(s, nu_max=90.0)
        for iv in intervals[:8]:
            for _ in range(3):
                lower = iv.upper.nu - 8.0 if iv.lower is None else iv.lower.nu
                span = iv.upper.nu - lower
                nu_true = lower + span * rng.uniform(0.05, 0.95)
                alpha = alpha_from_nu(s, nu_true)
                nu_back = solve_nu(s, alpha, iv)
                assert nu_back == pytest.approx(nu_true, rel=1e-10)


def test_solve_zero_coupling_recovers_free_modes():
    s = setup_pq(1, 4)
    for n in (1, 2, 3, 5, 7, 9):
        iv = classify_mode(s, n).interval
        assert solve_nu(s, 0.0, iv) == pytest.approx(nu_n(s, n), rel=1e-12)


def test_solve_ground_interval_spans_both_signs():
    s = setup_pq(1, 4)
    _, intervals = partition(s, nu_max=20.0)
    ground = intervals[0]
    # Strong attraction: nu tracks the asymptote f(nu) ~ nu.
    nu = solve_nu(s, -1000.0, ground)
    assert nu == pytest.approx(-1000.0, rel=1e-9)
    # The coupling value at nu = 0 sits inside this interval's range.  The
    # dispersion is stationary at nu = 0, so the root there behaves like a
    # double root and the recoverable accuracy is sqrt of the tolerance.
    alpha0 = alpha_from_nu(s, 0.0)
    assert abs(solve_nu(s, alpha0, ground)) < 1e-5
    # Repulsive values push the root up toward the first pole.
    nu = solve_nu(s, 500.0, ground)
    assert 0 < ground.upper.nu - nu < 0.1 * ground.upper.nu


def test_solve_respects_interval_even_for_extreme_couplings():
    s = setup_pq(3, 5)
    _, intervals = partition(s, nu_max=60.0)
    for iv in intervals[1:5]:
        for alpha in (-1e8, -10.0, 10.0, 1e8):
            nu = solve_nu(s, alpha, iv)
            assert iv.lower.nu < nu < iv.upper.nu
            guard = singular_guard_radius(s)
            closeness = min(nu - iv.lower.nu, iv.upper.nu - nu)
            assert closeness >= guard * 0.5


@given(
    alpha=st.floats(min_value=-200.0, max_value=200.0),
    index=st.integers(min_value=0, max_value=6),
)
@settings(max_examples=50, deadline=None)
def test_solve_then_evaluate_is_identity(alpha, index):
    s = setup_pq(1, 4)
    _, intervals = partition(s, nu_max=60.0)
    iv = intervals[index]
    nu = solve_nu(s, alpha, iv)
    assert alpha_from_nu(s, nu) == pytest.approx(alpha, rel=1e-9, abs=1e-9)

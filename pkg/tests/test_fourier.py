"""Sine-basis expansions: coefficients, partial sums, tails."""

import math

import pytest

from deltabox.errors import DomainError, InK, NotInK
from deltabox.fourier import (
    coeffs_general,
    coeffs_upsilon_hat,
    coeffs_upsilon_over,
    coeffs_upsilon_under,
    parseval_defect,
    partial_sum,
)
from deltabox.lattice import overline_nu, underline_nu
from deltabox.model import RationalX0, RealX0, make_setup, nu_n, phi_mode
from deltabox.wavefn import (
    eval_normalized,
    upsilon_hat,
    upsilon_over,
    upsilon_under,
)

from _quad import extrapolate_to_zero, simpson_split


def setup_pq(p, q, L=1.0, c=1.0):
    return make_setup(L=L, x0=RationalX0(p, q), c=c)


def quadrature_coefficient(setup, f, m, n=8001):
    return simpson_split(
        lambda x: f(x) * phi_mode(setup, m, x),
        -setup.L / 2,
        setup.L / 2,
        setup.x0_value,
        n=n,
    )


# ======================================================================
# Coefficients against direct quadrature
# ======================================================================


@pytest.mark.parametrize("nu", [7.3, 22.1, -9.0, 0.0, 1e-6])
def test_general_coefficients_match_quadrature(nu):
    s = setup_pq(1, 4)
    expansion = coeffs_general(s, nu, M=12)
    f = lambda x: eval_normalized(s, nu, x).value
    for m, a in expansion.coefficients:
        assert a == pytest.approx(quadrature_coefficient(s, f, m), abs=2e-9)


def test_general_coefficients_match_quadrature_real_site():
    s = make_setup(L=2.0, x0=RealX0(0.37), c=1.0)
    for nu in (4.1, -3.3):
        expansion = coeffs_general(s, nu, M=8)
        f = lambda x: eval_normalized(s, nu, x).value
        for m, a in expansion.coefficients:
            assert a == pytest.approx(quadrature_coefficient(s, f, m), abs=2e-9)


def test_expansion_is_one_hot_at_free_modes():
    s = setup_pq(1, 4)
    expansion = coeffs_general(s, nu_n(s, 5), M=16)
    for m, a in expansion.coefficients:
        assert a == (1.0 if m == 5 else 0.0)
    assert expansion.tail_bound == 0.0


def test_hat_coefficients_match_quadrature():
    s = setup_pq(3, 4)
    nu_hat = nu_n(s, 16)
    expansion = coeffs_upsilon_hat(s, nu_hat, M=24)
    f = lambda x: upsilon_hat(s, nu_hat, x).value
    for m, a in expansion.coefficients:
        assert a == pytest.approx(quadrature_coefficient(s, f, m), abs=2e-9)


def test_hat_expansion_active_mode_coefficient_is_exactly_zero():
    s = setup_pq(1, 4)
    expansion = coeffs_upsilon_hat(s, nu_n(s, 8), M=64)
    coeffs = dict(expansion.coefficients)
    assert coeffs[8] == 0.0
    # Every mode vanishing at x0 (multiples of the base) is also absent.
    for m in (16, 24, 32):
        assert abs(coeffs[m]) < 1e-13


def test_under_coefficients_match_quadrature():
    s = setup_pq(1, 4)
    expansion = coeffs_upsilon_under(s, 2, M=16)
    f = lambda x: upsilon_under(s, 2, "below", x).value
    for m, a in expansion.coefficients:
        assert a == pytest.approx(quadrature_coefficient(s, f, m), abs=2e-9)


def test_over_coefficients_match_quadrature():
    s = setup_pq(1, 4)
    expansion = coeffs_upsilon_over(s, 2, M=16)
    f = lambda x: upsilon_over(s, 2, x).value
    for m, a in expansion.coefficients:
        assert a == pytest.approx(quadrature_coefficient(s, f, m), abs=2e-9)


def test_under_sides_differ_by_overall_sign():
    s = setup_pq(1, 4)
    below = coeffs_upsilon_under(s, 1, M=8, side="below")
    above = coeffs_upsilon_under(s, 1, M=8, side="above")
    for (m1, a1), (m2, a2) in zip(below.coefficients, above.coefficients):
        assert m1 == m2 and a1 == -a2


def test_limit_expansions_reject_wrong_lattice_membership():
    s = setup_pq(1, 4)
    with pytest.raises(InK):
        coeffs_upsilon_under(s, 5, M=8)
    with pytest.raises(InK):
        coeffs_upsilon_over(s, 3, M=8)
    with pytest.raises(NotInK):
        coeffs_upsilon_hat(s, nu_n(s, 7), M=8)
    with pytest.raises(DomainError):
        coeffs_general(s, 5.0, M=0)


# ======================================================================
# Partial sums and tails
# ======================================================================


def sup_reconstruction_error(setup, expansion, reference, exclude_radius=0.0, n=241):
    xs = [-setup.L / 2 + i * setup.L / (n - 1) for i in range(n)]
    worst = 0.0
    for x in xs:
        if abs(x - setup.x0_value) < exclude_radius:
            continue
        worst = max(worst, abs(partial_sum(expansion, x) - reference(x)))
    return worst


def test_partial_sums_reconstruct_smooth_states():
    s = setup_pq(1, 4)
    for nu in (7.3, -4.0, 0.0):
        expansion = coeffs_general(s, nu, M=2048)
        f = lambda x: eval_normalized(s, nu, x).value
        assert sup_reconstruction_error(s, expansion, f) < 1e-3


def test_partial_sums_reconstruct_limit_states_away_from_site():
    s = setup_pq(1, 4)
    cases = [
        (coeffs_upsilon_hat(s, nu_n(s, 8), M=2048), lambda x: upsilon_hat(s, nu_n(s, 8), x).value),
        (coeffs_upsilon_under(s, 1, M=2048), lambda x: upsilon_under(s, 1, "below", x).value),
        (coeffs_upsilon_over(s, 1, M=2048), lambda x: upsilon_over(s, 1, x).value),
    ]
    for expansion, f in cases:
        err = sup_reconstruction_error(s, expansion, f, exclude_radius=s.L / 64)
        assert err < 4e-3


def test_parseval_defect_shrinks_with_truncation_order():
    s = setup_pq(1, 4)
    defects = [abs(parseval_defect(coeffs_general(s, 7.3, M=M))) for M in (64, 256, 1024)]
    assert defects[0] > defects[1] > defects[2]
    assert defects[2] < 1e-3


def test_parseval_defect_small_for_all_state_families():
    s = setup_pq(1, 4)
    expansions = [
        coeffs_general(s, 7.3, M=4096),
        coeffs_general(s, -9.0, M=4096),
        coeffs_general(s, 0.0, M=4096),
        coeffs_upsilon_hat(s, nu_n(s, 8), M=4096),
        coeffs_upsilon_under(s, 1, M=4096),
        coeffs_upsilon_over(s, 1, M=4096),
    ]
    for expansion in expansions:
        assert abs(parseval_defect(expansion)) < 1e-3


def test_tail_bound_controls_the_dropped_remainder():
    s = setup_pq(1, 4)
    for nu in (7.3, -4.0):
        small = coeffs_general(s, nu, M=256)
        large = coeffs_general(s, nu, M=2048)
        xs = [-s.L / 2 + i * s.L / 40 for i in range(41)]
        gap = max(abs(partial_sum(small, x) - partial_sum(large, x)) for x in xs)
        assert gap <= small.tail_bound * 1.05


def test_deep_evanescent_prefactor_crosses_log_switch_smoothly():
    """Coefficient magnitudes vary smoothly where the log-space path begins."""
    s = setup_pq(1, 4)
    direct = coeffs_general(s, -599.0, M=8)
    logged = coeffs_general(s, -601.0, M=8)
    for (m1, a1), (m2, a2) in zip(direct.coefficients, logged.coefficients):
        assert m1 == m2
        assert a1 == pytest.approx(a2, rel=2e-2)
    assert abs(parseval_defect(coeffs_general(s, -650.0, M=4096))) < 1e-3


# ======================================================================
# Coefficient limits at the lattice
# ======================================================================


def test_general_coefficients_converge_to_over_limit():
    s = setup_pq(1, 4)
    o1 = overline_nu(s, 1)
    target = dict(coeffs_upsilon_over(s, 1, M=10).coefficients)
    eps_list = [1e-4, 1e-5, 1e-6]
    for m in (1, 2, 3, 7):
        values = [
            dict(coeffs_general(s, o1 * (1 + e), M=10).coefficients)[m]
            for e in eps_list
        ]
        extrapolated = extrapolate_to_zero(eps_list, values)
        assert extrapolated == pytest.approx(target[m], abs=1e-6)


def test_general_coefficients_converge_to_under_limit_both_sides():
    s = setup_pq(1, 4)
    u1 = underline_nu(s, 1)
    eps_list = [1e-4, 1e-5, 1e-6]
    for side, orient in (("below", -1), ("above", +1)):
        target = dict(coeffs_upsilon_under(s, 1, M=6, side=side).coefficients)
        for m in (1, 2, 5):
            values = [
                dict(coeffs_general(s, u1 * (1 + orient * e), M=6).coefficients)[m]
                for e in eps_list
            ]
            extrapolated = extrapolate_to_zero(eps_list, values)
            assert extrapolated == pytest.approx(target[m], abs=1e-6)

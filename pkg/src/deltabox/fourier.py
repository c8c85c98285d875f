"""Expansions of the interacting states in the free-box sine basis.

Every normalized eigenfunction and every limit state is square-integrable on
the box, so it expands in the free modes Phi_m.  The overlap integrals all
collapse to closed forms proportional to Phi_m(x0) over a resonance
denominator, so the coefficients decay like 1/m**2 and partial sums converge
uniformly.  This module produces those coefficient lists, evaluates partial
sums with compensated summation, and reports a tail estimate alongside every
expansion.

Sign prefactors reuse the hardened floor conventions of `wavefn`, so the
expansions converge to the states as defined there, not merely up to sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

from .errors import DomainError, InK
from .lattice import _over_in_shared, _under_in_shared
from .model import RationalX0, Setup, nu_n, phi_mode
from .wavefn import (
    WaveKind,
    _log_rho2_hyper,
    _require_shared,
    _under_floor,
    rho,
    trig_left_sign,
)
from ._special import log_sinh

# Default truncation order; the 1/m**2 decay puts the sup-norm tail near
# a few parts in M.
DEFAULT_M = 4096

# Relative snap radius for recognizing nu as a free-mode value nu_n, where
# the expansion is exactly one-hot.
_MODE_SNAP_RTOL = 1e-12

# Beyond this value of |nu| * L the evanescent prefactor is formed in log
# space (sinh and rho separately overflow but their ratio is tame).
_LOG_SWITCH = 600.0


@dataclass(frozen=True)
class FourierExpansion:
    """Truncated sine-basis expansion of one state.

    coefficients holds (m, a_m) pairs for m = 1..M.  prefactor is the
    state's coefficient constant (the c-value multiplying Phi_m(x0) over the
    resonance denominator); it is 0.0 for one-hot expansions.  tail_bound
    estimates the sup-norm of the dropped tail from the measured 1/m**2
    envelope.
    """

    kind: WaveKind
    coefficients: List[Tuple[int, float]]
    prefactor: float
    M: int
    setup: Setup
    tail_bound: float


def _finish(
    setup: Setup, kind: WaveKind, pref: float, coeffs: List[Tuple[int, float]]
) -> FourierExpansion:
    envelope = max((abs(a) * m * m for m, a in coeffs), default=0.0)
    tail = math.sqrt(2 / setup.L) * envelope / max(len(coeffs), 1)
    return FourierExpansion(kind, coeffs, pref, len(coeffs), setup, tail)


def _one_hot(setup: Setup, kind: WaveKind, n: int, M: int) -> FourierExpansion:
    coeffs = [(m, 1.0 if m == n else 0.0) for m in range(1, M + 1)]
    return FourierExpansion(kind, coeffs, 0.0, M, setup, 0.0)


def _check_m(M: int) -> None:
    if M < 1:
        raise DomainError(f"truncation order must be >= 1, got {M!r}")


# ============================================================
# General states (any branch parameter nu)
# ============================================================


def coeffs_general(setup: Setup, nu: float, M: int = DEFAULT_M) -> FourierExpansion:
    """Expansion of the normalized eigenfunction at branch parameter nu.

    At nu equal to a free-mode value (within 1e-12 relative) the state is
    the free mode itself and the expansion is exactly one-hot.  Elsewhere
    a_m = c * Phi_m(x0) / D_m with the branch-dependent resonance
    denominator D_m and prefactor c; the oscillatory and evanescent branches
    differ in the sign of the nu**2/4 term and in sin versus sinh.
    """
    _check_m(M)
    if nu > 0:
        n_guess = round(nu / nu_n(setup, 1))
        if n_guess >= 1 and abs(nu - nu_n(setup, n_guess)) <= _MODE_SNAP_RTOL * nu:
            return _one_hot(setup, WaveKind.trig(), n_guess, M)
        pref = trig_left_sign(setup, nu) * (nu / (2 * rho(setup, nu))) * math.sin(
            nu * setup.L / 2
        )
        kind = WaveKind.trig()

        def denom(m: int) -> float:
            return (math.pi * m / setup.L) ** 2 - (nu / 2) ** 2

    elif nu == 0:
        pref = 4 * math.sqrt(3) * math.sqrt(setup.L) / (
            setup.L**2 - 4 * setup.x0_value**2
        )
        kind = WaveKind.linear()

        def denom(m: int) -> float:
            return (math.pi * m / setup.L) ** 2

    else:
        t = -nu
        if t * setup.L < _LOG_SWITCH:
            pref = (t / (2 * rho(setup, nu))) * math.sinh(t * setup.L / 2)
        else:
            log_pref = (
                math.log(t / 2)
                + log_sinh(t * setup.L / 2)
                - 0.5 * _log_rho2_hyper(setup, t)
            )
            pref = math.exp(log_pref)
        kind = WaveKind.hyper()

        def denom(m: int) -> float:
            return (math.pi * m / setup.L) ** 2 + (t / 2) ** 2

    phi0 = [phi_mode(setup, m, setup.x0_value) for m in range(1, M + 1)]
    coeffs = [(m, pref * phi0[m - 1] / denom(m)) for m in range(1, M + 1)]
    return _finish(setup, kind, pref, coeffs)


# ============================================================
# Limit states
# ============================================================


def coeffs_upsilon_hat(
    setup: Setup, nu_hat: float, M: int = DEFAULT_M
) -> FourierExpansion:
    """Expansion of the continuous limit state at shared-lattice value nu_hat.

    a_m = c_p * Phi_m(x0) / (m**2 - p**2) for m != p, and a_p = 0 exactly:
    the limit state is orthogonal to the free mode it replaces, and to every
    mode that vanishes at x0.
    """
    _check_m(M)
    p = _require_shared(setup, nu_hat)
    pref = (
        math.cos((p * math.pi / setup.L) * (setup.L / 2 - setup.x0_value))
        * 2
        * math.sqrt(2)
        * p
        * setup.L ** 1.5
        / (math.pi * math.sqrt(setup.L**2 - 4 * setup.x0_value**2))
    )
    coeffs: List[Tuple[int, float]] = []
    for m in range(1, M + 1):
        if m == p:
            coeffs.append((m, 0.0))
        else:
            coeffs.append(
                (m, pref * phi_mode(setup, m, setup.x0_value) / (m * m - p * p))
            )
    return _finish(setup, WaveKind.limit_hat(), pref, coeffs)


def coeffs_upsilon_under(
    setup: Setup, k: int, M: int = DEFAULT_M, side: str = "below"
) -> FourierExpansion:
    """Expansion of the left one-sided limit state with index k.

    Denominators (L/2 + x0)**2 m**2 - L**2 k**2 never vanish for valid k:
    a vanishing one would place the k-th left value on the free-mode lattice
    and hence on the shared lattice, which upsilon_under rejects.  side
    selects the coupling path; "above" negates every coefficient.
    """
    _check_m(M)
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k!r}")
    if side not in ("below", "above"):
        raise DomainError(f"side must be 'below' or 'above', got {side!r}")
    if isinstance(setup.x0, RationalX0) and _under_in_shared(setup.x0, k):
        raise InK(f"left lattice index k={k} lies on the shared lattice")
    exponent = 1 + (_under_floor(setup, k) - k)
    sign = -1.0 if exponent % 2 else 1.0
    if side == "above":
        sign = -sign
    pref = sign * k * setup.L**2 * math.sqrt(setup.L + 2 * setup.x0_value) / math.pi
    w2 = setup.width_left
    coeffs = [
        (
            m,
            pref
            * phi_mode(setup, m, setup.x0_value)
            / (w2 * w2 * m * m - setup.L**2 * k * k),
        )
        for m in range(1, M + 1)
    ]
    return _finish(setup, WaveKind.limit_under(k, side), pref, coeffs)


def coeffs_upsilon_over(setup: Setup, l: int, M: int = DEFAULT_M) -> FourierExpansion:
    """Expansion of the right one-sided limit state with index l."""
    _check_m(M)
    if l < 1:
        raise DomainError(f"l must be >= 1, got {l!r}")
    if isinstance(setup.x0, RationalX0) and _over_in_shared(setup.x0, l):
        raise InK(f"right lattice index l={l} lies on the shared lattice")
    sign = -1.0 if l % 2 else 1.0
    pref = sign * l * setup.L**2 * math.sqrt(setup.L - 2 * setup.x0_value) / math.pi
    w1 = setup.width_right
    coeffs = [
        (
            m,
            pref
            * phi_mode(setup, m, setup.x0_value)
            / (w1 * w1 * m * m - setup.L**2 * l * l),
        )
        for m in range(1, M + 1)
    ]
    return _finish(setup, WaveKind.limit_over(l), pref, coeffs)


# ============================================================
# Evaluation
# ============================================================


def partial_sum(expansion: FourierExpansion, x: float) -> float:
    """Sum_{m<=M} a_m Phi_m(x) with Kahan-compensated accumulation."""
    setup = expansion.setup
    total = 0.0
    carry = 0.0
    for m, a in expansion.coefficients:
        if a == 0.0:
            continue
        term = a * phi_mode(setup, m, x) - carry
        fresh = total + term
        carry = (fresh - total) - term
        total = fresh
    return total


def parseval_defect(expansion: FourierExpansion) -> float:
    """1 - sum a_m**2, the truncated mass deficit of a unit-norm state."""
    total = 0.0
    carry = 0.0
    for _, a in expansion.coefficients:
        term = a * a - carry
        fresh = total + term
        carry = (fresh - total) - term
        total = fresh
    return 1.0 - total

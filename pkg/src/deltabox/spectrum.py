"""Dispersion relation between interaction strength and wave number.

The quantization condition for the point interaction reads

    alpha / c = f(nu),

where f is evaluated per branch:

    nu > 0:  f(nu) = -(nu/2) [cot((nu/2) w1) + cot((nu/2) w2)]
    nu = 0:  f(0)  = -L / (L^2/4 - x0^2)
    nu < 0:  f(nu) = -(t/2) [coth((t/2) w1) + coth((t/2) w2)],  t = -nu

with w1 = L/2 - x0 and w2 = L/2 + x0.  The cot/coth forms are used because
they stay numerically clean away from the lattice poles; a two-sided series
in nu takes over below |nu| w2 / 2 = 1e-4, where the cotangents would
cancel catastrophically against each other.  f is continuous across nu = 0,
strictly increasing on every lattice interval, and maps each interval onto
all of R, which makes alpha -> nu on a fixed interval a well-posed root
finding problem solved here by safeguarded Newton inside a shrinking
bisection bracket.

f equals the eigenfunction's derivative-jump ratio at x0 (the weak form of
the point interaction), which is pinned by a dedicated test; the returned
value is exposed both raw (dispersion) and scaled by c (alpha_from_nu).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import BracketError, SingularPoint
from .lattice import IntervalDescriptor, nearest_lattice_point, singular_guard_radius, underline_nu
from .model import Setup

# Below this value of |nu| w2 / 2 the series expansion around nu = 0 is used.
_SERIES_THRESHOLD = 1e-4

# ======================================================================
# Types
# ======================================================================


@dataclass(frozen=True)
class DispersionValue:
    """The dispersion value 2g = alpha / c together with alpha itself."""

    two_g: float
    alpha: float


# ======================================================================
# Evaluation
# ======================================================================


def _check_not_singular(setup: Setup, nu: float) -> None:
    if nu <= 0:
        return
    _, dist = nearest_lattice_point(setup, nu)
    if dist < singular_guard_radius(setup):
        raise SingularPoint(f"nu = {nu} is within guard radius of a lattice point")


def _two_g_zero(setup: Setup) -> float:
    return -setup.L / (setup.L**2 / 4 - setup.x0_value**2)


def _series_value(setup: Setup, nu: float) -> float:
    # Even series around nu = 0, valid on both branches: the quadratic term
    # changes sign with the branch, the quartic does not.
    w1, w2 = setup.width_right, setup.width_left
    s3 = w1**3 + w2**3
    sign = 1.0 if nu >= 0 else -1.0
    return _two_g_zero(setup) + sign * nu**2 * setup.L / 12 + nu**4 * s3 / 720


def _series_derivative(setup: Setup, nu: float) -> float:
    w1, w2 = setup.width_right, setup.width_left
    s3 = w1**3 + w2**3
    sign = 1.0 if nu >= 0 else -1.0
    return sign * nu * setup.L / 6 + nu**3 * s3 / 180


def _coth(z: float) -> float:
    return 1.0 / math.tanh(z)

def _csch2(z: float) -> float:
    # 1/sinh^2 z; underflows to 0 for large z instead of overflowing.
    if z > 300:
        return 0.0
    return (1.0 / math.sinh(z)) ** 2


def _value_and_derivative(setup: Setup, nu: float) -> tuple[float, float]:
    w1, w2 = setup.width_right, setup.width_left
    if abs(nu) * w2 / 2 < _SERIES_THRESHOLD:
        return _series_value(setup, nu), _series_derivative(setup, nu)
    if nu > 0:
        a1, a2 = nu / 2 * w1, nu / 2 * w2
        cot1, cot2 = 1 / math.tan(a1), 1 / math.tan(a2)
        csc1_sq, csc2_sq = 1 + cot1**2, 1 + cot2**2
        value = -(nu / 2) * (cot1 + cot2)
        deriv = -(cot1 + cot2) / 2 + (nu / 4) * (w1 * csc1_sq + w2 * csc2_sq)
        return value, deriv
    t = -nu
    c1, c2 = t / 2 * w1, t / 2 * w2
    coth1, coth2 = _coth(c1), _coth(c2)
    value = -(t / 2) * (coth1 + coth2)
    # d/dnu = -d/dt
    ddt = -(coth1 + coth2) / 2 + (t / 4) * (w1 * _csch2(c1) + w2 * _csch2(c2))
    return value, -ddt


def dispersion(setup: Setup, nu: float) -> float:
    """The dispersion value f(nu) = alpha / c, on any branch.

    Raises SingularPoint when nu lies within the guard radius of a lattice
    point (absolute radius 1e-12 of the first under point).
    """
    _check_not_singular(setup, nu)
    return _value_and_derivative(setup, nu)[0]


def alpha_from_nu(setup: Setup, nu: float) -> float:
    """Interaction strength with eigenfunction at wave number nu: c f(nu)."""
    return setup.c * dispersion(setup, nu)


def dispersion_value(setup: Setup, nu: float) -> DispersionValue:
    """Bundled dispersion value and interaction strength at nu."""
    two_g = dispersion(setup, nu)
    return DispersionValue(two_g=two_g, alpha=setup.c * two_g)


# ======================================================================
# Root solving
# ======================================================================


def solve_nu(setup: Setup, alpha: float, interval: IntervalDescriptor) -> float:
    """The unique nu in the interval with alpha_from_nu(nu) = alpha.

    Relative tolerance 1e-12.  The dispersion value is strictly increasing
    from -inf to +inf on each interval, so a root always exists; a
    BracketError is raised only for a degenerate interval.  On the unbounded
    leftmost interval the lower bracket is found by doubling, using the
    asymptote f(nu) ~ nu far down the evanescent branch.
    """
    target = alpha / setup.c
    guard = singular_guard_radius(setup)
    upper = interval.upper.nu

    if interval.lower is None:
        hi = _shrink_toward_pole(setup, target, upper, -1.0, guard, span=upper)
        lo = min(-1.0, 1.5 * target)
        for _ in range(200):
            if _value_and_derivative(setup, lo)[0] < target:
                break
            lo *= 2
        else:
            raise BracketError(f"could not bracket target {target} below {upper}")
    else:
        lower = interval.lower.nu
        if not (upper > lower + 4 * guard):
            raise BracketError(f"degenerate interval ({lower}, {upper})")
        span = upper - lower
        lo = _shrink_toward_pole(setup, target, lower, +1.0, guard, span)
        hi = _shrink_toward_pole(setup, target, upper, -1.0, guard, span)
        if lo >= hi:
            # The root is closer to a pole than float spacing can resolve.
            return lo

    return _safeguarded_newton(setup, target, lo, hi)


def _shrink_toward_pole(
    setup: Setup, target: float, pole: float, side: float, guard: float, span: float
) -> float:
    # Walk a bracket endpoint toward the pole (side=+1 from above, -1 from
    # below) until the dispersion value passes the target.  Near the pole f
    # blows up to -inf (from above) or +inf (from below), so this terminates
    # unless the root itself is inside the guarded zone, in which case the
    # closest admissible point is returned.
    offset = span / 4
    while offset > 2 * guard:
        x = pole + side * offset
        value = _value_and_derivative(setup, x)[0]
        if (value < target) if side > 0 else (value > target):
            return x
        offset /= 16
    return pole + side * 2 * guard


def _safeguarded_newton(setup: Setup, target: float, lo: float, hi: float) -> float:
    # Invariant: f(lo) < target < f(hi).  Newton steps are taken only when
    # they land strictly inside the bracket; otherwise bisect.
    x = 0.5 * (lo + hi)
    spacing = underline_nu(setup, 1)
    for _ in range(200):
        value, deriv = _value_and_derivative(setup, x)
        if value < target:
            lo = x
        else:
            hi = x
        tol = 1e-13 * max(abs(lo), abs(hi), spacing)
        if hi - lo <= tol:
            break
        if deriv > 0:
            step = (value - target) / deriv
            candidate = x - step
            if lo < candidate < hi:
                x = candidate
                continue
        x = 0.5 * (lo + hi)
    return 0.5 * (lo + hi)

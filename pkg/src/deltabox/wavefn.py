"""Eigenfunctions of the point-interaction box and their strong-coupling limits.

Every bound state splits at the interaction site x0 into two free half-waves
that share the wavenumber nu/2 and vanish at the walls.  This module builds
those piecewise states on all three energy branches (oscillatory nu > 0, the
linear nu = 0 state, evanescent nu < 0), normalizes them in closed form, and
exposes the limit states reached as the coupling strength diverges: a
continuous state on the shared lattice and one-sided states that fill a
single compartment and vanish identically on the other.

Conventions fixed here and relied on elsewhere:

* the right piece of a trig state carries amplitude |sin(a2)| >= 0, the left
  piece carries (-1)**floor(a2/pi) * sin(a1), which keeps the state continuous
  at x0 and pins its sign for the coefficient formulas in `fourier`;
* limit states are normalized to 1 and signed so that they are the pointwise
  limits of the normalized eigenfunctions along the attractive and repulsive
  coupling paths (the one-sided pair differ by an overall sign between the
  two paths, selected by `side`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError, InK, NotInK
from .lattice import LatticePoint, _over_in_shared, _under_in_shared, kappa_base
from .model import RationalX0, Setup, nu_n, phi_mode
from ._special import (
    hardened_floor,
    log_add_exp,
    log_sinh,
    log_sinhc_minus_one,
    one_minus_sinc,
    sinhc_minus_one,
)

# Relative half-width of the window around a shared-lattice mode inside which
# the normalized eigenfunction is replaced by its (continuous) limit state.
_SHARED_WINDOW_RTOL = 1e-8

# Beyond this value of |nu| * L the evanescent normalization is evaluated in
# log space; the direct expressions overflow near |nu| * L ~ 709.
_LOG_SWITCH = 600.0


# ============================================================
# Kinds and samples
# ============================================================


@dataclass(frozen=True)
class WaveKind:
    """Tag identifying which formula produced a wavefunction value.

    label is one of "trig", "linear", "hyper", "limit_hat", "limit_under",
    "limit_over".  The one-sided limits carry their lattice index (k or l),
    and the left-compartment one additionally carries the coupling path
    ("below" or "above") that selects its overall sign.
    """

    label: str
    k: Optional[int] = None
    l: Optional[int] = None
    side: Optional[str] = None

    @classmethod
    def trig(cls) -> "WaveKind":
        return cls("trig")

    @classmethod
    def linear(cls) -> "WaveKind":
        return cls("linear")

    @classmethod
    def hyper(cls) -> "WaveKind":
        return cls("hyper")

    @classmethod
    def limit_hat(cls) -> "WaveKind":
        return cls("limit_hat")

    @classmethod
    def limit_under(cls, k: int, side: str) -> "WaveKind":
        return cls("limit_under", k=k, side=side)

    @classmethod
    def limit_over(cls, l: int) -> "WaveKind":
        return cls("limit_over", l=l)


@dataclass(frozen=True)
class WaveSample:
    """One evaluated point of a wavefunction."""

    x: float
    value: float
    kind: WaveKind


@dataclass(frozen=True)
class LimitResidualReport:
    """Numerical evidence that a limit state solves its boundary problem.

    max_ode_residual is the largest relative second-difference defect of
    -psi'' = (E/c) psi away from the kink; jump_error compares the analytic
    one-sided derivative mismatch at x0 against the tabulated kappa constant;
    boundary_error is the larger of the two wall values.
    """

    max_ode_residual: float
    jump_error: float
    boundary_error: float


# ============================================================
# Raw (unnormalized) eigenfunctions
# ============================================================


def _check_x(setup: Setup, x: float) -> None:
    half = setup.L / 2
    if not (-half <= x <= half):
        raise DomainError(f"x={x!r} outside the box [{-half}, {half}]")


def trig_left_sign(setup: Setup, nu: float) -> float:
    """Sign factor (-1)**floor(a2/pi) carried by the left trig piece."""
    a2 = (nu / 2) * setup.width_left
    return -1.0 if hardened_floor(a2 / math.pi) % 2 else 1.0


def eval_psi(setup: Setup, nu: float, x: float) -> WaveSample:
    """Unnormalized eigenfunction value at x for branch parameter nu.

    The amplitude convention makes the state continuous at x0 with a
    nonnegative right piece.  Raises OverflowError for evanescent states so
    deep that the sinh products exceed float range (|nu| L / 2 > ~709); use
    eval_normalized for those.
    """
    _check_x(setup, x)
    w1 = setup.width_right
    w2 = setup.width_left
    if nu > 0:
        a1 = (nu / 2) * w1
        a2 = (nu / 2) * w2
        if x <= setup.x0_value:
            value = trig_left_sign(setup, nu) * math.sin(a1) * math.sin(
                (nu / 2) * (setup.L / 2 + x)
            )
        else:
            value = abs(math.sin(a2)) * math.sin((nu / 2) * (setup.L / 2 - x))
        return WaveSample(x, value, WaveKind.trig())
    if nu == 0:
        if x <= setup.x0_value:
            value = w1 * (setup.L / 2 + x)
        else:
            value = w2 * (setup.L / 2 - x)
        return WaveSample(x, value, WaveKind.linear())
    t = -nu
    if x <= setup.x0_value:
        value = math.sinh(t * w1 / 2) * math.sinh((t / 2) * (setup.L / 2 + x))
    else:
        value = math.sinh(t * w2 / 2) * math.sinh((t / 2) * (setup.L / 2 - x))
    return WaveSample(x, value, WaveKind.hyper())


# ============================================================
# Normalization
# ============================================================


def rho(setup: Setup, nu: float) -> float:
    """L2 norm of the unnormalized eigenfunction, in closed form.

    Returns math.inf when the evanescent norm exceeds float range.
    """
    w1 = setup.width_right
    w2 = setup.width_left
    if nu > 0:
        s1 = math.sin((nu / 2) * w1)
        s2 = math.sin((nu / 2) * w2)
        rho2 = s1 * s1 * (w2 / 2) * one_minus_sinc(nu * w2) + s2 * s2 * (
            w1 / 2
        ) * one_minus_sinc(nu * w1)
        return math.sqrt(rho2)
    if nu == 0:
        return w1 * w2 * math.sqrt(setup.L / 3)
    t = -nu
    if t * setup.L < _LOG_SWITCH:
        sh1 = math.sinh(t * w1 / 2)
        sh2 = math.sinh(t * w2 / 2)
        rho2 = sh1 * sh1 * (w2 / 2) * sinhc_minus_one(t * w2) + sh2 * sh2 * (
            w1 / 2
        ) * sinhc_minus_one(t * w1)
        return math.sqrt(rho2)
    try:
        return math.exp(0.5 * _log_rho2_hyper(setup, t))
    except OverflowError:
        return math.inf


def _log_rho2_hyper(setup: Setup, t: float) -> float:
    w1 = setup.width_right
    w2 = setup.width_left
    term1 = 2 * log_sinh(t * w1 / 2) + math.log(w2 / 2) + log_sinhc_minus_one(t * w2)
    term2 = 2 * log_sinh(t * w2 / 2) + math.log(w1 / 2) + log_sinhc_minus_one(t * w1)
    return log_add_exp(term1, term2)


def _shared_mode_near(setup: Setup, nu: float) -> Optional[float]:
    """Shared-lattice value within the replacement window of nu, if any."""
    if nu <= 0:
        return None
    base = kappa_base(setup)
    if base is None:
        return None
    nu_b = nu_n(setup, base)
    m = round(nu / nu_b)
    if m >= 1 and abs(nu - m * nu_b) <= _SHARED_WINDOW_RTOL * m * nu_b:
        return m * nu_b
    return None


def eval_normalized(setup: Setup, nu: float, x: float) -> WaveSample:
    """Unit-norm eigenfunction value at x.

    Within a relative window of 1e-8 around a shared-lattice mode the norm
    collapses and the direct quotient loses all precision, so the value is
    replaced by the continuous limit state there (the two-sided limit along
    either coupling path).  Very deep evanescent states are evaluated in log
    space, where the direct sinh products would overflow.
    """
    shared = _shared_mode_near(setup, nu)
    if shared is not None:
        return upsilon_hat(setup, shared, x)
    if nu < 0 and (-nu) * setup.L >= _LOG_SWITCH:
        _check_x(setup, x)
        t = -nu
        if x <= setup.x0_value:
            arm = (t / 2) * (setup.L / 2 + x)
            other = t * setup.width_right / 2
        else:
            arm = (t / 2) * (setup.L / 2 - x)
            other = t * setup.width_left / 2
        if arm == 0.0:
            return WaveSample(x, 0.0, WaveKind.hyper())
        log_val = log_sinh(other) + log_sinh(arm) - 0.5 * _log_rho2_hyper(setup, t)
        value = math.exp(log_val) if log_val < 700 else math.inf
        return WaveSample(x, value, WaveKind.hyper())
    sample = eval_psi(setup, nu, x)
    return WaveSample(x, sample.value / rho(setup, nu), sample.kind)


def sample_wave(setup: Setup, nu: float, xs: "list[float]") -> "list[WaveSample]":
    """Normalized eigenfunction sampled on a list of positions."""
    return [eval_normalized(setup, nu, x) for x in xs]


# ============================================================
# Logarithmic-derivative jump at the interaction site
# ============================================================


def jump_ratio(setup: Setup, nu: float) -> float:
    """[psi'(x0+) - psi'(x0-)] / psi(x0), from the piecewise derivatives.

    This is computed from the eigenfunction pieces alone, independently of
    the dispersion function, so the two can be checked against each other.
    Raises DomainError when psi(x0) = 0 (lattice points), where the ratio
    is undefined.
    """
    w1 = setup.width_right
    w2 = setup.width_left
    if nu > 0:
        a1 = (nu / 2) * w1
        a2 = (nu / 2) * w2
        s = trig_left_sign(setup, nu)
        denom = abs(math.sin(a2)) * math.sin(a1) * s
        if denom == 0.0:
            raise DomainError("eigenfunction vanishes at x0; jump ratio undefined")
        num = -(nu / 2) * (
            abs(math.sin(a2)) * math.cos(a1) * s + s * s * math.sin(a1) * math.cos(a2)
        )
        # s*s = 1; kept explicit so both pieces visibly carry the left sign.
        return num / denom
    if nu == 0:
        return -setup.L / (w1 * w2)
    t = -nu
    return -(t / 2) * (1.0 / math.tanh(t * w1 / 2) + 1.0 / math.tanh(t * w2 / 2))


# ============================================================
# Limit states (coupling strength -> +/- infinity)
# ============================================================


def _require_shared(setup: Setup, nu_hat: float) -> int:
    """Validate that nu_hat sits on the shared lattice; return its mode number."""
    base = kappa_base(setup)
    if base is None:
        raise NotInK("the shared lattice is empty for irrational x0")
    nu_b = nu_n(setup, base)
    m = round(nu_hat / nu_b)
    if m < 1 or abs(nu_hat - m * nu_b) > 1e-9 * max(nu_hat, nu_b):
        raise NotInK(f"nu={nu_hat!r} is not a shared-lattice value")
    return m * base


def upsilon_hat(setup: Setup, nu_hat: float, x: float) -> WaveSample:
    """Continuous limit state at a shared-lattice value nu_hat.

    Equals -sqrt(q_ratio) * phi_n(x) left of x0 and phi_n(x) / sqrt(q_ratio)
    right of it, where n is the box mode sitting at nu_hat.  This is the
    two-sided limit of the normalized eigenfunctions through the lattice
    point, identical along both coupling paths.
    """
    _check_x(setup, x)
    n = _require_shared(setup, nu_hat)
    root_q = math.sqrt(setup.q_ratio)
    if x <= setup.x0_value:
        value = -root_q * phi_mode(setup, n, x)
    else:
        value = phi_mode(setup, n, x) / root_q
    return WaveSample(x, value, WaveKind.limit_hat())


def _under_floor(setup: Setup, k: int) -> int:
    """Exact floor(k * L / width_left), the sign exponent of the left limits."""
    if isinstance(setup.x0, RationalX0):
        p, q = setup.x0.p, setup.x0.q
        return (2 * k * q) // (q + p)
    return hardened_floor(k * setup.L / setup.width_left)


def upsilon_under(setup: Setup, k: int, side: str, x: float) -> WaveSample:
    """One-sided limit state filling the left compartment, k-th left mode.

    Vanishes identically for x > x0.  The sign alternates with the coupling
    path: side="below" (attractive path) and side="above" (repulsive path)
    give opposite overall signs.  Raises InK when the k-th left value also
    lies on the shared lattice, where the limit is upsilon_hat instead.
    """
    _check_x(setup, x)
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k!r}")
    if side not in ("below", "above"):
        raise DomainError(f"side must be 'below' or 'above', got {side!r}")
    if isinstance(setup.x0, RationalX0) and _under_in_shared(setup.x0, k):
        raise InK(f"left lattice index k={k} lies on the shared lattice")
    if x > setup.x0_value:
        return WaveSample(x, 0.0, WaveKind.limit_under(k, side))
    w2 = setup.width_left
    sign = -1.0 if (_under_floor(setup, k) - 1) % 2 else 1.0
    if side == "above":
        sign = -sign
    value = sign * (2.0 / math.sqrt(setup.L + 2 * setup.x0_value)) * math.sin(
        k * math.pi * (setup.L / 2 + x) / w2
    )
    return WaveSample(x, value, WaveKind.limit_under(k, side))


def upsilon_over(setup: Setup, l: int, x: float) -> WaveSample:
    """One-sided limit state filling the right compartment, l-th right mode.

    Vanishes identically for x < x0 and carries the same sign on both
    coupling paths.  Raises InK when the l-th right value also lies on the
    shared lattice.
    """
    _check_x(setup, x)
    if l < 1:
        raise DomainError(f"l must be >= 1, got {l!r}")
    if isinstance(setup.x0, RationalX0) and _over_in_shared(setup.x0, l):
        raise InK(f"right lattice index l={l} lies on the shared lattice")
    if x < setup.x0_value:
        return WaveSample(x, 0.0, WaveKind.limit_over(l))
    w1 = setup.width_right
    value = (2.0 / math.sqrt(setup.L - 2 * setup.x0_value)) * math.sin(
        l * math.pi * (setup.L / 2 - x) / w1
    )
    return WaveSample(x, value, WaveKind.limit_over(l))


# ============================================================
# Derivative-jump constants of the limit states
# ============================================================


def kappa_constants(setup: Setup, point: LatticePoint) -> float:
    """Derivative-jump constant kappa of the limit state at a lattice point.

    The limit state satisfies psi'(x0+) - psi'(x0-) = sigma * kappa / c with
    sigma = +1 except along the repulsive path of a left one-sided state
    (side="above"), where sigma = -1.  The returned kappa corresponds to the
    side="below" sign convention for "under" points.
    """
    c = setup.c
    if point.kind == "both":
        if point.l is None or point.k is None:
            raise DomainError("shared lattice point must carry both indices")
        amp = math.sqrt(2 * setup.L) / (
            math.sqrt(setup.L + 2 * setup.x0_value)
            * math.sqrt(setup.L - 2 * setup.x0_value)
        )
        sign = -1.0 if (point.l - 1) % 2 else 1.0
        return c * amp * point.nu * sign
    if point.kind == "under":
        if point.k is None:
            raise DomainError("left lattice point must carry index k")
        if isinstance(setup.x0, RationalX0) and _under_in_shared(setup.x0, point.k):
            raise InK(f"k={point.k} lies on the shared lattice")
        exponent = _under_floor(setup, point.k) - point.k
        sign = -1.0 if exponent % 2 else 1.0
        return c * point.nu * sign / math.sqrt(setup.L + 2 * setup.x0_value)
    if point.kind == "over":
        if point.l is None:
            raise DomainError("right lattice point must carry index l")
        if isinstance(setup.x0, RationalX0) and _over_in_shared(setup.x0, point.l):
            raise InK(f"l={point.l} lies on the shared lattice")
        sign = -1.0 if (point.l - 1) % 2 else 1.0
        return c * point.nu * sign / math.sqrt(setup.L - 2 * setup.x0_value)
    raise DomainError(f"unknown lattice point kind {point.kind!r}")


# ============================================================
# Self-check of the limit states
# ============================================================


def _limit_state(setup: Setup, point: LatticePoint, side: str):
    if point.kind == "both":
        return lambda x: upsilon_hat(setup, point.nu, x).value
    if point.kind == "under":
        return lambda x: upsilon_under(setup, point.k, side, x).value
    if point.kind == "over":
        return lambda x: upsilon_over(setup, point.l, x).value
    raise DomainError(f"unknown lattice point kind {point.kind!r}")


def _one_sided_derivatives(setup: Setup, point: LatticePoint, side: str):
    """Analytic (left, right) derivatives of the limit state at x0."""
    x0 = setup.x0_value
    w1 = setup.width_right
    w2 = setup.width_left
    if point.kind == "both":
        n = _require_shared(setup, point.nu)
        root_q = math.sqrt(setup.q_ratio)
        dphi = -math.sqrt(2 / setup.L) * (n * math.pi / setup.L) * math.cos(
            (n * math.pi / setup.L) * (setup.L / 2 - x0)
        )
        return -root_q * dphi, dphi / root_q
    if point.kind == "under":
        sign = -1.0 if (_under_floor(setup, point.k) - 1) % 2 else 1.0
        if side == "above":
            sign = -sign
        amp = 2.0 / math.sqrt(setup.L + 2 * x0)
        left = sign * amp * (point.k * math.pi / w2) * math.cos(point.k * math.pi)
        return left, 0.0
    if point.kind == "over":
        amp = 2.0 / math.sqrt(setup.L - 2 * x0)
        right = -amp * (point.l * math.pi / w1) * math.cos(point.l * math.pi)
        return 0.0, right
    raise DomainError(f"unknown lattice point kind {point.kind!r}")


def limit_residual(
    setup: Setup, point: LatticePoint, grid_n: int = 2000, side: str = "below"
) -> LimitResidualReport:
    """Check that the limit state at `point` solves its boundary problem.

    Verifies three properties on a uniform grid: the free equation
    -psi'' = (E/c) psi away from x0 (second differences, relative to the
    state's scale), the derivative jump at x0 against sigma * kappa / c, and
    the wall values.  All three numbers should be small; the ODE residual is
    second-order in the grid spacing.
    """
    if grid_n < 16:
        raise DomainError("grid_n too small for a meaningful residual")
    f = _limit_state(setup, point, side)
    energy_factor = (point.nu / 2) ** 2
    h = setup.L / grid_n
    xs = [-setup.L / 2 + i * h for i in range(grid_n + 1)]
    values = [f(x) for x in xs]
    scale = max(abs(v) for v in values)
    max_resid = 0.0
    for i in range(1, grid_n):
        if abs(xs[i] - setup.x0_value) <= 1.5 * h:
            continue
        second = (values[i - 1] - 2 * values[i] + values[i + 1]) / (h * h)
        resid = abs(second + energy_factor * values[i])
        if resid > max_resid:
            max_resid = resid
    max_resid /= energy_factor * scale
    left_d, right_d = _one_sided_derivatives(setup, point, side)
    sigma = -1.0 if (point.kind == "under" and side == "above") else 1.0
    kappa = kappa_constants(setup, point)
    jump_error = abs((right_d - left_d) - sigma * kappa / setup.c)
    boundary_error = max(abs(values[0]), abs(values[-1]))
    return LimitResidualReport(max_resid, jump_error, boundary_error)

"""Physical configuration and free-well mode functions.

The system is a particle confined to the interval [-L/2, L/2] with a point
interaction of strength alpha located at x0 >= 0.  All formulas in the
package are parameterized by an immutable Setup carrying the box length L,
the interaction point x0, and the kinetic prefactor c = hbar^2/(2m).

Angular wave number convention (NuBranch): a single signed real nu labels
all three energy branches.  nu > 0 labels oscillatory states with energy
E = c (nu/2)^2, nu = 0 the zero-energy piecewise-linear state, and nu < 0
the evanescent branch with E = -c (nu/2)^2.  The map nu -> E is continuous
and strictly increasing on all of R.

The interaction point is either an exact rational multiple of the half box,
x0 = (p/q) (L/2) with p, q coprime, or a plain float.  The distinction is
structural, not cosmetic: whether the two sub-box wave lattices share points
is a number-theoretic fact that floating point cannot decide, so exact
integer arithmetic is used wherever that fact matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError

# ======================================================================
# Interaction-point representation
# ======================================================================


@dataclass(frozen=True)
class RationalX0:
    """x0 = (p/q) (L/2), stored in lowest terms with 0 <= p < q."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise DomainError(f"rational x0 needs q >= 1, got q={self.q}")
        if self.p < 0:
            raise DomainError(f"rational x0 needs p >= 0, got p={self.p}")
        g = math.gcd(self.p, self.q)
        if g > 1:
            object.__setattr__(self, "p", self.p // g)
            object.__setattr__(self, "q", self.q // g)
        if self.p >= self.q:
            raise DomainError(
                f"rational x0 = ({self.p}/{self.q})(L/2) lies outside [0, L/2)"
            )

    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    def value(self, L: float) -> float:
        return float(self.fraction()) * (L / 2)


@dataclass(frozen=True)
class RealX0:
    """x0 as a plain length, treated as a generic (irrational) point."""

    value_abs: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value_abs) or self.value_abs < 0:
            raise DomainError(f"real x0 must be finite and >= 0, got {self.value_abs}")

    def value(self, L: float) -> float:
        return self.value_abs


X0Spec = Union[RationalX0, RealX0]


# ======================================================================
# Setup
# ======================================================================


@dataclass(frozen=True)
class Setup:
    """Immutable physical configuration; all derived lengths precomputed.

    q_ratio is the sub-box length ratio (L/2 - x0)/(L/2 + x0) in (0, 1];
    lbar and rbar are the midpoints of the left and right sub-boxes.
    """

    L: float
    x0: X0Spec
    c: float
    x0_value: float
    q_ratio: float
    lbar: float
    rbar: float

    @property
    def width_right(self) -> float:
        """Length of the right sub-box, L/2 - x0."""
        return self.L / 2 - self.x0_value

    @property
    def width_left(self) -> float:
        """Length of the left sub-box, L/2 + x0."""
        return self.L / 2 + self.x0_value

    @property
    def is_rational(self) -> bool:
        return isinstance(self.x0, RationalX0)


def make_setup(L: float, x0: X0Spec, c: float) -> Setup:
    """Build a Setup, validating ranges and populating derived fields.

    Rational x0 not in lowest terms is reduced on construction rather than
    rejected.  Raises DomainError for L <= 0, c <= 0, or x0 outside [0, L/2).
    """
    if not (math.isfinite(L) and L > 0):
        raise DomainError(f"box length must be positive, got L={L}")
    if not (math.isfinite(c) and c > 0):
        raise DomainError(f"kinetic prefactor must be positive, got c={c}")
    if not isinstance(x0, (RationalX0, RealX0)):
        raise DomainError(f"x0 must be RationalX0 or RealX0, got {type(x0).__name__}")
    x0_value = x0.value(L)
    if not (0 <= x0_value < L / 2):
        raise DomainError(f"x0 = {x0_value} lies outside [0, L/2) for L = {L}")
    q_ratio = (L / 2 - x0_value) / (L / 2 + x0_value)
    lbar = (-L / 2 + x0_value) / 2
    rbar = (x0_value + L / 2) / 2
    return Setup(L=L, x0=x0, c=c, x0_value=x0_value, q_ratio=q_ratio, lbar=lbar, rbar=rbar)


# ======================================================================
# Branch bookkeeping
# ======================================================================


@dataclass(frozen=True)
class NuBranch:
    """A signed angular wave number with its branch classification."""

    nu: float

    @property
    def kind(self) -> str:
        if self.nu > 0:
            return "trig"
        if self.nu == 0:
            return "linear"
        return "hyper"

    def energy(self, setup: Setup) -> float:
        return energy_from_nu(setup, self.nu)


# ======================================================================
# Free-well quantities
# ======================================================================


def nu_n(setup: Setup, n: int) -> float:
    """Wave number of the n-th free-well mode, 2 n pi / L."""
    if n < 1:
        raise DomainError(f"mode index must be >= 1, got n={n}")
    return 2 * n * math.pi / setup.L


def phi_mode(setup: Setup, n: int, x: float) -> float:
    """Normalized free-well eigenfunction sqrt(2/L) sin((nu_n/2)(L/2 - x)).

    Vanishes at both walls and has unit L^2 norm.  Raises DomainError for x
    outside the box.
    """
    if n < 1:
        raise DomainError(f"mode index must be >= 1, got n={n}")
    if x < -setup.L / 2 or x > setup.L / 2:
        raise DomainError(f"x = {x} lies outside the box [-{setup.L / 2}, {setup.L / 2}]")
    half_nu = n * math.pi / setup.L
    return math.sqrt(2 / setup.L) * math.sin(half_nu * (setup.L / 2 - x))


def energy_from_nu(setup: Setup, nu: float) -> float:
    """Signed energy: c (nu/2)^2 for nu >= 0, -c (nu/2)^2 for nu < 0."""
    e = setup.c * (nu / 2) ** 2
    return e if nu >= 0 else -e

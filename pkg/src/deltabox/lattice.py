"""Singular wave-number lattices and the interval partition they induce.

Two lattices matter: wave numbers where a half-integer number of waves fits
exactly into the left sub-box (an "under" point, index k) and where it fits
into the right sub-box (an "over" point, index l).  Their union partitions
the positive axis into open intervals on which the dispersion relation is a
strictly increasing bijection onto R; their intersection (the shared points)
hosts free-well modes that vanish at x0 and are therefore unaffected by the
interaction strength.

For a rational interaction point x0 = (p/q)(L/2) all lattice positions are
rational multiples of 2 pi / L and every coincidence question is decided in
exact integer arithmetic (positions are kept as Fractions in units of
2 pi / L, in which the n-th free mode sits exactly at integer n).  A real
x0 is treated as generically irrational: no shared points exist, and
accidental float coincidences are merged at relative tolerance 1e-9.

Interval case tags follow the bounding-point kinds: G for the unbounded
leftmost interval, then A (under, under), B (under, over), C (over, under),
D (both, both), E (both, under), F (under, both).  Free modes never sit at a
one-sided lattice point, so a mode is either interior to an interval or a
shared point (tag Z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DomainError
from .model import RationalX0, Setup

# Merge tolerance for nearly coincident lattice points with a real x0.
_REAL_MERGE_RTOL = 1e-9

_CASE_BY_KINDS = {
    ("under", "under"): "A",
    ("under", "over"): "B",
    ("over", "under"): "C",
    ("both", "both"): "D",
    ("both", "under"): "E",
    ("under", "both"): "F",
}

# ======================================================================
# Types
# ======================================================================


@dataclass(frozen=True)
class LatticePoint:
    """A singular wave number with its provenance.

    kind is "under" (left sub-box, index k), "over" (right sub-box, index l)
    or "both" (shared; then nu equals the free-mode value nu_{k+l}).
    """

    nu: float
    kind: str
    k: Optional[int] = None
    l: Optional[int] = None


@dataclass(frozen=True)
class IntervalDescriptor:
    """An open interval between consecutive lattice points.

    lower is None for the unbounded leftmost interval.  contains_mode is the
    index n of the free mode strictly inside the interval, if any.  Intervals
    are numbered from 0 (the unbounded one) upward.
    """

    index: int
    lower: Optional[LatticePoint]
    upper: LatticePoint
    case_tag: str
    contains_mode: Optional[int]


@dataclass(frozen=True)
class ModeClassification:
    """Placement of a free mode: either interval + case tag, or tag Z."""

    n: int
    case_tag: str
    interval: Optional[IntervalDescriptor]

    @property
    def in_shared_lattice(self) -> bool:
        return self.case_tag == "Z"


# ======================================================================
# Individual lattice points
# ======================================================================


def _under_frac(x0: RationalX0, k: int) -> Fraction:
    # Position of the k-th under point in units of 2 pi / L.
    return Fraction(2 * k * x0.q, x0.q + x0.p)


def _over_frac(x0: RationalX0, l: int) -> Fraction:
    return Fraction(2 * l * x0.q, x0.q - x0.p)


def underline_nu(setup: Setup, k: int) -> float:
    """Wave number of the k-th under point, 2 k pi / (L/2 + x0)."""
    if k < 1:
        raise DomainError(f"under index must be >= 1, got k={k}")
    if setup.is_rational:
        return float(_under_frac(setup.x0, k)) * (2 * math.pi / setup.L)
    return 2 * k * math.pi / setup.width_left


def overline_nu(setup: Setup, l: int) -> float:
    """Wave number of the l-th over point, 2 l pi / (L/2 - x0)."""
    if l < 1:
        raise DomainError(f"over index must be >= 1, got l={l}")
    if setup.is_rational:
        return float(_over_frac(setup.x0, l)) * (2 * math.pi / setup.L)
    return 2 * l * math.pi / setup.width_right


def kappa_base(setup: Setup) -> Optional[int]:
    """Base index b such that the shared lattice is {m nu_b : m >= 1}.

    Returns None for a real x0 (treated as irrational, no shared points).
    For x0 = (p/q)(L/2) in lowest terms, b = q when p and q are both odd and
    b = 2q otherwise (p = 0 counts as even, so a centered interaction gives
    b = 2: every even mode vanishes at the center).
    """
    if not setup.is_rational:
        return None
    p, q = setup.x0.p, setup.x0.q
    if p % 2 == 1 and q % 2 == 1:
        return q
    return 2 * q


def _under_in_shared(x0: RationalX0, k: int) -> Optional[int]:
    # If the k-th under point is shared, return its over index l, else None.
    num = k * (x0.q - x0.p)
    den = x0.q + x0.p
    return num // den if num % den == 0 else None


def _over_in_shared(x0: RationalX0, l: int) -> Optional[int]:
    num = l * (x0.q + x0.p)
    den = x0.q - x0.p
    return num // den if num % den == 0 else None


# ======================================================================
# Partition
# ======================================================================


def partition(setup: Setup, nu_max: float) -> tuple[list[LatticePoint], list[IntervalDescriptor]]:
    """Merged, sorted lattice points up to nu_max plus the induced intervals.

    The first point strictly beyond nu_max is included as a closing point so
    the returned intervals cover (-inf, nu_max] completely.  Coincident
    under/over points are merged into "both" points, exactly for a rational
    x0 and at relative tolerance 1e-9 for a real one.
    """
    if not (math.isfinite(nu_max) and nu_max > 0):
        raise DomainError(f"nu_max must be positive and finite, got {nu_max}")
    if setup.is_rational:
        points = _partition_points_rational(setup, nu_max)
    else:
        points = _partition_points_real(setup, nu_max)
    intervals = _intervals_from_points(setup, points)
    return points, intervals


def _partition_points_rational(setup: Setup, nu_max: float) -> list[LatticePoint]:
    x0 = setup.x0
    unit = 2 * math.pi / setup.L
    merged: dict[Fraction, list[Optional[int]]] = {}
    for gen, slot in ((_under_frac, 0), (_over_frac, 1)):
        idx = 1
        while True:
            pos = gen(x0, idx)
            merged.setdefault(pos, [None, None])[slot] = idx
            if float(pos) * unit > nu_max:
                break
            idx += 1
            if idx > 10**7:
                raise RuntimeError("lattice generation runaway")
    points: list[LatticePoint] = []
    for pos in sorted(merged):
        k, l = merged[pos]
        kind = "both" if (k is not None and l is not None) else ("under" if k is not None else "over")
        points.append(LatticePoint(nu=float(pos) * unit, kind=kind, k=k, l=l))
    return _truncate_after_closing(points, nu_max)


def _partition_points_real(setup: Setup, nu_max: float) -> list[LatticePoint]:
    raw: list[tuple[float, str, int]] = []
    for gen, kind in ((underline_nu, "under"), (overline_nu, "over")):
        idx = 1
        while True:
            nu = gen(setup, idx)
            raw.append((nu, kind, idx))
            if nu > nu_max:
                break
            idx += 1
            if idx > 10**7:
                raise RuntimeError("lattice generation runaway")
    raw.sort()
    points: list[LatticePoint] = []
    i = 0
    while i < len(raw):
        nu, kind, idx = raw[i]
        if (
            i + 1 < len(raw)
            and raw[i + 1][1] != kind
            and abs(raw[i + 1][0] - nu) <= _REAL_MERGE_RTOL * raw[i + 1][0]
        ):
            nu2, kind2, idx2 = raw[i + 1]
            k = idx if kind == "under" else idx2
            l = idx if kind == "over" else idx2
            points.append(LatticePoint(nu=(nu + nu2) / 2, kind="both", k=k, l=l))
            i += 2
        else:
            points.append(
                LatticePoint(nu=nu, kind=kind, k=idx if kind == "under" else None, l=idx if kind == "over" else None)
            )
            i += 1
    return _truncate_after_closing(points, nu_max)


def _truncate_after_closing(points: list[LatticePoint], nu_max: float) -> list[LatticePoint]:
    out = []
    for pt in points:
        out.append(pt)
        if pt.nu > nu_max:
            break
    return out


def _point_position(setup: Setup, pt: LatticePoint):
    # Position of a lattice point in units of 2 pi / L (exact for rational x0,
    # in which units the n-th free mode sits exactly at integer n).
    if setup.is_rational:
        if pt.k is not None:
            return _under_frac(setup.x0, pt.k)
        return _over_frac(setup.x0, pt.l)
    return pt.nu / (2 * math.pi / setup.L)


def _intervals_from_points(setup: Setup, points: list[LatticePoint]) -> list[IntervalDescriptor]:
    intervals: list[IntervalDescriptor] = []
    lower: Optional[LatticePoint] = None
    for i, upper in enumerate(points):
        if lower is None:
            tag = "G"
        else:
            tag = _CASE_BY_KINDS.get((lower.kind, upper.kind))
            if tag is None:
                raise RuntimeError(f"impossible bounding kinds {(lower.kind, upper.kind)}")
        lo_pos = _point_position(setup, lower) if lower is not None else 0
        hi_pos = _point_position(setup, upper)
        n = math.floor(hi_pos)
        mode = n if (n >= 1 and lo_pos < n < hi_pos) else None
        intervals.append(
            IntervalDescriptor(index=i, lower=lower, upper=upper, case_tag=tag, contains_mode=mode)
        )
        lower = upper
    return intervals


# ======================================================================
# Mode classification
# ======================================================================


def classify_mode(setup: Setup, n: int) -> ModeClassification:
    """Place the n-th free mode: shared point (tag Z) or its open interval.

    The counts of under and over points below the mode are computed as
    floor(n (q+p)/(2q)) and floor(n (q-p)/(2q)), in exact integer arithmetic
    for a rational x0 (the case analysis is discontinuous in these floors,
    so floats would misclassify boundary configurations).
    """
    if n < 1:
        raise DomainError(f"mode index must be >= 1, got n={n}")
    base = kappa_base(setup)
    if base is not None and n % base == 0:
        return ModeClassification(n=n, case_tag="Z", interval=None)

    unit = 2 * math.pi / setup.L
    if setup.is_rational:
        p, q = setup.x0.p, setup.x0.q
        k_hat = (n * (q + p)) // (2 * q)
        l_hat = (n * (q - p)) // (2 * q)

        def fr_under(k):
            return _under_frac(setup.x0, k)

        def fr_over(l):
            return _over_frac(setup.x0, l)

    else:
        k_hat = math.floor(n * (0.5 + setup.x0_value / setup.L))
        l_hat = math.floor(n * (0.5 - setup.x0_value / setup.L))

        def fr_under(k):
            return underline_nu(setup, k) / unit

        def fr_over(l):
            return overline_nu(setup, l) / unit

    lower = _bounding_point(setup, fr_under, fr_over, k_hat, l_hat, unit)
    upper = _bounding_point(setup, fr_under, fr_over, k_hat + 1, l_hat + 1, unit, pick_min=True)
    if lower is None:
        tag = "G"
    else:
        tag = _CASE_BY_KINDS.get((lower.kind, upper.kind))
        if tag is None:
            raise RuntimeError(f"impossible bounding kinds {(lower.kind, upper.kind)}")
    shared_below = (n - 1) // base if base is not None else 0
    index = k_hat + l_hat - shared_below
    interval = IntervalDescriptor(index=index, lower=lower, upper=upper, case_tag=tag, contains_mode=n)
    return ModeClassification(n=n, case_tag=tag, interval=interval)


def _bounding_point(setup, fr_under, fr_over, k, l, unit, pick_min=False):
    # Build the lattice point bounding a mode: max of the candidates below it
    # (k-th under, l-th over) or, with pick_min, the min of those above it.
    cand = []
    if k >= 1:
        cand.append((fr_under(k), "under", k))
    if l >= 1:
        cand.append((fr_over(l), "over", l))
    if not cand:
        return None
    if len(cand) == 2 and _positions_equal(setup, cand[0][0], cand[1][0]):
        pos = cand[0][0]
        return LatticePoint(nu=float(pos) * unit, kind="both", k=k, l=l)
    pos, kind, idx = min(cand) if pick_min else max(cand)
    return LatticePoint(
        nu=float(pos) * unit, kind=kind, k=idx if kind == "under" else None, l=idx if kind == "over" else None
    )


def _positions_equal(setup: Setup, a, b) -> bool:
    if setup.is_rational:
        return a == b
    return abs(a - b) <= _REAL_MERGE_RTOL * max(abs(a), abs(b))


# ======================================================================
# Proximity helper shared by the guarded evaluators
# ======================================================================


def nearest_lattice_point(setup: Setup, nu: float) -> tuple[Optional[LatticePoint], float]:
    """Nearest lattice point to nu and its distance (None, inf for nu <= 0).

    Used as the single source of truth for pole guards.  The returned point
    carries full provenance, including shared-point detection for rational
    interaction points.
    """
    if nu <= 0:
        return None, math.inf
    spacing_under = underline_nu(setup, 1)
    spacing_over = overline_nu(setup, 1)
    best: Optional[LatticePoint] = None
    best_dist = math.inf
    k = max(1, round(nu / spacing_under))
    l = max(1, round(nu / spacing_over))
    for kind, idx, value in (("under", k, underline_nu(setup, k)), ("over", l, overline_nu(setup, l))):
        dist = abs(nu - value)
        if dist < best_dist:
            best_dist = dist
            if setup.is_rational:
                if kind == "under":
                    other = _under_in_shared(setup.x0, idx)
                    kk, ll = idx, other
                else:
                    other = _over_in_shared(setup.x0, idx)
                    kk, ll = other, idx
                if other is not None:
                    best = LatticePoint(nu=value, kind="both", k=kk, l=ll)
                    continue
            best = LatticePoint(
                nu=value, kind=kind, k=idx if kind == "under" else None, l=idx if kind == "over" else None
            )
    return best, best_dist


def singular_guard_radius(setup: Setup) -> float:
    """Absolute guard radius around lattice points, 1e-12 of the first one."""
    return 1e-12 * underline_nu(setup, 1)

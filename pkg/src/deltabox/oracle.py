"""Finite-difference cross-check of the analytic spectrum.

Discretizing the box on a uniform interior grid turns the Hamiltonian into a
symmetric tridiagonal matrix; the point interaction becomes a single
diagonal weight alpha/dx at the node holding x0.  The eigensolver here is
deliberately self-contained (Sturm-sequence bisection plus inverse
iteration) so that the oracle shares no code path, and no third-party
solver, with the analytic side it validates.

Accuracy expectations: O(dx**2) for smooth states, degrading to O(dx) when
the interaction is on (the delta weight is a first-order approximation), so
comparisons pin tolerances accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from .errors import ConvergenceError, DomainError, GridMismatch
from .lattice import kappa_base, partition
from .model import RationalX0, Setup, energy_from_nu, nu_n, phi_mode
from .spectrum import solve_nu
from .wavefn import eval_normalized

_INVERSE_ITERATION_SEED = 1729


@dataclass(frozen=True)
class Tridiagonal:
    """Symmetric tridiagonal interior discretization of the Hamiltonian."""

    diag: np.ndarray
    offdiag: np.ndarray
    N: int
    dx: float


@dataclass(frozen=True)
class LevelComparison:
    """Analytic level versus oracle level, with relative errors."""

    index: int
    nu: float
    is_mode: bool
    analytic_energy: float
    oracle_energy: float
    rel_energy_error: float
    sup_wave_error: float


@dataclass(frozen=True)
class OracleComparison:
    levels: List[LevelComparison]
    max_rel_energy_error: float
    max_sup_wave_error: float


# ============================================================
# Discretization
# ============================================================


def _site_node(setup: Setup, N: int, allow_snap: bool) -> int:
    """1-based grid node carrying the interaction site."""
    if isinstance(setup.x0, RationalX0):
        p, q = setup.x0.p, setup.x0.q
        pos = Fraction((N + 1) * (p + q), 2 * q)
        if pos.denominator != 1:
            g = math.gcd(p + q, 2 * q)
            raise GridMismatch(
                f"x0 is off-grid for N={N}; choose N+1 a multiple of {2 * q // g}"
            )
        return int(pos)
    pos = (setup.x0_value + setup.L / 2) / setup.L * (N + 1)
    j = round(pos)
    if abs(pos - j) > 1e-9 and not allow_snap:
        raise GridMismatch(
            f"x0 is off-grid for N={N} (offset {abs(pos - j):.3e} nodes); "
            "pass allow_snap=True to accept the nearest node"
        )
    return int(j)


def build_hamiltonian(
    setup: Setup, alpha: float, N: int, allow_snap: bool = False
) -> Tridiagonal:
    """Interior tridiagonal matrix of the discretized Hamiltonian.

    Dirichlet walls are eliminated; the interaction contributes alpha/dx on
    the diagonal at the node holding x0.  The site must land on a grid node
    (exactly for rational sites; within 1e-9 nodes for real ones unless
    allow_snap accepts the nearest node).
    """
    if N < 16:
        raise DomainError(f"N must be >= 16, got {N!r}")
    dx = setup.L / (N + 1)
    j = _site_node(setup, N, allow_snap)
    if j < 1 or j > N:
        raise GridMismatch(f"x0 lands on a wall node for N={N}")
    diag = np.full(N, 2 * setup.c / dx**2)
    diag[j - 1] += alpha / dx
    offdiag = np.full(N - 1, -setup.c / dx**2)
    return Tridiagonal(diag, offdiag, N, dx)


# ============================================================
# Sturm-sequence bisection
# ============================================================


def _sturm_counts(diag: np.ndarray, e2: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """Number of eigenvalues strictly below each shift.

    Runs the LDL^T pivot recurrence for all shifts at once; pivots with
    magnitude below pivmin are clamped to -pivmin before they are counted
    or divided by, which keeps the count exact in the presence of underflow.
    """
    safmin = np.finfo(float).tiny
    pivmin = max(float(e2.max(initial=0.0)) * safmin, safmin)
    q = diag[0] - shifts
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    counts = (q < 0).astype(int)
    for i in range(1, len(diag)):
        q = diag[i] - shifts - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        counts += q < 0
    return counts


def eig_lowest(T: Tridiagonal, count: int) -> List[Tuple[float, np.ndarray]]:
    """Lowest `count` eigenpairs of the tridiagonal matrix.

    Eigenvalues by simultaneous Sturm bisection inside Gershgorin bounds to
    relative 1e-12; eigenvectors by two steps of inverse iteration with a
    partial-pivot tridiagonal solve, normalized so that sum(v**2) * dx = 1
    and positive at the last node carrying appreciable amplitude.
    """
    if count < 1 or count > 12:
        raise DomainError(f"count must be in 1..12, got {count!r}")
    if count > T.N:
        raise DomainError(f"count={count} exceeds matrix size N={T.N}")
    d = np.asarray(T.diag, dtype=float)
    e = np.asarray(T.offdiag, dtype=float)
    e2 = e * e
    radius = np.zeros(T.N)
    radius[:-1] += np.abs(e)
    radius[1:] += np.abs(e)
    lo_bound = float(np.min(d - radius))
    hi_bound = float(np.max(d + radius))
    width = hi_bound - lo_bound
    lo = np.full(count, lo_bound - 1e-12 * width)
    hi = np.full(count, hi_bound + 1e-12 * width)
    targets = np.arange(1, count + 1)
    active = np.ones(count, dtype=bool)
    for _ in range(200):
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        stuck = (mid == lo) | (mid == hi)
        counts = _sturm_counts(d, e2, mid[active])
        go_down = np.zeros(count, dtype=bool)
        go_down[active] = counts >= targets[active]
        hi = np.where(active & go_down, mid, hi)
        lo = np.where(active & ~go_down, mid, lo)
        scale = np.maximum(np.abs(lo), np.abs(hi))
        converged = (hi - lo) <= 1e-12 * scale
        active &= ~(converged | stuck)
    else:
        raise ConvergenceError("Sturm bisection did not converge in 200 steps")
    values = 0.5 * (lo + hi)
    rng = np.random.default_rng(_INVERSE_ITERATION_SEED)
    pairs: List[Tuple[float, np.ndarray]] = []
    for lam in values:
        v = rng.standard_normal(T.N)
        for _ in range(2):
            v = _solve_shifted(d, e, float(lam), v)
            v /= math.sqrt(float(v @ v))
        v /= math.sqrt(T.dx)
        support = np.flatnonzero(np.abs(v) > 1e-8 * float(np.max(np.abs(v))))
        if v[support[-1]] < 0:
            v = -v
        pairs.append((float(lam), v))
    return pairs


def _solve_shifted(
    d: np.ndarray, e: np.ndarray, sigma: float, rhs: np.ndarray
) -> np.ndarray:
    """Solve (T - sigma*I) x = rhs by Gaussian elimination with row pivoting.

    Row swaps introduce a second superdiagonal; the three-band upper factor
    is kept explicitly.  Near-singular shifts (inverse iteration's normal
    operating point) are handled by the pivoting, not by perturbing sigma.
    """
    n = len(d)
    u0 = np.empty(n)
    u1 = np.zeros(n)
    u2 = np.zeros(n)
    y = rhs.astype(float).copy()
    # Current row i of the reduced system: (b, c1, c2); row i+1 below it.
    b = d[0] - sigma
    c1 = e[0] if n > 1 else 0.0
    c2 = 0.0
    for i in range(n - 1):
        b_next = d[i + 1] - sigma
        c1_next = e[i + 1] if i + 1 < n - 1 else 0.0
        a = e[i]
        if abs(a) > abs(b):
            u0[i], u1[i], u2[i] = a, b_next, c1_next
            row_b, row_c1, row_c2 = b, c1, c2
            y[i], y[i + 1] = y[i + 1], y[i]
        else:
            u0[i], u1[i], u2[i] = b, c1, c2
            row_b, row_c1, row_c2 = a, b_next, c1_next
        if u0[i] == 0.0:
            u0[i] = 1e-300
        m = row_b / u0[i]
        y[i + 1] -= m * y[i]
        b = row_c1 - m * u1[i]
        c1 = row_c2 - m * u2[i]
        c2 = 0.0
    if b == 0.0:
        b = 1e-300
    u0[n - 1] = b
    x = np.empty(n)
    x[n - 1] = y[n - 1] / u0[n - 1]
    if n > 1:
        x[n - 2] = (y[n - 2] - u1[n - 2] * x[n - 1]) / u0[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (y[i] - u1[i] * x[i + 1] - u2[i] * x[i + 2]) / u0[i]
    return x


# ============================================================
# Analytic reference spectrum
# ============================================================


def analytic_levels(
    setup: Setup, alpha: float, count: int
) -> List[Tuple[float, bool]]:
    """Lowest `count` analytic levels as (nu, is_mode) pairs.

    An eigenvalue is either the root of the coupling equation inside one
    partition interval, or a free mode on the shared lattice, which solves
    the problem for every coupling because it vanishes at the site.
    """
    nu_max = (1.5 * count + 8) * 2 * math.pi / setup.L
    _, intervals = partition(setup, nu_max)
    levels = [(solve_nu(setup, alpha, iv), False) for iv in intervals]
    base = kappa_base(setup)
    if base is not None:
        n = base
        while nu_n(setup, n) <= nu_max:
            levels.append((nu_n(setup, n), True))
            n += base
    levels.sort(key=lambda item: item[0])
    if len(levels) < count:
        raise DomainError(f"internal level budget too small for count={count}")
    return levels[:count]


def compare(setup: Setup, alpha: float, N: int, count: int) -> OracleComparison:
    """Lowest `count` levels: analytic closed forms versus the grid oracle.

    Reports, per level, the relative eigenvalue error and the sup-norm
    eigenvector discrepancy (relative to the eigenfunction's amplitude) on
    the interior nodes.
    """
    T = build_hamiltonian(setup, alpha, N)
    pairs = eig_lowest(T, count)
    levels = analytic_levels(setup, alpha, count)
    xs = [-setup.L / 2 + (i + 1) * T.dx for i in range(N)]
    out: List[LevelComparison] = []
    for idx, ((nu, is_mode), (lam, vec)) in enumerate(zip(levels, pairs), start=1):
        energy = energy_from_nu(setup, nu)
        scale = max(abs(energy), abs(lam), setup.c * (math.pi / setup.L) ** 2)
        rel_energy = abs(lam - energy) / scale
        if is_mode:
            n_mode = round(nu / nu_n(setup, 1))
            psi = np.array([phi_mode(setup, n_mode, x) for x in xs])
        else:
            psi = np.array([eval_normalized(setup, nu, x).value for x in xs])
        sup_wave = float(np.max(np.abs(vec - psi))) / float(np.max(np.abs(psi)))
        out.append(
            LevelComparison(idx, nu, is_mode, energy, float(lam), rel_energy, sup_wave)
        )
    return OracleComparison(
        out,
        max(lv.rel_energy_error for lv in out),
        max(lv.sup_wave_error for lv in out),
    )

"""Command-line interface: every analysis as a CSV or JSON table.

Subcommands map one-to-one onto the library modules (partition, spectrum,
sweep, wavefunction, limit, fourier, ratio, expectation, amplitude, oracle).
Output is a single flat table per invocation, deterministic and
byte-identical across runs for identical arguments: floats are printed with
repr's shortest round-trip form, CSV uses LF line endings, and the only
random number generator in the package is seeded.

Exit codes: 0 success, 2 argument parsing, 3 domain errors (invalid inputs,
wrong lattice membership, off-grid sites), 4 numerical failures (singular
points, bracket or convergence failures, overflow).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from . import fourier as fourier_mod
from . import observables, oracle, wavefn
from .errors import (
    BracketError,
    ConvergenceError,
    DomainError,
    GridMismatch,
    InK,
    NotInK,
    SingularPoint,
)
from .lattice import partition
from .model import (
    RationalX0,
    RealX0,
    Setup,
    X0Spec,
    energy_from_nu,
    make_setup,
    nu_n,
    phi_mode,
)
from .spectrum import alpha_from_nu, solve_nu

_EXIT_DOMAIN = 3
_EXIT_NUMERICAL = 4

_DOMAIN_ERRORS = (DomainError, NotInK, InK, GridMismatch)
_NUMERICAL_ERRORS = (SingularPoint, BracketError, ConvergenceError, OverflowError)


@dataclass(frozen=True)
class RunConfig:
    """Parsed global options plus the command-specific namespace."""

    L: float
    c: float
    x0: str
    format: str
    output: Optional[str]
    params: argparse.Namespace


# ============================================================
# Parsing helpers
# ============================================================


def parse_x0(spec: str) -> X0Spec:
    """Parse the site grammar: rational:<p>/<q> (of L/2) or real:<v> (length)."""
    if spec.startswith("rational:"):
        body = spec[len("rational:") :]
        parts = body.split("/")
        if len(parts) != 2:
            raise DomainError(f"malformed rational site {spec!r}; expected rational:p/q")
        try:
            p, q = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise DomainError(f"malformed rational site {spec!r}") from exc
        return RationalX0(p, q)
    if spec.startswith("real:"):
        body = spec[len("real:") :]
        try:
            value = float(body)
        except ValueError as exc:
            raise DomainError(f"malformed real site {spec!r}") from exc
        return RealX0(value)
    raise DomainError(f"site spec {spec!r} must start with 'rational:' or 'real:'")


def _x0_spec(spec: str) -> str:
    """argparse type hook: validate the grammar at parse time, keep the string."""
    try:
        parse_x0(spec)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    return spec


def _setup_from(config: RunConfig) -> Setup:
    return make_setup(config.L, parse_x0(config.x0), config.c)


def _linspace(lo: float, hi: float, n: int) -> List[float]:
    if n < 2:
        return [lo]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n - 1)] + [hi]


# ============================================================
# Table emission
# ============================================================


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def _emit(config: RunConfig, columns: List[str], rows: List[Dict[str, Any]]) -> None:
    if config.format == "json":
        payload = []
        for row in rows:
            clean: Dict[str, Any] = {}
            for col in columns:
                v = row.get(col)
                if isinstance(v, float) and not math.isfinite(v):
                    v = repr(v)
                clean[col] = v
            payload.append(clean)
        text = json.dumps({"columns": columns, "rows": payload}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(col)) for col in columns])
        text = buf.getvalue()
    if config.output:
        with open(config.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ============================================================
# Subcommands
# ============================================================


def cmd_partition(config: RunConfig) -> None:
    setup = _setup_from(config)
    points, intervals = partition(setup, config.params.nu_max)
    columns = [
        "record",
        "nu",
        "kind",
        "k",
        "l",
        "index",
        "lower",
        "upper",
        "case_tag",
        "contains_mode",
    ]
    rows: List[Dict[str, Any]] = []
    for pt in points:
        rows.append(
            {"record": "point", "nu": pt.nu, "kind": pt.kind, "k": pt.k, "l": pt.l}
        )
    for iv in intervals:
        rows.append(
            {
                "record": "interval",
                "index": iv.index,
                "lower": iv.lower.nu if iv.lower is not None else None,
                "upper": iv.upper.nu,
                "case_tag": iv.case_tag,
                "contains_mode": iv.contains_mode,
            }
        )
    _emit(config, columns, rows)


def cmd_spectrum(config: RunConfig) -> None:
    setup = _setup_from(config)
    levels = oracle.analytic_levels(setup, config.params.alpha, config.params.count)
    columns = ["index", "nu", "energy", "is_mode"]
    rows = [
        {
            "index": i,
            "nu": nu,
            "energy": energy_from_nu(setup, nu),
            "is_mode": is_mode,
        }
        for i, (nu, is_mode) in enumerate(levels, start=1)
    ]
    _emit(config, columns, rows)


def cmd_sweep(config: RunConfig) -> None:
    setup = _setup_from(config)
    samples = config.params.samples
    if samples < 2:
        raise DomainError("--samples must be >= 2")
    _, intervals = partition(setup, config.params.nu_max)
    matches = [iv for iv in intervals if iv.index == config.params.interval]
    if not matches:
        raise DomainError(
            f"no interval with index {config.params.interval} below nu-max "
            f"{config.params.nu_max}; raise --nu-max or check the partition table"
        )
    iv = matches[0]
    upper = iv.upper.nu
    if iv.lower is None:
        lower = upper - max(8 * math.pi / setup.L, 2 * abs(upper))
    else:
        lower = iv.lower.nu
    span = upper - lower
    margin = span / (2 * samples)
    nus = set(_linspace(lower + margin, upper - margin, samples))
    a_lo = alpha_from_nu(setup, lower + margin)
    a_hi = alpha_from_nu(setup, upper - margin)
    for a in _linspace(a_lo, a_hi, samples):
        nus.add(solve_nu(setup, a, iv))
    rows = []
    prev = None
    for nu in sorted(nus):
        if prev is not None and nu - prev <= 1e-12 * max(1.0, abs(nu)):
            continue
        prev = nu
        rows.append(
            {
                "nu": nu,
                "alpha": alpha_from_nu(setup, nu),
                "r": observables.prob_ratio(setup, nu).r,
                "Ex": observables.expectation_x(setup, nu),
                "rho": wavefn.rho(setup, nu),
            }
        )
    _emit(config, ["nu", "alpha", "r", "Ex", "rho"], rows)


def _resolve_nu(setup: Setup, params: argparse.Namespace) -> float:
    if getattr(params, "nu_mode", None) is not None:
        return nu_n(setup, params.nu_mode)
    if getattr(params, "nu", None) is not None:
        return params.nu
    raise DomainError("provide --nu or --nu-mode")


def _limit_samples(
    setup: Setup, kind: str, nu: Optional[float], k: Optional[int], l: Optional[int],
    side: str, xs: List[float],
) -> List[wavefn.WaveSample]:
    if kind == "hat":
        if nu is None:
            raise DomainError("the hat limit needs --nu or --nu-mode")
        return [wavefn.upsilon_hat(setup, nu, x) for x in xs]
    if kind == "under":
        if k is None:
            raise DomainError("the under limit needs --k")
        return [wavefn.upsilon_under(setup, k, side, x) for x in xs]
    if kind == "over":
        if l is None:
            raise DomainError("the over limit needs --l")
        return [wavefn.upsilon_over(setup, l, x) for x in xs]
    raise DomainError(f"unknown limit kind {kind!r}")


def _kind_label(kind: wavefn.WaveKind) -> str:
    parts = [kind.label]
    if kind.k is not None:
        parts.append(f"k={kind.k}")
    if kind.l is not None:
        parts.append(f"l={kind.l}")
    if kind.side is not None:
        parts.append(kind.side)
    return " ".join(parts)


def cmd_wavefunction(config: RunConfig) -> None:
    setup = _setup_from(config)
    p = config.params
    xs = _linspace(-setup.L / 2, setup.L / 2, p.points)
    if p.phi:
        if p.nu_mode is None:
            raise DomainError("--phi needs --nu-mode")
        kind = wavefn.WaveKind(label="mode")
        rows = [
            {"x": x, "value": phi_mode(setup, p.nu_mode, x), "kind": _kind_label(kind)}
            for x in xs
        ]
        _emit(config, ["x", "value", "kind"], rows)
        return
    if p.limit is not None:
        nu = None
        if p.nu_mode is not None or p.nu is not None:
            nu = _resolve_nu(setup, p)
        samples = _limit_samples(setup, p.limit, nu, p.k, p.l, p.side, xs)
    else:
        nu = _resolve_nu(setup, p)
        samples = wavefn.sample_wave(setup, nu, xs)
    rows = [
        {"x": s.x, "value": s.value, "kind": _kind_label(s.kind)} for s in samples
    ]
    _emit(config, ["x", "value", "kind"], rows)


def cmd_limit(config: RunConfig) -> None:
    setup = _setup_from(config)
    p = config.params
    xs = _linspace(-setup.L / 2, setup.L / 2, p.points)
    nu = None
    if p.nu_mode is not None or p.nu is not None:
        nu = _resolve_nu(setup, p)
    samples = _limit_samples(setup, p.kind, nu, p.k, p.l, p.side, xs)
    rows = [{"x": s.x, "value": s.value} for s in samples]
    _emit(config, ["x", "value"], rows)


def cmd_fourier(config: RunConfig) -> None:
    setup = _setup_from(config)
    p = config.params
    if p.limit == "hat":
        expansion = fourier_mod.coeffs_upsilon_hat(setup, _resolve_nu(setup, p), p.M)
    elif p.limit == "under":
        if p.k is None:
            raise DomainError("the under limit needs --k")
        expansion = fourier_mod.coeffs_upsilon_under(setup, p.k, p.M, p.side)
    elif p.limit == "over":
        if p.l is None:
            raise DomainError("the over limit needs --l")
        expansion = fourier_mod.coeffs_upsilon_over(setup, p.l, p.M)
    else:
        expansion = fourier_mod.coeffs_general(setup, _resolve_nu(setup, p), p.M)
    if p.sum_points is not None:
        xs = _linspace(-setup.L / 2, setup.L / 2, p.sum_points)
        rows = [{"x": x, "value": fourier_mod.partial_sum(expansion, x)} for x in xs]
        _emit(config, ["x", "value"], rows)
        return
    rows = [{"m": m, "a_m": a} for m, a in expansion.coefficients]
    _emit(config, ["m", "a_m"], rows)


def cmd_ratio(config: RunConfig) -> None:
    setup = _setup_from(config)
    p = config.params
    columns = ["nu", "r", "at_lattice"]
    if p.nu_mode is not None:
        value = observables.prob_ratio_at_mode(setup, p.nu_mode)
        rows = [{"nu": nu_n(setup, p.nu_mode), "r": value, "at_lattice": None}]
    elif p.nu is not None:
        pt = observables.prob_ratio(setup, p.nu)
        rows = [
            {
                "nu": pt.nu,
                "r": pt.r,
                "at_lattice": pt.at_lattice.kind if pt.at_lattice else None,
            }
        ]
    else:
        if p.nu_min is None or p.nu_max is None:
            raise DomainError("provide --nu, --nu-mode, or --nu-min/--nu-max")
        rows = []
        for nu in _linspace(p.nu_min, p.nu_max, p.points):
            pt = observables.prob_ratio(setup, nu)
            rows.append(
                {
                    "nu": pt.nu,
                    "r": pt.r,
                    "at_lattice": pt.at_lattice.kind if pt.at_lattice else None,
                }
            )
    _emit(config, columns, rows)


def cmd_expectation(config: RunConfig) -> None:
    setup = _setup_from(config)
    p = config.params
    if p.nu is not None:
        rows = [{"nu": p.nu, "Ex": observables.expectation_x(setup, p.nu)}]
    else:
        if p.nu_min is None or p.nu_max is None:
            raise DomainError("provide --nu or --nu-min/--nu-max")
        rows = []
        for nu in _linspace(p.nu_min, p.nu_max, p.points):
            try:
                rows.append({"nu": nu, "Ex": observables.expectation_x(setup, nu)})
            except SingularPoint:
                continue  # one-sided lattice points have no two-sided state
    _emit(config, ["nu", "Ex"], rows)


def cmd_amplitude(config: RunConfig) -> None:
    p = config.params
    if p.n is not None:
        ns = [p.n]
    elif p.n_max is not None:
        ns = list(range(1, p.n_max + 1, 2))
    else:
        raise DomainError("provide --n or --n-max")
    columns = ["n", "which", "gamma_crit", "value", "bracket_lo", "bracket_hi"]
    rows = []
    for n in ns:
        maximum, minimum = observables.amplitude_extrema(n)
        for which, ext in (("max", maximum), ("min", minimum)):
            rows.append(
                {
                    "n": n,
                    "which": which,
                    "gamma_crit": ext.gamma_crit,
                    "value": ext.value,
                    "bracket_lo": ext.bracket[0],
                    "bracket_hi": ext.bracket[1],
                }
            )
    _emit(config, columns, rows)


def cmd_oracle(config: RunConfig) -> None:
    setup = _setup_from(config)
    p = config.params
    report = oracle.compare(setup, p.alpha, p.grid, p.count)
    columns = [
        "index",
        "nu",
        "is_mode",
        "analytic_energy",
        "oracle_energy",
        "rel_energy_error",
        "sup_wave_error",
    ]
    rows = [
        {
            "index": lv.index,
            "nu": lv.nu,
            "is_mode": lv.is_mode,
            "analytic_energy": lv.analytic_energy,
            "oracle_energy": lv.oracle_energy,
            "rel_energy_error": lv.rel_energy_error,
            "sup_wave_error": lv.sup_wave_error,
        }
        for lv in report.levels
    ]
    _emit(config, columns, rows)


# ============================================================
# Parser assembly and entry point
# ============================================================


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--L", type=float, default=1.0, help="box length (default 1)")
    common.add_argument(
        "--c", type=float, default=1.0, help="kinetic constant hbar^2/2m (default 1)"
    )
    common.add_argument(
        "--x0",
        type=_x0_spec,
        default="rational:1/4",
        help="interaction site: rational:p/q of L/2, or real:<length> "
        "(default rational:1/4, i.e. x0 = L/8)",
    )
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", default=None, help="file path (default stdout)")

    parser = argparse.ArgumentParser(
        prog="deltabox",
        description="Spectral structure of a 1-D box with a point interaction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("partition", parents=[common], help="lattice points and intervals")
    sp.add_argument("--nu-max", type=float, default=60.0)
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("spectrum", parents=[common], help="lowest levels for a coupling")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--count", type=int, default=8)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("sweep", parents=[common], help="coupling sweep inside one interval")
    sp.add_argument("--interval", type=int, required=True)
    sp.add_argument("--samples", type=int, default=64)
    sp.add_argument("--nu-max", type=float, default=120.0)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("wavefunction", parents=[common], help="eigenfunction samples")
    sp.add_argument("--nu", type=float, default=None)
    sp.add_argument("--nu-mode", type=int, default=None)
    sp.add_argument("--points", type=int, default=257)
    sp.add_argument("--limit", choices=("hat", "under", "over"), default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--l", type=int, default=None)
    sp.add_argument("--side", choices=("below", "above"), default="below")
    sp.add_argument(
        "--phi",
        action="store_true",
        help="emit the bare box mode for --nu-mode instead of the normalized state",
    )
    sp.set_defaults(func=cmd_wavefunction)

    sp = sub.add_parser("limit", parents=[common], help="limit-state samples")
    sp.add_argument("--kind", choices=("hat", "under", "over"), required=True)
    sp.add_argument("--nu", type=float, default=None)
    sp.add_argument("--nu-mode", type=int, default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--l", type=int, default=None)
    sp.add_argument("--side", choices=("below", "above"), default="below")
    sp.add_argument("--points", type=int, default=257)
    sp.set_defaults(func=cmd_limit)

    sp = sub.add_parser("fourier", parents=[common], help="sine-basis coefficients")
    sp.add_argument("--nu", type=float, default=None)
    sp.add_argument("--nu-mode", type=int, default=None)
    sp.add_argument("--limit", choices=("hat", "under", "over"), default=None)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--l", type=int, default=None)
    sp.add_argument("--side", choices=("below", "above"), default="below")
    sp.add_argument("--M", type=int, default=4096)
    sp.add_argument(
        "--sum-points",
        type=int,
        default=None,
        help="emit the partial sum on this many grid points instead of coefficients",
    )
    sp.set_defaults(func=cmd_fourier)

    sp = sub.add_parser("ratio", parents=[common], help="right/left probability ratio")
    sp.add_argument("--nu", type=float, default=None)
    sp.add_argument("--nu-mode", type=int, default=None)
    sp.add_argument("--nu-min", type=float, default=None)
    sp.add_argument("--nu-max", type=float, default=None)
    sp.add_argument("--points", type=int, default=257)
    sp.set_defaults(func=cmd_ratio)

    sp = sub.add_parser("expectation", parents=[common], help="mean position")
    sp.add_argument("--nu", type=float, default=None)
    sp.add_argument("--nu-min", type=float, default=None)
    sp.add_argument("--nu-max", type=float, default=None)
    sp.add_argument("--points", type=int, default=257)
    sp.set_defaults(func=cmd_expectation)

    sp = sub.add_parser("amplitude", parents=[common], help="centered-site amplitude extrema")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--n-max", type=int, default=None)
    sp.set_defaults(func=cmd_amplitude)

    sp = sub.add_parser("oracle", parents=[common], help="finite-difference cross-check")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--grid", type=int, default=2047)
    sp.add_argument("--count", type=int, default=6)
    sp.set_defaults(func=cmd_oracle)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = RunConfig(
        L=args.L, c=args.c, x0=args.x0, format=args.format, output=args.output,
        params=args,
    )
    try:
        args.func(config)
    except _DOMAIN_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_DOMAIN
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_NUMERICAL
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``kepler-geom {simulate,verify,hodograph,newton,kepler3}``.

Reports go to stdout, diagnostics to stderr. Exit codes: 0 success,
1 precondition violation (or a failed check in ``verify``), 2 usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import suites
from .conserved import conserved_set
from .dynamics import METHODS, KeplerSystem, OrbitState
from .errors import KeplerError
from .euclid import kepler3_check
from .io import (
    fmt,
    geometry_report,
    orbit_svg,
    write_conserved_csv,
    write_hodograph_csv,
    write_newton_csv,
    write_residuals_csv,
    write_trajectory_csv,
)
from .newton import CenteredEllipse, newton_report
from .vector import Vec3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    r0: Vec3 = field(default_factory=lambda: Vec3(1.0, 0.0, 0.0))
    v0: Vec3 = field(default_factory=lambda: Vec3(0.0, 1.0, 0.0))
    m: float = 1.0
    k: float = 1.0
    integrator: str = "rk4"
    dt: float | None = None  # None means auto
    periods: float = 1.0
    out: Path | None = None
    conserved_out: Path | None = None
    residuals_out: Path | None = None
    svg: Path | None = None

    @property
    def system(self) -> KeplerSystem:
        return KeplerSystem(self.m, self.k)

    @property
    def state(self) -> OrbitState:
        return OrbitState(self.r0, self.v0)


def parse_vec(text: str) -> Vec3:
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"expected a comma-separated triple x,y,z, got {text!r}")
    try:
        return Vec3(*(float(p) for p in parts))
    except (ValueError, KeplerError):
        raise UsageError(f"malformed vector {text!r}") from None


def _positive(name: str, text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise UsageError(f"--{name} expects a number, got {text!r}") from None
    if not (math.isfinite(val) and val > 0.0):
        raise KeplerError(f"{name} must be > 0, got {name}={val!r}")
    return val


_FIELDS = {
    "r0": parse_vec,
    "v0": parse_vec,
    "m": lambda s: _positive("m", s),
    "k": lambda s: _positive("k", s),
    "integrator": str,
    "dt": lambda s: None if s == "auto" else _positive("dt", s),
    "periods": lambda s: _positive("periods", s),
    "out": Path,
    "conserved_out": Path,
    "residuals_out": Path,
    "svg": Path,
}


def read_config_file(path: Path) -> dict[str, str]:
    """Plain ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _FIELDS:
            raise UsageError(f"{path}:{lineno}: unrecognized config line {line!r}")
        values[key] = val.strip()
    return values


def build_config(args: argparse.Namespace, periods: float = 1.0) -> RunConfig:
    raw: dict[str, str] = {}
    if getattr(args, "config", None):
        raw.update(read_config_file(Path(args.config)))
    for key in _FIELDS:
        val = getattr(args, key, None)
        if val is not None:
            raw[key] = val
    cfg = RunConfig(periods=periods)
    cfg = replace(cfg, **{k: _FIELDS[k](v) for k, v in raw.items()})
    if cfg.integrator not in METHODS:
        raise UsageError(f"--integrator must be one of {sorted(METHODS)}, got {cfg.integrator!r}")
    return cfg


def _orbit_args(p: argparse.ArgumentParser, periods_default: str) -> None:
    p.add_argument("--config", metavar="PATH", help="key=value file; flags override it")
    p.add_argument("--r0", metavar="X,Y,Z", help="initial position (default 1,0,0)")
    p.add_argument("--v0", metavar="X,Y,Z", help="initial velocity (default 0,1,0)")
    p.add_argument("--m", help="particle mass (default 1)")
    p.add_argument("--k", help="coupling constant (default 1)")
    p.add_argument("--integrator", help="rk4 (default) or verlet")
    p.add_argument("--dt", help="time step, or 'auto' for T/10^4 (default)")
    p.add_argument("--periods", help=f"orbital periods to integrate (default {periods_default})")


def _write(path: Path, writer, *args) -> None:
    with open(path, "w", newline="") as fp:
        writer(*args, fp)


def cmd_simulate(cfg: RunConfig) -> int:
    sys_, state = cfg.system, cfg.state
    traj = suites.simulate(sys_, state, cfg.periods, cfg.dt, cfg.integrator)
    if cfg.out:
        _write(cfg.out, write_trajectory_csv, traj)
    if cfg.conserved_out:
        _write(cfg.conserved_out, write_conserved_csv, traj)
    if cfg.residuals_out:
        _write(cfg.residuals_out, write_residuals_csv, traj)
    cs = conserved_set(sys_, state)
    print(f"samples={len(traj)}")
    print(f"dt={fmt(traj.dt)}")
    print(f"Lvec={','.join(fmt(c) for c in cs.L)}")
    print(f"Kvec={','.join(fmt(c) for c in cs.K)}")
    sys.stdout.write(geometry_report(sys_, traj))
    return 0


def _print_checks(checks: list[suites.Check]) -> bool:
    width = max(len(c.name) for c in checks)
    ok = True
    print(f"{'suite':<10} {'check':<{width}} {'measured':>11} {'tolerance':>11}  result")
    for c in checks:
        tol = f"4+-{c.tol:g}" if c.kind == "band" else f"{c.tol:.1e}"
        print(
            f"{c.suite:<10} {c.name:<{width}} {c.value:>11.3e} {tol:>11}  "
            f"{'PASS' if c.passed else 'FAIL'}"
        )
        ok &= c.passed
    print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return ok


def cmd_verify(cfg: RunConfig, newton_axes, n_samples: int) -> int:
    checks = suites.run_all(
        cfg.system, cfg.state, cfg.periods, cfg.dt, cfg.integrator, newton_axes, n_samples
    )
    return 0 if _print_checks(checks) else 1


def cmd_hodograph(cfg: RunConfig) -> int:
    sys_, state = cfg.system, cfg.state
    traj = suites.simulate(sys_, state, cfg.periods, cfg.dt, cfg.integrator)
    if cfg.out:
        _write(cfg.out, write_hodograph_csv, traj)
    if cfg.svg:
        cfg.svg.write_text(orbit_svg(sys_, traj))
    checks = [c for c in suites.orbit_checks(sys_, state, cfg.periods, cfg.dt, cfg.integrator)
              if c.suite == "hodograph"]
    return 0 if _print_checks(checks) else 1


def cmd_newton(a: float, b: float, n_samples: int, out: Path | None) -> int:
    ell = CenteredEllipse.from_axes(a, b)
    if out:
        _write(out, write_newton_csv, newton_report(ell, n_samples))
    return 0 if _print_checks(suites.newton_checks(a, b, n_samples)) else 1


def cmd_kepler3(cfg: RunConfig, states: list[OrbitState]) -> int:
    sys_ = cfg.system
    if not states:
        states = suites.scaled_states(cfg.state)
    rows = kepler3_check(sys_, states)
    target = 4.0 * math.pi**2 * sys_.m / sys_.k
    print(f"{'a':>22} {'T_measured':>22} {'T^2/a^3':>22}")
    for r in rows:
        print(f"{fmt(r.a):>22} {fmt(r.T_measured):>22} {fmt(r.ratio):>22}")
    ratios = [r.ratio for r in rows]
    mean = sum(ratios) / len(ratios)
    spread = (max(ratios) - min(ratios)) / mean
    err = max(abs(x - target) for x in ratios) / target
    print(f"common_ratio={fmt(mean)}")
    print(f"expected={fmt(target)}")
    print(f"max_rel_spread={spread:.3e}")
    print(f"max_rel_error={err:.3e}")
    return 0 if err <= 1e-4 and spread <= 1e-4 else 1


def _parse_state(text: str) -> OrbitState:
    r, sep, v = text.partition("/")
    if not sep:
        raise UsageError(f"--state expects R0/V0 such as 1,0,0/0,1,0, got {text!r}")
    return OrbitState(parse_vec(r), parse_vec(v))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kepler-geom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="integrate an orbit, write CSV, print its geometry")
    _orbit_args(s, "1")
    s.add_argument("--out", help="trajectory CSV path")
    s.add_argument("--conserved-out", dest="conserved_out", help="H, L, K CSV path")
    s.add_argument("--residuals-out", dest="residuals_out", help="per-sample residual CSV path")

    v = sub.add_parser("verify", help="run every verification suite")
    _orbit_args(v, "10")
    v.add_argument("--newton-a", type=float, default=1.0)
    v.add_argument("--newton-b", type=float, default=math.sqrt(0.75))
    v.add_argument("--n-samples", type=int, default=4096)

    h = sub.add_parser("hodograph", help="hodograph CSV, optional SVG, hodograph checks")
    _orbit_args(h, "1")
    h.add_argument("--out", help="hodograph CSV path")
    h.add_argument("--svg", help="write a static SVG figure")

    n = sub.add_parser("newton", help="two-center areal-speed checks on an ellipse")
    n.add_argument("--a", type=float, default=1.0, help="semi-major axis")
    n.add_argument("--b", type=float, default=math.sqrt(0.75), help="semi-minor axis")
    n.add_argument("--n-samples", type=int, default=4096)
    n.add_argument("--out", help="Newton-check CSV path")

    k3 = sub.add_parser("kepler3", help="measured T^2/a^3 over several orbits")
    _orbit_args(k3, "1")
    k3.add_argument(
        "--state",
        action="append",
        default=[],
        metavar="R0/V0",
        help="initial condition, repeatable (default: configured orbit scaled by 0.5, 1, 2)",
    )
    return p


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "newton":
            return cmd_newton(args.a, args.b, args.n_samples, Path(args.out) if args.out else None)
        cfg = build_config(args, 10.0 if args.command == "verify" else 1.0)
        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, (args.newton_a, args.newton_b), args.n_samples)
        if args.command == "hodograph":
            return cmd_hodograph(cfg)
        return cmd_kepler3(cfg, [_parse_state(s) for s in args.state])
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"kepler-geom: error: {exc}", file=sys.stderr)
        return 2
    except KeplerError as exc:
        print(f"kepler-geom: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

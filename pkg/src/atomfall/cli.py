"""Deterministic CSV scenario runner.

Three subcommands:

* ``validate`` -- closed-form vs flow-integration sweep over the scaled
  parameter grid; exits 2 if any point violates the accuracy thresholds.
* ``evolve``   -- wavepacket time series from a flat key=value config.
* ``magnus``   -- breakdown demonstration: error of the resummed Magnus
  exponent against the exact evolution across a window of scaled times,
  next to the bounded weak-gravity error.

All numbers are printed with 17 significant digits, so identical inputs
reproduce byte-identical CSV.  Commands never emit partial CSV: output is
assembled in memory and written only after every row has been computed.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass

from . import approx
from .errors import AtomfallError
from .exact import w_matrix
from .oracles import IntegratorConfig, evaluate_point
from .params import HBAR, PhysicalParams
from .sim import MomentumGrid, time_series

DEFAULT_XI0 = (-5.0, -2.0, -0.5, 0.0, 0.5, 2.0, 5.0)
DEFAULT_OMT = (0.0, 0.5, 1.0, 2.0, 4.0)
DEFAULT_S = (0.0, 0.5, 1.0, 2.0, 4.0, 8.0)

THRESHOLD_ELEM = 1e-8
THRESHOLD_UNITARITY = 1e-9
THRESHOLD_DET = 1e-10


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write(out_path, lines) -> None:
    text = "\n".join(lines) + "\n"
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="ascii") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------

def _linspace(lo, hi, n):
    if n == 1:
        return [0.5 * (lo + hi)]
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def cmd_validate(args) -> int:
    zetas = (args.zeta,) if args.zeta is not None else (-1, 1)
    point_flags = (args.xi0, args.omega, args.s)
    if any(v is not None for v in point_flags):
        if any(v is None for v in point_flags):
            sys.stderr.write("validate: single-point mode needs --xi0, --omega and --s\n")
            return 1
        points = [(args.xi0, args.omega, args.s, z) for z in zetas]
    else:
        if args.grid is not None:
            xi0s = _linspace(-5.0, 5.0, args.grid)
            omts = _linspace(0.0, 4.0, args.grid)
            ss = _linspace(0.0, 8.0, args.grid)
        else:
            xi0s, omts, ss = DEFAULT_XI0, DEFAULT_OMT, DEFAULT_S
        points = [
            (x, o, s, z) for x in xi0s for o in omts for s in ss for z in zetas
        ]

    cfg = IntegratorConfig()
    lines = ["xi0,omega_tilde,s,zeta,max_elem_err,unitarity_err,det_err"]
    ok = True
    for xi0, omt, s, zeta in points:
        rep = evaluate_point(xi0, omt, s, zeta, cfg)
        if (rep.max_elem_err > THRESHOLD_ELEM
                or rep.unitarity_err > THRESHOLD_UNITARITY
                or rep.det_err > THRESHOLD_DET):
            ok = False
        lines.append(",".join([
            _fmt(xi0), _fmt(omt), _fmt(s), str(zeta),
            _fmt(rep.max_elem_err), _fmt(rep.unitarity_err), _fmt(rep.det_err),
        ]))
    _write(args.out, lines)
    return 0 if ok else 2


# ---------------------------------------------------------------------------
# evolve
# ---------------------------------------------------------------------------

class ConfigError(ValueError):
    pass


_FLOAT_KEYS = (
    "energy_excited", "energy_ground", "detuning", "gamma_excited",
    "gamma_ground", "mass", "rabi", "laser_freq", "wave_number", "phase",
    "accel", "p_center", "p_sigma", "p_min", "p_max",
)
_REQUIRED = ("mass", "rabi", "laser_freq", "wave_number", "accel",
             "p_center", "p_sigma", "p_min", "p_max", "n_points", "times")


@dataclass(frozen=True)
class ScenarioConfig:
    """Parsed evolve scenario: physics, packet, grid and output times."""

    phys: PhysicalParams
    grid: MomentumGrid
    p_center: float
    p_sigma: float
    times: list


def parse_scenario(text: str) -> ScenarioConfig:
    """Parse a flat key=value scenario; rejects unknown or malformed keys.

    SI units throughout (J, 1/s, kg, rad/s, 1/m, rad, m/s^2, kg m/s, s).
    ``detuning`` may replace ``energy_excited``; it fixes the level
    splitting via omega_eg = laser_freq - detuning above energy_ground.
    """
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected key=value, got {body!r}")
        key, val = (part.strip() for part in body.split("=", 1))
        if key in raw:
            raise ConfigError(f"duplicate config key: {key!r}")
        raw[key] = val

    known = set(_FLOAT_KEYS) | {"n_points", "times", "mode"}
    for key in raw:
        if key not in known:
            raise ConfigError(f"unknown config key: {key!r}")
    for key in _REQUIRED:
        if key not in raw:
            raise ConfigError(f"missing config key: {key!r}")
    if raw.get("mode", "evolve") != "evolve":
        raise ConfigError(f"unsupported mode: {raw['mode']!r}")
    if "energy_excited" in raw and "detuning" in raw:
        raise ConfigError("give either 'energy_excited' or 'detuning', not both")
    if "energy_excited" not in raw and "detuning" not in raw:
        raise ConfigError("missing config key: 'energy_excited' (or 'detuning')")

    def _float(key, default=None):
        if key not in raw:
            return default
        try:
            return float(raw[key])
        except ValueError as exc:
            raise ConfigError(f"config key {key!r}: not a number: {raw[key]!r}") from exc

    try:
        n_points = int(raw["n_points"])
    except ValueError as exc:
        raise ConfigError(f"config key 'n_points': not an integer: {raw['n_points']!r}") from exc
    try:
        times = [float(tok) for tok in raw["times"].replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"config key 'times': not a number list: {raw['times']!r}") from exc
    if not times:
        raise ConfigError("config key 'times': empty")

    e_g = _float("energy_ground", 0.0)
    laser_freq = _float("laser_freq")
    if "detuning" in raw:
        e_e = e_g + HBAR * (laser_freq - _float("detuning"))
    else:
        e_e = _float("energy_excited")

    try:
        phys = PhysicalParams(
            energy_excited=e_e,
            energy_ground=e_g,
            gamma_excited=_float("gamma_excited", 0.0),
            gamma_ground=_float("gamma_ground", 0.0),
            mass=_float("mass"),
            rabi=_float("rabi"),
            laser_freq=laser_freq,
            wave_number=_float("wave_number"),
            phase=_float("phase", 0.0),
            accel=_float("accel"),
        )
        grid = MomentumGrid(_float("p_min"), _float("p_max"), n_points)
    except (ValueError, AtomfallError) as exc:
        raise ConfigError(str(exc)) from exc
    return ScenarioConfig(phys=phys, grid=grid,
                          p_center=_float("p_center"), p_sigma=_float("p_sigma"),
                          times=times)


def cmd_evolve(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            scenario = parse_scenario(fh.read())
    except OSError as exc:
        sys.stderr.write(f"evolve: cannot read config: {exc}\n")
        return 1
    except ConfigError as exc:
        sys.stderr.write(f"evolve: {exc}\n")
        return 1
    try:
        rows = time_series(scenario.phys, scenario.grid,
                           scenario.p_center, scenario.p_sigma, scenario.times)
    except (AtomfallError, ValueError) as exc:
        sys.stderr.write(f"evolve: {exc}\n")
        return 1
    lines = ["t_s,prob_excited,mean_p,norm"]
    for row in rows:
        lines.append(",".join(
            [_fmt(row.t), _fmt(row.prob_excited), _fmt(row.mean_p), _fmt(row.norm)]
        ))
    _write(args.out, lines)
    return 0


# ---------------------------------------------------------------------------
# magnus
# ---------------------------------------------------------------------------

def cmd_magnus(args) -> int:
    """Error of the first-order Magnus evolution across a window in s.

    The sweep runs at a reduced gravitational coupling (--gravity-scale g,
    reached by rescaling the sweep unit: xi0 -> xi0/sqrt(g),
    omt -> omt/sqrt(g), s -> s*sqrt(g), which keeps omega_hat*s and hence
    every resonance pole at the same user-facing s).  At unit coupling
    both perturbative routes leave their domain long before the first
    pole; at small coupling the weak-gravity error stays bounded while
    the Magnus error still diverges on the poles, which is the point of
    the demonstration.
    """
    if args.s_max <= args.s_min:
        sys.stderr.write("magnus: --s-max must exceed --s-min\n")
        return 1
    if args.gravity_scale <= 0:
        sys.stderr.write("magnus: --gravity-scale must be positive\n")
        return 1
    zeta = args.zeta
    scale = math.sqrt(args.gravity_scale)
    w_hat = math.sqrt(args.omega ** 2 + args.xi0 ** 2)

    samples = _linspace(args.s_min, args.s_max, args.grid)
    rows = []
    for s in samples:
        if zeta == 0:
            exact_m = approx.rabi_w(args.xi0, args.omega, s)
            exponent = approx.magnus_f(1.0, args.xi0, args.omega, s, 0)
            weak = exact_m  # no sweep: first order in it is exact
        else:
            xi0_r, omt_r, s_r = args.xi0 / scale, args.omega / scale, s * scale
            exponent = approx.magnus_f(1.0, xi0_r, omt_r, s_r, zeta)
            if exponent.singular:
                sys.stderr.write(
                    f"magnus: sample s = {s} sits on a resonance pole; "
                    "shift the range\n"
                )
                return 1
            exact_m = w_matrix(xi0_r, omt_r, s_r, zeta)
            weak = approx.weak_gravity_w(xi0_r, omt_r, s_r, zeta)
        magnus_m = approx.magnus_w(exponent)
        if w_hat > 0:
            nearest = 2.0 * math.pi / w_hat * round(s * w_hat / (2.0 * math.pi))
        else:
            nearest = 0.0
        rows.append((s, magnus_m.max_abs_diff(exact_m), weak.max_abs_diff(exact_m), nearest))

    lines = ["s,err_magnus,err_weak_gravity,nearest_pole"]
    for s, err_m, err_w, nearest in rows:
        lines.append(",".join([_fmt(s), _fmt(err_m), _fmt(err_w), _fmt(nearest)]))
    _write(args.out, lines)
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atomfall",
        description="Scenario runner for the accelerated driven two-level atom",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    val = sub.add_parser("validate", help="closed form vs flow integration sweep")
    val.add_argument("--xi0", type=float, help="single-point scaled detuning")
    val.add_argument("--omega", type=float, help="single-point scaled Rabi frequency")
    val.add_argument("--s", type=float, help="single-point scaled time")
    val.add_argument("--zeta", type=int, choices=(-1, 0, 1), help="sweep direction")
    val.add_argument("--grid", type=int, help="N uniform samples per axis instead of the default grid")
    val.add_argument("--out", help="CSV path (default stdout)")
    val.set_defaults(func=cmd_validate)

    evo = sub.add_parser("evolve", help="wavepacket time series from a config file")
    evo.add_argument("--config", required=True, help="key=value scenario file")
    evo.add_argument("--out", help="CSV path (default stdout)")
    evo.set_defaults(func=cmd_evolve)

    mag = sub.add_parser("magnus", help="Magnus-breakdown sweep")
    mag.add_argument("--omega", type=float, default=1.0, help="scaled Rabi frequency")
    mag.add_argument("--xi0", type=float, default=0.0, help="scaled detuning")
    mag.add_argument("--zeta", type=int, default=1, choices=(-1, 0, 1))
    mag.add_argument("--s-min", type=float, default=5.8)
    mag.add_argument("--s-max", type=float, default=6.8)
    mag.add_argument("--grid", type=int, default=101, help="number of s samples")
    mag.add_argument("--gravity-scale", type=float, default=2e-3,
                     help="gravitational coupling relative to the scaled unit")
    mag.add_argument("--out", help="CSV path (default stdout)")
    mag.set_defaults(func=cmd_magnus)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; fold into the documented exit 1
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except AtomfallError as exc:
        sys.stderr.write(f"{parser.prog}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())

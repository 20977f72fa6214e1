"""Command-line front end: config files, sweeps and CSV output.

Units at this boundary: meters, eV, degrees.

Config files hold ``key = value`` lines; ``#`` starts a comment. Missing keys
take the built-in defaults (global-fit parameters, E = 45 GeV); ``potential_eV`` may
repeat to request several curves.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass, field

from . import __version__
from .coherence import l1_from_rows
from .errors import ConfigError, DegenerateConfigurationError, DomainError, RootNotFoundError
from .kinematics import (
    PAIRS,
    _velocity,
    find_infinite_coherence_potentials,
    find_resonance_potentials,
    matter_lengths,
)
from .matter import _solve
from .params import Flavor, OscillationParams, ParticleKind
from .probability import Mode, WavePacketConfig
from .sweep import Axis, AxisSpec, Spacing, probability_rows

__all__ = [
    "SweepSpec",
    "RunConfig",
    "Table",
    "DEFAULTS",
    "parse_config",
    "run_sweep",
    "report_special_potentials",
    "lengths_table",
    "write_csv",
    "format_value",
    "main",
]

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

# vacuum, both zeros of dv21, the zero of dv32, matter dominated
DEFAULT_POTENTIALS = (0.0, 2.242e-15, 1.099e-14, 2.824e-14, 1.0e-12)

DEFAULTS = {
    "theta12_deg": "33.82",
    "theta13_deg": "8.61",
    "theta23_deg": "49.7",
    "delta_deg": "217",
    "dm21_sq_eV2": "7.39e-5",
    "dm31_sq_eV2": "2.451e-3",
    "energy_eV": "4.5e10",
    "sigma_x_m": "0.5e-9",
    "rho": "1.0",
    "scan": "baseline",
    "min": "1e13",
    "max": "1e18",
    "points": "1000",
    "spacing": "log",
    "baseline_m": "1e17",
    "flavor": "e",
    "kind": "neutrino",
    "mode": "wp",
    "output": "-",
}
REPEATABLE = "potential_eV"
KNOWN_KEYS = frozenset(DEFAULTS) | {REPEATABLE}

PROB_COLUMNS = ["axis_value", "V_eV", "E_eV", "mode", "kind", "P_e", "P_mu", "P_tau"]
L1_COLUMNS = ["axis_value", "V_eV", "E_eV", "mode", "kind", "c_l1"]
LENGTH_COLUMNS = ["V_eV", "pair", "L_osc_m", "L_coh_m"]
SPECIAL_COLUMNS = ["label", "V_eV", "residual"]


@dataclass(frozen=True)
class SweepSpec:
    axis: AxisSpec
    energy: float
    baseline: float
    flavor: Flavor
    kind: ParticleKind
    mode: Mode
    output: str = "-"


@dataclass(frozen=True)
class RunConfig:
    params: OscillationParams
    wave_packet: WavePacketConfig
    sweep: SweepSpec
    potentials: tuple = DEFAULT_POTENTIALS


@dataclass
class Table:
    header: list
    rows: list = field(default_factory=list)


def _split_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        yield lineno, key, value


def _float(values, lines, key, check=None, requirement=""):
    try:
        x = float(values[key])
    except ValueError:
        raise ConfigError(f"{key}: not a number: {values[key]!r}", lines.get(key), key) from None
    if not math.isfinite(x) or (check is not None and not check(x)):
        raise ConfigError(f"{key} = {values[key]} out of range{requirement}", lines.get(key), key)
    return x


def parse_config(text: str = "", overrides=None) -> RunConfig:
    """Build a RunConfig from ``key = value`` text; ``overrides`` (key -> str) win over the text.

    An override for ``potential_eV`` may be a list of strings.
    """
    values = dict(DEFAULTS)
    lines = {}
    potentials, pot_lines = None, []
    unknown = []
    for lineno, key, value in _split_lines(text or ""):
        if key not in KNOWN_KEYS:
            unknown.append((lineno, key))
            continue
        if key == REPEATABLE:
            potentials = (potentials or []) + [value]
            pot_lines.append(lineno)
        else:
            values[key] = value
            lines[key] = lineno
    if unknown:
        listed = ", ".join(f"{k} (line {n})" for n, k in unknown)
        raise ConfigError(f"unknown key(s): {listed}", unknown[0][0], unknown[0][1])
    for key, value in (overrides or {}).items():
        if key not in KNOWN_KEYS:
            raise ConfigError(f"unknown key(s): {key}", None, key)
        if key == REPEATABLE:
            potentials = [str(v) for v in (value if isinstance(value, (list, tuple)) else [value])]
            pot_lines = [None] * len(potentials)
        else:
            values[key] = str(value)
            lines.pop(key, None)

    def angle(key):
        return _float(values, lines, key, lambda x: 0 <= x < 90, " (need 0 <= angle < 90 deg)")

    try:
        params = OscillationParams.from_degrees(
            angle("theta12_deg"),
            angle("theta13_deg"),
            angle("theta23_deg"),
            _float(values, lines, "delta_deg"),
            _float(values, lines, "dm21_sq_eV2", lambda x: x > 0, " (need > 0)"),
            _float(values, lines, "dm31_sq_eV2", lambda x: x != 0, " (need != 0)"),
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from exc
    wp = WavePacketConfig(
        _float(values, lines, "sigma_x_m", lambda x: x > 0, " (need > 0)"),
        _float(values, lines, "rho", lambda x: x >= 0, " (need >= 0)"),
        _choice(values, lines, "mode", Mode.parse),
    )

    pots = []
    for raw, lineno in zip(potentials if potentials is not None else [], pot_lines):
        try:
            v = float(raw)
        except ValueError:
            raise ConfigError(f"{REPEATABLE}: not a number: {raw!r}", lineno, REPEATABLE) from None
        if not (math.isfinite(v) and v >= 0):
            raise ConfigError(f"{REPEATABLE} = {raw} out of range (need >= 0)", lineno, REPEATABLE)
        pots.append(v)

    pts_raw = values["points"]
    try:
        points = int(pts_raw)
    except ValueError:
        try:
            points = float(pts_raw)
        except ValueError:
            raise ConfigError(f"points: not a number: {pts_raw!r}", lines.get("points"), "points") from None
        if points != int(points):
            raise ConfigError(f"points = {pts_raw} must be an integer", lines.get("points"), "points")
        points = int(points)
    if points < 2:
        raise ConfigError(f"points = {pts_raw} out of range (need >= 2)", lines.get("points"), "points")

    axis_kind = _choice(values, lines, "scan", Axis.parse)
    spacing = _choice(values, lines, "spacing", Spacing.parse)
    lo = _float(values, lines, "min", lambda x: x >= 0, " (need >= 0)")
    hi = _float(values, lines, "max")
    if not lo < hi:
        raise ConfigError(f"max = {values['max']} must exceed min = {values['min']}", lines.get("max"), "max")
    if spacing is Spacing.LOG and lo <= 0:
        raise ConfigError("min must be > 0 for log spacing", lines.get("min"), "min")
    if axis_kind is Axis.ENERGY and lo <= 0:
        raise ConfigError("min must be > 0 for an energy scan", lines.get("min"), "min")
    axis = AxisSpec(axis_kind, lo, hi, points, spacing)

    sweep = SweepSpec(
        axis=axis,
        energy=_float(values, lines, "energy_eV", lambda x: x > 0, " (need > 0)"),
        baseline=_float(values, lines, "baseline_m", lambda x: x >= 0, " (need >= 0)"),
        flavor=_choice(values, lines, "flavor", Flavor.parse),
        kind=_choice(values, lines, "kind", ParticleKind.parse),
        mode=wp.mode,
        output=values["output"],
    )
    return RunConfig(params, wp, sweep, tuple(pots) if potentials is not None else DEFAULT_POTENTIALS)


def _choice(values, lines, key, parse):
    try:
        return parse(values[key])
    except DomainError as exc:
        raise ConfigError(f"{key}: {exc}", lines.get(key), key) from None


def _curves(cfg: RunConfig):
    """(energies, potentials, baselines, x) per curve, in output order."""
    sw = cfg.sweep
    x = sw.axis.values()
    if sw.axis.axis is Axis.POTENTIAL:
        return [(sw.energy, x, sw.baseline, x)]
    if sw.axis.axis is Axis.BASELINE:
        return [(sw.energy, v, x, x) for v in cfg.potentials]
    return [(x, v, sw.baseline, x) for v in cfg.potentials]


def _rows(cfg, energies, potentials, baselines, x):
    try:
        return probability_rows(cfg.params, cfg.wave_packet, cfg.sweep.flavor, baselines, energies, potentials, cfg.sweep.kind)
    except DegenerateConfigurationError as exc:
        if exc.index is not None:
            exc.axis_value = float(x[exc.index])
        raise


def run_sweep(cfg: RunConfig, quantity: str = "probability") -> Table:
    """Rows per (curve, axis point): probability rows or l1-norms."""
    if quantity not in ("probability", "l1"):
        raise ValueError(f"unknown quantity {quantity!r}")
    sw = cfg.sweep
    table = Table(PROB_COLUMNS if quantity == "probability" else L1_COLUMNS)
    for energies, potentials, baselines, x in _curves(cfg):
        rows = _rows(cfg, energies, potentials, baselines, x)
        n = len(x)
        e_col = energies if sw.axis.axis is Axis.ENERGY else [energies] * n
        v_col = potentials if sw.axis.axis is Axis.POTENTIAL else [potentials] * n
        tail = rows.tolist() if quantity == "probability" else [[c] for c in l1_from_rows(rows)]
        for k in range(n):
            table.rows.append(
                [float(x[k]), float(v_col[k]), float(e_col[k]), sw.mode.value, sw.kind.value, *tail[k]]
            )
    return table


def lengths_table(cfg: RunConfig) -> Table:
    """l_osc, l_coh per pair; potentials from the V axis when scanning it, else the potential list."""
    sw = cfg.sweep
    pots = sw.axis.values() if sw.axis.axis is Axis.POTENTIAL else cfg.potentials
    table = Table(LENGTH_COLUMNS)
    for v in pots:
        try:
            lengths = matter_lengths(cfg.params, sw.energy, float(v), sw.kind, cfg.wave_packet.sigma_x)
        except DegenerateConfigurationError as exc:
            exc.axis_value = float(v)
            raise
        for pair in PAIRS:
            table.rows.append([float(v), pair, lengths[pair].l_osc, lengths[pair].l_coh])
    return table


def report_special_potentials(cfg: RunConfig) -> Table:
    """Both resonances and every zero of Delta v_21 / Delta v_32 with their residuals."""
    p, energy, kind = cfg.params, cfg.sweep.energy, cfg.sweep.kind
    sign = kind.sign
    v1, v2 = find_resonance_potentials(p, energy, kind)
    table = Table(SPECIAL_COLUMNS)
    table.rows.append(["resonance_theta12", v1, _solve(p, energy, sign * v1).t12m - math.pi / 4])
    table.rows.append(["resonance_theta13", v2, _solve(p, energy, sign * v2).t13m - math.pi / 4])
    for pair, v in find_infinite_coherence_potentials(p, energy, kind):
        dv = _velocity(p, energy, sign * v, 1e-30)[0 if pair == "21" else 1]
        table.rows.append([f"zero_dv{pair}", v, dv])
    return table


def format_value(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.16e}"
    return str(x)


def write_csv(table: Table, path) -> None:
    """Header plus rows; floats with 17 significant digits; '-' writes to stdout."""
    def emit(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.header)
        for row in table.rows:
            writer.writerow([format_value(v) for v in row])

    if str(path) == "-":
        emit(sys.stdout)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            emit(fh)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write CSV: {exc.strerror}", str(path)) from exc


_FLAG_KEYS = {
    "energy": "energy_eV",
    "sigma_x": "sigma_x_m",
    "rho": "rho",
    "scan": "scan",
    "min": "min",
    "max": "max",
    "points": "points",
    "spacing": "spacing",
    "baseline": "baseline_m",
    "flavor": "flavor",
    "kind": "kind",
    "mode": "mode",
    "output": "output",
}


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="key = value config file (UTF-8)")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override any config key; repeatable")
    common.add_argument("--energy", help="neutrino energy [eV]")
    common.add_argument("--sigma-x", dest="sigma_x", help="effective wave-packet width [m]")
    common.add_argument("--rho", help="localization factor (order one)")
    common.add_argument("--potential", action="append", help="matter potential V [eV]; repeatable, one curve each")
    common.add_argument("--scan", help="scan axis: baseline [m], potential [eV] or energy [eV]")
    common.add_argument("--min", help="lower end of the scan axis")
    common.add_argument("--max", help="upper end of the scan axis")
    common.add_argument("--points", help="number of scan points (>= 2)")
    common.add_argument("--spacing", help="linear or log")
    common.add_argument("--baseline", help="fixed baseline L [m] for potential/energy scans")
    common.add_argument("--flavor", help="initial flavor: e, mu or tau")
    common.add_argument("--kind", help="neutrino or antineutrino")
    common.add_argument("--mode", help="pw (plane wave) or wp (wave packet)")
    common.add_argument("-o", "--output", help="CSV path, '-' for stdout")

    parser = argparse.ArgumentParser(
        prog="nucoherence",
        description="Neutrino oscillation and l1-norm coherence in uniform matter. "
        "Units: lengths in m, energies and potentials in eV, angles in degrees.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("prob-scan", parents=[common], help="probability row of the initial flavor along the scan axis")
    sub.add_parser("l1-scan", parents=[common], help="l1-norm of coherence along the scan axis")
    sub.add_parser("special-potentials", parents=[common], help="resonance and infinite-coherence-length potentials")
    sub.add_parser("lengths", parents=[common], help="oscillation and coherence lengths per pair versus V")
    return parser


def _overrides(args):
    out = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        if key == REPEATABLE:
            out.setdefault(REPEATABLE, []).append(value)
        else:
            out[key] = value
    for attr, key in _FLAG_KEYS.items():
        value = getattr(args, attr)
        if value is not None:
            out[key] = value
    if args.potential:
        out[REPEATABLE] = list(args.potential)
    return out


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = ""
        if args.config:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc.strerror}") from None
        cfg = parse_config(text, _overrides(args))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "prob-scan":
            table = run_sweep(cfg, "probability")
        elif args.command == "l1-scan":
            table = run_sweep(cfg, "l1")
        elif args.command == "special-potentials":
            table = report_special_potentials(cfg)
        else:
            table = lengths_table(cfg)
    except (DegenerateConfigurationError, RootNotFoundError, ArithmeticError, DomainError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    try:
        write_csv(table, cfg.sweep.output)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

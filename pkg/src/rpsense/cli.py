"""Command-line front end: figure-style CSV data and the feasibility planner.

Subcommands
-----------
oscillations  t, P_S, Phi_T, C_norm on a time grid (singlet-triplet
              oscillations and the normalized Ramsey contrast).
field-scan    omega, Phi_S, C_yield across an external-field range.
ensemble      t, C_eta_<value> for each requested coupling-spread eta.
teer          tau, C_S, C_T0, C_Tplus, C_Tminus for the echo protocol.
control       tau, Phi_S for the stroboscopic protocol, or omega, Phi_S
              for the field-nulling toggle scan.
planner       plain-text feasibility budget.

All commands are deterministic given the flags and --seed.  CSV output is
UTF-8, comma-separated, one header row, scientific notation with 12
digits after the decimal point.  A plain key=value file (# comments) can
supply any flag of the chosen subcommand via --config; explicit flags
win.

Units: the default system sets h_a = 1 (rates in units of h_a, times in
1/h_a).  --units physical derives h_a = 2*pi*hyperfine_hz and
omega = 2*gamma_e*field_tesla; g, kappa, gamma stay fractions of h_a,
time flags stay in units of 1/h_a, and output times are in seconds.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from rpsense import control, dynamics, ensemble, planner
from rpsense.control import RPStateLabel
from rpsense.dynamics import TimeGrid
from rpsense.spincore import RadicalPairParams

_FLOAT_FMT = "{:.12e}"


def _write_csv(path: str | None, header: list[str], rows) -> None:
    body = "\n".join(",".join(_FLOAT_FMT.format(v) for v in row) for row in rows)
    text = ",".join(header) + "\n" + body + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        Path(path).write_text(text + "\n", encoding="utf-8")


def _load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno} is not key=value: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rpsense",
        description="Spin dynamics of a radical pair coupled to a spin-1 sensor",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", help="key=value file supplying defaults for any flag")
        sp.add_argument("--out", default=None, help="output path (default: stdout)")
        sp.add_argument("--seed", type=int, default=0, help="seed for stochastic models")
        sp.add_argument("--units", choices=("ha", "physical"), default="ha")
        sp.add_argument("--hyperfine-hz", type=float, default=14e6,
                        help="hyperfine coupling in Hz (physical units only)")
        sp.add_argument("--field-tesla", type=float, default=50e-6,
                        help="external field in tesla (physical units only)")
        sp.add_argument("--h-a", type=float, default=1.0, help="hyperfine coupling (angular)")
        sp.add_argument("--omega", type=float, default=0.0,
                        help="external field (angular, h_a units)")
        sp.add_argument("--g", type=float, default=0.1, help="sensor-pair coupling / h_a")
        sp.add_argument("--kappa", type=float, default=0.01,
                        help="singlet recombination rate / h_a")
        sp.add_argument("--gamma", type=float, default=0.0, help="sensor relaxation rate / h_a")
        sp.add_argument("--polarization", type=float, default=0.0,
                        help="nuclear polarization in [-1, 1]")

    def add_time_grid(sp):
        sp.add_argument("--t-max", type=float, default=200.0, help="grid end, units of 1/h_a")
        sp.add_argument("--t-points", type=int, default=2000)

    sp = sub.add_parser("oscillations", help="singlet/triplet oscillations and contrast")
    add_common(sp)
    add_time_grid(sp)

    sp = sub.add_parser("field-scan", help="yields vs external field")
    add_common(sp)
    sp.add_argument("--omega-min", type=float, default=0.0, help="h_a units")
    sp.add_argument("--omega-max", type=float, default=2.0, help="h_a units")
    sp.add_argument("--omega-steps", type=int, default=200)

    sp = sub.add_parser("ensemble", help="coupling-averaged contrast per eta")
    add_common(sp)
    add_time_grid(sp)
    sp.add_argument("--eta", default="inf",
                    help="comma list of eta values; 'inf' is the single-pair limit")
    sp.add_argument("--nodes", type=int, default=101, help="odd Gauss-Hermite node count")

    sp = sub.add_parser("teer", help="echo state-discrimination curves")
    add_common(sp)
    sp.add_argument("--tau-min", type=float, default=0.0, help="units of 1/h_a")
    sp.add_argument("--tau-max", type=float, default=50.0, help="units of 1/h_a")
    sp.add_argument("--tau-steps", type=int, default=500)
    sp.add_argument("--variant", choices=("pi", "pi2"), default="pi")
    sp.add_argument("--frozen-rp", default="true", choices=("true", "false"))

    sp = sub.add_parser("control", help="stroboscopic or field-nulling protocol")
    add_common(sp)
    sp.add_argument("--protocol", choices=("strobe", "toggle"), default="strobe")
    sp.add_argument("--m-pulses", type=int, default=4, help="even segment count")
    sp.add_argument("--tau-min", type=float, default=0.5, help="units of 1/h_a")
    sp.add_argument("--tau-max", type=float, default=20.0, help="units of 1/h_a")
    sp.add_argument("--tau-steps", type=int, default=100)
    sp.add_argument("--omega-min", type=float, default=0.0, help="h_a units")
    sp.add_argument("--omega-max", type=float, default=0.3, help="h_a units")
    sp.add_argument("--omega-steps", type=int, default=300)

    sp = sub.add_parser("planner", help="feasibility budget report")
    sp.add_argument("--config", help="key=value file supplying defaults for any flag")
    sp.add_argument("--out", default=None)
    sp.add_argument("--distance", type=float, default=20e-9, help="sensor-pair distance (m)")
    sp.add_argument("--sensitivity", type=float, default=10e-9, help="T/sqrt(Hz)")
    sp.add_argument("--shot-duration", type=float, default=10e-6, help="s")
    sp.add_argument("--single-shot-snr", type=float, default=0.03)
    sp.add_argument("--target-snr", type=float, default=10.0)
    sp.add_argument("--efficiency", type=float, default=1.0)
    sp.add_argument("--n-points", type=int, default=3600)
    return parser


def _params_from_args(args) -> tuple[RadicalPairParams, float]:
    """Build parameters plus the seconds-per-time-unit scale (1.0 in h_a units)."""
    if args.units == "physical":
        if args.hyperfine_hz <= 0:
            raise ValueError("field=hyperfine_hz: must be positive")
        h_a = 2 * np.pi * args.hyperfine_hz
        omega = 2 * planner.ELECTRON_GYROMAGNETIC * args.field_tesla
        p = RadicalPairParams(h_a=h_a, omega=omega, g=args.g * h_a,
                              kappa=args.kappa * h_a, gamma=args.gamma * h_a,
                              nuclear_polarization=args.polarization)
        return p, 1.0 / h_a
    p = RadicalPairParams(h_a=args.h_a, omega=args.omega, g=args.g,
                          kappa=args.kappa, gamma=args.gamma,
                          nuclear_polarization=args.polarization)
    return p, 1.0


def _time_grid(args, scale: float) -> TimeGrid:
    if args.t_points < 2:
        raise ValueError("field=t_points: must be >= 2")
    if args.t_max <= 0:
        raise ValueError("field=t_max: must be positive")
    return TimeGrid(0.0, args.t_max * scale, args.t_points)


def cmd_oscillations(args) -> None:
    p, scale = _params_from_args(args)
    grid = _time_grid(args, scale)
    ps = dynamics.singlet_probability_series(p, grid)
    contrast = dynamics.sensor_contrast_numeric(p, grid)
    rows = zip(grid.times, ps.values, 1.0 - ps.values, contrast.normalized)
    _write_csv(args.out, ["t", "P_S", "Phi_T", "C_norm"], rows)


def cmd_field_scan(args) -> None:
    p, _ = _params_from_args(args)
    if args.omega_steps < 2:
        raise ValueError("field=omega_steps: must be >= 2")
    omegas = np.linspace(args.omega_min, args.omega_max, args.omega_steps) * (
        p.h_a if args.units == "physical" else 1.0
    )
    result = dynamics.field_scan(p, omegas)
    rows = zip(result.omegas, result.singlet_fraction, result.contrast_yield)
    _write_csv(args.out, ["omega", "Phi_S", "C_yield"], rows)


def cmd_ensemble(args) -> None:
    p, scale = _params_from_args(args)
    grid = _time_grid(args, scale)
    etas = [tok.strip() for tok in str(args.eta).split(",") if tok.strip()]
    if not etas:
        raise ValueError("field=eta: at least one value required")
    header = ["t"]
    columns = [grid.times]
    for token in etas:
        if token.lower() == "inf":
            spec = ensemble.EnsembleSpec(g0=p.g, eta=1.0, n_nodes=1, seed=args.seed)
            label = "C_eta_inf"
        else:
            eta = float(token)
            if eta <= 0:
                raise ValueError("field=eta: values must be positive or 'inf'")
            spec = ensemble.EnsembleSpec(g0=p.g, eta=eta, n_nodes=args.nodes, seed=args.seed)
            label = f"C_eta_{eta:g}"
        series = ensemble.averaged_contrast_series(p, grid, spec)
        header.append(label)
        columns.append(series.values)
    _write_csv(args.out, header, zip(*columns))


def cmd_teer(args) -> None:
    p, scale = _params_from_args(args)
    if args.tau_steps < 2:
        raise ValueError("field=tau_steps: must be >= 2")
    taus = np.linspace(args.tau_min, args.tau_max, args.tau_steps) * scale
    frozen = args.frozen_rp == "true"
    curves = [
        control.teer_contrast(p, state, taus, variant=args.variant, frozen_rp=frozen).values
        for state in (RPStateLabel.S, RPStateLabel.T0, RPStateLabel.T_PLUS, RPStateLabel.T_MINUS)
    ]
    _write_csv(args.out, ["tau", "C_S", "C_T0", "C_Tplus", "C_Tminus"], zip(taus, *curves))


def cmd_control(args) -> None:
    p, scale = _params_from_args(args)
    if args.protocol == "strobe":
        if args.tau_steps < 2:
            raise ValueError("field=tau_steps: must be >= 2")
        taus = np.linspace(args.tau_min, args.tau_max, args.tau_steps) * scale
        taus, yields = control.controlled_yield_scan(p, taus, args.m_pulses)
        _write_csv(args.out, ["tau", "Phi_S"], zip(taus, yields))
    else:
        if args.omega_steps < 2:
            raise ValueError("field=omega_steps: must be >= 2")
        omegas = np.linspace(args.omega_min, args.omega_max, args.omega_steps) * (
            p.h_a if args.units == "physical" else 1.0
        )
        omegas, yields = control.toggle_field_nulling_scan(p, omegas)
        _write_csv(args.out, ["omega", "Phi_S"], zip(omegas, yields))


def cmd_planner(args) -> None:
    e = planner.ExperimentParams(
        distance=args.distance,
        sensitivity=args.sensitivity,
        shot_duration=args.shot_duration,
        single_shot_snr=args.single_shot_snr,
        target_snr=args.target_snr,
        efficiency=args.efficiency,
    )
    _write_text(args.out, planner.feasibility_report(e, n_points=args.n_points))


_COMMANDS = {
    "oscillations": cmd_oscillations,
    "field-scan": cmd_field_scan,
    "ensemble": cmd_ensemble,
    "teer": cmd_teer,
    "control": cmd_control,
    "planner": cmd_planner,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if "--config" in argv:
            idx = argv.index("--config")
            if idx + 1 >= len(argv):
                raise ValueError("field=config: missing path")
            for key, value in _load_config(argv[idx + 1]).items():
                flag = "--" + key.replace("_", "-")
                if flag not in argv:
                    argv += [flag, value]
        parser = build_parser()
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

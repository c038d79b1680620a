"""Command-line front end: phase reports, figure-data sweeps, count records.

Angles are accepted in degrees (matching the figure axes) and stored in
radians; CSV output carries radians with degree columns alongside, 9
significant digits, '.' decimal separator, '\\n' line endings.

Exit codes: 0 success, 1 usage or input error, 2 tolerance violation.
"""

from __future__ import annotations

import argparse
import math
import sys
from contextlib import contextmanager

import numpy as np

from . import bell, berry, neutron
from .states import MeasurementDirection

ORACLE_TOL = 5e-3
DEFAULT_RATIO = 0.005


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    return f"{float(x):.9g}"


@contextmanager
def _open_out(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="ascii", newline="") as handle:
            yield handle


def _write_rows(handle, rows, fmt: str):
    sep = "\t" if fmt == "tsv" else ","
    for row in rows:
        handle.write(sep.join(row) + "\n")


# -- phases ------------------------------------------------------------------

def cmd_phases(args) -> int:
    theta = math.radians(args.theta)
    if not 0.0 <= theta <= 0.5 * math.pi + 1e-12:
        print(f"error: --theta must be in [0, 90] degrees, got {args.theta}", file=sys.stderr)
        return 1
    ratio = args.ratio
    config = berry.FieldConfig(min(theta, 0.5 * math.pi), ratio or DEFAULT_RATIO, 1.0)
    up, down = berry.analytic_phases(config)
    if args.mode == "cycle":
        print(f"mode = single cycle, theta = {_fmt(args.theta)} deg")
        print(f"gamma = {_fmt(up.geometric)} rad ({_fmt(math.degrees(up.geometric))} deg)")
        if ratio:
            print(f"dynamical = {_fmt(up.dynamical)} rad (w0/w1 = {_fmt(ratio)})")
    else:
        mode = "full_two_periods" if args.mode == "full" else "two_half_periods"
        echo_up, _ = berry.spin_echo(config, mode)
        geometric = echo_up.geometric
        print(f"mode = spin echo ({mode}), theta = {_fmt(args.theta)} deg")
        print(f"gamma = {_fmt(geometric)} rad ({_fmt(math.degrees(geometric))} deg)")
        print("dynamical = 0 rad (cancelled by the echo)")

    if ratio is None:
        return 0

    if args.mode == "half":
        print("oracle: not applicable (a half-period stage is not a closed loop)")
        return 0
    if args.mode == "cycle":
        psi0 = berry.eigenstates(config, 0.0)[0]
        steps = berry.recommended_steps(config, config.period)
        traj = berry.evolve(config, psi0, config.period, steps)
        extracted = berry.extract_phases(traj, psi0)
        residual = berry.phase_distance(extracted.geometric, up.geometric)
        print(f"oracle gamma = {_fmt(extracted.geometric)} rad, residual = {_fmt(residual)} rad")
    else:
        extracted, _ = berry.spin_echo_oracle(config)
        residual = berry.phase_distance(extracted.geometric, 2.0 * up.geometric)
        dyn_residual = berry.phase_distance(extracted.dynamical, 0.0)
        print(
            f"oracle gamma = {_fmt(extracted.geometric)} rad, residual = {_fmt(residual)} rad, "
            f"dynamical residue = {_fmt(dyn_residual)} rad"
        )
        residual = max(residual, dyn_residual)
    if residual > args.tol:
        print(f"error: oracle residual {_fmt(residual)} exceeds tolerance {_fmt(args.tol)}",
              file=sys.stderr)
        return 2
    print(f"oracle residual within tolerance {_fmt(args.tol)}")
    return 0


# -- sweep-smax --------------------------------------------------------------

def cmd_sweep_smax(args) -> int:
    if args.start >= args.stop:
        print("error: --start must be below --stop", file=sys.stderr)
        return 1
    if args.points < 2:
        print("error: --points must be >= 2", file=sys.stderr)
        return 1
    gammas = np.radians(np.linspace(args.start, args.stop, args.points))
    header = [
        "gamma", "gamma_deg", "theta", "theta_deg", "smax_analytic", "smax_grid",
        "beta1_branch_pp", "beta1_branch_pm", "beta1p", "alpha1p",
    ]
    rows = [header]
    for g in gammas:
        param = bell.BerryParameter(float(g))
        pp = bell.bell_angles(param, "f1neg_f2neg")
        pm = bell.bell_angles(param, "f1neg_f2pos")
        analytic = bell.max_s(param, "analytic") if args.method in ("analytic", "both") else math.nan
        grid = bell.max_s(param, "grid") if args.method in ("grid", "both") else math.nan
        rows.append([
            _fmt(g), _fmt(math.degrees(g)), _fmt(param.tilt), _fmt(math.degrees(param.tilt)),
            _fmt(analytic), _fmt(grid),
            _fmt(pp.beta), _fmt(pm.beta), _fmt(pp.beta_prime), _fmt(pp.alpha_prime),
        ])
    with _open_out(args.out) as handle:
        _write_rows(handle, rows, args.format)
    if args.plot:
        _plot_sweep(args.plot, gammas, rows[1:])
    return 0


def _plot_sweep(path, gammas, rows):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    smax = [float(r[4]) for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(np.abs(gammas), smax)
    ax.axhline(2.0, color="gray", lw=0.8)
    ax.axhline(2.0 * math.sqrt(2.0), color="gray", lw=0.8, ls="--")
    ax.set_xlabel("|gamma| (rad)")
    ax.set_ylabel("maximal S")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


# -- bell-angles -------------------------------------------------------------

def cmd_bell_angles(args) -> int:
    param = bell.BerryParameter(math.radians(args.gamma))
    for branch, label in (("f1neg_f2neg", "f1<0,f2<0"), ("f1neg_f2pos", "f1<0,f2>0")):
        ang = bell.bell_angles(param, branch)
        print(
            f"branch {label}: alpha'1 = {_fmt(ang.alpha_prime)}, "
            f"beta1 = {_fmt(ang.beta)}, beta'1 = {_fmt(ang.beta_prime)} rad"
        )
        if args.grid:
            result = bell.grid_search_max_s(param, branch=branch)
            print(
                f"  grid argmax: alpha'1 = {_fmt(result.angles.alpha_prime)}, "
                f"beta1 = {_fmt(result.angles.beta)}, beta'1 = {_fmt(result.angles.beta_prime)}, "
                f"S = {_fmt(result.s_max)}"
            )
    print(f"smax_analytic = {_fmt(bell.max_s(param, 'analytic'))}")
    return 0


# -- correlation -------------------------------------------------------------

def cmd_correlation(args) -> int:
    param = bell.BerryParameter(math.radians(args.gamma))
    a = MeasurementDirection(math.radians(args.alpha1), math.radians(args.alpha2))
    b = MeasurementDirection(math.radians(args.beta1), math.radians(args.beta2))
    value = bell.correlation(param, a, b)
    print(f"E = {_fmt(value)}")
    for signs in ("++", "+-", "-+", "--"):
        print(f"P{signs} = {_fmt(bell.joint_probability(param, a, b, signs))}")
    return 0


# -- counts ------------------------------------------------------------------

def parse_settings_file(path):
    """One setting per line: chi_deg delta1_deg delta2_deg; '#' comments."""
    settings = []
    with open(path, encoding="ascii") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: expected 'chi_deg delta1_deg delta2_deg', got {raw.rstrip()!r}")
            try:
                chi_deg, d1_deg, d2_deg = (float(p) for p in parts)
            except ValueError:
                raise ValueError(f"line {lineno}: non-numeric entry in {raw.rstrip()!r}") from None
            settings.append(
                (math.radians(chi_deg), MeasurementDirection(math.radians(d1_deg), math.radians(d2_deg)))
            )
    return settings


def cmd_counts(args) -> int:
    if args.total < 1:
        print("error: --total must be >= 1", file=sys.stderr)
        return 1
    try:
        settings = parse_settings_file(args.settings)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if not settings:
        print("error: settings file contains no settings", file=sys.stderr)
        return 1
    config = neutron.InterferometerConfig(math.radians(args.gamma_b))
    records = []
    rows = [neutron.CountRecord.csv_header().split(",") + ["E"]]
    for offset, (chi, delta) in enumerate(settings):
        record = neutron.simulate_counts(config, chi, delta, args.total, args.seed + offset)
        records.append(record)
        rows.append(record.to_csv_row().split(",") + [_fmt(neutron.estimate_correlation(record))])
    with _open_out(args.out) as handle:
        _write_rows(handle, rows, args.format)
        if len(records) == 4:
            s, sigma = neutron.chsh_from_counts(records)
            handle.write(f"# S = {_fmt(s)} sigma = {_fmt(sigma)}\n")
    return 0


# -- verify-adiabatic --------------------------------------------------------

def cmd_verify_adiabatic(args) -> int:
    ratios = sorted((float(r) for r in args.ratios.split(",")), reverse=True)
    thetas = [math.radians(float(t)) for t in args.thetas.split(",")]
    residuals = {}
    print("theta_deg  w0/w1      gamma_analytic  gamma_oracle   residual")
    for theta in thetas:
        for ratio in ratios:
            config = berry.FieldConfig(theta, ratio, 1.0)
            expected = berry.analytic_phases(config)[0].geometric
            psi0 = berry.eigenstates(config, 0.0)[0]
            steps = berry.recommended_steps(config, config.period, args.points_per_larmor)
            traj = berry.evolve(config, psi0, config.period, steps)
            extracted = berry.extract_phases(traj, psi0)
            residual = berry.phase_distance(extracted.geometric, expected)
            residuals[(theta, ratio)] = residual
            print(
                f"{math.degrees(theta):9.3f}  {ratio:<9.6g}  {expected:>14.9f}  "
                f"{extracted.geometric:>12.9f}  {residual:.3e}"
            )
    ok = True
    smallest = ratios[-1]
    for theta in thetas:
        if residuals[(theta, smallest)] > args.tol:
            print(
                f"error: residual {residuals[(theta, smallest)]:.3e} at theta = "
                f"{math.degrees(theta):.1f} deg, ratio {smallest} exceeds {args.tol}",
                file=sys.stderr,
            )
            ok = False
        series = [residuals[(theta, r)] for r in ratios]
        if any(later >= earlier for earlier, later in zip(series, series[1:])):
            print(
                f"error: residual does not shrink monotonically with the ratio at "
                f"theta = {math.degrees(theta):.1f} deg: {series}",
                file=sys.stderr,
            )
            ok = False
    return 0 if ok else 2


# -- parser ------------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="berrybell", description=__doc__)
    common = _Parser(add_help=False)
    common.add_argument("--out", default=None, help="output path ('-' or omitted: stdout)")
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")
    common.add_argument("--format", choices=("csv", "tsv"), default="csv")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phases", parents=[common], help="analytic phases and the RK4 oracle")
    p.add_argument("--theta", type=float, required=True, help="field tilt, degrees")
    p.add_argument("--ratio", type=float, default=None, help="w0/w1; enables the oracle run")
    p.add_argument("--mode", choices=("cycle", "full", "half"), default="cycle")
    p.add_argument("--tol", type=float, default=ORACLE_TOL)
    p.set_defaults(func=cmd_phases)

    p = sub.add_parser("sweep-smax", parents=[common], help="S_max and Bell angles vs gamma (CSV)")
    p.add_argument("--start", type=float, default=0.0, help="gamma start, degrees")
    p.add_argument("--stop", type=float, default=180.0, help="gamma stop, degrees")
    p.add_argument("--points", type=int, default=181)
    p.add_argument("--method", choices=("analytic", "grid", "both"), default="both")
    p.add_argument("--plot", default=None, help="optional SVG plot path")
    p.set_defaults(func=cmd_sweep_smax)

    p = sub.add_parser("bell-angles", parents=[common], help="stationary Bell angles for one gamma")
    p.add_argument("--gamma", type=float, required=True, help="Berry phase, degrees")
    p.add_argument("--grid", action="store_true", help="also run the grid-search oracle")
    p.set_defaults(func=cmd_bell_angles)

    p = sub.add_parser("correlation", parents=[common], help="E(a, b) for one analyzer pair")
    p.add_argument("--gamma", type=float, required=True, help="Berry phase, degrees")
    p.add_argument("--alpha1", type=float, required=True)
    p.add_argument("--alpha2", type=float, default=0.0)
    p.add_argument("--beta1", type=float, required=True)
    p.add_argument("--beta2", type=float, default=0.0)
    p.set_defaults(func=cmd_correlation)

    p = sub.add_parser("counts", parents=[common], help="simulated count records for a settings file")
    p.add_argument("--gamma-b", type=float, required=True, help="interferometer phase, degrees")
    p.add_argument("--settings", required=True, help="file of 'chi_deg delta1_deg delta2_deg' lines")
    p.add_argument("--total", type=int, required=True, help="events per setting")
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("verify-adiabatic", parents=[common], help="oracle residuals across ratios")
    p.add_argument("--ratios", default="0.02,0.01,0.005", help="comma-separated w0/w1 values")
    p.add_argument("--thetas", default="15,30,45,60,75,90", help="comma-separated tilts, degrees")
    p.add_argument("--tol", type=float, default=ORACLE_TOL)
    p.add_argument("--points-per-larmor", type=int, default=700)
    p.set_defaults(func=cmd_verify_adiabatic)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

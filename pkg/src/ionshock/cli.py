"""Command-line front end.

Subcommands::

    ionshock saha     --T 300 --p 1466.3
    ionshock hugoniot --T 300 --p 1466.3 --alpha-min 1e-4 --alpha-max 0.5 --csv curve.csv
    ionshock shock    --mode chain --T 300 --p 1466.3 --u 16000 --json

Exit codes: 0 success, 2 usage error, 3 domain error, 4 I/O failure,
5 Lax-inadmissible shock (report still written), 6 solver non-convergence.

Settings are resolved as command-line flags, then ``--config`` file, then
built-in defaults. The config file is flat ``key = value`` text using the
same names as the flags (``T``, ``p``, ``alpha``, ``u``, ``mode``, ...).
"""

import argparse
import configparser
import csv
import json
import math
import re
import sys

import numpy as np

from . import __version__
from .errors import ConvergenceError, DomainError, InadmissibleShockError
from .hugoniot import (
    approx_alpha_bound,
    approx_chi_root,
    approx_upstream,
    build_hugoniot_curve,
    pressure_ratio_Pi,
    solve_approx_incident,
    theta_ratio,
    theta_ratio_asymptotic,
)
from .shock import (
    Family,
    ShockSolution,
    check_lax,
    incident_lax_sufficient,
    incident_speed,
    reflected_lax_sufficient,
    rh_residuals,
    solve_incident,
    solve_reflected,
)
from .thermo import GasModel, ThermoState, get_gas, gnl_sufficient, properties

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4
EXIT_INADMISSIBLE = 5
EXIT_CONVERGENCE = 6

SCHEMA_VERSION = 1

# key -> converter for config-file values
_KEYS = {
    "gas": str,
    "a2": float,
    "kappa": float,
    "T_ion": float,
    "T": float,
    "p": float,
    "alpha": float,
    "u": float,
    "mode": str,
    "pipeline": str,
    "alpha_min": float,
    "alpha_max": float,
    "points": int,
    "spacing": str,
}

_DEFAULTS = {
    "gas": "hydrogen",
    "mode": "incident",
    "pipeline": "exact",
    "alpha_min": 1e-4,
    "alpha_max": 0.5,
    "points": 200,
    "spacing": "log",
}

_CHOICES = {
    "mode": ("incident", "reflect", "chain"),
    "pipeline": ("exact", "approximate"),
    "spacing": ("log", "linear"),
}


class UsageError(Exception):
    pass


def fmt(x):
    """17 significant digits in scientific notation."""
    return f"{x:.16e}"


def _to_json(obj):
    marked = _mark_floats(obj)
    text = json.dumps(marked, indent=2, sort_keys=False)
    return re.sub(r'"@@([^"@]*)@@"', r"\1", text)


def _mark_floats(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, (float, np.floating)):
        return f"@@{fmt(float(obj))}@@" if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _mark_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_mark_floats(v) for v in obj]
    return obj


# --------------------------------------------------------------------------
# argument handling


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("gas and output")
    g.add_argument("--gas", help="gas preset name (default: hydrogen)")
    g.add_argument("--a2", type=float, help="specific gas constant [J/(kg K)]")
    g.add_argument("--kappa", type=float, help="Saha constant")
    g.add_argument("--T-ion", dest="T_ion", type=float, help="ionization temperature [K]")
    g.add_argument("--config", help="flat key = value scenario file")
    g.add_argument("--json", action="store_true", help="machine-readable JSON output")
    g.add_argument("--csv", metavar="PATH", help="write CSV to PATH")
    s = common.add_argument_group("state")
    s.add_argument("--T", type=float, help="temperature [K]")
    s.add_argument("--p", type=float, help="pressure [Pa]")
    s.add_argument("--alpha", type=float, help="ionization degree (overrides --p)")
    return common


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="ionshock", description="Ionizing shock waves in a single-ionization gas."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("saha", parents=[common], help="equilibrium state at (T, p)")

    hug = sub.add_parser("hugoniot", parents=[common], help="sample a thermodynamic Hugoniot locus")
    hug.add_argument("--alpha-min", dest="alpha_min", type=float)
    hug.add_argument("--alpha-max", dest="alpha_max", type=float)
    hug.add_argument("--points", type=int)
    hug.add_argument("--spacing", choices=_CHOICES["spacing"])

    shk = sub.add_parser("shock", parents=[common], help="solve incident / reflected shocks")
    shk.add_argument("--u", type=float, help="piston (particle) speed u- [m/s]")
    shk.add_argument("--mode", choices=_CHOICES["mode"])
    shk.add_argument("--pipeline", choices=_CHOICES["pipeline"])
    return parser


def _read_config(path):
    text = None
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string("[scenario]\n" + text)
    except configparser.Error as exc:
        raise UsageError(f"malformed config file {path!r}: {exc}") from exc
    out = {}
    for key, raw in cp["scenario"].items():
        if key not in _KEYS:
            raise UsageError(f"unknown config key {key!r}")
        try:
            out[key] = _KEYS[key](raw.strip())
        except ValueError as exc:
            raise UsageError(f"bad value for {key!r}: {raw!r}") from exc
    return out


def resolve_settings(args):
    """Merge flags, config file and defaults (in that order of precedence)."""
    settings = dict(_DEFAULTS)
    if args.config:
        settings.update(_read_config(args.config))
    for key in _KEYS:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    for key, choices in _CHOICES.items():
        if settings.get(key) not in choices:
            raise UsageError(f"{key} must be one of {', '.join(choices)}")
    return settings


def resolve_gas(settings):
    explicit = [settings.get(k) for k in ("a2", "kappa", "T_ion")]
    if any(v is not None for v in explicit):
        if any(v is None for v in explicit):
            raise UsageError("explicit gas needs all of --a2, --kappa, --T-ion")
        return GasModel(*explicit, name="custom")
    return get_gas(settings["gas"])


def _require(settings, *keys):
    missing = [k for k in keys if settings.get(k) is None]
    if missing:
        raise UsageError(f"missing required setting(s): {', '.join(missing)}")


def _base_state(settings, gas):
    _require(settings, "T")
    if settings.get("alpha") is not None:
        return ThermoState(settings["alpha"], settings["T"])
    _require(settings, "p")
    return ThermoState.from_pressure(settings["p"], settings["T"], gas)


def _gas_record(gas):
    return {"name": gas.name, "a2": gas.a2, "kappa": gas.kappa, "T_ion": gas.T_ion}


# --------------------------------------------------------------------------
# subcommands


def cmd_saha(settings, gas, args, out):
    _require(settings, "T", "p")
    state = ThermoState.from_pressure(settings["p"], settings["T"], gas)
    record = properties(state, gas)
    record["gnl_certified"] = gnl_sufficient(state, gas)
    if args.json:
        out.write(_to_json({"gas": _gas_record(gas), "state": record}) + "\n")
        return EXIT_OK
    units = {
        "alpha": "", "log_alpha": "", "T": "K", "theta": "K", "p": "Pa", "rho": "kg/m^3",
        "v": "m^3/kg", "e": "J/kg", "H": "J/kg", "eta": "", "c": "m/s", "p_eta": "Pa",
    }
    for key, unit in units.items():
        out.write(f"{key:>10} = {fmt(record[key])} {unit}".rstrip() + "\n")
    out.write(f"{'gnl':>10} = {'certified' if record['gnl_certified'] else 'not certified'}\n")
    return EXIT_OK


def cmd_hugoniot(settings, gas, args, out):
    base = _base_state(settings, gas)
    n = settings["points"]
    lo, hi = settings["alpha_min"], settings["alpha_max"]
    if n < 1:
        raise DomainError("points must be >= 1")
    if n == 1:
        grid = np.array([lo])
    elif settings["spacing"] == "log":
        grid = np.geomspace(lo, hi, n)
    else:
        grid = np.linspace(lo, hi, n)
    curve = build_hugoniot_curve(base, grid, gas)
    rows = curve.records(gas)
    fields = ["alpha", "T", "p", "eta", "c"]

    def write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(fields)
        for row in rows:
            writer.writerow([fmt(row[k]) for k in fields])

    if args.csv:
        try:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                write(fh)
        except OSError as exc:
            print(f"error: cannot write {args.csv!r}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        write(out)
    return EXIT_OK


def _stage_record(name, sol, gas):
    def side(state, u):
        rec = properties(state, gas)
        rec["u"] = u
        return rec

    rec = {
        "name": name,
        "family": sol.family.value,
        "zero_strength": sol.zero_strength,
        "upstream": side(sol.upstream, sol.u_upstream),
        "downstream": side(sol.downstream, sol.u_downstream),
        "U": sol.U,
        "V_up": sol.V_up,
        "V_down": sol.V_down,
        "mass_flux": sol.mass_flux,
    }
    if sol.family is Family.FORWARD:
        rec["U_I"] = sol.U
    else:
        rec["U_R"] = sol.U_R
    return rec


def _dimensionless_record(name, sol, gas):
    if sol.zero_strength:
        return {"stage": name, "Theta": 0.0, "d": 0.0, "D": 0.0, "Pi": 1.0}
    dp = sol.dimensionless()
    rec = {"stage": name, "Theta": dp.Theta, "d": dp.d, "D": dp.D, "admissible": dp.admissible}
    rec["Pi"] = pressure_ratio_Pi(dp.Theta + 1.0, max(dp.d, 0.0))
    try:
        rec["Theta_from_d_D"] = theta_ratio(max(dp.d, 0.0), dp.D)
    except (DomainError, InadmissibleShockError):
        rec["Theta_from_d_D"] = None
    rec["Theta_asymptotic"] = theta_ratio_asymptotic(dp.d, dp.D)
    rec["D_at_least_one_third"] = dp.D >= 1.0 / 3.0
    rec["Theta_lt_D"] = dp.Theta < dp.D
    return rec


def _lax_record(name, sol, gas):
    report = check_lax(sol, gas)
    rec = {
        "stage": name,
        "family": report.family.value,
        "margins": report.margins,
        "satisfied": report.satisfied,
        "sign_excluded": report.sign_excluded,
        "zero_strength": report.zero_strength,
        "admissible": report.admissible,
    }
    if not sol.zero_strength:
        dp = sol.dimensionless()
        if sol.family is Family.FORWARD:
            rec["sufficient_condition"] = incident_lax_sufficient(dp.D, dp.Theta + 1.0)
            rec["sqrtD_minus_1_sq"] = (math.sqrt(dp.D) - 1.0) ** 2
        else:
            rec["sufficient_condition"] = reflected_lax_sufficient(dp.D)
    return rec, report.admissible


def _approx_stage(settings, gas):
    _require(settings, "T", "p", "u")
    approx = approx_upstream(settings["T"], settings["p"], gas)
    plus = ThermoState.from_pressure(settings["p"], settings["T"], gas)
    u = settings["u"]
    if u <= 0:
        raise DomainError("the approximate pipeline needs u > 0")
    minus, chi = solve_approx_incident(approx, u, gas)
    # upstream theta is T+ under the alpha+ ~ 0 approximation
    U = incident_speed(minus.theta, approx.T_plus, u, gas)
    sol = ShockSolution(
        upstream=plus, u_upstream=0.0, downstream=minus, u_downstream=u,
        U=U, family=Family.FORWARD, gas=gas,
    )
    bound = approx_alpha_bound(minus.T, approx, gas)
    extra = {
        "A": approx.A,
        "A_hat": approx.A_hat,
        "B": approx.B,
        "chi": chi,
        "chi_root": approx_chi_root(minus.alpha, minus.T, approx.T_plus, gas),
        "alpha_bound": bound.bound,
        "f_xi": bound.f_xi,
        "B_threshold": bound.threshold,
        "gnl_criterion": bound.gnl_criterion,
    }
    return sol, extra


def cmd_shock(settings, gas, args, out):
    _require(settings, "u")
    mode, pipeline = settings["mode"], settings["pipeline"]
    u = settings["u"]
    stages = []
    approx_extra = None
    if pipeline == "approximate":
        if mode != "incident":
            raise UsageError("--pipeline approximate is only defined for --mode incident")
        sol, approx_extra = _approx_stage(settings, gas)
        stages.append(("incident", sol))
    else:
        base = _base_state(settings, gas)
        if mode == "reflect":
            stages.append(("reflected", solve_reflected(base, u, gas)))
        else:
            incident = solve_incident(base, u, gas)
            stages.append(("incident", incident))
            if mode == "chain":
                stages.append(("reflected", solve_reflected(incident.downstream, u, gas)))

    report = {
        "schema_version": SCHEMA_VERSION,
        "scenario": {"gas": _gas_record(gas), **{k: settings.get(k) for k in ("T", "p", "alpha", "u", "mode", "pipeline")}},
        "stages": [],
        "dimensionless": [],
        "lax": [],
        "gnl": [],
        "residuals": [],
        "comparison": [],
    }
    admissible = True
    for name, sol in stages:
        report["stages"].append(_stage_record(name, sol, gas))
        report["dimensionless"].append(_dimensionless_record(name, sol, gas))
        lax, ok = _lax_record(name, sol, gas)
        admissible = admissible and ok
        report["lax"].append(lax)
        report["gnl"].append({
            "stage": name,
            "upstream": gnl_sufficient(sol.upstream, gas),
            "downstream": gnl_sufficient(sol.downstream, gas),
        })
        res = rh_residuals(sol, gas)
        report["residuals"].append(
            {"stage": name, "mass": res.mass, "momentum": res.momentum, "energy": res.energy}
        )
        report["comparison"].append({
            "stage": name,
            "delta_alpha": sol.downstream.alpha - sol.upstream.alpha,
            "delta_T": sol.downstream.T - sol.upstream.T,
        })
    if approx_extra is not None:
        report["approximate"] = approx_extra

    if args.json:
        out.write(_to_json(report) + "\n")
    else:
        _print_shock(report, out)
    return EXIT_OK if admissible else EXIT_INADMISSIBLE


def _print_shock(report, out):
    for stage, dim, lax, gnl, res, cmp_ in zip(
        report["stages"], report["dimensionless"], report["lax"], report["gnl"],
        report["residuals"], report["comparison"],
    ):
        up, down = stage["upstream"], stage["downstream"]
        out.write(f"[{stage['name']}] {stage['family']} shock\n")
        out.write(f"  upstream   alpha = {fmt(up['alpha'])}  T = {fmt(up['T'])} K  u = {fmt(up['u'])} m/s\n")
        out.write(f"  downstream alpha = {fmt(down['alpha'])}  T = {fmt(down['T'])} K  u = {fmt(down['u'])} m/s\n")
        out.write(f"  U = {fmt(stage['U'])} m/s  mass flux = {fmt(stage['mass_flux'])} kg/(m^2 s)\n")
        out.write(f"  Theta = {fmt(dim['Theta'])}  d = {fmt(dim['d'])}  D = {fmt(dim['D'])}  Pi = {fmt(dim['Pi'])}\n")
        for label, margin in lax["margins"].items():
            out.write(f"  lax {label:<26} margin = {fmt(margin)} m/s\n")
        out.write(f"  lax admissible = {lax['admissible']}\n")
        out.write(f"  gnl certified: upstream = {gnl['upstream']}, downstream = {gnl['downstream']}\n")
        out.write(
            f"  rh residuals: mass = {res['mass']:.3e}, momentum = {res['momentum']:.3e}, "
            f"energy = {res['energy']:.3e}\n"
        )
        out.write(f"  delta alpha = {fmt(cmp_['delta_alpha'])}  delta T = {fmt(cmp_['delta_T'])} K\n")
    if "approximate" in report:
        out.write("[approximate upstream]\n")
        for key, value in report["approximate"].items():
            out.write(f"  {key} = {value if isinstance(value, bool) else fmt(value)}\n")


_COMMANDS = {"saha": cmd_saha, "hugoniot": cmd_hugoniot, "shock": cmd_shock}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        settings = resolve_settings(args)
        gas = resolve_gas(settings)
        return _COMMANDS[args.command](settings, gas, args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"solver did not converge: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (DomainError, InadmissibleShockError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

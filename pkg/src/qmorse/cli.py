"""Command-line front end.

Subcommands emit column data (CSV or JSON) for the level ladder, the
potential curve, partition functions, thermodynamic sweeps and critical
temperatures. Exit codes: 0 ok, 2 registry error, 3 unknown molecule,
4 invalid argument, 5 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import __version__
from .partition import PartitionMethod, z_closed_form, z_direct, z_euler_maclaurin
from .physchem import Registry, RegistryError, builtin_registry, load_registry
from .reference import N_MAX_ERRATA, PUBLISHED_N_MAX, Q_GRID
from .spectrum import excitation_energies, make_spectrum, potential, potential_minimum
from .thermo import DEFAULT_TC_BRACKET, ThermoError, critical_temperature, sweep

EXIT_OK, EXIT_REGISTRY, EXIT_MOLECULE, EXIT_ARGUMENT, EXIT_NUMERIC = 0, 2, 3, 4, 5
BETA_NOTE = "beta in 1/eV (assumed; energies in eV)"
THERMO_COLUMNS = ("q", "beta", "T_K", "F_eV", "U_eV", "S_kB", "C_kB", "method", "diff")

GLOBAL_DEFAULTS = {
    "registry": None,
    "format": "csv",
    "out": None,
    "em_order": 2,
    "endpoints": "paper",
    "upper_limit": "integer",
    "diff": None,
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGUMENT, f"{self.prog}: error: {message}\n")


def fmt(value) -> str:
    """Fixed textual form: 9 significant digits, scientific outside [1e-3, 1e6)."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(value).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    if x == 0.0:
        return "0"
    if 1e-3 <= abs(x) < 1e6:
        text = np.format_float_positional(x, precision=9, unique=False, fractional=False, trim="-")
        if abs(float(text)) < 1e6:
            return text
    return np.format_float_scientific(x, precision=8, unique=False, trim="-")


@dataclass
class Table:
    columns: Sequence[str]
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def render(self, fmt_name: str) -> str:
        if fmt_name == "json":
            payload = {"meta": self.meta, "rows": [dict(zip(self.columns, r)) for r in self.rows]}
            return json.dumps(payload, indent=2, default=float) + "\n"
        lines = [f"# {k}: {v}" if not k.startswith("note") else f"# {v}" for k, v in self.meta.items()]
        lines.append(",".join(self.columns))
        lines.extend(",".join(fmt(v) for v in row) for row in self.rows)
        return "\n".join(lines) + "\n"


def _float_list(text: str) -> list[float]:
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _add_global(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    g = p.add_argument_group("global options")
    g.add_argument("--registry", default=S, help="molecule registry file (CSV or JSON)")
    g.add_argument("--format", choices=("csv", "json"), default=S, help="output format (default csv)")
    g.add_argument("--out", default=S, help="write output to this file instead of stdout")
    g.add_argument("--em-order", type=int, choices=(1, 2, 3), default=S, help="Bernoulli terms kept (default 2)")
    g.add_argument("--endpoints", choices=("paper", "full"), default=S, help="Euler-MacLaurin endpoint terms")
    g.add_argument(
        "--upper-limit", choices=("integer", "continuous"), default=S, help="upper bound of the EM integral"
    )
    g.add_argument("--diff", choices=("analytic", "numeric"), default=S, help="derivative route for U and C")


def _add_beta_grid(p: argparse.ArgumentParser, beta_max: float, steps: int) -> None:
    p.add_argument("--beta-min", type=float, default=beta_max / steps, help="smallest beta in 1/eV")
    p.add_argument("--beta-max", type=float, default=beta_max, help=f"largest beta in 1/eV (default {beta_max:g})")
    p.add_argument("--beta-steps", type=int, default=steps, help=f"number of grid points (default {steps})")
    p.add_argument("--log-beta", action="store_true", help="geometric instead of linear spacing")


def _add_method(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--method",
        choices=("direct", "euler_maclaurin", "closed_form"),
        default="direct",
        help="partition-function route (default: exact direct sum)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qmorse", description="Thermodynamics of the q-deformed Morse oscillator.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_global(parser)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("molecules", help="list the molecule registry")
    _add_global(p)

    p = sub.add_parser("spectrum", help="bound level energies E_n and E_n - E_0")
    _add_global(p)
    p.add_argument("--molecule", required=True)
    p.add_argument("--q", type=float, required=True)

    p = sub.add_parser("potential", help="potential curve V(x) for one or more q")
    _add_global(p)
    p.add_argument("--molecule", required=True)
    p.add_argument("--q", type=_float_list, default=list(Q_GRID))
    p.add_argument("--x-min", type=float, default=-0.5, help="displacement in Angstrom")
    p.add_argument("--x-max", type=float, default=4.0)
    p.add_argument("--x-steps", type=int, default=226)

    p = sub.add_parser("zfun", help="partition function by all three routes")
    _add_global(p)
    p.add_argument("--molecule", required=True)
    p.add_argument("--q", type=float, required=True)
    _add_beta_grid(p, 20.0, 200)

    p = sub.add_parser("thermo", help="F, U, S, C on a beta grid")
    _add_global(p)
    p.add_argument("--molecule", required=True)
    p.add_argument("--q", type=float, required=True)
    _add_method(p)
    _add_beta_grid(p, 50.0, 500)

    p = sub.add_parser("tc", help="critical temperature (maximum of C)")
    _add_global(p)
    p.add_argument("--molecule", action="append", help="repeatable; default: every registry entry")
    p.add_argument("--q", type=_float_list, default=list(Q_GRID))
    p.add_argument("--bracket", type=float, nargs=2, default=list(DEFAULT_TC_BRACKET), metavar=("LO", "HI"))
    p.add_argument("--tol", type=float, default=1e-6)
    _add_method(p)

    p = sub.add_parser("sweep", help="thermodynamic grid over q and beta")
    _add_global(p)
    p.add_argument("--molecule", required=True)
    p.add_argument("--q", type=_float_list, default=list(Q_GRID))
    _add_method(p)
    _add_beta_grid(p, 50.0, 500)
    return parser


def _registry(args) -> Registry:
    if args.registry is None:
        return builtin_registry()
    try:
        return load_registry(args.registry)
    except RegistryError as exc:
        raise CliError(f"registry error: {exc}", EXIT_REGISTRY) from None


def _molecule(registry: Registry, name: str):
    if name not in registry:
        raise CliError(f"unknown molecule {name!r}; known: {', '.join(registry.names()) or '(none)'}", EXIT_MOLECULE)
    return registry[name]


def _spectrum(mol, q: float):
    try:
        return make_spectrum(mol, q)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_ARGUMENT) from None


def _method(args, tag: str) -> PartitionMethod:
    return PartitionMethod(
        tag,
        em_order=args.em_order,
        endpoint_mode="full_endpoints" if args.endpoints == "full" else "paper_faithful",
        upper_limit=args.upper_limit,
    )


def _diff(args, method: PartitionMethod) -> str | None:
    if args.diff == "analytic" and method.tag != "direct":
        raise CliError("--diff analytic requires --method direct", EXIT_ARGUMENT)
    return args.diff


def _beta_grid(args, strict: bool = True) -> np.ndarray:
    lo, hi, n = args.beta_min, args.beta_max, args.beta_steps
    if n < 1:
        raise CliError("--beta-steps must be >= 1", EXIT_ARGUMENT)
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo or (n > 1 and hi == lo):
        raise CliError("need --beta-min < --beta-max", EXIT_ARGUMENT)
    if lo < 0 or (strict and lo == 0):
        raise CliError(f"beta must be positive (got --beta-min {lo:g})", EXIT_ARGUMENT)
    if args.log_beta:
        if lo <= 0:
            raise CliError("--log-beta needs a positive --beta-min", EXIT_ARGUMENT)
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)


def _spectrum_meta(s) -> dict:
    meta = {"molecule": s.molecule.name, "q": fmt(s.q), "nu": fmt(s.nu), "mu": fmt(s.mu), "n_max": s.n_max}
    if s.empty:
        meta["note"] = "no bound states (q*nu < 1)"
    key = (s.molecule.name, s.q)
    if key in N_MAX_ERRATA and s.n_max == N_MAX_ERRATA[key]:
        meta["note_nmax"] = (
            f"note: published level table lists n_max={PUBLISHED_N_MAX[key]} here; "
            f"floor(q*nu/2 - 1/2) gives {s.n_max}"
        )
    if s.boundary_tie:
        meta["note_tie"] = "note: q*nu/2 - 1/2 is integral; top level sits at E = 0 and is kept"
    return meta


def cmd_molecules(args) -> Table | str:
    registry = _registry(args)
    return registry.to_json() if args.format == "json" else registry.to_csv()


def cmd_spectrum(args) -> Table:
    s = _spectrum(_molecule(_registry(args), args.molecule), args.q)
    table = Table(("n", "E_n_eV", "deltaE_n_eV"), meta=_spectrum_meta(s))
    if not s.empty:
        for n, (e, de) in enumerate(zip(s.levels, excitation_energies(s))):
            table.rows.append((n, e, float(de)))
    return table


def cmd_potential(args) -> Table:
    mol = _molecule(_registry(args), args.molecule)
    if args.x_steps < 2 or not args.x_max > args.x_min:
        raise CliError("need --x-min < --x-max and --x-steps >= 2", EXIT_ARGUMENT)
    xs = np.linspace(args.x_min, args.x_max, args.x_steps)
    table = Table(("q", "x_A", "V_eV"), meta={"molecule": mol.name, "x": "displacement in Angstrom"})
    for q in sorted(set(args.q), reverse=True):
        try:
            x_min, v_min = potential_minimum(mol, q)
            vs = potential(xs, mol, q)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_ARGUMENT) from None
        table.meta[f"minimum_q{fmt(q)}"] = f"x={fmt(x_min)} V={fmt(v_min)}"
        table.rows.extend((q, float(x), float(v)) for x, v in zip(xs, vs))
    return table


def cmd_zfun(args) -> Table:
    s = _spectrum(_molecule(_registry(args), args.molecule), args.q)
    betas = _beta_grid(args)
    em, closed = _method(args, "euler_maclaurin"), _method(args, "closed_form")
    meta = _spectrum_meta(s) | {"beta_units": BETA_NOTE, "em_method": em.label, "closed_method": closed.label}
    table = Table(("beta", "Z_direct", "Z_em", "Z_closed", "rel_dev_em", "rel_dev_closed"), meta=meta)
    if s.empty:
        return table
    for b in betas:
        zd = z_direct(s, b).z
        ze = z_euler_maclaurin(s, b, em).z
        zc = z_closed_form(s, b, closed).z
        table.rows.append((float(b), zd, ze, zc, (ze - zd) / zd, (zc - zd) / zd))
    return table


def _thermo_rows(sw) -> list:
    return [(q, p.beta, p.T, p.F, p.U, p.S, p.C, p.method.label, p.diff) for q, p in sw.rows]


def cmd_thermo(args) -> Table:
    mol = _molecule(_registry(args), args.molecule)
    s = _spectrum(mol, args.q)
    method = _method(args, args.method)
    diff = _diff(args, method)
    betas = _beta_grid(args)
    meta = _spectrum_meta(s) | {"beta_units": BETA_NOTE, "method": method.label}
    sw = sweep(mol, [args.q], betas, method, diff)
    return Table(THERMO_COLUMNS, _thermo_rows(sw), meta)


def cmd_sweep(args) -> Table:
    mol = _molecule(_registry(args), args.molecule)
    method = _method(args, args.method)
    diff = _diff(args, method)
    betas = _beta_grid(args)
    for q in args.q:
        _spectrum(mol, q)
    sw = sweep(mol, args.q, betas, method, diff)
    meta = {"molecule": mol.name, "beta_units": BETA_NOTE, "method": method.label}
    meta |= {f"n_max_q{fmt(q)}": n for q, n in sw.n_max.items()}
    if sw.empty_qs:
        meta["note_empty"] = "note: no bound states for q = " + ", ".join(fmt(q) for q in sw.empty_qs)
    return Table(THERMO_COLUMNS, _thermo_rows(sw), meta)


def cmd_tc(args) -> Table:
    registry = _registry(args)
    names = args.molecule or registry.names()
    mols = [_molecule(registry, n) for n in names]
    method = _method(args, args.method)
    diff = _diff(args, method)
    lo, hi = args.bracket
    if not 0 < lo < hi:
        raise CliError("--bracket needs 0 < LO < HI", EXIT_ARGUMENT)
    table = Table(
        ("molecule", "q", "beta_C", "T_C_K", "C_max"),
        meta={"beta_units": BETA_NOTE, "method": method.label, "bracket": f"{fmt(lo)} {fmt(hi)}"},
    )
    for mol in mols:
        for q in sorted(set(args.q), reverse=True):
            s = _spectrum(mol, q)
            if s.empty:
                table.meta[f"note_{mol.name}_{fmt(q)}"] = f"note: {mol.name} q={fmt(q)} has no bound states"
                continue
            cp = critical_temperature(s, (lo, hi), method, diff, tol=args.tol)
            if cp.at_endpoint:
                msg = f"warning: {mol.name} q={fmt(q)} maximum on bracket edge (beta={fmt(cp.beta_C)})"
                table.meta[f"note_{mol.name}_{fmt(q)}"] = msg
                print(msg, file=sys.stderr)
            table.rows.append((mol.name, q, cp.beta_C, cp.T_C, cp.C_max))
    return table


COMMANDS = {
    "molecules": cmd_molecules,
    "spectrum": cmd_spectrum,
    "potential": cmd_potential,
    "zfun": cmd_zfun,
    "thermo": cmd_thermo,
    "tc": cmd_tc,
    "sweep": cmd_sweep,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        result = COMMANDS[args.command](args)
    except CliError as exc:
        print(f"qmorse: {exc}", file=sys.stderr)
        return exc.code
    except (ThermoError, ArithmeticError) as exc:
        print(f"qmorse: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"qmorse: invalid argument: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT
    text = result if isinstance(result, str) else result.render(args.format)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"qmorse: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_ARGUMENT
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

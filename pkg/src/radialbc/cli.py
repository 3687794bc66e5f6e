"""Command-line front end.

Subcommands
-----------
indicial   admissibility table for given l and inverse-square strengths
spectrum   bound levels of a potential under a chosen origin condition
diagnose   point-source residual of a candidate u (analytic or computed)
compare    level table across origin conditions (dirichlet / l2only / sae)

Every JSON report embeds its effective configuration as canonical strings;
`rerun_argv(config)` rebuilds an argv that reproduces the run byte for byte.

Exit codes: 0 success, 2 configuration error, 3 physics rejection
(unsupported class, policy, fall-to-center, regime, domain), 4 numerical
failure (bracketing, start-off, convergence).
"""
from __future__ import annotations

import argparse
import math
import os
import sys

from . import io as _io
from .errors import (
    BracketError,
    ClassificationError,
    ConfigError,
    DivergentVolumeError,
    DomainError,
    FallToCenterError,
    PolicyError,
    RegimeError,
    SolverConvergenceError,
    StartOffError,
    UnsupportedClassError,
)
from .deltadiag import CandidateU, Power, PowerPair, residual_limit
from .grid import RadialGrid
from .indicial import solve_indicial
from .potentials import (
    REGULAR,
    TRANSITIVE_SINGULAR,
    Coulomb,
    Harmonic,
    InverseSquare,
    OriginClass,
    PotentialModel,
    PowerLaw,
    SphericalWell,
    SumPotential,
    Tabulated,
)
from .solver import (
    DirichletOrigin,
    L2Only,
    MixedSAE,
    RadialProblem,
    find_level,
    spectrum,
)

EXIT_CONFIG = 2
EXIT_PHYSICS = 3
EXIT_NUMERICS = 4

_PHYSICS_ERRORS = (
    UnsupportedClassError,
    PolicyError,
    FallToCenterError,
    RegimeError,
    DomainError,
    ClassificationError,
    DivergentVolumeError,
)
_NUMERIC_ERRORS = (BracketError, StartOffError, SolverConvergenceError)


# --------------------------------------------------------------------------
# value parsing


def _f(field: str, s) -> float:
    try:
        v = float(s)
    except (TypeError, ValueError):
        raise ConfigError(field, f"expected a number, got {s!r}") from None
    if not math.isfinite(v):
        raise ConfigError(field, f"expected a finite number, got {s!r}")
    return v


def _i(field: str, s) -> int:
    try:
        return int(s)
    except (TypeError, ValueError):
        raise ConfigError(field, f"expected an integer, got {s!r}") from None


def _b(field: str, s) -> bool:
    if isinstance(s, bool):
        return s
    t = str(s).strip().lower()
    if t in ("true", "1", "yes", "on"):
        return True
    if t in ("false", "0", "no", "off"):
        return False
    raise ConfigError(field, f"expected true/false, got {s!r}")


def _params(field: str, rest: str) -> dict:
    out = {}
    for kv in rest.split(","):
        if not kv:
            continue
        if "=" not in kv:
            raise ConfigError(field, f"expected key=value, got {kv!r}")
        k, v = kv.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_potential(text: str, mass: float = 1.0) -> PotentialModel:
    """Parse a potential token, e.g. 'coulomb:Z=1' or 'invsq:g=-0.16+well:depth=2,radius=1'."""
    parts = []
    for tok in text.split("+"):
        tok = tok.strip()
        if not tok:
            raise ConfigError("potential", "empty term in potential sum")
        kind, _, rest = tok.partition(":")
        kind = kind.strip().lower()
        if kind == "table":
            if not rest:
                raise ConfigError("potential", "table needs a file path: table:FILE")
            try:
                parts.append(Tabulated.from_csv(rest))
            except OSError as exc:
                raise ConfigError("potential", f"cannot read {rest!r}: {exc}") from None
            continue
        p = _params("potential", rest)
        try:
            if kind == "coulomb":
                parts.append(Coulomb(Z=_f("potential", p.pop("Z"))))
            elif kind == "harmonic":
                m_h = _f("potential", p.pop("mass")) if "mass" in p else mass
                parts.append(Harmonic(omega=_f("potential", p.pop("omega")), mass=m_h))
            elif kind == "invsq":
                parts.append(InverseSquare(g=_f("potential", p.pop("g"))))
            elif kind == "well":
                parts.append(
                    SphericalWell(
                        depth=_f("potential", p.pop("depth")),
                        radius=_f("potential", p.pop("radius")),
                    )
                )
            elif kind == "powerlaw":
                parts.append(
                    PowerLaw(coeff=_f("potential", p.pop("coeff")), exponent=_f("potential", p.pop("p")))
                )
            else:
                raise ConfigError(
                    "potential",
                    f"unknown kind {kind!r} (expected coulomb, harmonic, invsq, well, powerlaw, table)",
                )
        except KeyError as exc:
            raise ConfigError("potential", f"{kind} is missing parameter {exc.args[0]}") from None
        if p:
            raise ConfigError("potential", f"unknown {kind} parameter(s): {sorted(p)}")
    if len(parts) == 1:
        return parts[0]
    return SumPotential(parts=tuple(parts))


def parse_bc(text: str):
    t = text.strip()
    if t == "dirichlet":
        return DirichletOrigin()
    if t == "l2only":
        return L2Only()
    if t.startswith("sae"):
        _, _, rest = t.partition(":")
        p = _params("bc", rest)
        theta = _f("bc", p.pop("theta", 0.0))
        L = _f("bc", p.pop("L", 1.0))
        if p:
            raise ConfigError("bc", f"unknown sae parameter(s): {sorted(p)}")
        try:
            return MixedSAE(theta=theta, L=L)
        except ValueError as exc:
            raise ConfigError("bc", str(exc)) from None
    raise ConfigError("bc", f"expected dirichlet, l2only, or sae:theta=..,L=.., got {text!r}")


def _bc_token(policy) -> str:
    if isinstance(policy, DirichletOrigin):
        return "dirichlet"
    if isinstance(policy, L2Only):
        return "l2only"
    return f"sae:theta={policy.theta!r},L={policy.L!r}"


def _parse_int_list(field: str, text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = _i(field, lo_s), _i(field, hi_s)
        if hi < lo:
            raise ConfigError(field, f"range {text!r} is decreasing")
        return list(range(lo, hi + 1))
    return [_i(field, t) for t in text.split(",") if t.strip()]


def _parse_float_list(field: str, text: str) -> list[float]:
    return [_f(field, t) for t in text.split(",") if t.strip()]


def _parse_window(text: str):
    if text.strip() == "auto":
        return None
    vals = _parse_float_list("window", text)
    if len(vals) != 2:
        raise ConfigError("window", f"expected 'lo,hi' or 'auto', got {text!r}")
    return (vals[0], vals[1])


def read_config_file(path: str) -> dict:
    """key=value lines; '#' starts a comment; keys match long option names."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for ln, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError("config", f"{path}:{ln}: expected key=value, got {line!r}")
                k, v = line.split("=", 1)
                out[k.strip().replace("-", "_")] = v.strip()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path!r}: {exc}") from None
    return out


class _Resolver:
    """Merge CLI flags over config-file entries over defaults."""

    def __init__(self, args, file_cfg: dict):
        self.args = args
        self.file_cfg = file_cfg

    def get(self, key: str, default=None):
        v = getattr(self.args, key, None)
        if v is None:
            v = self.file_cfg.get(key)
        return default if v is None else v


# --------------------------------------------------------------------------
# rerun support


def rerun_argv(config: dict) -> list[str]:
    """Reconstruct an argv list from an echoed configuration block."""
    argv = [str(config["command"])]
    for key in sorted(config):
        if key == "command":
            continue
        val = str(config[key])
        flag = "--" + key.replace("_", "-")
        if val == "true":
            argv.append(flag)
        elif val == "false":
            continue
        else:
            # --flag=value survives values with a leading minus sign
            argv.append(f"{flag}={val}")
    return argv


# --------------------------------------------------------------------------
# subcommand runners


def _emit(args_out, text: str) -> None:
    if args_out:
        with open(args_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_indicial(res: _Resolver) -> int:
    mass = _f("mass", res.get("mass", 1.0))
    ls = _parse_int_list("l", str(res.get("l", "0..2")))
    v0s = _parse_float_list("two_m_v0", str(res.get("two_m_v0", "0")))
    fmt = str(res.get("format", "csv"))
    reports = []
    for l in ls:
        for tm in v0s:
            if tm == 0.0:
                origin = OriginClass(kind=REGULAR)
            else:
                origin = OriginClass(kind=TRANSITIVE_SINGULAR, V0=tm / (2.0 * mass))
            reports.append(solve_indicial(l, mass, origin))
    config = {
        "command": "indicial",
        "l": ",".join(str(l) for l in ls),
        "two_m_v0": ",".join(repr(v) for v in v0s),
        "mass": repr(mass),
        "format": fmt,
    }
    if fmt == "csv":
        text = _io.indicial_csv(reports, comments=[f"{k}={v}" for k, v in sorted(config.items())])
    elif fmt == "json":
        rows = []
        for rep in reports:
            rows.append(
                {
                    "l": rep.l,
                    "two_m_V0": rep.two_m_V0,
                    "P": rep.P,
                    "a_plus": rep.a_plus if not rep.fall_to_center else None,
                    "a_minus": rep.a_minus if not rep.fall_to_center else None,
                    "minus_l2": rep.minus_l2,
                    "minus_bc": rep.minus_bc,
                    "degenerate": rep.degenerate,
                    "regime": rep.regime,
                }
            )
        text = _io.report_json(config, {"table": rows}, {})
    else:
        raise ConfigError("format", f"expected csv or json, got {fmt!r}")
    _emit(res.get("out"), text)
    return 0


def _build_problem(res: _Resolver):
    mass = _f("mass", res.get("mass", 1.0))
    pot_text = res.get("potential")
    if pot_text is None:
        raise ConfigError("potential", "a potential is required (e.g. --potential coulomb:Z=1)")
    potential = parse_potential(str(pot_text), mass=mass)
    l = _i("l", res.get("l", 0))
    policy = parse_bc(str(res.get("bc", "dirichlet")))
    kg = _b("kg", res.get("kg", False))
    window = _parse_window(str(res.get("window", "auto")))

    grid = None
    grid_keys = ("r0", "rmax", "n_points")
    given = [k for k in grid_keys if res.get(k) is not None]
    if given and len(given) != len(grid_keys):
        raise ConfigError("grid", f"r0, rmax, n-points must be given together (got only {given})")
    if given:
        try:
            grid = RadialGrid(
                r0=_f("r0", res.get("r0")),
                r_max=_f("rmax", res.get("rmax")),
                n_points=_i("n_points", res.get("n_points")),
                n_geo=_i("n_geo", res.get("n_geo", 0)),
            )
        except ValueError as exc:
            raise ConfigError("grid", str(exc)) from None

    problem = RadialProblem(
        mass=mass, l=l, potential=potential, policy=policy,
        grid=grid, relativistic=kg, energy_window=window,
    )
    config = {
        "potential": potential.token(),
        "l": str(l),
        "mass": repr(mass),
        "bc": _bc_token(policy),
        "kg": "true" if kg else "false",
        "window": "auto" if window is None else f"{window[0]!r},{window[1]!r}",
    }
    if grid is not None:
        config.update(
            r0=repr(grid.r0), rmax=repr(grid.r_max),
            n_points=str(grid.n_points), n_geo=str(grid.n_geo),
        )
    return problem, config


def _run_spectrum(res: _Resolver) -> int:
    problem, config = _build_problem(res)
    n_levels = _i("levels", res.get("levels", 1))
    fmt = str(res.get("format", "json"))
    config.update(command="spectrum", levels=str(n_levels), format=fmt)
    wf_dir = res.get("emit_wavefunctions")
    if wf_dir:
        config["emit_wavefunctions"] = str(wf_dir)

    result = spectrum(problem, n_levels)

    diagnostics = {
        "grids": result.metadata["grids"],
        "iterations": result.metadata["iterations"],
        "absent": result.metadata["absent"],
    }
    if wf_dir:
        os.makedirs(wf_dir, exist_ok=True)
        files = []
        for lv in result.levels:
            path = os.path.join(wf_dir, f"level_{lv.n_r:03d}.csv")
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(_io.wavefunction_csv(lv.r, lv.u, comments=[f"n_r={lv.n_r}", f"E={lv.E!r}"]))
            files.append(path)
        diagnostics["wavefunction_files"] = files

    if fmt == "csv":
        text = _io.spectrum_csv(result, comments=[f"{k}={v}" for k, v in sorted(config.items())])
    elif fmt == "json":
        rows = [
            {
                "n_r": lv.n_r,
                "E": lv.E,
                "match_defect": lv.match_defect,
                "node_count": lv.node_count,
            }
            for lv in result.levels
        ]
        text = _io.report_json(config, {"levels": rows}, diagnostics)
    else:
        raise ConfigError("format", f"expected csv or json, got {fmt!r}")
    _emit(res.get("out"), text)
    return 0


def _run_diagnose(res: _Resolver) -> int:
    mass = _f("mass", res.get("mass", 1.0))
    ratio = _f("ratio", res.get("ratio", 0.5))
    steps = _i("steps", res.get("steps", 8))
    fmt = str(res.get("format", "json"))
    power = res.get("power")
    config = {
        "command": "diagnose",
        "mass": repr(mass),
        "ratio": repr(ratio),
        "steps": str(steps),
        "format": fmt,
    }

    if power is not None:
        vals = _parse_float_list("power", str(power))
        if len(vals) == 2:
            form = Power(c=vals[0], a=vals[1])
        elif len(vals) == 4:
            form = PowerPair(c1=vals[0], a1=vals[1], c2=vals[2], a2=vals[3])
        else:
            raise ConfigError("power", "expected 'c,a' or 'c1,a1,c2,a2'")
        l = _i("l", res.get("l", 0))
        E = _f("energy", res.get("energy", 0.0))
        pot_text = res.get("potential")
        potential = parse_potential(str(pot_text), mass=mass) if pot_text else None
        candidate = CandidateU(form=form, l=l, E=E, potential=potential, mass=mass)
        a_start = _f("a_start", res.get("a_start", 1.0))
        config.update(
            power=",".join(repr(v) for v in vals),
            l=str(l),
            energy=repr(E),
            a_start=repr(a_start),
        )
        if potential is not None:
            config["potential"] = potential.token()
    else:
        problem, pconfig = _build_problem(res)
        n_r = _i("level", res.get("level", 0))
        level = find_level(problem, n_r)
        candidate = CandidateU.from_level(problem, level)
        a_start_raw = res.get("a_start")
        a_start = _f("a_start", a_start_raw) if a_start_raw is not None else level.r[-1] / 8.0
        config.update(pconfig, level=str(n_r), a_start=repr(a_start))

    report = residual_limit(candidate, a_start, ratio=ratio, n_steps=steps)
    if fmt == "csv":
        text = _io.residual_csv(report, comments=[f"{k}={v}" for k, v in sorted(config.items())])
    elif fmt == "json":
        results = {
            "S_limit": report.S_limit,
            "order": report.order,
            "verdict": report.verdict,
            "strength": report.strength,
        }
        diagnostics = {
            "radii": list(report.radii),
            "S_values": list(report.S_values),
            "note": report.note,
        }
        text = _io.report_json(config, results, diagnostics)
    else:
        raise ConfigError("format", f"expected csv or json, got {fmt!r}")
    _emit(res.get("out"), text)
    return 0


def _run_compare(res: _Resolver) -> int:
    mass = _f("mass", res.get("mass", 1.0))
    pot_text = res.get("potential")
    if pot_text is None:
        raise ConfigError("potential", "a potential is required")
    potential = parse_potential(str(pot_text), mass=mass)
    l = _i("l", res.get("l", 0))
    n_levels = _i("levels", res.get("levels", 1))
    thetas = _parse_float_list("thetas", str(res.get("thetas", "")))
    L = _f("L", res.get("L", 1.0))
    fmt = str(res.get("format", "table"))
    config = {
        "command": "compare",
        "potential": potential.token(),
        "l": str(l),
        "mass": repr(mass),
        "levels": str(n_levels),
        "thetas": ",".join(repr(t) for t in thetas),
        "L": repr(L),
        "format": fmt,
    }

    columns = [("dirichlet", DirichletOrigin()), ("l2only", L2Only())]
    for th in thetas:
        columns.append((f"sae:theta={th!r}", MixedSAE(theta=th, L=L)))

    table: dict[str, list] = {}
    notes: dict[str, str] = {}
    for name, policy in columns:
        try:
            problem = RadialProblem(mass=mass, l=l, potential=potential, policy=policy)
        except PolicyError as exc:
            table[name] = []
            notes[name] = f"skipped: {exc}"
            continue
        entries = []
        for n_r in range(n_levels):
            try:
                lv = find_level(problem, n_r)
                entries.append(lv.E)
            except _NUMERIC_ERRORS as exc:
                entries.append(None)
                notes.setdefault(name, f"level {n_r}: {type(exc).__name__}")
        table[name] = entries

    if fmt == "table":
        width = 22
        header = "n_r".ljust(6) + "".join(name.ljust(width) for name, _ in columns)
        lines = [header, "-" * len(header)]
        for n_r in range(n_levels):
            cells = []
            for name, _ in columns:
                col = table[name]
                if n_r < len(col) and col[n_r] is not None:
                    cells.append(("%.12g" % col[n_r]).ljust(width))
                else:
                    cells.append("-".ljust(width))
            lines.append(str(n_r).ljust(6) + "".join(cells))
        for name in notes:
            lines.append(f"# {name}: {notes[name]}")
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        text = _io.report_json(
            config,
            {"columns": [name for name, _ in columns], "energies": table},
            {"notes": notes},
        )
    else:
        raise ConfigError("format", f"expected table or json, got {fmt!r}")
    _emit(res.get("out"), text)
    return 0


# --------------------------------------------------------------------------
# argument parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--mass", help="particle mass (default 1)")
    p.add_argument("--format", help="output format")
    p.add_argument("--out", help="write the report to a file instead of stdout")


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--potential", help="e.g. coulomb:Z=1, harmonic:omega=1, invsq:g=-0.16, "
                                       "well:depth=2,radius=1, powerlaw:coeff=1,p=1, table:FILE; "
                                       "join terms with '+'")
    p.add_argument("--l", help="orbital quantum number")
    p.add_argument("--bc", help="dirichlet | l2only | sae:theta=..,L=..")
    p.add_argument("--kg", action="store_const", const=True,
                   help="use the relativistic (squared-energy) radial operator")
    p.add_argument("--window", help="energy window 'lo,hi' or 'auto'")
    p.add_argument("--r0", help="innermost grid radius")
    p.add_argument("--rmax", help="outermost grid radius")
    p.add_argument("--n-points", dest="n_points", help="total grid points")
    p.add_argument("--n-geo", dest="n_geo", help="points in the geometric zone")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="radialbc",
        description="radial bound-state solver with explicit origin boundary conditions",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("indicial", help="origin admissibility table")
    _add_common(p)
    p.add_argument("--l", help="l values: '0..4' or '0,2,5'")
    p.add_argument("--two-m-v0", dest="two_m_v0", help="comma list of 2mV0 strengths")

    p = sub.add_parser("spectrum", help="bound-state energies")
    _add_common(p)
    _add_problem_args(p)
    p.add_argument("--levels", help="number of levels requested (default 1)")
    p.add_argument("--emit-wavefunctions", dest="emit_wavefunctions", metavar="DIR",
                   help="write one r,u CSV per level into DIR")

    p = sub.add_parser("diagnose", help="point-source residual of a candidate u")
    _add_common(p)
    _add_problem_args(p)
    p.add_argument("--power", help="analytic candidate 'c,a' or 'c1,a1,c2,a2'")
    p.add_argument("--energy", help="energy of an analytic candidate (default 0)")
    p.add_argument("--level", help="diagnose the computed level with this many nodes")
    p.add_argument("--a-start", dest="a_start", help="largest ball radius")
    p.add_argument("--ratio", help="radius shrink factor per step (default 0.5)")
    p.add_argument("--steps", help="number of radii (default 8)")

    p = sub.add_parser("compare", help="levels under different origin conditions")
    _add_common(p)
    p.add_argument("--potential", help="potential token (same grammar as spectrum)")
    p.add_argument("--l", help="orbital quantum number")
    p.add_argument("--levels", help="levels per column (default 1)")
    p.add_argument("--thetas", help="comma list of sae mixing angles")
    p.add_argument("--L", help="sae length scale (default 1)")

    return ap


_RUNNERS = {
    "indicial": _run_indicial,
    "spectrum": _run_spectrum,
    "diagnose": _run_diagnose,
    "compare": _run_compare,
}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_CONFIG
    try:
        file_cfg = read_config_file(args.config) if args.config else {}
        res = _Resolver(args, file_cfg)
        return _RUNNERS[args.command](res)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _PHYSICS_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PHYSICS
    except _NUMERIC_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

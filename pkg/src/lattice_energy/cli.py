"""Command-line front end.

Results go to stdout (or ``--output``) as JSON or CSV with numbers at 12
significant digits. Errors are written to stderr as a single JSON line
``{"code", "message", "context"}`` and the process exits with the error's
status code. Options may also come from a JSON or YAML file given with
``--config``; flags on the command line take precedence.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import json
import math
import sys

import numpy as np

from . import ljopt
from .energy import energy_direct, energy_theta_integral
from .errors import ConfigParse, LatticeEnergyError, UnknownFigure
from .lattice import from_domain_point, make_lattice, special_lattice
from .potentials import from_config
from .scan import domain, onewell, scale, windows
from .specfun import DEFAULT_TOL, epstein_zeta, epstein_zeta_deriv, lattice_theta

LJ_MODES = ("tilde", "scale", "min", "ratio", "H", "h")
FIGURES = ("H_square", "ratio_grid", "H_Z3_fcc", "H_Z3_bcc", "H_bcc_fcc", "f_eps_family", "laplace_family")
FAMILY_EPS = (0.0, 0.5, 1.0, 1.148)


# ---------------------------------------------------------------- formatting

def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.12g}"


def _plain(o):
    """JSON-ready copy with floats rounded to 12 significant digits."""
    if dataclasses.is_dataclass(o) and not isinstance(o, type):
        o = dataclasses.asdict(o)
    if isinstance(o, dict):
        return {str(k): _plain(v) for k, v in o.items()}
    if isinstance(o, (list, tuple, np.ndarray)):
        return [_plain(v) for v in o]
    if isinstance(o, (bool, np.bool_)):
        return bool(o)
    if isinstance(o, (int, np.integer)):
        return int(o)
    if isinstance(o, (float, np.floating)):
        o = float(o)
        return float(f"{o:.12g}") if math.isfinite(o) else None
    return o


def to_json(record) -> str:
    return json.dumps(_plain(record), indent=2, sort_keys=True) + "\n"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _record_csv(record: dict) -> str:
    keys = [k for k, v in record.items() if not isinstance(v, (dict, list, tuple))]
    return to_csv(keys, [[record[k] for k in keys]])


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def _emit(args, record: dict):
    text = _record_csv(record) if args.format == "csv" else to_json(record)
    _write(args.output, text)


# ---------------------------------------------------------------- argument plumbing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigParse(message)


def _floats(text, what):
    if isinstance(text, (list, tuple)):
        vals = text
    else:
        vals = str(text).replace(";", ",").split(",")
    try:
        return [float(v) for v in vals]
    except (TypeError, ValueError):
        raise ConfigParse(f"cannot parse {what} from {text!r}") from None


def lattice_from_args(args, default: str | None = "Z2"):
    if getattr(args, "basis", None) is not None:
        b = args.basis
        if isinstance(b, str):
            rows = [r for r in b.split(";") if r.strip()]
            b = [_floats(r, "basis row") for r in rows]
        try:
            arr = np.array(b, dtype=float)
        except (TypeError, ValueError):
            raise ConfigParse(f"cannot parse basis {args.basis!r}") from None
        return make_lattice(arr)
    if getattr(args, "point", None) is not None:
        xy = _floats(args.point, "domain point")
        if len(xy) != 2:
            raise ConfigParse("a domain point needs two coordinates x,y")
        return from_domain_point(tuple(xy))
    name = getattr(args, "lattice", None) or default
    if name is None:
        raise ConfigParse("a lattice is required (--lattice, --basis or --point)")
    return special_lattice(name)


def potential_from_args(args, required: bool = True):
    desc = getattr(args, "potential", None)
    if desc is None:
        if required:
            raise ConfigParse("a potential is required (--potential)")
        return None
    if isinstance(desc, str):
        text = desc.strip()
        if text.startswith("{"):
            try:
                desc = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigParse(f"bad potential JSON: {exc}") from None
        else:
            desc = {"kind": text}
    desc = dict(desc)
    for item in getattr(args, "param", None) or []:
        if "=" not in item:
            raise ConfigParse(f"--param expects key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            desc[k.strip()] = json.loads(v)
        except json.JSONDecodeError:
            desc[k.strip()] = v
    return from_config(desc)


def grid_from_args(args) -> domain.GridSpec:
    g = domain.GridSpec()
    kw = {}
    for name in ("x_lo", "x_hi", "y_lo", "y_hi", "step", "arc_step"):
        v = getattr(args, name, None)
        if v is not None:
            kw[name] = float(v)
    spec = dataclasses.replace(g, **kw)
    if not spec.step > 0 or spec.x_hi < spec.x_lo or spec.y_hi < spec.y_lo:
        raise ConfigParse("invalid grid settings", **kw)
    return spec


def _positive(args, *names):
    for n in names:
        v = getattr(args, n, None)
        if v is not None and not v > 0:
            raise ConfigParse(f"{n} must be positive", **{n: v})


def _add_common(p):
    p.add_argument("--config", help="JSON or YAML file with option values")
    p.add_argument("--output", "-o", help="output path (default stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--workers", type=int, help="worker processes for scans")


def _add_lattice(p):
    p.add_argument("--lattice", help="Z2, A2, Lambda1, Z3, D3, D3star, D4 or E8")
    p.add_argument("--basis", help="basis rows 'a,b;c,d' (generators are the columns)")
    p.add_argument("--point", help="fundamental-domain point 'x,y' (unit density)")


def _add_potential(p):
    p.add_argument("--potential", help="kind name or JSON object, e.g. '{\"kind\": \"lj\", \"x1\": 6}'")
    p.add_argument("--param", action="append", help="potential parameter key=value (repeatable)")


def _add_grid(p):
    for name in ("x-lo", "x-hi", "y-lo", "y-hi", "step", "arc-step"):
        p.add_argument(f"--{name}", type=float)


# ---------------------------------------------------------------- commands

def cmd_zeta(args):
    L = lattice_from_args(args)
    r = epstein_zeta(L, args.s, args.tol)
    _emit(args, {"s": args.s, "value": r.value, "tail_bound": r.tail_bound, "r_max_used": r.r_max_used})


def cmd_zeta_deriv(args):
    L = lattice_from_args(args)
    r = epstein_zeta_deriv(L, args.s, args.tol)
    _emit(args, {"s": args.s, "value": r.value, "tail_bound": r.tail_bound, "r_max_used": r.r_max_used})


def cmd_theta(args):
    _positive(args, "alpha")
    L = lattice_from_args(args)
    r = lattice_theta(L, args.alpha, args.tol)
    _emit(args, {"alpha": args.alpha, "value": r.value, "tail_bound": r.tail_bound, "r_max_used": r.r_max_used})


def cmd_energy(args):
    _positive(args, "lam")
    L = lattice_from_args(args)
    f = potential_from_args(args)
    if args.method == "direct":
        r = energy_direct(f, L, args.lam, args.tol)
    else:
        r = energy_theta_integral(f, L, args.lam, args.tol)
    _emit(args, {"lam": args.lam, "method": r.method, "value": r.value, "tail_bound": r.tail_bound,
                 "r_max_used": r.r_max_used})


def cmd_minimize_scale(args):
    L = lattice_from_args(args)
    f = potential_from_args(args)
    if not 0 < args.lo < args.hi:
        raise ConfigParse("need 0 < lo < hi", lo=args.lo, hi=args.hi)
    r = scale.minimize_scale(f, L, args.lo, args.hi, tol=args.tol)
    _emit(args, {"lambda_star": r.lambda_star, "value": r.value, "bracket_lo": r.bracket[0],
                 "bracket_hi": r.bracket[1], "grid_points_used": r.grid_points_used})


def _lj_params(args):
    if args.r0 is not None:
        return ljopt.LJParams.with_minimum_at(args.r0, args.x1, args.x2, args.a1)
    return ljopt.LJParams(args.a1, args.a2, args.x1, args.x2)


def cmd_lj(args):
    mode = args.mode
    out = {"mode": mode}
    if mode == "ratio":
        L = lattice_from_args(args, "Z2")
        ref = special_lattice(args.ref or "A2")
        out.update(x1=args.x1, x2=args.x2, value=ljopt.min_energy_ratio(ref, L, args.x1, args.x2, args.tol))
    elif mode == "H":
        L = lattice_from_args(args, "Z2")
        ref = special_lattice(args.ref or "Lambda1")
        out.update(x=args.x, value=ljopt.H_function(L.unit_density(), ref.unit_density(), args.x, args.tol))
    elif mode == "h":
        L = lattice_from_args(args, "Z2")
        out.update(x=args.x, value=ljopt.h_function(L, args.x, args.tol))
    elif mode == "tilde":
        L = lattice_from_args(args, "Z2")
        out.update(x1=args.x1, x2=args.x2, value=ljopt.tilde_energy(L.unit_density(), args.x1, args.x2, args.tol))
    else:
        L = lattice_from_args(args, "Z2")
        p = _lj_params(args)
        out.update(a1=p.a1, a2=p.a2, x1=p.x1, x2=p.x2, r_min=ljopt.r_min(p))
        if mode == "scale":
            out["value"] = ljopt.optimal_scale(L, p, args.tol)
        else:
            out["value"] = ljopt.min_energy_closed_form(L, p, args.tol)
            out["lambda_star"] = ljopt.optimal_scale(L, p, args.tol)
    _emit(args, out)


def cmd_scan_c(args):
    spec = grid_from_args(args)
    field = domain.scan_domain(domain.CValue(), spec, args.workers)
    gx, gy, gv = field.argmin()
    summary = {
        "grid_step": spec.step,
        "arc_step": spec.arc_step,
        "cells": len(field.flags),
        "singular_cells": field.flags.count("singular"),
        "grid_min_value": gv,
        "grid_min_x": gx,
        "grid_min_y": gy,
        "min_value": gv,
        "min_x": gx,
        "min_y": gy,
    }
    if args.refine:
        m = domain.refine_minimum(domain.CValue(), field, workers=args.workers)
        summary.update(min_value=m.value, min_x=m.x, min_y=m.y, refine_step=m.step)
    summary["epsilon_zero"] = domain.epsilon_zero(summary["min_value"])
    summary["evidence"] = "finite grid plus local refinement"
    if args.output:
        _write(args.output, field.to_csv())
    sys.stdout.write(to_json(summary))


def cmd_epsilon0(args):
    _emit(args, {"c_min": args.c_min, "value": domain.epsilon_zero(args.c_min)})


def cmd_verify_allscales(args):
    spec = grid_from_args(args)
    ok, wit = domain.verify_all_scales_optimality(args.eps, spec, args.workers)
    wit_sorted = sorted(wit, key=lambda w: -w[2])
    summary = {
        "eps": args.eps,
        "ok": ok,
        "witnesses": len(wit),
        "worst_witnesses": [{"x": x, "y": y, "delta": d} for x, y, d in wit_sorted[:20]],
        "evidence": "finite grid",
    }
    if args.output:
        _write(args.output, to_csv(["x", "y", "delta"], wit))
    sys.stdout.write(to_json(summary))


def cmd_window(args):
    f = potential_from_args(args)
    spec = grid_from_args(args)
    iv = windows.nonminimality_window(f, spec, (args.lam_lo, args.lam_hi), args.lam_step, args.workers)
    _emit(args, {"lam_lo": args.lam_lo, "lam_hi": args.lam_hi, "lam_step": args.lam_step,
                 "windows": len(iv), "intervals": [list(t) for t in iv]})


def cmd_crossover(args):
    f = potential_from_args(args)
    L = lattice_from_args(args)
    lam0 = windows.crossover_scale(f, L, args.side, args.start, args.stop, args.ratio)
    _emit(args, {"side": args.side, "value": lam0, "ladder_start": args.start, "ladder_stop": args.stop,
                 "evidence": "finite scale ladder"})


def cmd_onewell(args):
    rep = onewell.onewell_verify_appendix(args.p, args.variant)
    _write(args.output, to_json(rep))


def cmd_theil(args):
    f = potential_from_args(args, required=False)
    if f is None:
        f, a0, a1, c0 = onewell.wide_well_example()
    else:
        a0 = a1 = c0 = None
    a0 = args.alpha0 if args.alpha0 is not None else a0
    a1 = args.alpha1 if args.alpha1 is not None else a1
    c0 = args.c0 if args.c0 is not None else c0
    if a0 is None or a1 is None or c0 is None:
        raise ConfigParse("theil-check needs --alpha0, --alpha1 and --c0 for a custom potential")
    res = onewell.theil_conditions_check(f, a0, a1, c0)
    _emit(args, {"alpha0": a0, "alpha1": a1, "c0": c0, "all_passed": all(r.passed for r in res),
                 "conditions": [dataclasses.asdict(r) for r in res]})


def figure_csv(name: str, tol: float = DEFAULT_TOL) -> str:
    """CSV data for one of the named figures."""
    s = special_lattice
    H_pairs = {"H_square": ("Z2", "Lambda1", 2.1), "H_Z3_fcc": ("Z3", "D3", 4.0),
               "H_Z3_bcc": ("Z3", "D3star", 4.0), "H_bcc_fcc": ("D3star", "D3", 4.0)}
    if name in H_pairs:
        a, b, lo = H_pairs[name]
        La, Lb = s(a).unit_density(), s(b).unit_density()
        xs = np.linspace(lo, 50.0, 500)
        return to_csv(["x", "value"], [(x, ljopt.H_function(La, Lb, x, tol)) for x in xs])
    if name == "ratio_grid":
        g = ljopt.min_energy_ratio_grid(s("Lambda1"), s("Z2"), range(3, 51), tol)
        return to_csv(["x1", "x2", "value"], [(int(a), int(b), v) for (a, b), v in sorted(g.items())])
    if name == "f_eps_family":
        from .potentials import f_epsilon
        rs = np.linspace(0.5, 5.0, 451)
        return to_csv(["eps", "r", "value"],
                      [(e, r, float(f_epsilon(e)(r))) for e in FAMILY_EPS for r in rs])
    if name == "laplace_family":
        from .potentials import f_epsilon
        ts = np.linspace(0.0, 3.0, 301)
        return to_csv(["eps", "t", "value"],
                      [(e, t, float(f_epsilon(e).density(t))) for e in FAMILY_EPS for t in ts])
    raise UnknownFigure(f"unknown figure {name!r}", figure=name, known=list(FIGURES))


def cmd_figure(args):
    _write(args.output, figure_csv(args.name, args.tol))


# ---------------------------------------------------------------- parser

def build_parser():
    parser = _Parser(prog="lattice-energy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    subs = {}

    def add(name, func, help_text, lattice=False, potential=False, grid=False):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if lattice:
            _add_lattice(p)
        if potential:
            _add_potential(p)
        if grid:
            _add_grid(p)
        p.set_defaults(func=func)
        subs[name] = p
        return p

    p = add("zeta", cmd_zeta, "Epstein zeta function", lattice=True)
    p.add_argument("--s", type=float, required=True)
    p = add("zeta-deriv", cmd_zeta_deriv, "derivative of the Epstein zeta function in s", lattice=True)
    p.add_argument("--s", type=float, required=True)
    p = add("theta", cmd_theta, "lattice theta function", lattice=True)
    p.add_argument("--alpha", type=float, required=True)
    p = add("energy", cmd_energy, "lattice energy at one scale", lattice=True, potential=True)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--method", choices=("direct", "integral"), default="direct")
    p = add("minimize-scale", cmd_minimize_scale, "minimize the energy over the scale", lattice=True,
            potential=True)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)

    def lj_args(p, with_mode):
        if with_mode:
            p.add_argument("mode", choices=LJ_MODES)
        _add_lattice(p)
        p.add_argument("--ref", help="comparison lattice for ratio (A2) and H (Lambda1)")
        p.add_argument("--a1", type=float, default=1.0)
        p.add_argument("--a2", type=float, default=1.0)
        p.add_argument("--x1", type=float, default=6.0)
        p.add_argument("--x2", type=float, default=12.0)
        p.add_argument("--r0", type=float, help="place the potential minimum at squared distance r0")
        p.add_argument("--x", type=float, default=6.0)

    lj_args(add("lj", cmd_lj, "Lennard-Jones closed forms"), True)
    for mode in LJ_MODES:
        p = add(f"lj-{mode}", cmd_lj, f"same as 'lj {mode}'")
        lj_args(p, False)
        p.set_defaults(mode=mode)

    p = add("scan-c", cmd_scan_c, "scan c(x, y) over the fundamental domain", grid=True)
    p.add_argument("--refine", action="store_true")
    p = add("epsilon0", cmd_epsilon0, "threshold eps_0 from a minimum of c")
    p.add_argument("--c-min", type=float, required=True)
    p = add("verify-allscales", cmd_verify_allscales, "grid check of the discriminant sign", grid=True)
    p.add_argument("--eps", type=float, required=True)
    p = add("window", cmd_window, "scales where some lattice beats Lambda1", potential=True, grid=True)
    p.add_argument("--lam-lo", type=float, default=1.0)
    p.add_argument("--lam-hi", type=float, default=3.0)
    p.add_argument("--lam-step", type=float, default=1e-3)
    p = add("crossover", cmd_crossover, "crossover scale on a geometric ladder", lattice=True, potential=True)
    p.add_argument("--side", choices=("high_density", "low_density"), default="high_density")
    p.add_argument("--start", type=float, default=1.0)
    p.add_argument("--stop", type=float, default=2.0**16)
    p.add_argument("--ratio", type=float, default=2.0)
    p = add("onewell-appendix", cmd_onewell, "square versus triangular for the one-well profile")
    p.add_argument("--p", type=float, default=50.0)
    p.add_argument("--variant", choices=("continuous", "hard_core"), default="continuous")
    p = add("theil-check", cmd_theil, "sampled check of the five one-well conditions", potential=True)
    p.add_argument("--alpha0", type=float)
    p.add_argument("--alpha1", type=float)
    p.add_argument("--c0", type=float)
    p = add("figure", cmd_figure, "CSV data behind a figure")
    p.add_argument("name")
    return parser, subs


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigParse(f"cannot read config {path!r}: {exc.strerror}", path=path) from None
    try:
        if path.endswith((".yaml", ".yml")):
            import yaml
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except Exception as exc:  # yaml and json raise different types
        raise ConfigParse(f"cannot parse config {path!r}: {exc}", path=path) from None
    if not isinstance(data, dict):
        raise ConfigParse("config must be a mapping", path=path)
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def parse_args(argv):
    parser, subs = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    cfg = load_config(known.config) if known.config else {}
    argv = list(argv)
    cmd = cfg.pop("command", None)
    name = next((a for a in argv if a in subs), None)
    if name is None and cmd is not None:
        name = str(cmd)
        argv = [name] + argv
        if name == "lj" and "mode" in cfg:
            argv.insert(1, str(cfg.pop("mode")))
    if cfg and name in subs:
        target = subs[name]
        dests = {a.dest for a in target._actions}
        unknown = sorted(set(cfg) - dests)
        if unknown:
            raise ConfigParse(f"unknown config keys {unknown}", keys=unknown)
        # file values become defaults, so flags on the command line override them
        for action in target._actions:
            if action.dest in cfg:
                action.required = False
                v = cfg[action.dest]
                if action.type is not None and v is not None and not isinstance(v, (list, dict)):
                    try:
                        cfg[action.dest] = action.type(v)
                    except (TypeError, ValueError):
                        raise ConfigParse(f"bad value for {action.dest!r}", key=action.dest,
                                          value=str(v)) from None
        target.set_defaults(**cfg)
    args = parser.parse_args(argv)
    if args.command is None:
        raise ConfigParse("no subcommand given")
    if not args.tol > 0:
        raise ConfigParse("tol must be positive", tol=args.tol)
    return args


def _error_line(code, message, context) -> str:
    return json.dumps({"code": code, "message": message, "context": _plain(context)},
                      sort_keys=True, default=str)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
        args.func(args)
    except LatticeEnergyError as exc:
        sys.stderr.write(_error_line(exc.code, exc.message, exc.context) + "\n")
        return exc.exit_status
    except ValueError as exc:
        sys.stderr.write(_error_line("invalid_value", str(exc), {}) + "\n")
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

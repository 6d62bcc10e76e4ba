"""Command-line front end: run checks and generators, write reports and dumps.

Every command produces a list of reports.  A report is pass/fail against a
gate tolerance; the process exits 0 when every report passes, 1 when some
check fails, and 2 on usage or configuration errors.

Options can also come from a key-value file (``--config``): one
``key = value`` per line, ``#`` starts a comment, keys are option names
with dashes or underscores.  Flags given on the command line win.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import al, dnls, ncalg, poisson, qboson, rmatrix, semidnls
from .errors import (ConfigError, FormatError, InvalidDispersion, InvalidParam, LatticeError,
                     PeriodicityViolation, ShapeError)

SCHEMA = 1
CSV_HEADER = ("field", "n", "a", "re", "im")
USAGE_ERRORS = (ConfigError, FormatError, InvalidParam, InvalidDispersion, PeriodicityViolation,
                ShapeError)

# gate tolerances per command family
TOLERANCES = {"ybe": 1e-11, "dnls": 1e-9, "al": 1e-9, "semi": 1e-8,
              "qboson": 1e-11, "poisson": 1e-9}


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------
@dataclass
class Report:
    check: str
    params: dict
    max_residual: float
    site_argmax: tuple[int, int]
    passed: bool
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        r = self.max_residual
        return {
            "check": self.check,
            "params": _jsonable(self.params),
            "max_residual": float(r) if math.isfinite(r) else None,
            "site_argmax": [int(self.site_argmax[0]), int(self.site_argmax[1])],
            "pass": bool(self.passed),
            "wall_time": round(self.wall_time, 6),
        }


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, np.generic):
        return v.item()
    return v


def gated(check: str, params: dict, residual: float, site, tol: float, t0: float) -> Report:
    ok = math.isfinite(residual) and residual < tol
    return Report(check, {**params, "tol": tol}, float(residual), tuple(site), ok,
                  time.perf_counter() - t0)


def render(command: str, reports: Sequence[Report]) -> dict:
    rs = sorted(reports, key=lambda r: r.check)
    return {"schema": SCHEMA, "command": command, "pass": all(r.passed for r in rs),
            "reports": [r.as_dict() for r in rs]}


def report_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


# ---------------------------------------------------------------------------
# CSV lattice dumps
# ---------------------------------------------------------------------------
def dump_lattice(fields: dict[str, np.ndarray], path) -> None:
    """One row per site and field: field,n,a,re,im with 17 significant digits."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for name in fields:
            arr = np.asarray(fields[name], dtype=complex)
            if arr.ndim != 2:
                raise ShapeError(f"field {name!r} is not a 2-d grid")
            for (n, a), z in np.ndenumerate(arr):
                w.writerow((name, n, a, f"{z.real:.17g}", f"{z.imag:.17g}"))


def load_lattice(path) -> dict[str, np.ndarray]:
    """Inverse of dump_lattice; every field must cover a full N x M grid."""
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    with fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise FormatError(f"{path}: empty lattice file")
    if tuple(h.strip() for h in rows[0]) != CSV_HEADER:
        raise FormatError(f"{path}: header must be {','.join(CSV_HEADER)}")
    data: dict[str, dict[tuple[int, int], complex]] = {}
    for ln, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 5:
            raise FormatError(f"{path}:{ln}: expected 5 columns")
        try:
            name, n, a, re, im = row[0], int(row[1]), int(row[2]), float(row[3]), float(row[4])
        except ValueError:
            raise FormatError(f"{path}:{ln}: malformed row") from None
        cell = data.setdefault(name, {})
        if (n, a) in cell:
            raise FormatError(f"{path}:{ln}: duplicate site {name}[{n},{a}]")
        cell[(n, a)] = complex(re, im)
    if not data:
        raise FormatError(f"{path}: no sites")
    out = {}
    for name, cell in data.items():
        N = 1 + max(k[0] for k in cell)
        M = 1 + max(k[1] for k in cell)
        if len(cell) != N * M or min(min(k) for k in cell) < 0:
            raise FormatError(f"{path}: field {name!r} does not fill an {N}x{M} grid")
        arr = np.empty((N, M), dtype=complex)
        for (n, a), z in cell.items():
            arr[n, a] = z
        out[name] = arr
    return out


def _fields(doc: dict[str, np.ndarray], names: tuple[str, str], path) -> tuple[np.ndarray, np.ndarray]:
    missing = [k for k in names if k not in doc]
    if missing:
        raise FormatError(f"{path}: missing field(s) {missing}")
    return doc[names[0]], doc[names[1]]


# ---------------------------------------------------------------------------
# option parsing helpers
# ---------------------------------------------------------------------------
def parse_complex(s) -> complex:
    if isinstance(s, (int, float, complex)):
        return complex(s)
    try:
        return complex(str(s).replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {s!r}") from None


def parse_grid(s: str) -> tuple[float, float, int]:
    try:
        x0, x1, nx = s.split(",")
        return float(x0), float(x1), int(nx)
    except ValueError:
        raise argparse.ArgumentTypeError("grid must be x0,x1,nx") from None


def positive(s) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be > 0")
    return v


def default_seed() -> int:
    raw = os.environ.get("LI_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"LI_SEED must be an integer, got {raw!r}") from None


def read_config(path) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    out = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        if not k:
            raise ConfigError(f"{path}:{ln}: empty key")
        out[k.replace("-", "_")] = v
    return out


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _apply_config(parser: argparse.ArgumentParser, cfg: dict[str, str]) -> None:
    """Install file values as parser defaults, so explicit flags still win."""
    actions = {a.dest: a for a in parser._actions if a.dest not in ("help", "config")}
    defaults = {}
    for k, v in cfg.items():
        if k not in actions:
            raise ConfigError(f"unknown config key {k!r} for this command")
        act = actions[k]
        if isinstance(act, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            if v.lower() not in _TRUE | _FALSE:
                raise ConfigError(f"config key {k!r} needs a boolean")
            defaults[k] = v.lower() in _TRUE
            continue
        if act.choices is not None and v not in act.choices:
            raise ConfigError(f"config key {k!r}: {v!r} not in {list(act.choices)}")
        try:
            defaults[k] = act.type(v) if act.type else v
        except (argparse.ArgumentTypeError, ValueError, TypeError) as exc:
            raise ConfigError(f"config key {k!r}: {exc}") from None
    parser.set_defaults(**defaults)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------
def _tol(args, family):
    return args.tol if args.tol is not None else TOLERANCES[family]


def cmd_ybe(args) -> list[Report]:
    kinds = rmatrix.KINDS if args.kind == "all" else (args.kind,)
    out = []
    for tag in kinds:
        t0 = time.perf_counter()
        kind = rmatrix.default_kind(tag)
        if args.mu is not None and tag in rmatrix._TRIG:
            kind = rmatrix.RMatrixKind(tag, args.mu)
        r, worst = rmatrix.ybe_sweep(kind, args.samples, args.seed)
        out.append(gated(f"ybe_{tag}", {"samples": args.samples, "seed": args.seed, "mu": kind.mu},
                         r, (worst, 0), _tol(args, "ybe"), t0))
    return out


def _dnls_reports(lat: dnls.DnlsLattice, params: dict, tol: float, lams,
                  open_space: bool = False) -> list[Report]:
    t0 = time.perf_counter()
    if open_space:
        params = {**params, "open_space": True}
        eq = dnls.sweep_equations(lat, open_space=True)
        zc = dnls.sweep_zero_curvature(lat, open_space=True)
    else:
        eq, zc = dnls.kernel_sweep(lat)
    out = [gated(eq.check, params, eq.max_residual, eq.site_argmax, tol, t0),
           gated(zc.check, params, zc.max_residual, zc.site_argmax, tol, t0)]
    if lams:
        t0 = time.perf_counter()
        out.append(gated("dnls_trace_drift", {**params, "lambdas": list(lams)},
                         dnls.trace_drift(lat, lams), (0, 0), tol, t0))
    return out


def _lams(seed, k=5):
    rng = np.random.default_rng(seed)
    return [complex(z) for z in rng.uniform(-1.5, 1.5, k) + 1j * rng.uniform(-1.5, 1.5, k)]


def _modes(text: str | None, path: str | None):
    """Heat modes from 'c:xi;c:xi' or a JSON list of {"c": .., "xi": ..}."""
    if path:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read modes {path}: {exc}") from None
        items = raw["modes"] if isinstance(raw, dict) else raw
        return [dnls.HeatMode(parse_complex(m["c"]), parse_complex(m["xi"])) for m in items]
    if not text:
        raise ConfigError("give --modes or --modes-file")
    out = []
    for part in text.split(";"):
        try:
            c, xi = part.split(":")
        except ValueError:
            raise ConfigError(f"mode {part!r} must be c:xi") from None
        out.append(dnls.HeatMode(parse_complex(c), parse_complex(xi)))
    return out


def cmd_dnls(args) -> list[Report]:
    tol = _tol(args, "dnls")
    if getattr(args, "xi_root", None) is None and args.action in ("soliton", "step"):
        args.xi_root = args.N
    if args.action == "soliton":
        kw = {}
        if args.type in ("I", "stationary_I"):
            kw["xi"] = np.exp(2j * np.pi / args.xi_root)
        else:
            kw["eta"] = np.exp(2j * np.pi / args.xi_root)
            kw["eps"] = np.exp(-2j * np.pi / args.xi_root)
        for k in ("c1", "c2", "X2", "Y1"):
            if getattr(args, k) is not None and args.type in ("I", "II"):
                kw[k] = getattr(args, k)
        lat = dnls.soliton(args.type, args.N, args.M, **kw)
        params = {"type": args.type, "N": args.N, "M": args.M, "xi_root": args.xi_root}
        if args.csv:
            dump_lattice({"X": lat.X, "Y": lat.Y}, args.csv)
        if not args.verify:
            return []
        lams = _lams(args.seed) if args.xi_root and args.N % args.xi_root == 0 else []
        return _dnls_reports(lat, params, tol, lams)
    if args.action == "verify":
        X, Y = _fields(load_lattice(args.input), ("X", "Y"), args.input)
        lat = dnls.DnlsLattice(X, Y, args.theta, args.time_periodic)
        return _dnls_reports(lat, {"input": str(args.input)}, tol,
                             _lams(args.seed) if args.conservation else [], args.open_space)
    if args.action == "heat":
        t0 = time.perf_counter()
        modes = _modes(args.modes, args.modes_file)
        X0 = dnls.heat_field(modes).grid(args.N, args.M + 1)
        if args.csv:
            dump_lattice({"X0": X0}, args.csv)
        return [gated("dnls_heat", {"modes": len(modes), "N": args.N, "M": args.M},
                      dnls.heat_residual(X0), (0, 0), tol, t0)]
    if args.action == "darboux":
        t0 = time.perf_counter()
        hf = dnls.heat_field(_modes(args.modes, args.modes_file))
        p = dnls.TodaParams(args.X2 if args.X2 is not None else 1.0,
                            args.Y1 if args.Y1 is not None else 1.0)
        lat = dnls.toda_darboux(hf, p, args.N, args.M)
        if args.csv:
            dump_lattice({"X": lat.X, "Y": lat.Y}, args.csv)
        params = {"N": args.N, "M": args.M, "modes": len(hf.modes)}
        chain = dnls.darboux_chain_residuals(hf, lat)
        return _dnls_reports(lat, params, tol, [], args.open_space) + [
            gated("dnls_darboux_chain", params, chain, (0, 0), tol, t0)]
    if args.action == "step":
        t0 = time.perf_counter()
        if args.input:
            X, Y = _fields(load_lattice(args.input), ("X", "Y"), args.input)
            lat = dnls.DnlsLattice(X, Y)
        else:
            lat = dnls.soliton("I", args.N, args.M, xi=np.exp(2j * np.pi / args.xi_root))
        a = args.row
        if not 1 <= a <= lat.M - 2:
            raise ConfigError(f"--row must lie in 1..{lat.M - 2}")
        st = dnls.newton_time_step(lat, a, tol=min(tol, 1e-11))
        X, Y = np.array(lat.X), np.array(lat.Y)
        err = max(np.abs(st.X_next - X[:, a + 1]).max(), np.abs(st.Y_now - Y[:, a]).max())
        X[:, a + 1], Y[:, a] = st.X_next, st.Y_now
        if args.csv:
            dump_lattice({"X": X, "Y": Y}, args.csv)
        params = {"row": a, "iterations": st.iterations, "change": float(err)}
        return [gated("dnls_newton_step", params, st.residual, (0, a), tol, t0)]
    raise ConfigError(f"unknown dnls action {args.action!r}")


def _al_lattice(args) -> al.AlLattice:
    if args.input:
        b, bh = _fields(load_lattice(args.input), ("beta", "beta_hat"), args.input)
        return al.AlLattice(b, bh)
    if args.case != "C":
        raise ConfigError("only case C has a constructive stepper; pass --input for cases A and B")
    return al.random_case_c(args.N, args.M, args.seed, args.radius)


def cmd_al(args) -> list[Report]:
    tol = _tol(args, "al")
    params = {"case": args.case, "seed": args.seed}
    if args.action == "step":
        t0 = time.perf_counter()
        if args.case != "C":
            raise ConfigError("al step supports case C only")
        params.update(N=args.N, M=args.M, radius=args.radius)
        if args.open_seed:
            # seed column b(0, a) drawn at random; the wrap site is not a solution
            rng = np.random.default_rng(args.seed)
            draw = lambda k: args.radius * (rng.uniform(-1, 1, k) + 1j * rng.uniform(-1, 1, k))
            lat, closure = al.evolve_case_c(draw(args.N), draw(args.N), args.M, draw(args.M - 1))
            params["closure"] = closure
        else:
            lat = al.random_case_c(args.N, args.M, args.seed, args.radius)
        if args.csv:
            dump_lattice({"beta": lat.beta, "beta_hat": lat.beta_hat}, args.csv)
        sw = al.sweep(lat, "C", full=False, skip_wrap=args.open_seed)
        return [gated("al_C_equations", params, sw.max_residual, sw.site_argmax, tol, t0)]
    lat = _al_lattice(args)
    if args.action == "verify":
        t0 = time.perf_counter()
        sw = al.sweep(lat, args.case, time_periodic=args.time_periodic, skip_wrap=args.skip_wrap)
        return [gated(f"al_{args.case}_equations", {**params, **sw.per_check},
                      sw.max_residual, sw.site_argmax, tol, t0)]
    if args.action == "conserve":
        out = []
        t0 = time.perf_counter()
        zs = [np.exp(l) for l in _lams(args.seed)]
        out.append(gated("al_trace_drift", params, al.trace_drift(lat, zs, args.case), (0, 0), tol, t0))
        for kind in ("HS+", "HS-"):
            t0 = time.perf_counter()
            out.append(gated(f"al_charge_drift_{kind}", params,
                             al.charge_drift(lat, kind, args.case), (0, 0), tol, t0))
        return out
    raise ConfigError(f"unknown al action {args.action!r}")


def _semi_source(path):
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read modes {path}: {exc}") from None
    g = parse_complex(raw.get("g", 1.0))
    flow = raw.get("flow", "nls")
    if "periodic" in raw:
        per = raw["periodic"]
        mf = semidnls.periodic_modes(int(per["M"]), per["ms"], [parse_complex(c) for c in per["cs"]])
        return semidnls.SemiSolution(mf, g), flow, int(per["M"])
    modes = []
    for m in raw["modes"]:
        entry = (parse_complex(m["c"]), parse_complex(m["k"]))
        if "Lam" in m:
            entry += (parse_complex(m["Lam"]),)
        modes.append(entry)
    return semidnls.SemiSolution(semidnls.ModeFunction(tuple(modes), flow), g), flow, None


def cmd_semi(args) -> list[Report]:
    tol = _tol(args, "semi")
    src, flow, period = _semi_source(args.modes)
    x0, x1, nx = args.grid
    xs = np.linspace(x0, x1, nx)
    As = range(args.times)
    params = {"flow": flow, "grid": [x0, x1, nx], "times": args.times}
    out = []
    fams = {"nls": ("nls", "zero_curvature"), "transport": ("transport", "zero_curvature")}[flow]
    t0 = time.perf_counter()
    sw = semidnls.sweep(src, xs, As, fams)
    keys = (semidnls.NLS_CHECKS + ("zc2",)) if flow == "nls" else ("transport", "zc1")
    for k in keys:
        out.append(gated(f"semi_{k}", params, sw.per_check[k], (0, 0), tol, t0))
    if period:
        t0 = time.perf_counter()
        H = [semidnls.hamiltonians(src, x, range(period)) for x in xs]
        drift = max(abs(h[i] - H[0][i]) for h in H for i in (0, 1))
        out.append(gated("semi_hamiltonian_drift", params, drift, (0, 0), tol, t0))
    return out


# command-line spellings of the relation sets
SET_ALIASES = {"appendixB": "exchange", "qboson": "qboson_symbolic", "qtime": "time_fields"}


def cmd_quantum(args) -> list[Report]:
    if args.action == "weyl":
        chosen = SET_ALIASES.get(args.set, args.set)
        sets = ["rtt", *ncalg.RELATION_SETS] if chosen == "all" else [chosen]
        out = []
        for name in sets:
            t0 = time.perf_counter()
            if name == "rtt":
                out.extend(_rtt_reports())
                continue
            res = ncalg.check_relations(name)
            bad = [r.name for r in res if not r.passed]
            out.append(Report(f"weyl_{name}", {"relations": len(res), "failing": bad},
                              float(len(bad)), (0, 0), not bad, time.perf_counter() - t0))
        return out
    if args.action == "qboson":
        tol = _tol(args, "qboson")
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        known = {"algebra", "rtt", "gauge", "coproduct"}
        if set(checks) - known:
            raise ConfigError(f"unknown qboson checks {sorted(set(checks) - known)}")
        t0 = time.perf_counter()
        worst = qboson.qboson_suite(args.p, args.draws, args.seed)
        worst["coproduct"] = max(worst["coproduct"], worst.pop("coproduct_rtt"))
        params = {"p": args.p, "draws": args.draws, "seed": args.seed}
        return [gated(f"qboson_{c}", params, worst[c], (0, 0), tol, t0) for c in checks]
    raise ConfigError(f"unknown quantum action {args.action!r}")


def _rtt_reports() -> list[Report]:
    out = []
    for name, L, f in (("l1", ncalg.build_l1_weyl(), {0: 1, 1: 1}),
                       ("l2", ncalg.build_l2_diffrep(), {1: -1, 2: 1})):
        t0 = time.perf_counter()
        bad = ncalg.check_rtt_nc(L)
        out.append(Report(f"weyl_rtt_{name}", {"failing": [b.name for b in bad]},
                          float(len(bad)), (0, 0), not bad, time.perf_counter() - t0))
        t0 = time.perf_counter()
        q = ncalg.check_qdet_nc(L, f)
        out.append(Report(f"weyl_qdet_{name}", {"f": {k: repr(v) for k, v in (q.f or {}).items()},
                                                "detail": q.detail},
                          0.0 if q.passed else 1.0, (0, 0), q.passed, time.perf_counter() - t0))
    return out


def cmd_poisson(args) -> list[Report]:
    tol = _tol(args, "poisson")
    which = sorted(poisson.CASES) if args.which == "all" else [args.which]
    out = []
    for w in which:
        t0 = time.perf_counter()
        r, arg = poisson.check_matrix_bracket(w, args.samples, args.seed)
        out.append(gated(f"poisson_sklyanin_{w}", {"samples": args.samples, "seed": args.seed},
                         r, (arg, 0), tol, t0))
    if args.which == "all" or args.jacobi:
        tables = sorted(poisson.TABLES) if args.which == "all" else [poisson.CASES[args.which].table]
        for name in tables:
            t0 = time.perf_counter()
            r = poisson.jacobi_residual(poisson.TABLES[name], seed=args.seed)
            out.append(gated(f"poisson_jacobi_{name}", {"seed": args.seed}, r, (0, 0),
                             min(tol, 1e-11), t0))
    if args.which == "all" or args.involution:
        chains = sorted(poisson.INVOLUTION) if args.which == "all" else [args.which]
        for w in chains:
            if w not in poisson.INVOLUTION:
                continue
            for sites in (2, 3):
                t0 = time.perf_counter()
                r = poisson.transfer_involution(w, sites, 0.3 + 0.2j, -0.7 + 0.4j, seed=args.seed)
                out.append(gated(f"poisson_involution_{w}_{sites}", {"sites": sites, "seed": args.seed},
                                 r, (0, 0), tol, t0))
    return out


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------
def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--seed", type=int, default=None, help="default: $LI_SEED or 0")
    p.add_argument("--tol", type=positive, default=None, help="gate tolerance")
    p.add_argument("--report", choices=("text", "json"), default="text", help="stdout format")
    p.add_argument("--out", help="write the JSON report here")


def build_parser() -> tuple[argparse.ArgumentParser, dict[tuple[str, ...], argparse.ArgumentParser]]:
    ap = argparse.ArgumentParser(prog="dstlattice", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    leaves: dict[tuple[str, ...], argparse.ArgumentParser] = {}

    p = sub.add_parser("ybe", help="Yang-Baxter residuals")
    _common(p)
    p.add_argument("--kind", default="all", choices=("all",) + rmatrix.KINDS)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--mu", type=parse_complex, default=None)
    p.set_defaults(run=cmd_ybe)
    leaves[("ybe",)] = p

    d = sub.add_parser("dnls", help="fully discrete NLS").add_subparsers(dest="action", required=True)
    for act in ("verify", "soliton", "heat", "darboux", "step"):
        p = d.add_parser(act)
        _common(p)
        p.add_argument("--N", type=int, default=12)
        p.add_argument("--M", type=int, default=12)
        p.add_argument("--csv", help="write the lattice as CSV")
        if act == "soliton":
            p.add_argument("--type", default="I", choices=("I", "II", "stationary_I", "stationary_II"))
            p.add_argument("--xi-root", type=int, default=None,
                           help="modes are primitive roots of this order (default N)")
            p.add_argument("--verify", action="store_true")
        if act in ("soliton", "darboux"):
            for k in ("c1", "c2", "X2", "Y1"):
                p.add_argument(f"--{k}", type=parse_complex, default=None)
        if act == "verify":
            p.add_argument("--input", required=False)
            p.add_argument("--theta", type=parse_complex, default=1.0)
            p.add_argument("--time-periodic", action="store_true")
            p.add_argument("--conservation", action="store_true", help="also gate trace drift")
        if act in ("verify", "darboux"):
            p.add_argument("--open-space", action="store_true",
                           help="skip sites whose stencil crosses the spatial wrap")
        if act in ("heat", "darboux"):
            p.add_argument("--modes", help="c:xi;c:xi;...")
            p.add_argument("--modes-file")
        if act == "step":
            p.add_argument("--input")
            p.add_argument("--row", type=int, default=1)
            p.add_argument("--xi-root", type=int, default=None)
        p.set_defaults(run=cmd_dnls, action=act)
        leaves[("dnls", act)] = p

    a = sub.add_parser("al", help="fully discrete Ablowitz-Ladik").add_subparsers(dest="action", required=True)
    for act in ("verify", "step", "conserve"):
        p = a.add_parser(act)
        _common(p)
        p.add_argument("--case", default="C", choices=al.CASES)
        p.add_argument("--N", type=int, default=6)
        p.add_argument("--M", type=int, default=6)
        p.add_argument("--radius", type=float, default=0.5)
        p.add_argument("--input")
        p.add_argument("--csv")
        p.add_argument("--time-periodic", action="store_true")
        p.add_argument("--skip-wrap", action="store_true")
        if act == "step":
            p.add_argument("--open-seed", action="store_true",
                           help="march from random seeds instead of the periodic fixed point")
        p.set_defaults(run=cmd_al, action=act)
        leaves[("al", act)] = p

    s = sub.add_parser("semi", help="semi-discrete-time NLS").add_subparsers(dest="action", required=True)
    p = s.add_parser("verify")
    _common(p)
    p.add_argument("--modes", required=False, help="JSON mode file")
    p.add_argument("--grid", type=parse_grid, default=(0.0, 1.0, 5))
    p.add_argument("--times", type=int, default=5)
    p.set_defaults(run=cmd_semi, action="verify")
    leaves[("semi", "verify")] = p

    q = sub.add_parser("quantum", help="quantum algebra checks").add_subparsers(dest="action", required=True)
    p = q.add_parser("weyl")
    _common(p)
    p.add_argument("--set", default="qtime", choices=("all", "rtt") + tuple(ncalg.RELATION_SETS) + tuple(SET_ALIASES))
    p.set_defaults(run=cmd_quantum, action="weyl")
    leaves[("quantum", "weyl")] = p
    p = q.add_parser("qboson")
    _common(p)
    p.add_argument("--p", type=int, default=5)
    p.add_argument("--checks", default="algebra,rtt,gauge,coproduct")
    p.add_argument("--draws", type=int, default=20)
    p.set_defaults(run=cmd_quantum, action="qboson")
    leaves[("quantum", "qboson")] = p

    pp = sub.add_parser("poisson", help="classical Poisson structures").add_subparsers(dest="action", required=True)
    p = pp.add_parser("check")
    _common(p)
    p.add_argument("--which", default="all", choices=("all",) + tuple(sorted(poisson.CASES)))
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--jacobi", action="store_true")
    p.add_argument("--involution", action="store_true")
    p.set_defaults(run=cmd_poisson, action="check")
    leaves[("poisson", "check")] = p
    return ap, leaves


def _leaf_key(ns) -> tuple[str, ...]:
    return (ns.command,) if ns.command == "ybe" else (ns.command, ns.action)


def parse(argv: Sequence[str] | None = None) -> argparse.Namespace:
    ap, leaves = build_parser()
    ns = ap.parse_args(argv)
    if ns.config:
        _apply_config(leaves[_leaf_key(ns)], read_config(ns.config))
        ns = ap.parse_args(argv)
    if ns.seed is None:
        ns.seed = default_seed()
    if ns.command == "semi" and not ns.modes:
        raise ConfigError("semi verify needs --modes FILE")
    return ns


def _emit(doc: dict, args) -> None:
    if args.out:
        Path(args.out).write_text(report_json(doc) + "\n")
    if args.report == "json":
        print(report_json(doc))
        return
    for r in doc["reports"]:
        res = "n/a" if r["max_residual"] is None else f"{r['max_residual']:.3e}"
        print(f"{'PASS' if r['pass'] else 'FAIL'}  {r['check']:<36} max_residual={res}  "
              f"site={r['site_argmax']}")


def _fail(kind: str, msg: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": msg}), file=sys.stderr)
    return code


def run(args: argparse.Namespace) -> tuple[int, dict]:
    reports = args.run(args)
    command = " ".join(_leaf_key(args))
    doc = render(command, reports)
    return (0 if doc["pass"] else 1), doc


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse(argv)
    except ConfigError as exc:
        return _fail("ConfigError", str(exc), 2)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    try:
        code, doc = run(args)
    except USAGE_ERRORS as exc:
        return _fail(type(exc).__name__, str(exc), 2)
    except LatticeError as exc:
        return _fail(type(exc).__name__, str(exc), 1)
    _emit(doc, args)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

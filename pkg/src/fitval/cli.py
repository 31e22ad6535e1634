"""Command-line front door: valuations, trigger solves, sweeps, inversion.

Scenario files are flat JSON with the model's parameter names (r, F, T,
mu, sigma, I, omega, omega_C, lambda, Q, C, scheme, ...); unset keys fall
back to the built-in base case, so an empty file is a valid scenario.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import MarketParams, ProjectParams
from .errors import (
    ConfigError,
    FitvalError,
    InvalidParametersError,
    MultipleRootsError,
    NoRootError,
    SubsidyExceedsCostError,
)
from .oracle import SimConfig, exercise_boundary_check, mc_project_value
from .svg import write_line_svg
from .thresholds import (
    RegulatoryParams,
    free_market_trigger,
    option_value,
    threshold,
)
from .valuation import (
    SCHEME_LABELS,
    Collar,
    FixedPremium,
    FixedPrice,
    Floor,
    Scheme,
    project_value,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4

CSV_HEADER = [
    "x_param", "x_value", "scheme", "threshold", "branch", "status",
    "vm_residual", "sp_residual",
]

SWEEP_PARAMS = ("lambda", "omega", "omega_C", "F", "C", "sigma", "T", "P")

# Base-case parameters: an onshore wind turbine earning 25 currency/MWh
# under the collar contract, with the cap set by a 300k annual revenue.
BASE_CASE = {
    "r": 0.05,
    "F": 25.0,
    "T": 15.0,
    "mu": 0.0,
    "sigma": 0.19,
    "I": 3_000_000.0,
    "omega": 0.8,
    "omega_C": 1.0,
    "lambda": 0.5,
    "Q": 5256.0,
    "C": 300_000.0 / 5256.0,
    "scheme": "collar",
    "P": 30.0,
    "seed": 20240817,
}

_KNOWN_KEYS = set(BASE_CASE) | {"sweep"}


@dataclass(frozen=True)
class SweepSpec:
    param: str
    lo: float
    hi: float
    n_points: int


@dataclass(frozen=True)
class Scenario:
    market: MarketParams
    project: ProjectParams
    scheme: Scheme
    reg: RegulatoryParams
    sweep: SweepSpec | None
    P: float
    seed: int


def _build_scheme(name: str, F: float, C: float, T: float) -> Scheme:
    if name == "fixed":
        return FixedPrice(F=F, T=T)
    if name == "premium":
        return FixedPremium(F=F, T=T)
    if name == "floor":
        return Floor(F=F, T=T)
    if name == "collar":
        return Collar(F=F, C=C, T=T)
    raise ConfigError(f"unknown scheme {name!r}; expected one of {SCHEME_LABELS}")


def load_scenario(path: str | None) -> Scenario:
    """Scenario from a JSON file, with base-case defaults for unset keys."""
    raw = {}
    if path is not None:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
        if text.strip():
            try:
                raw = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(
                    f"scenario file {path} is not valid JSON "
                    f"(line {exc.lineno}, column {exc.colno}): {exc.msg}"
                ) from exc
            if not isinstance(raw, dict):
                raise ConfigError(f"scenario file {path} must hold a JSON object")
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")

    cfg = dict(BASE_CASE)
    sweep_raw = raw.pop("sweep", None)
    cfg.update(raw)

    problems = []
    if cfg["sigma"] <= 0:
        problems.append("sigma must be > 0")
    if cfg["r"] <= cfg["mu"]:
        problems.append("r must exceed mu")
    if cfg["Q"] <= 0:
        problems.append("Q must be > 0")
    if cfg["I"] <= 0:
        problems.append("I must be > 0")
    if cfg["F"] < 0:
        problems.append("F must be >= 0")
    if cfg["T"] < 0:
        problems.append("T must be >= 0")
    if cfg["scheme"] == "collar" and cfg["C"] < cfg["F"]:
        problems.append("cap C must be >= floor F")
    if not 0.0 <= cfg["omega"] <= 1.0:
        problems.append("omega must lie in [0, 1]")
    if not 0.0 <= cfg["omega_C"] <= 1.0:
        problems.append("omega_C must lie in [0, 1]")
    if cfg["lambda"] < 0:
        problems.append("lambda must be >= 0")
    if cfg["scheme"] not in SCHEME_LABELS:
        problems.append(f"scheme must be one of {SCHEME_LABELS}")
    if cfg["P"] <= 0:
        problems.append("P must be > 0")

    sweep = None
    if sweep_raw is not None:
        if not isinstance(sweep_raw, dict):
            problems.append("sweep must be an object with param/lo/hi/n_points")
        else:
            param = sweep_raw.get("param")
            lo = sweep_raw.get("lo")
            hi = sweep_raw.get("hi")
            n_points = sweep_raw.get("n_points")
            if param not in SWEEP_PARAMS:
                problems.append(f"sweep.param must be one of {SWEEP_PARAMS}")
            if lo is None or hi is None or not lo < hi:
                problems.append("sweep requires lo < hi")
            if n_points is None or n_points < 2:
                problems.append("sweep.n_points must be >= 2")
            if not problems:
                sweep = SweepSpec(param, float(lo), float(hi), int(n_points))

    if problems:
        raise ConfigError("invalid scenario: " + "; ".join(problems))

    return Scenario(
        market=MarketParams(mu=cfg["mu"], sigma=cfg["sigma"], r=cfg["r"]),
        project=ProjectParams(Q=cfg["Q"], I=cfg["I"]),
        scheme=_build_scheme(cfg["scheme"], cfg["F"], cfg["C"], cfg["T"]),
        reg=RegulatoryParams(
            lam=cfg["lambda"], omega=cfg["omega"], omega_C=cfg["omega_C"]
        ),
        sweep=sweep,
        P=cfg["P"],
        seed=int(cfg["seed"]),
    )


def save_scenario(scenario: Scenario, path: str) -> None:
    cfg = {
        "r": scenario.market.r,
        "mu": scenario.market.mu,
        "sigma": scenario.market.sigma,
        "Q": scenario.project.Q,
        "I": scenario.project.I,
        "F": scenario.scheme.F,
        "T": scenario.scheme.T,
        "C": scenario.scheme.C if isinstance(scenario.scheme, Collar) else BASE_CASE["C"],
        "scheme": scenario.scheme.label,
        "lambda": scenario.reg.lam,
        "omega": scenario.reg.omega,
        "omega_C": scenario.reg.omega_C,
        "P": scenario.P,
        "seed": scenario.seed,
    }
    if scenario.sweep is not None:
        cfg["sweep"] = {
            "param": scenario.sweep.param,
            "lo": scenario.sweep.lo,
            "hi": scenario.sweep.hi,
            "n_points": scenario.sweep.n_points,
        }
    with open(path, "w") as fh:
        json.dump(cfg, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --------------------------------------------------------------------------
# Sweep machinery
# --------------------------------------------------------------------------

def _with_param(scenario: Scenario, scheme: Scheme, param: str, x: float):
    """Apply one swept value; returns (scheme, market, reg) or raises."""
    market, reg = scenario.market, scenario.reg
    if param == "sigma":
        market = MarketParams(mu=market.mu, sigma=x, r=market.r)
    elif param == "lambda":
        reg = RegulatoryParams(lam=x, omega=reg.omega, omega_C=reg.omega_C)
    elif param == "omega":
        reg = RegulatoryParams(lam=reg.lam, omega=x, omega_C=reg.omega_C)
    elif param == "omega_C":
        reg = RegulatoryParams(lam=reg.lam, omega=reg.omega, omega_C=x)
    elif param == "F":
        if isinstance(scheme, Collar):
            scheme = Collar(F=x, C=scheme.C, T=scheme.T)
        else:
            scheme = type(scheme)(F=x, T=scheme.T)
    elif param == "C":
        if isinstance(scheme, Collar):
            scheme = Collar(F=scheme.F, C=x, T=scheme.T)
    elif param == "T":
        if isinstance(scheme, Collar):
            scheme = Collar(F=scheme.F, C=scheme.C, T=x)
        else:
            scheme = type(scheme)(F=scheme.F, T=x)
    elif param == "P":
        pass  # triggers do not depend on the current price
    return scheme, market, reg


def _scheme_variant(scenario: Scenario, label: str) -> Scheme:
    base = scenario.scheme
    if label == "collar":
        C = base.C if isinstance(base, Collar) else BASE_CASE["C"]
        return Collar(F=base.F, C=C, T=base.T)
    return _build_scheme(label, base.F, BASE_CASE["C"], base.T)


def _sweep_rows(scenario: Scenario, labels, with_ru: bool):
    spec = scenario.sweep
    grid = np.linspace(spec.lo, spec.hi, spec.n_points)
    rows = []
    for x in grid:
        for label in [*labels, "free_market"]:
            row = {
                "x_param": spec.param,
                "x_value": f"{x:.10g}",
                "scheme": label,
                "threshold": "",
                "branch": "",
                "status": "ok",
                "vm_residual": "",
                "sp_residual": "",
            }
            try:
                if label == "free_market":
                    _, market, _ = _with_param(scenario, scenario.scheme, spec.param, float(x))
                    trig = free_market_trigger(market, scenario.project)
                    row["threshold"] = f"{trig:.10g}"
                    row["branch"] = "closed_form"
                    row["vm_residual"] = "0"
                    row["sp_residual"] = "0"
                else:
                    scheme = _scheme_variant(scenario, label)
                    scheme, market, reg = _with_param(scenario, scheme, spec.param, float(x))
                    res = threshold(
                        scheme, market, scenario.project, reg if with_ru else None
                    )
                    row["threshold"] = f"{res.trigger:.10g}"
                    row["branch"] = res.branch.value
                    row["vm_residual"] = f"{res.vm_residual:.6g}"
                    row["sp_residual"] = f"{res.sp_residual:.6g}"
            except MultipleRootsError:
                row["status"] = "multiple-roots"
            except (NoRootError, SubsidyExceedsCostError, InvalidParametersError):
                row["status"] = "no-root"
            rows.append(row)
    return rows


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------

def cmd_value(args) -> int:
    scenario = load_scenario(args.config)
    P = args.price if args.price is not None else scenario.P
    reg = scenario.reg if args.ru else None
    res = project_value(scenario.scheme, P, scenario.market, scenario.project)
    print(f"scheme      : {scenario.scheme.label}")
    print(f"price       : {P:.6g}")
    print(f"value       : {res.value:.6f}")
    print(f"region      : {res.region.value}")
    opt = option_value(scenario.scheme, P, scenario.market, scenario.project, reg)
    print(f"option value: {opt:.6f}")
    return EXIT_OK


def cmd_threshold(args) -> int:
    scenario = load_scenario(args.config)
    reg = scenario.reg if args.ru else None
    res = threshold(scenario.scheme, scenario.market, scenario.project, reg)
    print(f"scheme     : {scenario.scheme.label}")
    print(f"trigger    : {res.trigger:.6f}")
    print(f"branch     : {res.branch.value}")
    print(f"vm residual: {res.vm_residual:.6g}")
    print(f"sp residual: {res.sp_residual:.6g}")
    print(f"iterations : {res.iterations}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = load_scenario(args.config)
    if scenario.sweep is None:
        raise ConfigError("sweep command needs a 'sweep' section in the scenario")
    if not args.ru and scenario.sweep.param in ("lambda", "omega", "omega_C"):
        raise ConfigError(
            f"sweeping {scenario.sweep.param} requires regulatory uncertainty (--ru)"
        )
    labels = _parse_schemes(args.schemes)
    rows = _sweep_rows(scenario, labels, args.ru)
    out = args.out or "sweep.csv"
    with open(out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        writer.writeheader()
        writer.writerows(rows)
    n_ok = sum(1 for r in rows if r["status"] == "ok")
    print(f"wrote {len(rows)} rows to {out} ({n_ok} ok)")
    if args.svg:
        series = {}
        xs = sorted({float(r["x_value"]) for r in rows})
        for label in [*labels, "free_market"]:
            by_x = {
                float(r["x_value"]): float(r["threshold"])
                for r in rows
                if r["scheme"] == label and r["status"] == "ok"
            }
            series[label] = [by_x.get(x) for x in xs]
        write_line_svg(
            args.svg, xs, series,
            title=f"threshold vs {scenario.sweep.param}",
            xlabel=scenario.sweep.param, ylabel="trigger price",
        )
        print(f"wrote {args.svg}")
    return EXIT_OK if n_ok >= 0.9 * len(rows) else EXIT_SOLVER


def cmd_invert(args) -> int:
    scenario = load_scenario(args.config)
    target = args.target
    if target <= 0:
        raise ConfigError("target trigger must be positive")
    labels = _parse_schemes(args.schemes)
    reg = scenario.reg if args.ru else None
    project, market = scenario.project, scenario.market
    status = EXIT_OK
    for label in labels:
        base = _scheme_variant(scenario, label)
        T = base.T
        f_hi = project.I * market.r / (project.Q * (1.0 - math.exp(-market.r * T)))
        if isinstance(base, Collar):
            f_hi = min(f_hi, base.C)

        def gap(F, base=base):
            scheme, _, _ = _with_param(scenario, base, "F", F)
            return threshold(scheme, market, project, reg).trigger - target

        # The trigger is not guaranteed monotone in F, so scan for sign
        # changes and refine each crossing.
        grid = np.linspace(0.0, f_hi * (1.0 - 1e-9), 65)
        gaps = np.full(grid.shape, np.nan)
        for i, F in enumerate(grid):
            try:
                gaps[i] = gap(float(F))
            except FitvalError:
                continue
        solutions = []
        for i in range(len(grid) - 1):
            if np.isnan(gaps[i]) or np.isnan(gaps[i + 1]):
                continue
            if gaps[i] == 0.0:
                solutions.append(float(grid[i]))
            elif gaps[i] * gaps[i + 1] < 0:
                solutions.append(
                    float(brentq(gap, grid[i], grid[i + 1], rtol=1e-10))
                )
        if solutions:
            for F in solutions:
                print(f"{label}: F = {F:.6f}")
        else:
            finite = gaps[~np.isnan(gaps)] + target
            span = (
                f" (reachable range [{finite.min():.6g}, {finite.max():.6g}])"
                if finite.size else ""
            )
            print(f"{label}: no solution for target {target:.6g}{span}")
            status = EXIT_SOLVER
    return status


def cmd_verify(args) -> int:
    scenario = load_scenario(args.config)
    cfg = SimConfig(
        n_paths=args.paths, steps_per_year=args.steps,
        seed=args.seed if args.seed is not None else scenario.seed,
    )
    reg = scenario.reg if args.ru else None
    P = args.price if args.price is not None else scenario.P
    analytic = project_value(scenario.scheme, P, scenario.market, scenario.project).value
    est = mc_project_value(scenario.scheme, P, scenario.market, scenario.project, cfg)
    diff = analytic - est.mean
    band = 3.0 * est.std_error
    mc_ok = abs(diff) <= band or band == 0.0
    print(f"scheme          : {scenario.scheme.label}  (P = {P:.6g})")
    print(f"analytic value  : {analytic:.2f}")
    print(f"mc estimate     : {est.mean:.2f} +/- {est.std_error:.2f} "
          f"({est.n_paths} paths)")
    print(f"mc agreement    : {'PASS' if mc_ok else 'FAIL'} "
          f"(|diff| = {abs(diff):.2f}, 3*SE = {band:.2f})")
    report = exercise_boundary_check(
        scenario.scheme, scenario.market, scenario.project, reg
    )
    print(f"boundary check  : {'PASS' if report.ok else 'FAIL'} "
          f"(trigger = {report.trigger:.4f}, violations = {report.n_violations}, "
          f"worst = {report.worst_violation:.4g})")
    return EXIT_OK if (mc_ok and report.ok) else EXIT_VERIFY


def _parse_schemes(spec: str):
    labels = [s.strip() for s in spec.split(",") if s.strip()]
    bad = [s for s in labels if s not in SCHEME_LABELS]
    if bad:
        raise ConfigError(f"unknown schemes {bad}; expected subset of {SCHEME_LABELS}")
    if not labels:
        raise ConfigError("at least one scheme is required")
    return labels


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="scenario JSON file")
    ru = parser.add_mutually_exclusive_group()
    ru.add_argument("--ru", dest="ru", action="store_true",
                    help="include regulatory uncertainty")
    ru.add_argument("--no-ru", dest="ru", action="store_false")
    parser.set_defaults(ru=False)
    parser.add_argument("--schemes", default=",".join(SCHEME_LABELS),
                        help="comma-separated scheme list")
    parser.add_argument("--out", default=None, help="CSV output path")
    parser.add_argument("--svg", default=None, help="SVG output path")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fitval",
        description="Feed-in tariff valuation, triggers, and sweeps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("value", help="project and option value at a price")
    p.add_argument("--price", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("threshold", help="solve the investment trigger")
    _add_common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("sweep", help="threshold sweep over a parameter grid")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("invert", help="tariff that produces a target trigger")
    p.add_argument("target", type=float)
    _add_common(p)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("verify", help="Monte Carlo and boundary verification")
    p.add_argument("--price", type=float, default=None)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--steps", type=int, default=52)
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NoRootError, MultipleRootsError, SubsidyExceedsCostError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except InvalidParametersError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

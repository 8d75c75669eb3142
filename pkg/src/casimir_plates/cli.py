"""Command-line interface.

Subcommands:

  verify    run the self-check suite, one PASS/FAIL line per check
  force     one regularized force value with its asymptotic split
  sweep     force values over grids of separation, cutoff, and route
  extract   finite part of the force by least-squares fit in the cutoff
  modes     per-mode averaged normal stress table

Settings resolve in the order: command-line flag, CASIMIR_* environment
variable, config file (--config or CASIMIR_CONFIG, "key = value" lines),
built-in default.  Human output rounds to 6 significant digits; csv and
json output carry 17, enough to round-trip doubles exactly.

Exit codes: 0 success, 1 a check or fit failed, 2 a numerical routine did
not converge or an input was rejected.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Sequence

from . import regsum, stress, verify
from .modes import CavityGeometry, ModeIndex
from .numerics import IllConditionedFitError, NumericsError
from .units import get_units

SCHEMA_VERSION = 1

SWEEP_COLUMNS = ("a", "lambda", "route", "force_per_area", "divergent_part",
                 "finite_part", "remainder", "error_estimate")
MODES_COLUMNS = ("n_x", "n_y", "n_z", "kappa", "sigma_zz")

_DEFAULTS = {
    "units": "natural",
    "tol": "1e-10",
    "sweep_a": "1.0",
    "sweep_lambda": "0.05,0.1,0.2",
    "sweep_routes": "closed_form",
}


def _load_config(path: str | None) -> dict[str, str]:
    if path is None:
        path = os.environ.get("CASIMIR_CONFIG")
    if path is None:
        return {}
    cfg: dict[str, str] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            cfg[key.strip()] = value.strip()
    return cfg


def _setting(flag_value, key: str, cfg: dict[str, str]) -> str:
    if flag_value is not None:
        return str(flag_value)
    env = os.environ.get("CASIMIR_" + key.upper())
    if env is not None:
        return env
    if key in cfg:
        return cfg[key]
    return _DEFAULTS[key]


def _float_list(text: str) -> list[float]:
    values = [float(part) for part in text.split(",") if part.strip()]
    if not values:
        raise ValueError(f"empty list {text!r}")
    return values


def _str_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _fmt(value: float) -> str:
    """Machine formatting, exact double round-trip."""
    return "%.17g" % value


def _hfmt(value: float) -> str:
    """Human formatting, 6 significant digits."""
    return "%.6g" % value


def _print_csv(columns: Sequence[str], rows: list[dict], out) -> None:
    print(f"# schema_version={SCHEMA_VERSION}", file=out)
    print(",".join(columns), file=out)
    for row in rows:
        cells = []
        for col in columns:
            value = row.get(col)
            if value is None:
                cells.append("")
            elif isinstance(value, float):
                cells.append(_fmt(value))
            else:
                cells.append(str(value))
        print(",".join(cells), file=out)


def _print_json(document: dict, out) -> None:
    print(json.dumps(document, indent=2, sort_keys=True), file=out)


def cmd_verify(args, cfg) -> int:
    units = get_units(_setting(args.units, "units", cfg))
    sigma_factor = 1.02 if args.inject_fault else 1.0
    results = verify.run_all(args.profile, units=units,
                             sigma_factor=sigma_factor)
    if args.json:
        document = {
            "schema_version": SCHEMA_VERSION,
            "command": "verify",
            "profile": args.profile,
            "units": units.name,
            "passed": all(r.passed for r in results),
            "checks": [
                {"name": r.name, "residual": r.residual, "bound": r.bound,
                 "passed": r.passed, "detail": r.detail}
                for r in results
            ],
        }
        _print_json(document, sys.stdout)
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            suffix = f"  ({r.detail})" if r.detail else ""
            print(f"{status} {r.name:<34} residual={_hfmt(r.residual):<12} "
                  f"bound={_hfmt(r.bound)}{suffix}")
        passed = sum(r.passed for r in results)
        print(f"verify: {passed}/{len(results)} checks passed "
              f"(profile={args.profile})")
    return 0 if all(r.passed for r in results) else 1


def _force_row(a: float, lam: float, route: str, units, tol: float) -> dict:
    value, estimate = regsum.evaluate_route(a, regsum.Regulator(lam), units,
                                            route, tol=tol)
    parts = regsum.asymptotic_parts(a, units)
    remainder = value - parts.divergent_coefficient / lam**4 - parts.finite_part
    return {
        "a": a,
        "lambda": lam,
        "route": route,
        "force_per_area": value,
        "divergent_part": parts.divergent_coefficient / lam**4,
        "finite_part": parts.finite_part,
        "remainder": remainder,
        "error_estimate": estimate,
    }


def cmd_force(args, cfg) -> int:
    units = get_units(_setting(args.units, "units", cfg))
    tol = float(_setting(args.tol, "tol", cfg))
    row = _force_row(args.a, args.lam, args.route, units, tol)
    if args.json:
        _print_json({"schema_version": SCHEMA_VERSION, "command": "force",
                     "units": units.name, "row": row}, sys.stdout)
    else:
        for col in SWEEP_COLUMNS:
            value = row[col]
            text = _hfmt(value) if isinstance(value, float) else value
            print(f"{col} = {text}")
        print("(negative force_per_area: the plates attract)")
    return 0


def cmd_sweep(args, cfg) -> int:
    units = get_units(_setting(args.units, "units", cfg))
    tol = float(_setting(args.tol, "tol", cfg))
    a_values = _float_list(_setting(args.a, "sweep_a", cfg))
    lam_values = _float_list(_setting(args.lam, "sweep_lambda", cfg))
    routes = _str_list(_setting(args.routes, "sweep_routes", cfg))
    for route in routes:
        if route not in regsum.ROUTES:
            raise ValueError(f"unknown route {route!r}; expected one of "
                             f"{regsum.ROUTES}")

    rows = []
    failures = 0
    # fixed emission order: separation, then cutoff, then route
    for a in a_values:
        for lam in lam_values:
            for route in routes:
                try:
                    rows.append(_force_row(a, lam, route, units, tol))
                except (NumericsError, regsum.PrecisionLossError) as exc:
                    failures += 1
                    print(f"sweep: a={a:g} lambda={lam:g} route={route}: {exc}",
                          file=sys.stderr)
                    rows.append({"a": a, "lambda": lam, "route": route,
                                 "error": str(exc)})

    if args.format == "json":
        _print_json({"schema_version": SCHEMA_VERSION, "command": "sweep",
                     "units": units.name, "rows": rows}, sys.stdout)
    else:
        _print_csv(SWEEP_COLUMNS, rows, sys.stdout)
    return 2 if failures else 0


def cmd_extract(args, cfg) -> int:
    units = get_units(_setting(args.units, "units", cfg))
    a = args.a
    if args.lambda_grid is not None:
        grid = _float_list(args.lambda_grid)
    else:
        # default grid spans the supported window of lambda * pi / a
        grid = [r * a / math.pi for r in (0.05, 0.08, 0.12, 0.2, 0.3, 0.5)]
    result = regsum.extract_finite_part(a, grid, units)
    reference = regsum.casimir_closed_form(a, units)
    rel_error = abs(result.finite_part - reference) / reference
    document = {
        "schema_version": SCHEMA_VERSION,
        "command": "extract",
        "units": units.name,
        "a": a,
        "lambda_grid": grid,
        "finite_part": result.finite_part,
        "divergent_coefficient": result.divergent_coefficient,
        "casimir_closed_form": reference,
        "finite_part_rel_error": rel_error,
        "coefficients": list(result.coefficients),
        "exponents": list(result.exponents),
        "residual_norm": result.residual_norm,
        "condition_estimate": result.condition_estimate,
    }
    if args.json:
        _print_json(document, sys.stdout)
    else:
        print(f"a = {_hfmt(a)}")
        print(f"finite_part = {_hfmt(result.finite_part)}")
        print(f"casimir_closed_form = {_hfmt(reference)}")
        print(f"finite_part_rel_error = {_hfmt(rel_error)}")
        print(f"divergent_coefficient = {_hfmt(result.divergent_coefficient)}")
        print(f"condition_estimate = {_hfmt(result.condition_estimate)}")
    return 0


def cmd_modes(args, cfg) -> int:
    units = get_units(_setting(args.units, "units", cfg))
    geom = CavityGeometry(a=args.a, L=args.big_l)
    rows = []
    for nx in range(1, args.n_max + 1):
        for ny in range(1, args.n_max + 1):
            for nz in range(1, args.n_max + 1):
                ms = stress.sigma_zz_mode(ModeIndex(nx, ny, nz), geom, units)
                rows.append({"n_x": nx, "n_y": ny, "n_z": nz,
                             "kappa": ms.kappa, "sigma_zz": ms.sigma_zz})
    if args.format == "json":
        _print_json({"schema_version": SCHEMA_VERSION, "command": "modes",
                     "units": units.name, "a": geom.a, "L": geom.L,
                     "rows": rows}, sys.stdout)
    else:
        _print_csv(MODES_COLUMNS, rows, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--units", choices=("natural", "si"), default=None,
                        help="unit system (default natural)")
    common.add_argument("--config", default=None,
                        help="config file with 'key = value' lines")

    parser = argparse.ArgumentParser(
        prog="casimir",
        description="Casimir force between parallel plates from "
                    "cutoff-regularized cavity-mode sums")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common],
                       help="run the self-check suite")
    p.add_argument("--profile", choices=verify.PROFILES, default="default")
    p.add_argument("--inject-fault", action="store_true",
                   help="perturb the closed-form stress inside the oracle "
                        "comparison; proves the check can fail")
    p.add_argument("--json", action="store_true", help="machine output")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("force", parents=[common],
                       help="one regularized force value")
    p.add_argument("--a", type=float, required=True, help="plate separation")
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="cutoff length")
    p.add_argument("--route", choices=regsum.ROUTES, default="closed_form")
    p.add_argument("--tol", type=float, default=None,
                   help="tolerance for the numeric route")
    p.add_argument("--json", action="store_true", help="machine output")
    p.set_defaults(handler=cmd_force)

    p = sub.add_parser("sweep", parents=[common],
                       help="force values over parameter grids")
    p.add_argument("--a", default=None, help="comma-separated separations")
    p.add_argument("--lambda", dest="lam", default=None,
                   help="comma-separated cutoff lengths")
    p.add_argument("--routes", default=None,
                   help="comma-separated routes "
                        f"(subset of {','.join(regsum.ROUTES)})")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("extract", parents=[common],
                       help="finite part by least-squares fit in the cutoff")
    p.add_argument("--a", type=float, required=True, help="plate separation")
    p.add_argument("--lambda-grid", default=None,
                   help="comma-separated cutoff lengths (default: a scaled "
                        "six-point grid)")
    p.add_argument("--json", action="store_true", help="machine output")
    p.set_defaults(handler=cmd_extract)

    p = sub.add_parser("modes", parents=[common],
                       help="per-mode averaged normal stress table")
    p.add_argument("--n-max", type=int, default=3,
                   help="largest mode number per axis")
    p.add_argument("--a", type=float, default=1.0, help="plate separation")
    p.add_argument("--L", dest="big_l", type=float, default=1.0,
                   help="transverse box side")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(handler=cmd_modes)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(args.config)
        return args.handler(args, cfg)
    except IllConditionedFitError as exc:
        print(f"casimir: fit failed: {exc}", file=sys.stderr)
        return 1
    except (NumericsError, regsum.PrecisionLossError) as exc:
        print(f"casimir: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"casimir: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

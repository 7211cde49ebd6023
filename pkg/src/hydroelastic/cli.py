"""Command-line front end.

    hydroelastic --command solve --config run.json --out results/ [--set physics.c2=4.2]

Commands: ``solve``, ``sweep``, ``check``, ``geometry``, ``residuals``.  Exit
status is 0 on success, 2 on invalid input and 3 when a solve does not
converge.
"""
from __future__ import annotations

import argparse
import copy
import csv
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

import jsonschema
import numpy as np

from .energy import (IllustrativeEnergy, SplittingEnergy, admissible_c2_interval,
                     check_hypotheses)
from .geometry import area_A, area_A_prime, theta_of_ell
from .lagrangian import solve_state
from .optimizer import SolveConfig, SolveResult, continuation_sweep, maximize
from .residuals import certify
from .spectral import Field

log = logging.getLogger("hydroelastic")

EXIT_OK, EXIT_INVALID, EXIT_NOT_CONVERGED = 0, 2, 3
COMMANDS = ("solve", "sweep", "check", "geometry", "residuals")
FAMILIES = ("illustrative", "splitting")
PROFILE_HEADER = ["tau", "w", "Cw", "Omega", "Theta", "sigma", "chi_prime", "nu", "mu", "P"]
SUMMARY_HEADER = ["c2", "J0", "height", "ell", "gamma0", "residual_dynamic"]

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["energy"],
    "properties": {
        "energy": {
            "type": "object",
            "required": ["family"],
            "properties": {"family": {"type": "string"}},
        },
        "physics": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "c2": _pos,
                "c2_fraction": {"type": "number", "minimum": 0, "maximum": 1},
                "g": _pos,
                "mu_star": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
            },
        },
        "numerics": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "N": {"type": "integer", "minimum": 2},
                "M": {"type": "integer", "minimum": 4, "multipleOf": 2},
                "eps0": {"type": "number", "minimum": 0},
                "tol_grad": _pos,
                "max_iter": {"type": "integer", "minimum": 1},
                "mode": {"enum": ["reduced", "joint"]},
                "seed": {"type": "integer"},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"c2_values": {"type": "array", "items": _pos}},
        },
        "checks": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"constants": {"type": "object"}},
        },
    },
}

ENERGY_SCHEMAS = {
    "illustrative": {
        "type": "object",
        "additionalProperties": False,
        "required": ["family", "a", "b", "beta", "d", "r", "s", "p", "alpha", "delta"],
        "properties": {"family": {"const": "illustrative"},
                       **{k: _num for k in ("a", "b", "beta", "d", "r", "s", "p", "alpha", "delta")}},
    },
    "splitting": {
        "type": "object",
        "additionalProperties": False,
        "required": ["family", "a", "r", "s", "b", "b1"],
        "properties": {"family": {"const": "splitting"},
                       **{k: _num for k in ("a", "r", "s", "b", "b1")}},
    },
}

DEFAULTS = {"g": 1.0, "mu_star": 0.6, "c2_fraction": 0.2, "N": 128, "eps0": 1e-3,
            "tol_grad": 1e-9, "max_iter": 3000, "mode": "reduced", "seed": 0}


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending location."""


@dataclass
class RunSettings:
    solve: SolveConfig
    c2_values: tuple
    seed: int
    constants: dict
    c2_source: str
    raw: dict


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path)


def _validate(doc, schema):
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        e = errors[0]
        raise ConfigError(f"{_pointer(e.absolute_path) or '/'}: {e.message}")


def _build_model(energy: dict):
    fam = energy.get("family")
    if fam not in FAMILIES:
        raise ConfigError(f"/energy/family: unknown family {fam!r}; supported: {', '.join(FAMILIES)}")
    _validate(energy, ENERGY_SCHEMAS[fam])
    params = {k: float(v) for k, v in energy.items() if k != "family"}
    try:
        if fam == "illustrative":
            model = IllustrativeEnergy(**params)
        else:
            model = SplittingEnergy(**params)
    except ValueError as exc:
        raise ConfigError(f"/energy: {exc} (illustrative family requires alpha >= 2, p > 2, r > 1, s > 0)")
    if fam == "illustrative" and not model.alpha > model.delta + 1:
        raise ConfigError(f"/energy/alpha: condition ill_ex_1 (alpha > delta + 1) violated: "
                          f"alpha={model.alpha}, delta={model.delta}; the mixed term is not jointly convex")
    return model


def parse_config(text_or_doc) -> RunSettings:
    """Validate a JSON document (text or parsed) and fill defaults."""
    if isinstance(text_or_doc, (str, bytes)):
        try:
            doc = json.loads(text_or_doc)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"/: malformed JSON: {exc}")
    else:
        doc = copy.deepcopy(text_or_doc)
    _validate(doc, SCHEMA)
    model = _build_model(doc["energy"])
    phys = {**DEFAULTS, **doc.get("physics", {})}
    num = {**DEFAULTS, **doc.get("numerics", {})}
    g, mu_star = float(phys["g"]), float(phys["mu_star"])
    if "c2" in doc.get("physics", {}):
        c2, source = float(phys["c2"]), "physics.c2"
    else:
        iv = admissible_c2_interval(model, g, mu_star)
        if iv.empty:
            c2, source = iv.lo + 1.0, "lo + 1 (admissible interval empty)"
        else:
            frac = float(phys["c2_fraction"])
            c2, source = iv.lo + frac * (iv.hi - iv.lo), f"lo + {frac:g}(hi - lo)"
    N = int(num["N"])
    M = int(num.get("M", 2 * N))
    if N > M // 2:
        raise ConfigError(f"/numerics/N: N={N} exceeds M/2={M // 2}")
    c2_values = tuple(float(v) for v in doc.get("sweep", {}).get("c2_values", []))
    try:
        cfg = SolveConfig(model=model, c2=c2, g=g, mu_star=mu_star, modes=N, grid=M,
                          eps0=float(num["eps0"]), tol_grad=float(num["tol_grad"]),
                          max_iter=int(num["max_iter"]), schedule=c2_values, mode=num["mode"])
    except ValueError as exc:
        raise ConfigError(f"/numerics: {exc}")
    constants = doc.get("checks", {}).get("constants", {})
    return RunSettings(cfg, c2_values, int(num["seed"]), constants, source, doc)


def apply_overrides(doc: dict, overrides) -> dict:
    """Apply ``key.sub=value`` overrides; values are parsed as JSON when possible."""
    doc = copy.deepcopy(doc)
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected key=value")
        key, raw = item.split("=", 1)
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = doc
        parts = key.split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set {key}: {p} is not an object")
        node[parts[-1]] = value
    return doc


# ---------------------------------------------------------------------------
# output

def _fmt(x) -> str:
    return format(float(x), ".17g")


def write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n")


def profile_rows(result_state, model, pressure: Field):
    """One row per node of the base grid (even nodes of the padded grid)."""
    st = result_state
    cf = st.curve
    cols = [cf.w.tau, cf.w.samples, cf.cw.samples, cf.omega.samples, cf.theta.samples,
            cf.sigma.samples, st.chi_prime.samples, st.nu.samples, st.mu.samples, pressure.samples]
    return np.column_stack(cols)[::2]


def write_profile(path: Path, state, model, pressure: Field) -> None:
    rows = profile_rows(state, model, pressure)
    with path.open("w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(PROFILE_HEADER)
        for row in rows:
            wr.writerow([_fmt(v) for v in row])


def _result_payload(res: SolveResult, settings: RunSettings) -> dict:
    d = res.to_dict()
    d["N"] = settings.solve.modes
    d["M"] = settings.solve.M
    d["mu_star"] = settings.solve.mu_star
    d["c2_source"] = settings.c2_source
    d["energy"] = {"family": settings.solve.model.family, **settings.solve.model.params()}
    return d


# ---------------------------------------------------------------------------
# commands

def _cmd_solve(settings: RunSettings, out: Path, args) -> int:
    res = maximize(settings.solve)
    payload = {"command": "solve", "result": _result_payload(res, settings)}
    write_json(out / "result.json", payload)
    write_profile(out / "profile.csv", res.state, settings.solve.model, res.residuals.pressure)
    if res.trivial:
        log.warning("ascent returned the trivial state (flat surface)")
    if not res.converged:
        log.error("solve did not converge: %s", res.message)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _cmd_sweep(settings: RunSettings, out: Path, args) -> int:
    if not settings.c2_values:
        raise ConfigError("/sweep/c2_values: sweep needs a non-empty list")
    recs = continuation_sweep(settings.solve)
    rows, items, status = [], [], EXIT_OK
    for rec in recs:
        res = rec["result"]
        item = {"c2": rec["c2"], "admissible": rec["admissible"], "error": rec["error"],
                "result": None if res is None else _result_payload(res, settings)}
        items.append(item)
        if res is None or not res.converged:
            if rec["admissible"]:
                status = EXIT_NOT_CONVERGED
            continue
        rows.append([rec["c2"], res.j0_value, res.height, res.geometry.ell, res.state.gamma0,
                     res.residuals.dynamic_sup])
    write_json(out / "result.json", {"command": "sweep", "points": items})
    with (out / "summary.csv").open("w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(SUMMARY_HEADER)
        for r in rows:
            wr.writerow([_fmt(v) for v in r])
    return status


def _cmd_check(settings: RunSettings, out: Path, args) -> int:
    cfg = settings.solve
    rep = check_hypotheses(cfg.model, cfg.c2, cfg.g, cfg.mu_star, constants=settings.constants)
    payload = {"command": "check", "c2": cfg.c2, "g": cfg.g, "mu_star": cfg.mu_star,
               "report": rep.to_dict()}
    write_json(out / "result.json", payload)
    if rep.admissible_c2 is not None and rep.admissible_c2.empty:
        log.warning("admissible wave-speed interval is empty")
    return EXIT_OK


def _cmd_geometry(settings, out: Path, args) -> int:
    ells = 1.0 + np.geomspace(1e-8, 1e4 - 1.0, args.points)
    with (out / "geometry.csv").open("w", newline="") as fh:
        wr = csv.writer(fh, lineterminator="\n")
        wr.writerow(["ell", "theta", "A", "A_prime"])
        for e in ells:
            wr.writerow([_fmt(e), _fmt(theta_of_ell(e)), _fmt(area_A(e)), _fmt(area_A_prime(e))])
    write_json(out / "result.json", {"command": "geometry", "points": int(args.points),
                                     "ell_min": float(ells[0]), "ell_max": float(ells[-1])})
    return EXIT_OK


def _load_state(path: Path, settings: RunSettings):
    doc = json.loads(path.read_text())
    res = doc.get("result", doc)
    M = settings.solve.M
    w = Field.from_modes(res["w_cos"], res["w_sin"], M)
    c2 = float(res.get("c2", settings.solve.c2))
    return solve_state(w, settings.solve.model, c2, settings.solve.g)


def _cmd_residuals(settings: RunSettings, out: Path, args) -> int:
    if args.state:
        st = _load_state(Path(args.state), settings)
    else:
        res = maximize(settings.solve)
        st = res.state
    rep = certify(st, settings.solve.model)
    write_json(out / "result.json", {"command": "residuals", "c2": st.c2, "report": rep.to_dict()})
    write_profile(out / "profile.csv", st, settings.solve.model, rep.pressure)
    return EXIT_OK


HANDLERS = {"solve": _cmd_solve, "sweep": _cmd_sweep, "check": _cmd_check,
            "geometry": _cmd_geometry, "residuals": _cmd_residuals}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hydroelastic", description=__doc__.splitlines()[0])
    p.add_argument("--command", required=True, choices=COMMANDS)
    p.add_argument("--config", type=Path, help="JSON configuration file")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="dotted-path override, e.g. physics.c2=4.2 (repeatable)")
    p.add_argument("--state", help="result.json holding w coefficients (residuals command)")
    p.add_argument("--points", type=int, default=200, help="table size (geometry command)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def run(args) -> int:
    settings = None
    if args.command != "geometry" or args.config is not None:
        if args.config is None:
            raise ConfigError(f"--config is required for {args.command}")
        if not args.config.exists():
            raise ConfigError(f"--config {args.config}: no such file")
        try:
            doc = json.loads(args.config.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"/: malformed JSON: {exc}")
        settings = parse_config(apply_overrides(doc, args.overrides))
    args.out.mkdir(parents=True, exist_ok=True)
    return HANDLERS[args.command](settings, args.out, args)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return run(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Usage::

    rfcharge generate --kind regular --n 144 --field 12x12 --out s.json
    rfcharge place s.json --algo greedy --alpha 0.5 --out p.json
    rfcharge baseline s.json --pattern triangle-summation --eval-model superposition
    rfcharge validate
    rfcharge plot s.json p.json --out map.svg
    rfcharge sweep s.json --algos greedy,pso-dc --seeds 0,1,2 --out sweep.csv

Configuration is JSON (see ``DEFAULT_CONFIG``); ``--config`` or the
``RFCHARGE_CONFIG`` environment variable names the file, its values override
the defaults section by section and command-line flags override both.

Exit codes: 0 success, 2 usage error, 3 input/output error, 4 infeasible.
"""

from __future__ import annotations

import argparse
import copy
import json
import logging
import os
import sys
from dataclasses import asdict
from pathlib import Path

from rfcharge.baseline import Pattern, evaluate_pattern, pattern_spec, triangle_lattice
from rfcharge.cluster import DncConfig
from rfcharge.errors import ConfigurationError, InfeasibleError, ScenarioFormatError
from rfcharge.evaluation import (
    ALGORITHMS,
    bundled_measurements,
    format_report,
    load_validation_csv,
    run_algorithm,
    sweep,
    sweep_csv,
    validate_tables,
    validation_csv,
    verify,
)
from rfcharge.model import PowerModel, PowerProfile, RadioParams, pattern_radii
from rfcharge.pso import PsoConfig
from rfcharge.scenario import (
    generate_random,
    generate_regular,
    load_placement,
    load_scenario,
    save_placement,
    save_scenario,
)

log = logging.getLogger("rfcharge")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INFEASIBLE = 4

CONFIG_ENV = "RFCHARGE_CONFIG"

DEFAULT_CONFIG = {
    "radio": asdict(RadioParams()),
    "power": asdict(PowerProfile()),
    "model": PowerModel.SUPERPOSITION.value,
    "grid": {"cell_size": 0.1, "tie_break": "index"},
    "pso": {k: v for k, v in asdict(PsoConfig()).items()},
    "dnc": {"delta": DncConfig().delta},
}


class UsageError(Exception):
    pass


def load_config(path=None) -> dict:
    """Defaults merged with the JSON file at ``path`` (or ``$RFCHARGE_CONFIG``)."""
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return cfg
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ScenarioFormatError(f"{path}: cannot read config ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ScenarioFormatError(f"{path}: config must be a JSON object")
    for key, value in doc.items():
        if key not in cfg:
            raise ConfigurationError(f"{path}: unknown config section {key!r}")
        if isinstance(cfg[key], dict):
            if not isinstance(value, dict):
                raise ConfigurationError(f"{path}: section {key!r} must be an object")
            unknown = set(value) - set(cfg[key])
            if unknown:
                raise ConfigurationError(f"{path}: unknown field(s) in {key!r}: {', '.join(sorted(unknown))}")
            cfg[key].update(value)
        else:
            cfg[key] = value
    return cfg


def apply_overrides(cfg: dict, args) -> dict:
    cfg = copy.deepcopy(cfg)
    if getattr(args, "alpha", None) is not None:
        cfg["power"]["alpha"] = args.alpha
    if getattr(args, "seed", None) is not None:
        cfg["pso"]["seed"] = args.seed
    if getattr(args, "model", None) is not None:
        cfg["model"] = args.model
    if getattr(args, "grid_size", None) is not None:
        cfg["grid"]["cell_size"] = args.grid_size
    if getattr(args, "delta", None) is not None:
        cfg["dnc"]["delta"] = args.delta
    return cfg


def build(cfg: dict):
    """Typed objects from a config dict; raises ConfigurationError."""
    try:
        radio = RadioParams(**cfg["radio"])
        power = PowerProfile(**cfg["power"])
        pso = PsoConfig(**cfg["pso"])
    except TypeError as exc:
        raise ConfigurationError(str(exc)) from None
    model = PowerModel.parse(cfg["model"])
    DncConfig(delta=cfg["dnc"]["delta"], pso=pso)
    return radio, power, model, pso


def _config_lines(cfg: dict) -> dict:
    out = {}
    for section, value in cfg.items():
        if isinstance(value, dict):
            for key, v in value.items():
                out[f"config.{section}.{key}"] = json.dumps(v)
        else:
            out[f"config.{section}"] = json.dumps(value)
    return out


def _write(text: str, path):
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _parse_field(text: str):
    try:
        w, h = (float(v) for v in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"--field must look like WIDTHxHEIGHT, got {text!r}") from None
    return w, h


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_generate(args) -> int:
    w, h = _parse_field(args.field)
    if args.kind == "regular":
        try:
            s = generate_regular(w, h, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        s = generate_random(w, h, args.n, args.seed if args.seed is not None else 0)
    save_scenario(s, args.out)
    log.info("wrote %d-node scenario to %s", s.n, args.out)
    return EXIT_OK


def cmd_place(args) -> int:
    cfg = apply_overrides(load_config(args.config), args)
    radio, power, model, pso = build(cfg)
    scenario = load_scenario(args.scenario)
    extra = {"command": "place", "algorithm": args.algo, "scenario_nodes": scenario.n}
    extra.update(_config_lines(cfg))
    try:
        placement = run_algorithm(
            args.algo,
            scenario,
            radio,
            power,
            model,
            seed=pso.seed,
            grid_size=cfg["grid"]["cell_size"],
            tie_break=cfg["grid"]["tie_break"],
            pso=pso,
            delta=cfg["dnc"]["delta"],
        )
    except InfeasibleError as exc:
        where = f" in {exc.context}" if exc.context else ""
        print(f"error: infeasible{where}: {exc}", file=sys.stderr)
        if args.report:
            lines = [f"{k}={v}" for k, v in extra.items()]
            lines += ["status=infeasible", f"unsatisfied={','.join(str(i + 1) for i in exc.unsatisfied)}"]
            _write("\n".join(lines) + "\n", args.report)
        return EXIT_INFEASIBLE
    report = verify(placement, scenario, radio, power, model)
    save_placement(placement, args.out, (scenario.width, scenario.height))
    _write(format_report(report, extra), args.report)
    return EXIT_OK if report.feasible else EXIT_INFEASIBLE


def cmd_baseline(args) -> int:
    cfg = apply_overrides(load_config(args.config), args)
    radio, power, model, _ = build(cfg)
    scenario = load_scenario(args.scenario)
    eval_model = PowerModel.parse(args.eval_model)
    spec = pattern_spec(args.pattern, radio, power, scenario.width, scenario.height)
    placement = triangle_lattice(spec)
    report = verify(placement, scenario, radio, power, eval_model)
    extra = {"command": "baseline", "pattern": spec.pattern.value, "lattice_radius_m": repr(spec.radius)}
    extra.update(_config_lines(cfg))
    if args.out:
        save_placement(placement, args.out, (scenario.width, scenario.height))
    _write(format_report(report, extra), args.report)
    return EXIT_OK


def cmd_validate(args) -> int:
    rows = load_validation_csv(args.dataset) if args.dataset else bundled_measurements()
    _write(validation_csv(validate_tables(rows, args.wavelength)), args.out)
    return EXIT_OK


def cmd_plot(args) -> int:
    from rfcharge.plotting import plot_placement

    scenario = load_scenario(args.scenario)
    placement, dims = load_placement(args.placement)
    if dims is not None and dims != (scenario.width, scenario.height):
        raise ScenarioFormatError(
            f"placement field {dims[0]}x{dims[1]} does not match scenario field {scenario.width}x{scenario.height}"
        )
    if len(placement) and not scenario.contains(placement.chargers).all():
        raise ScenarioFormatError("placement has chargers outside the scenario field")
    r1 = None
    if args.alpha is not None:
        cfg = apply_overrides(load_config(args.config), args)
        radio, power, _, _ = build(cfg)
        r1 = pattern_radii(radio, power)[0]
    plot_placement(scenario, placement.chargers, args.out, r1=r1)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = apply_overrides(load_config(args.config), args)
    radio, power, model, pso = build(cfg)
    scenario = load_scenario(args.scenario)
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    bad = [a for a in algos if a not in ALGORITHMS]
    if bad:
        raise UsageError(f"unknown algorithm(s): {', '.join(bad)}")
    seeds = tuple(int(v) for v in _floats(args.seeds))
    rows = sweep(
        scenario,
        radio,
        power,
        model,
        algos,
        _floats(args.alphas),
        seeds=seeds,
        jobs=args.jobs,
        grid_size=cfg["grid"]["cell_size"],
        tie_break=cfg["grid"]["tie_break"],
        pso=pso,
        delta=cfg["dnc"]["delta"],
    )
    _write(sweep_csv(rows), args.out)
    if args.figure:
        from rfcharge.plotting import plot_sweep

        plot_sweep(rows, args.figure, title=f"N={scenario.n}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rfcharge", description="RF charger placement for battery-free sensor networks")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
        p.add_argument("--alpha", type=float, help="duty cycle")
        p.add_argument("--model", choices=[m.value for m in PowerModel])
        if seed:
            p.add_argument("--seed", type=int)

    p = sub.add_parser("generate", help="write a scenario file")
    p.add_argument("--kind", choices=("regular", "random"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--field", default="12x12", help="WIDTHxHEIGHT in meters")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("place", help="compute a charger placement")
    p.add_argument("scenario")
    p.add_argument("--algo", choices=ALGORITHMS, default="pso-dc")
    common(p)
    p.add_argument("--grid-size", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--out", required=True, help="placement JSON")
    p.add_argument("--report", default="-", help="report path (default stdout)")
    p.set_defaults(func=cmd_place)

    p = sub.add_parser("baseline", help="evaluate a triangle-lattice pattern")
    p.add_argument("scenario")
    p.add_argument("--pattern", choices=[x.value for x in Pattern], required=True)
    p.add_argument("--eval-model", choices=[m.value for m in PowerModel], default="superposition")
    common(p, seed=False)
    p.add_argument("--out", help="placement JSON")
    p.add_argument("--report", default="-")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("validate", help="compare summation and phasor models on measurements")
    p.add_argument("dataset", nargs="?", help="CSV with d1,d2,p1,p2,p_joint in mW (default: bundled data)")
    p.add_argument("--wavelength", type=float, default=0.33)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("plot", help="render a placement map as SVG")
    p.add_argument("scenario")
    p.add_argument("placement")
    p.add_argument("--out", required=True)
    p.add_argument("--alpha", type=float, help="draw r1 circles for this duty cycle")
    p.add_argument("--config")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("sweep", help="charger counts over a range of duty cycles")
    p.add_argument("scenario")
    p.add_argument("--algos", default="greedy,pso-dc")
    p.add_argument("--alphas", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8")
    p.add_argument("--seeds", default="0")
    p.add_argument("--jobs", type=int, default=1)
    common(p, seed=False)
    p.add_argument("--grid-size", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--out", default="-", help="CSV path (default stdout)")
    p.add_argument("--figure", help="also write an SVG of count vs duty cycle")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ScenarioFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())

"""Independent verification, model validation and algorithm comparison.

:func:`verify` recomputes every node's harvested power from scratch with
:func:`rfcharge.model.harvested_power`; it shares no state with the solvers
and is the oracle for their output.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from rfcharge.errors import InfeasibleError, ScenarioFormatError
from rfcharge.model import PowerModel, PowerProfile, RadioParams, combine_measured, harvested_power, required_power
from rfcharge.scenario import Placement, Scenario

__all__ = [
    "EvaluationReport",
    "SweepRow",
    "ValidationRecord",
    "format_report",
    "load_validation_csv",
    "run_algorithm",
    "sweep",
    "validate_tables",
    "validation_csv",
    "verify",
]

log = logging.getLogger(__name__)

DEFAULT_LAMBDA = 0.33


@dataclass
class EvaluationReport:
    per_node_power: np.ndarray
    per_node_feasible: np.ndarray
    sustainable_ratio: float
    charger_count: int
    model: str
    alpha: float
    required_power: float

    @property
    def feasible(self) -> bool:
        return bool(self.per_node_feasible.all())

    def unsatisfied(self) -> list:
        return np.flatnonzero(~self.per_node_feasible).tolist()


def verify(placement, scenario: Scenario, params: RadioParams, profile: PowerProfile, model) -> EvaluationReport:
    model = PowerModel.parse(model)
    chargers = placement.chargers if isinstance(placement, Placement) else np.asarray(placement, float).reshape(-1, 2)
    power = harvested_power(model, params, scenario.nodes, chargers, profile)
    req = required_power(profile)
    ok = power >= req
    return EvaluationReport(
        per_node_power=power,
        per_node_feasible=ok,
        sustainable_ratio=float(ok.mean()),
        charger_count=len(chargers),
        model=model.value,
        alpha=profile.alpha,
        required_power=req,
    )


def format_report(report: EvaluationReport, extra: dict | None = None) -> str:
    """Key-value header followed by a per-node CSV block."""
    lines = []
    items = dict(extra or {})
    items.update(
        model=report.model,
        alpha=repr(float(report.alpha)),
        required_power_w=repr(float(report.required_power)),
        charger_count=report.charger_count,
        node_count=len(report.per_node_power),
        satisfied=int(report.per_node_feasible.sum()),
        sustainable_ratio=repr(report.sustainable_ratio),
        feasible=str(report.feasible).lower(),
    )
    for key, value in items.items():
        lines.append(f"{key}={value}")
    lines.append("")
    lines.append("node,power_w,feasible")
    for i, (p, ok) in enumerate(zip(report.per_node_power, report.per_node_feasible), start=1):
        lines.append(f"{i},{float(p)!r},{int(ok)}")
    return "\n".join(lines) + "\n"


@dataclass
class ValidationRecord:
    d1: float
    d2: float
    p1: float
    p2: float
    p_joint_measured: float
    p_sum: float = math.nan
    p_model: float = math.nan
    err_sum: float = math.nan
    err_model: float = math.nan
    group: str = ""


_REQUIRED_COLUMNS = ("d1", "d2", "p1", "p2", "p_joint")


def _parse_validation(text: str, source: str) -> list:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    reader = csv.DictReader(lines)
    missing = [c for c in _REQUIRED_COLUMNS if c not in (reader.fieldnames or [])]
    if missing:
        raise ScenarioFormatError(f"{source}: missing column(s) {', '.join(missing)}")
    rows = []
    for lineno, raw in enumerate(reader, start=2):
        try:
            values = {c: float(raw[c]) for c in _REQUIRED_COLUMNS}
        except (TypeError, ValueError):
            raise ScenarioFormatError(f"{source}: data row {lineno - 1} has a missing or non-numeric field: {raw}") from None
        rows.append(
            ValidationRecord(
                values["d1"], values["d2"], values["p1"], values["p2"], values["p_joint"], group=raw.get("set") or ""
            )
        )
    return rows


def load_validation_csv(path) -> list:
    """Read a validation dataset (powers in mW)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioFormatError(f"{path}: cannot read ({exc.strerror})") from exc
    return _parse_validation(text, str(path))


def bundled_measurements() -> list:
    """The shipped two-reader measurement set."""
    text = resources.files("rfcharge.data").joinpath("two_reader_measurements.csv").read_text()
    return _parse_validation(text, "two_reader_measurements.csv")


def validate_tables(dataset, lambda_m: float = DEFAULT_LAMBDA) -> list:
    """Fill in summation and phasor predictions plus their errors.

    Errors are ``prediction - measured`` in the dataset's units.
    """
    out = []
    for rec in dataset:
        p_sum = rec.p1 + rec.p2
        p_model = combine_measured(rec.p1, rec.p2, rec.d1, rec.d2, lambda_m)
        out.append(
            ValidationRecord(
                rec.d1,
                rec.d2,
                rec.p1,
                rec.p2,
                rec.p_joint_measured,
                p_sum,
                p_model,
                p_sum - rec.p_joint_measured,
                p_model - rec.p_joint_measured,
                rec.group,
            )
        )
    return out


def validation_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["set", "d1", "d2", "p1_mw", "p2_mw", "p_joint_mw", "p_sum_mw", "p_model_mw", "err_sum_mw", "err_model_mw"])
    for r in records:
        writer.writerow(
            [r.group, r.d1, r.d2, r.p1, r.p2, r.p_joint_measured]
            + [f"{v:.4f}" for v in (r.p_sum, r.p_model, r.err_sum, r.err_model)]
        )
    return buf.getvalue()


ALGORITHMS = ("greedy", "pso", "pso-dc")


def run_algorithm(name, scenario, params, profile, model, *, seed=0, grid_size=0.1, tie_break="index", pso=None, delta=None):
    """Run one placement algorithm and return its :class:`Placement`."""
    from rfcharge.cluster import DncConfig, dnc_place
    from rfcharge.greedy import Grid, greedy_place
    from rfcharge.pso import PsoConfig, Region, pso_place

    pso = pso or PsoConfig()
    pso = PsoConfig(**{**asdict(pso), "seed": seed})
    if name == "greedy":
        grid = Grid.for_field(scenario.width, scenario.height, grid_size)
        return greedy_place(scenario, params, profile, model, grid, tie_break=tie_break).placement
    if name == "pso":
        region = Region.field(scenario.width, scenario.height)
        return pso_place(scenario.nodes, region, params, profile, model, pso).placement
    if name == "pso-dc":
        cfg = DncConfig(pso=pso) if delta is None else DncConfig(delta=delta, pso=pso)
        return dnc_place(scenario, params, profile, model, cfg).placement
    raise ValueError(f"unknown algorithm {name!r} (choose from {', '.join(ALGORITHMS)})")


@dataclass
class SweepRow:
    alpha: float
    algorithm: str
    seed: int
    charger_count: int | None
    sustainable_ratio: float | None
    status: str = "ok"


def _sweep_cell(args):
    algo, alpha, seed, scenario, params, profile_base, model, kwargs = args
    profile = profile_base.with_alpha(alpha)
    try:
        placement = run_algorithm(algo, scenario, params, profile, model, seed=seed, **kwargs)
    except InfeasibleError as exc:
        return SweepRow(alpha, algo, seed, None, None, f"infeasible: {exc}")
    rep = verify(placement, scenario, params, profile, model)
    return SweepRow(alpha, algo, seed, rep.charger_count, rep.sustainable_ratio)


def sweep(scenario, params, profile_base, model, algorithms, alphas, seeds=(0,), jobs=1, **kwargs) -> list:
    """Charger count and verified ratio for every (alpha, algorithm, seed).

    Deterministic algorithms (greedy) run once per alpha regardless of
    ``seeds``. Infeasible cells are recorded and the sweep carries on.
    """
    model = PowerModel.parse(model)
    cells = []
    for alpha in alphas:
        if not 0.0 < alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
        for algo in algorithms:
            for seed in (seeds[:1] if algo == "greedy" else seeds):
                cells.append((algo, alpha, seed, scenario, params, profile_base, model, kwargs))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_cell, cells))
    return [_sweep_cell(c) for c in cells]


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["alpha", "algorithm", "seed", "charger_count", "sustainable_ratio", "status"])
    for r in rows:
        writer.writerow(
            [repr(r.alpha), r.algorithm, r.seed, "" if r.charger_count is None else r.charger_count,
             "" if r.sustainable_ratio is None else repr(r.sustainable_ratio), r.status]
        )
    return buf.getvalue()


def best_counts(rows) -> dict:
    """Minimum feasible charger count per ``(alpha, algorithm)``."""
    best: dict = {}
    for r in rows:
        if r.charger_count is None or r.sustainable_ratio != 1.0:
            continue
        key = (r.alpha, r.algorithm)
        best[key] = min(best.get(key, r.charger_count), r.charger_count)
    return best

"""Running registered models on parameter documents and comparing them.

The comparison harness evaluates two models over a one-parameter sweep and
records, for every point, each model's output and whether the point lies
inside that model's validity frame. Points outside a frame are still
computed so divergence outside the frame stays visible.
"""

from __future__ import annotations

import copy
import csv
import io
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Mapping, Optional, Sequence

import numpy as np

from . import beam, gradeability, sdof
from .core import Scenario, is_valid
from .errors import BoundsError, FidelityError, IncompatibleParameter, ParameterError, ParseError
from .gradeability import Sweep, Tier
from .params import FAMILY_KEYS, beam_case, family_of, smd_inputs, validate_document, vehicle_inputs
from .registry import get_model

__all__ = [
    "QUANTITIES",
    "SweepSpec",
    "parse_sweep",
    "apply_sweep",
    "scenario_params",
    "run_model",
    "evaluate",
    "ComparisonTable",
    "run_compare",
    "ReportRow",
    "gradeability_report",
    "report_csv",
    "report_text",
    "format_number",
]

QUANTITIES = {
    "beam": ("tip_deflection", "tip_rotation"),
    "smd": ("settling_time",),
    "vehicle": ("critical_grade",),
}

# derived sweep parameters per family, beyond plain top-level numbers
_DERIVED = {
    "beam": {"h", "slenderness"},
    "smd": {"zeta"},
    "vehicle": set(),
}


def format_number(x) -> str:
    """Shortest round-trip decimal form, independent of locale."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


@dataclass(frozen=True)
class SweepSpec:
    name: str
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise BoundsError(f"sweep needs lo < hi, got {self.lo} and {self.hi}")
        if self.n < 2:
            raise BoundsError(f"sweep needs at least 2 points, got {self.n}")

    def values(self) -> list[float]:
        return [float(v) for v in np.linspace(self.lo, self.hi, self.n)]


_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_SWEEP_TOKENS = [
    ("ident", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("'='", r"="),
    ("number", _NUMBER),
    ("':'", r":"),
    ("number", _NUMBER),
    ("':'", r":"),
    ("integer", r"[+-]?\d+"),
]


def parse_sweep(text: str) -> SweepSpec:
    """Parse ``name=lo:hi:n``; whitespace around separators is ignored."""
    pos = 0
    parts = []
    for label, pattern in _SWEEP_TOKENS:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        m = re.compile(pattern).match(text, pos)
        if m is None:
            raise ParseError(f"expected {label} in sweep {text!r}", position=pos)
        parts.append(m.group(0))
        pos = m.end()
    while pos < len(text) and text[pos].isspace():
        pos += 1
    if pos != len(text):
        raise ParseError(f"unexpected trailing text in sweep {text!r}", position=pos)
    name, _, lo, _, hi, _, n = parts
    return SweepSpec(name, float(lo), float(hi), int(n))


def accepts_sweep(family: str, name: str) -> bool:
    keys = FAMILY_KEYS[family]
    return name in keys["required"] | keys["optional"] or name in _DERIVED[family]


def apply_sweep(doc: Mapping[str, Any], family: str, name: str, value: float) -> dict:
    """Copy of ``doc`` with the swept parameter set to ``value``."""
    doc = copy.deepcopy(dict(doc))
    if family == "smd" and name == "zeta":
        doc["c"] = sdof.damping_for_ratio(doc["m"], doc["k"], value)
    elif family == "beam" and name == "h":
        doc["section"] = dict(doc["section"], h=value)
    elif family == "beam" and name == "slenderness":
        doc["L"] = value * doc["section"]["h"]
    elif accepts_sweep(family, name) and name not in ("section", "torque_map"):
        doc[name] = value
    else:
        raise IncompatibleParameter(f"cannot sweep {name!r} for {family} models")
    return doc


def scenario_params(model_id: str, doc: Mapping[str, Any]) -> dict:
    """Scenario parameters a model's validity frame is evaluated on."""
    family = family_of(model_id)
    if family == "beam":
        return {"slenderness": beam_case(doc).slenderness}
    if family == "smd":
        p = smd_inputs(doc)[0]
        return {"zeta": sdof.modal_parameters(p)[1], "forcing": "step"}
    return {}


def _grade_tier(model_id: str) -> Tier:
    return Tier(model_id.split(".", 1)[1])


def run_model(model_id: str, doc: Mapping[str, Any], grade_method=None) -> dict:
    """Evaluate one model on a parameter document; returns a JSON-ready dict."""
    get_model(model_id)
    family = family_of(model_id)
    if family == "beam":
        case = beam_case(doc)
        xs = np.linspace(0.0, case.L, 11)
        profile = beam.eb_profile(case, xs) if model_id == "beam.eb" else beam.te_profile(case, xs)
        return {
            "model": model_id,
            "slenderness": case.slenderness,
            "tip_deflection": float(profile.v[0]),
            "tip_rotation": float(profile.theta[0]),
            "profile": {
                "x": [float(x) for x in profile.xs],
                "theta": [float(t) for t in profile.theta],
                "v": [float(v) for v in profile.v],
            },
        }
    if family == "smd":
        p, f, crit, solver = smd_inputs(doc)
        wn, zeta = sdof.modal_parameters(p)
        if model_id == "smd.heuristic":
            result = sdof.heuristic_settling_time(p, f)
        else:
            result = sdof.numeric_settling_time(p, f, crit, solver)
        return {
            "model": model_id,
            "wn": wn,
            "zeta": zeta,
            "settling_time": result.t_s,
            "steady_state": result.steady_state,
        }
    vehicle, springs, dynamic, solver = vehicle_inputs(doc)
    method = grade_method or Sweep(0.1)
    result = gradeability.critical_grade(
        _grade_tier(model_id), method, vehicle, springs, dynamic, solver
    )
    return {
        "model": model_id,
        "critical_grade": result.critical_grade,
        "failure_mode": result.failure_mode.value if result.failure_mode else None,
        "solver": result.solver,
    }


def _check_quantity(model_id: str, quantity: str) -> str:
    family = family_of(model_id)
    if quantity not in QUANTITIES[family]:
        raise IncompatibleParameter(
            f"{model_id} does not produce {quantity!r}; choose from {', '.join(QUANTITIES[family])}"
        )
    return family


def evaluate(model_id: str, doc: Mapping[str, Any], quantity: str) -> float:
    """Single output quantity of a model, as used by the comparison table."""
    family = _check_quantity(model_id, quantity)
    if family == "beam":
        case = beam_case(doc)
        prof = beam.eb_profile(case, 0.0) if model_id == "beam.eb" else beam.te_profile(case, 0.0)
        return float(prof.v[0] if quantity == "tip_deflection" else prof.theta[0])
    return float(run_model(model_id, doc)[quantity])


@dataclass(frozen=True)
class ComparisonTable:
    parameter: str
    quantity: str
    models: tuple[str, ...]
    sweep: tuple[float, ...]
    values: Mapping[str, tuple[float, ...]]
    valid: Mapping[str, tuple[bool, ...]]

    def column(self, model_id: str) -> np.ndarray:
        return np.asarray(self.values[model_id])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = [self.parameter]
        for mid in self.models:
            header += [mid, f"{mid}_valid"]
        writer.writerow(header)
        for i, x in enumerate(self.sweep):
            row = [format_number(x)]
            for mid in self.models:
                row += [format_number(self.values[mid][i]), format_number(self.valid[mid][i])]
            writer.writerow(row)
        return buf.getvalue()


def run_compare(
    models: Sequence[str],
    base: Mapping[str, Any],
    sweep: SweepSpec,
    quantity: str,
    workers: int = 1,
    order: Optional[Sequence[int]] = None,
) -> ComparisonTable:
    """Evaluate two models at every sweep point.

    ``order`` optionally permutes the evaluation order of sweep points and
    ``workers > 1`` evaluates them on a thread pool; neither changes the
    table.
    """
    models = tuple(models)
    if len(models) != 2:
        raise ParameterError("compare takes exactly two model ids")
    for mid in models:
        get_model(mid)
    families = {mid: family_of(mid) for mid in models}
    if not any(accepts_sweep(families[mid], sweep.name) for mid in models):
        raise IncompatibleParameter(f"sweep parameter {sweep.name!r} is not an input of {models}")
    for mid in models:
        validate_document(base, families[mid])
        _check_quantity(mid, quantity)

    xs = sweep.values()
    indices = list(range(len(xs))) if order is None else list(order)
    if sorted(indices) != list(range(len(xs))):
        raise ParameterError("evaluation order must be a permutation of the sweep points")

    def point(i):
        out = {}
        for mid in models:
            doc = apply_sweep(base, families[mid], sweep.name, xs[i])
            value = evaluate(mid, doc, quantity)
            flag = bool(is_valid(get_model(mid), Scenario(scenario_params(mid, doc))))
            out[mid] = (value, flag)
        return i, out

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = dict(pool.map(point, indices))
    else:
        results = dict(point(i) for i in indices)

    values = {mid: tuple(results[i][mid][0] for i in range(len(xs))) for mid in models}
    valid = {mid: tuple(results[i][mid][1] for i in range(len(xs))) for mid in models}
    return ComparisonTable(sweep.name, quantity, models, tuple(xs), values, valid)


# gradeability report ------------------------------------------------------------

ASSUMPTIONS = {
    Tier.RIGID: "rigid suspension; rigid tire; rigid ground; Coulomb friction; "
                "no acceleration weight transfer; constant torque",
    Tier.SPRING: "constant-rate suspension springs; rigid tire; rigid ground; Coulomb friction; "
                 "no acceleration weight transfer; constant torque",
    Tier.DYNAMIC: "constant-rate springs with dampers; point-contact rigid tire; rigid ground; "
                  "Coulomb friction; dynamic weight transfer; torque map with converter ramp",
}


@dataclass(frozen=True)
class ReportRow:
    tier: Tier
    model: str
    feature_count: int
    input_count: int
    assumptions: str
    critical_grade: Optional[float]
    failure_mode: Optional[str]
    error: Optional[str] = None


def gradeability_report(
    vehicle_doc: Mapping[str, Any],
    method=None,
    tiers: Sequence[str] = ("rigid", "spring", "dynamic"),
) -> list[ReportRow]:
    """Critical grade of every requested tier with shared solver settings.

    Rows come out in the order rigid, spring, dynamic. A tier that raises
    yields an ERROR row; the other tiers are still evaluated.
    """
    method = method or Sweep(0.1)
    wanted = {Tier(t) for t in tiers}
    vehicle, springs, dynamic, solver = vehicle_inputs(vehicle_doc)
    rows = []
    for tier in (Tier.RIGID, Tier.SPRING, Tier.DYNAMIC):
        if tier not in wanted:
            continue
        model = get_model(f"grade.{tier.value}")
        common = dict(
            tier=tier,
            model=model.id,
            feature_count=len(model.features),
            input_count=model.cost.input_count,
            assumptions=ASSUMPTIONS[tier],
        )
        try:
            result = gradeability.critical_grade(tier, method, vehicle, springs, dynamic, solver)
        except FidelityError as exc:
            rows.append(ReportRow(critical_grade=None, failure_mode=None,
                                  error=f"{type(exc).__name__}: {exc}", **common))
            continue
        mode = result.failure_mode.value if result.failure_mode else None
        rows.append(ReportRow(critical_grade=result.critical_grade, failure_mode=mode, **common))
    return rows


_REPORT_HEADER = ["tier", "model", "features", "inputs", "assumptions", "critical_grade_pct", "failure_mode"]


def _grade_text(row: ReportRow) -> str:
    if row.error is not None:
        return "ERROR"
    return f"{row.critical_grade:.2f}"


def report_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_REPORT_HEADER)
    for row in rows:
        writer.writerow([
            row.tier.value,
            row.model,
            row.feature_count,
            row.input_count,
            row.assumptions,
            "ERROR" if row.error else format_number(row.critical_grade),
            row.error if row.error else (row.failure_mode or ""),
        ])
    return buf.getvalue()


def report_text(rows: Sequence[ReportRow]) -> str:
    lines = [f"{'tier':<8} {'features':>8} {'inputs':>6} {'critical grade':>15}  {'failure mode':<14} assumptions"]
    for row in rows:
        mode = row.error if row.error else (row.failure_mode or "-")
        lines.append(
            f"{row.tier.value:<8} {row.feature_count:>8} {row.input_count:>6} "
            f"{_grade_text(row) + ' %':>15}  {mode:<14} {row.assumptions}"
        )
    return "\n".join(lines) + "\n"

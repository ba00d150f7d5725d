"""JSON parameter documents and their conversion to model inputs.

Each model family accepts a flat JSON object of SI quantities. Unknown keys
are rejected and every number must be finite.

beam:     ``P, E, L, section`` (``{b, h}`` or ``{I, A, h}``), optional ``G``, ``nu``, ``kappa``
smd:      ``m, c, k, F0``, optional ``band``, ``horizon_factor``, ``rtol``, ``atol``
vehicle:  ``m, wheelbase, l_f, h_cg, r_w, T_max, G_r, mu``, optional ``k_f, k_r``,
          ``torque_map`` (``{rpm: [...], torque_nm: [...]}``), ``c_f, c_r, I_yy``,
          ``converter_ramp, stall_fraction, distance, time_limit``, ``rtol, atol``
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Mapping

from .beam import BeamLoadCase, DirectSection, RectangularSection
from .errors import ParameterError
from .gradeability import DynamicParams, SpringParams, VehicleParams
from .numerics import SolverConfig
from .sdof import SettlingCriterion, SmdParams, StepForcing

__all__ = [
    "FAMILY_KEYS",
    "family_of",
    "load_document",
    "dump_document",
    "validate_document",
    "beam_case",
    "smd_inputs",
    "vehicle_inputs",
]

FAMILY_KEYS = {
    "beam": {
        "required": {"P", "E", "L", "section"},
        "optional": {"G", "nu", "kappa"},
    },
    "smd": {
        "required": {"m", "c", "k", "F0"},
        "optional": {"band", "horizon_factor", "rtol", "atol"},
    },
    "vehicle": {
        "required": {"m", "wheelbase", "l_f", "h_cg", "r_w", "T_max", "G_r", "mu"},
        "optional": {
            "k_f", "k_r", "torque_map", "c_f", "c_r", "I_yy", "converter_ramp",
            "stall_fraction", "distance", "time_limit", "rtol", "atol",
        },
    },
}


def family_of(model_id: str) -> str:
    prefix = model_id.split(".", 1)[0]
    return {"beam": "beam", "smd": "smd", "grade": "vehicle"}[prefix]


def _check_number(key, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParameterError(f"{key} must be a number, got {value!r}")
    if not math.isfinite(value):
        raise ParameterError(f"{key} must be finite, got {value!r}")


def _check_numbers(prefix, obj):
    if isinstance(obj, Mapping):
        for key, value in obj.items():
            _check_numbers(f"{prefix}.{key}" if prefix else key, value)
    elif isinstance(obj, list):
        for i, value in enumerate(obj):
            _check_numbers(f"{prefix}[{i}]", value)
    else:
        _check_number(prefix, obj)


def validate_document(doc: Mapping[str, Any], family: str) -> dict:
    if not isinstance(doc, Mapping):
        raise ParameterError("a parameter document must be a JSON object")
    keys = FAMILY_KEYS[family]
    unknown = set(doc) - keys["required"] - keys["optional"]
    if unknown:
        raise ParameterError(f"unknown {family} parameters: {', '.join(sorted(unknown))}")
    missing = keys["required"] - set(doc)
    if missing:
        raise ParameterError(f"missing {family} parameters: {', '.join(sorted(missing))}")
    _check_numbers("", doc)
    if family == "beam":
        section = doc["section"]
        if not isinstance(section, Mapping) or set(section) not in ({"b", "h"}, {"I", "A", "h"}):
            raise ParameterError("section must be {b, h} (rectangular) or {I, A, h} (direct)")
    if family == "vehicle" and "torque_map" in doc:
        tm = doc["torque_map"]
        if not isinstance(tm, Mapping) or set(tm) != {"rpm", "torque_nm"}:
            raise ParameterError("torque_map must be {rpm: [...], torque_nm: [...]}")
    return dict(doc)


def _reject_constant(token):
    raise ParameterError(f"non-finite number {token} in parameter document")


def load_document(source) -> dict:
    """Parse a JSON document from a path, a JSON string or a mapping."""
    if isinstance(source, Mapping):
        return dict(source)
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParameterError("a parameter document must be a JSON object")
    return doc


def dump_document(doc: Mapping[str, Any]) -> str:
    """Canonical UTF-8 JSON text; re-parses to an equal document."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"


def beam_case(doc: Mapping[str, Any]) -> BeamLoadCase:
    doc = validate_document(doc, "beam")
    sec = doc["section"]
    if "b" in sec:
        section = RectangularSection(sec["b"], sec["h"])
    else:
        section = DirectSection(sec["I"], sec["A"], sec["h"])
    return BeamLoadCase(
        P=doc["P"], E=doc["E"], L=doc["L"], section=section,
        G=doc.get("G"), nu=doc.get("nu"), kappa=doc.get("kappa", 5.0 / 6.0),
    )


def _solver(doc, defaults: SolverConfig) -> SolverConfig:
    return SolverConfig(rtol=doc.get("rtol", defaults.rtol), atol=doc.get("atol", defaults.atol))


def smd_inputs(doc: Mapping[str, Any]):
    """``(SmdParams, StepForcing, SettlingCriterion, SolverConfig)`` from a document."""
    doc = validate_document(doc, "smd")
    crit = SettlingCriterion(
        band=doc.get("band", 0.02), horizon_factor=doc.get("horizon_factor", 12.0)
    )
    return (
        SmdParams(doc["m"], doc["c"], doc["k"]),
        StepForcing(doc["F0"]),
        crit,
        _solver(doc, SolverConfig()),
    )


def vehicle_inputs(doc: Mapping[str, Any]):
    """``(VehicleParams, SpringParams | None, DynamicParams | None, SolverConfig)``."""
    doc = validate_document(doc, "vehicle")
    vehicle = VehicleParams(
        **{k: doc[k] for k in ("m", "wheelbase", "l_f", "h_cg", "r_w", "T_max", "G_r", "mu")}
    )
    springs = None
    if "k_f" in doc or "k_r" in doc:
        springs = SpringParams(doc.get("k_f", math.nan), doc.get("k_r", math.nan))
    dynamic = None
    dyn_keys = {"torque_map", "c_f", "c_r", "I_yy"}
    if dyn_keys <= set(doc):
        extras = {
            k: doc[k]
            for k in ("converter_ramp", "stall_fraction", "distance", "time_limit")
            if k in doc
        }
        dynamic = DynamicParams(
            torque_rpm=tuple(doc["torque_map"]["rpm"]),
            torque_nm=tuple(doc["torque_map"]["torque_nm"]),
            c_f=doc["c_f"], c_r=doc["c_r"], I_yy=doc["I_yy"], **extras,
        )
    return vehicle, springs, dynamic, _solver(doc, SolverConfig(rtol=1e-5, atol=1e-8))

"""Model metadata and the feature-set fidelity framework.

A model is described by the physical phenomena it includes (its feature
set), a gray box summarising inputs, relations and outputs, a validity
frame over scenario parameters, and a cost profile. Fidelity between two
models is set inclusion of their feature sets; selection picks the valid
model that is minimal under that order, then cheapest.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import (
    MissingParameter,
    NoValidModel,
    ParameterError,
    PreconditionViolation,
    UnknownTag,
)

__all__ = [
    "VOCABULARY",
    "register_tag",
    "FeatureSet",
    "InputGroup",
    "Relation",
    "Output",
    "GrayBoxSpec",
    "ValidityPredicate",
    "ValidityFrame",
    "CostProfile",
    "ModelDescriptor",
    "Scenario",
    "Verdict",
    "FidelityRelation",
    "IncreaseKind",
    "compare_fidelity",
    "classify_increase",
    "is_valid",
    "select_model",
    "render_gray_box",
    "check_registry",
]

_BASE_VOCABULARY = (
    # beams
    "bending-deflection",
    "shear-deflection",
    # spring-mass-damper
    "modal-parameters",
    "step-forcing",
    "energy-dissipation-dynamics",
    "time-domain-integration",
    # gradeability
    "coulomb-friction",
    "quasi-static-grade-load-distribution",
    "tip-over-stability",
    "traction-limit",
    "torque-limit",
    "suspension-spring-settling",
    "dynamic-weight-transfer",
    "engine-torque-map",
    "torque-converter",
    "suspension-damping",
    "pitch-dynamics",
)

VOCABULARY: set[str] = set(_BASE_VOCABULARY)


def register_tag(tag: str) -> str:
    """Add a phenomenon tag to the controlled vocabulary and return it."""
    if not isinstance(tag, str) or not tag or tag != tag.strip().lower() or " " in tag:
        raise UnknownTag(f"phenomenon tags are non-empty lowercase tokens, got {tag!r}")
    VOCABULARY.add(tag)
    return tag


def _check_tag(tag) -> str:
    if tag not in VOCABULARY:
        raise UnknownTag(f"unregistered phenomenon tag {tag!r}")
    return tag


class FeatureSet(frozenset):
    """Immutable set of registered phenomenon tags."""

    def __new__(cls, tags: Iterable[str] = ()):
        if isinstance(tags, str):
            tags = (tags,)
        tags = list(tags)
        for tag in tags:
            _check_tag(tag)
        return super().__new__(cls, tags)

    def sorted(self) -> list[str]:
        return sorted(self)

    def __repr__(self):
        return f"FeatureSet({self.sorted()!r})"


@dataclass(frozen=True)
class InputGroup:
    label: str
    arity: int
    description: str = ""

    def __post_init__(self):
        if int(self.arity) < 1:
            raise ParameterError(f"input group {self.label!r} needs arity >= 1")


@dataclass(frozen=True)
class Relation:
    """Abstracted transformation inside a gray box, tagged with the phenomena it encodes."""

    text: str
    tags: tuple[str, ...]

    def __post_init__(self):
        if not self.tags:
            raise ParameterError(f"relation {self.text!r} must reference at least one tag")
        for tag in self.tags:
            _check_tag(tag)
        object.__setattr__(self, "tags", tuple(sorted(set(self.tags))))


@dataclass(frozen=True)
class Output:
    label: str
    units: str


@dataclass(frozen=True)
class GrayBoxSpec:
    inputs: tuple[InputGroup, ...]
    relations: tuple[Relation, ...]
    outputs: tuple[Output, ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if not self.inputs or not self.outputs:
            raise ParameterError("a gray box needs at least one input group and one output")

    @property
    def input_count(self) -> int:
        return sum(group.arity for group in self.inputs)

    def referenced_tags(self) -> set[str]:
        return {tag for rel in self.relations for tag in rel.tags}


class Op(str, enum.Enum):
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="
    EQ = "="
    IN = "in"


_OP_ALIASES = {"≤": Op.LE, "≥": Op.GE, "==": Op.EQ, "in-set": Op.IN}


@dataclass(frozen=True)
class ValidityPredicate:
    """``scenario[parameter] <relation> threshold``; ``in`` takes a token set."""

    parameter: str
    relation: Op
    threshold: Union[float, str, frozenset]

    def __post_init__(self):
        rel = self.relation
        if not isinstance(rel, Op):
            rel = _OP_ALIASES.get(rel) or Op(rel)
        object.__setattr__(self, "relation", rel)
        if rel is Op.IN:
            thr = self.threshold
            thr = frozenset([thr]) if isinstance(thr, str) else frozenset(thr)
            object.__setattr__(self, "threshold", thr)

    def holds(self, params: Mapping[str, object]) -> bool:
        if self.parameter not in params:
            raise MissingParameter(
                f"validity predicate needs scenario parameter {self.parameter!r}"
            )
        value = params[self.parameter]
        rel, thr = self.relation, self.threshold
        if rel is Op.IN:
            return value in thr
        if rel is Op.EQ:
            return value == thr
        value = float(value)
        if rel is Op.LT:
            return value < thr
        if rel is Op.LE:
            return value <= thr
        if rel is Op.GT:
            return value > thr
        return value >= thr

    def describe(self) -> str:
        thr = self.threshold
        if isinstance(thr, frozenset):
            thr = "{" + ", ".join(sorted(thr)) + "}"
        return f"{self.parameter} {self.relation.value} {thr}"

    def to_json(self) -> dict:
        thr = self.threshold
        if isinstance(thr, frozenset):
            thr = sorted(thr)
        return {"parameter": self.parameter, "relation": self.relation.value, "threshold": thr}


@dataclass(frozen=True)
class ValidityFrame:
    """Conjunction of predicates; an empty frame is unconditionally valid."""

    predicates: tuple[ValidityPredicate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "predicates", tuple(self.predicates))

    def failures(self, params: Mapping[str, object]) -> list[ValidityPredicate]:
        return [p for p in self.predicates if not p.holds(params)]


@dataclass(frozen=True)
class CostProfile:
    """``compute_rank``: 1 closed-form algebra, 2 iterative loop, 3 time-domain integration."""

    input_count: int
    compute_rank: int

    def __post_init__(self):
        if self.input_count < 1:
            raise ParameterError("input_count must be >= 1")
        if self.compute_rank not in (1, 2, 3):
            raise ParameterError("compute_rank must be 1, 2 or 3")

    def key(self) -> tuple[int, int]:
        return (self.compute_rank, self.input_count)


@dataclass(frozen=True)
class ModelDescriptor:
    id: str
    features: FeatureSet
    gray_box: GrayBoxSpec
    frame: ValidityFrame = field(default_factory=ValidityFrame)
    cost: Optional[CostProfile] = None
    extends: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.features, FeatureSet):
            object.__setattr__(self, "features", FeatureSet(self.features))
        stray = self.gray_box.referenced_tags() - self.features
        if stray:
            raise ParameterError(
                f"{self.id}: gray-box relations reference tags outside the feature set: {sorted(stray)}"
            )
        if self.cost is None:
            raise ParameterError(f"{self.id}: a cost profile is required")
        if self.cost.input_count != self.gray_box.input_count:
            raise ParameterError(
                f"{self.id}: cost input_count {self.cost.input_count} does not match "
                f"gray-box arity total {self.gray_box.input_count}"
            )


@dataclass(frozen=True)
class Scenario:
    params: Mapping[str, object] = field(default_factory=dict)
    required_features: FeatureSet = field(default_factory=FeatureSet)

    def __post_init__(self):
        object.__setattr__(self, "params", dict(self.params))
        if not isinstance(self.required_features, FeatureSet):
            object.__setattr__(self, "required_features", FeatureSet(self.required_features))


@dataclass(frozen=True)
class Verdict:
    valid: bool
    failed_predicates: tuple[ValidityPredicate, ...] = ()
    missing_features: tuple[str, ...] = ()

    def __bool__(self):
        return self.valid


class FidelityRelation(enum.Enum):
    HIGHER = "Higher"
    LOWER = "Lower"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


class IncreaseKind(enum.Enum):
    ALGEBRAIC_EXTENSION = "AlgebraicExtension"
    REPLACEMENT = "Replacement"


def compare_fidelity(a: Iterable[str], b: Iterable[str]) -> FidelityRelation:
    """Relation of ``a`` to ``b`` under set inclusion of phenomena."""
    a = frozenset(a)
    b = frozenset(b)
    if a == b:
        return FidelityRelation.EQUAL
    if a > b:
        return FidelityRelation.HIGHER
    if a < b:
        return FidelityRelation.LOWER
    return FidelityRelation.INCOMPARABLE


def classify_increase(lower: ModelDescriptor, higher: ModelDescriptor) -> IncreaseKind:
    """Whether ``higher`` superposes terms onto ``lower`` or replaces it."""
    rel = compare_fidelity(higher.features, lower.features)
    if rel is not FidelityRelation.HIGHER:
        raise PreconditionViolation(
            f"{higher.id} is not of higher fidelity than {lower.id} ({rel.value})"
        )
    if higher.extends == lower.id:
        return IncreaseKind.ALGEBRAIC_EXTENSION
    return IncreaseKind.REPLACEMENT


def is_valid(model: ModelDescriptor, scenario: Scenario) -> Verdict:
    """Check feature coverage and the validity frame.

    Raises :class:`MissingParameter` if a frame predicate names a parameter
    the scenario does not define.
    """
    failed = tuple(model.frame.failures(scenario.params))
    missing = tuple(sorted(scenario.required_features - model.features))
    return Verdict(not failed and not missing, failed, missing)


def select_model(registry: Sequence[ModelDescriptor], scenario: Scenario) -> ModelDescriptor:
    """Lowest-fidelity valid model, ties broken by cost and then id.

    Among valid models, those with no strictly lower-fidelity valid model
    form the minimal set; incomparable models all stay in it. The cheapest
    member wins (compute rank, then input count), then the smallest id.
    """
    registry = list(registry)
    if not registry:
        raise PreconditionViolation("model registry is empty")
    valid = [m for m in registry if is_valid(m, scenario)]
    if not valid:
        raise NoValidModel(f"no registered model is valid for scenario {dict(scenario.params)!r}")
    minimal = [
        m for m in valid
        if not any(other.features < m.features for other in valid)
    ]
    return min(minimal, key=lambda m: (m.cost.key(), m.id))


def check_registry(models: Iterable[ModelDescriptor]) -> dict[str, ModelDescriptor]:
    """Index models by id, enforcing unique ids and well-formed ``extends`` links."""
    index: dict[str, ModelDescriptor] = {}
    for model in models:
        if model.id in index:
            raise ParameterError(f"duplicate model id {model.id!r}")
        index[model.id] = model
    for model in index.values():
        if model.extends is None:
            continue
        base = index.get(model.extends)
        if base is None:
            raise ParameterError(f"{model.id} extends unregistered model {model.extends!r}")
        if not base.features < model.features:
            raise ParameterError(
                f"{model.id} extends {base.id} but its features are not a strict superset"
            )
    return index


def _gray_box_document(model: ModelDescriptor) -> dict:
    gb = model.gray_box
    inputs = sorted(
        ({"label": g.label, "arity": g.arity, "description": g.description} for g in gb.inputs),
        key=lambda d: (d["label"], d["arity"], d["description"]),
    )
    relations = sorted(
        ({"text": r.text, "tags": list(r.tags)} for r in gb.relations),
        key=lambda d: (d["text"], d["tags"]),
    )
    outputs = sorted(
        ({"label": o.label, "units": o.units} for o in gb.outputs),
        key=lambda d: (d["label"], d["units"]),
    )
    frame = sorted(
        (p.to_json() for p in model.frame.predicates),
        key=lambda d: (d["parameter"], d["relation"], json.dumps(d["threshold"])),
    )
    return {
        "id": model.id,
        "features": model.features.sorted(),
        "inputs": inputs,
        "relations": relations,
        "outputs": outputs,
        "validity_frame": frame,
        "cost": {"input_count": model.cost.input_count, "compute_rank": model.cost.compute_rank},
        "extends": model.extends,
    }


def render_gray_box(model: ModelDescriptor, format: str = "text") -> str:
    """Render a model's gray box as canonical JSON (``"json"``/``"structured"``) or text."""
    doc = _gray_box_document(model)
    if format in ("json", "structured"):
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if format != "text":
        raise ParameterError(f"unknown gray-box format {format!r}")

    lines = [f"model {doc['id']}"]
    if doc["extends"]:
        lines.append(f"  extends: {doc['extends']}")
    lines.append(f"  features: {', '.join(doc['features'])}")
    lines.append("  inputs:")
    for g in doc["inputs"]:
        desc = f" - {g['description']}" if g["description"] else ""
        lines.append(f"    [{g['arity']}] {g['label']}{desc}")
    lines.append("  relations:")
    for r in doc["relations"]:
        lines.append(f"    {r['text']}  <{', '.join(r['tags'])}>")
    lines.append("  outputs:")
    for o in doc["outputs"]:
        lines.append(f"    {o['label']} [{o['units']}]")
    if model.frame.predicates:
        lines.append("  validity frame:")
        for pred in sorted(model.frame.predicates, key=lambda p: p.describe()):
            lines.append(f"    {pred.describe()}")
    else:
        lines.append("  validity frame: unconditional")
    lines.append(
        f"  cost: compute rank {doc['cost']['compute_rank']}, {doc['cost']['input_count']} inputs"
    )
    return "\n".join(lines) + "\n"

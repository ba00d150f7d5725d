"""Descriptors for the seven bundled models.

==================  =================================================
``beam.eb``         Euler-Bernoulli cantilever, valid for slender beams
``beam.te``         Timoshenko-Ehrenfest, extends ``beam.eb`` with shear
``smd.heuristic``   settling time ``4 / (zeta wn)``, underdamped steps
``smd.numeric``     settling time from the integrated response
``grade.rigid``     quasi-static gradeability, rigid suspension
``grade.spring``    extends ``grade.rigid`` with spring settling
``grade.dynamic``   time-domain gradeability (replacement model)
==================  =================================================
"""

from __future__ import annotations

from .core import (
    CostProfile,
    FeatureSet,
    GrayBoxSpec,
    InputGroup,
    ModelDescriptor,
    Output,
    Relation,
    ValidityFrame,
    ValidityPredicate,
    check_registry,
)
from .errors import UnknownModel

__all__ = ["EB_SLENDERNESS_MIN", "HEURISTIC_ZETA_MAX", "MODELS", "REGISTRY", "get_model", "model_ids"]

EB_SLENDERNESS_MIN = 10.0
HEURISTIC_ZETA_MAX = 0.7


def _descriptor(id, features, inputs, relations, outputs, compute_rank, frame=(), extends=None):
    gray_box = GrayBoxSpec(
        inputs=[InputGroup(*g) for g in inputs],
        relations=[Relation(text, tuple(tags)) for text, tags in relations],
        outputs=[Output(*o) for o in outputs],
    )
    return ModelDescriptor(
        id=id,
        features=FeatureSet(features),
        gray_box=gray_box,
        frame=ValidityFrame([ValidityPredicate(*p) for p in frame]),
        cost=CostProfile(gray_box.input_count, compute_rank),
        extends=extends,
    )


_BEAM_OUTPUTS = [("angular deflection theta(x)", "rad"), ("vertical deflection v(x)", "m")]
_BENDING = (
    "theta = P (L^2 - x^2) / (2 E I); v = P (-x^3 + 3 L^2 x - 2 L^3) / (6 E I)",
    ["bending-deflection"],
)

BEAM_EB = _descriptor(
    "beam.eb",
    ["bending-deflection"],
    inputs=[
        ("Tip load", 1, "point load P at the free end"),
        ("Young's modulus", 1, "E"),
        ("Beam length", 1, "L"),
        ("Cross section", 2, "second moment I and height h"),
    ],
    relations=[_BENDING],
    outputs=_BEAM_OUTPUTS,
    compute_rank=1,
    frame=[("slenderness", ">=", EB_SLENDERNESS_MIN)],
)

BEAM_TE = _descriptor(
    "beam.te",
    ["bending-deflection", "shear-deflection"],
    inputs=[
        ("Tip load", 1, "point load P at the free end"),
        ("Young's modulus", 1, "E"),
        ("Beam length", 1, "L"),
        ("Cross section", 3, "second moment I, area A and height h"),
        ("Shear properties", 2, "shear modulus G (or Poisson ratio) and correction factor kappa"),
    ],
    relations=[
        _BENDING,
        ("shear terms superposed: theta += P / (kappa A G); v -= P (L - x) / (kappa A G)",
         ["shear-deflection"]),
    ],
    outputs=_BEAM_OUTPUTS,
    compute_rank=1,
    extends="beam.eb",
)

SMD_HEURISTIC = _descriptor(
    "smd.heuristic",
    ["modal-parameters", "step-forcing"],
    inputs=[
        ("System parameters", 3, "sprung mass m, damping rate c, spring rate k"),
        ("Step forcing", 1, "step magnitude F0"),
    ],
    relations=[
        ("wn = sqrt(k / m); zeta = c / (2 sqrt(k m))", ["modal-parameters"]),
        ("t_s = 4 / (zeta wn), assuming a step input", ["modal-parameters", "step-forcing"]),
    ],
    outputs=[("settling time t_s", "s")],
    compute_rank=1,
    frame=[("zeta", "<=", HEURISTIC_ZETA_MAX), ("forcing", "=", "step")],
)

SMD_NUMERIC = _descriptor(
    "smd.numeric",
    ["modal-parameters", "step-forcing", "energy-dissipation-dynamics", "time-domain-integration"],
    inputs=[
        ("System parameters", 3, "sprung mass m, damping rate c, spring rate k"),
        ("Initial conditions", 2, "displacement and velocity at rest"),
        ("Step forcing", 1, "step magnitude F0"),
        ("Settling criterion", 2, "band fraction and simulated horizon"),
        ("Solver tolerances", 2, "relative and absolute tolerance"),
    ],
    relations=[
        ("horizon from the slowest pole of wn, zeta", ["modal-parameters"]),
        ("m y'' + c y' + k y = F0 integrated by an adaptive 2(3) Runge-Kutta pair",
         ["energy-dissipation-dynamics", "step-forcing", "time-domain-integration"]),
        ("t_s = last exit of y(t) from the band around F0 / k", ["time-domain-integration"]),
    ],
    outputs=[("settling time t_s", "s")],
    compute_rank=3,
    frame=[("zeta", ">", 0.0)],
)

_RIGID_FEATURES = [
    "coulomb-friction",
    "quasi-static-grade-load-distribution",
    "tip-over-stability",
    "traction-limit",
    "torque-limit",
]
_SPRING_FEATURES = _RIGID_FEATURES + ["suspension-spring-settling"]
_DYNAMIC_FEATURES = _SPRING_FEATURES + [
    "dynamic-weight-transfer",
    "engine-torque-map",
    "torque-converter",
    "suspension-damping",
    "pitch-dynamics",
    "time-domain-integration",
]

_VEHICLE_INPUTS = [
    ("Vehicle mass", 1, "m"),
    ("Location of wheel centers", 2, "wheelbase and CG-to-front-axle distance"),
    ("CG height", 1, "h_cg"),
    ("Tire-ground friction", 1, "Coulomb coefficient mu"),
]
_GRADE_RELATIONS = [
    ("axle loads from quasi-static moment balance on the grade",
     ["quasi-static-grade-load-distribution"]),
    ("tip-over when the front axle load reaches zero", ["tip-over-stability"]),
    ("required force m g sin(alpha) against drivetrain bound T_max G_r / r_w",
     ["torque-limit"]),
    ("required force against friction bound mu N_r", ["coulomb-friction", "traction-limit"]),
]
_GRADE_OUTPUTS = [("critical grade", "%"), ("failure mode", "-")]

GRADE_RIGID = _descriptor(
    "grade.rigid",
    _RIGID_FEATURES,
    inputs=_VEHICLE_INPUTS + [("Drivetrain", 3, "T_max, G_r, r_w")],
    relations=_GRADE_RELATIONS + [("sweep grades until a check fails", ["tip-over-stability"])],
    outputs=_GRADE_OUTPUTS,
    compute_rank=2,
)

GRADE_SPRING = _descriptor(
    "grade.spring",
    _SPRING_FEATURES,
    inputs=_VEHICLE_INPUTS + [
        ("Drivetrain", 3, "T_max, G_r, r_w"),
        ("Suspension spring rates", 2, "k_f, k_r"),
    ],
    relations=_GRADE_RELATIONS + [
        ("sub-loop iterates spring deflections to equilibrium before the checks",
         ["suspension-spring-settling"]),
    ],
    outputs=_GRADE_OUTPUTS,
    compute_rank=2,
    extends="grade.rigid",
)

GRADE_DYNAMIC = _descriptor(
    "grade.dynamic",
    _DYNAMIC_FEATURES,
    inputs=_VEHICLE_INPUTS + [
        ("Drivetrain", 3, "T_max cap on the torque map, G_r, r_w (lowest gear)"),
        ("Engine torque map", 6, "rpm breakpoints and torque values"),
        ("Torque converter", 2, "ramp time and stall fraction"),
        ("Suspension spring rates", 2, "k_f, k_r"),
        ("Suspension damping", 2, "c_f, c_r"),
        ("Pitch inertia", 1, "I_yy"),
        ("Test course", 2, "success distance and time limit"),
    ],
    relations=[
        ("engine torque from rpm lookup capped at T_max, scaled by the converter ramp",
         ["engine-torque-map", "torque-converter"]),
        ("tractive force min(T G_r / r_w, mu N_r)", ["coulomb-friction", "torque-limit", "traction-limit"]),
        ("axle loads from spring and damper forces", ["suspension-spring-settling", "suspension-damping"]),
        ("pitch and heave driven by axle forces and the tractive moment",
         ["dynamic-weight-transfer", "pitch-dynamics", "quasi-static-grade-load-distribution"]),
        ("climb from rest integrated in time; tip-over when the front axle unloads",
         ["time-domain-integration", "tip-over-stability"]),
    ],
    outputs=_GRADE_OUTPUTS,
    compute_rank=3,
)

MODELS = (BEAM_EB, BEAM_TE, SMD_HEURISTIC, SMD_NUMERIC, GRADE_RIGID, GRADE_SPRING, GRADE_DYNAMIC)
REGISTRY = check_registry(MODELS)

# published input counts of comparable gradeability tiers; metadata only, not enforced
REFERENCE_INPUT_COUNTS = {"grade.rigid": 9, "grade.spring": 11, "grade.dynamic": 22}


def model_ids() -> list[str]:
    return sorted(REGISTRY)


def get_model(model_id: str) -> ModelDescriptor:
    try:
        return REGISTRY[model_id]
    except KeyError:
        raise UnknownModel(f"unknown model {model_id!r}; known: {', '.join(model_ids())}") from None

"""Multi-fidelity physics models with a feature-set fidelity framework.

Three model families at explicit fidelity tiers (cantilever beams,
spring-mass-damper settling time, vehicle gradeability), the metadata that
describes them, and the operations that compare and select among them.
"""

from .core import (
    FeatureSet,
    FidelityRelation,
    IncreaseKind,
    ModelDescriptor,
    Scenario,
    classify_increase,
    compare_fidelity,
    is_valid,
    register_tag,
    render_gray_box,
    select_model,
)
from .numerics import SolverConfig, Trajectory, bisection, fixed_point, integrate_rk23
from .registry import MODELS, REGISTRY, get_model

__version__ = "0.1.0"

__all__ = [
    "FeatureSet",
    "FidelityRelation",
    "IncreaseKind",
    "ModelDescriptor",
    "Scenario",
    "classify_increase",
    "compare_fidelity",
    "is_valid",
    "register_tag",
    "render_gray_box",
    "select_model",
    "SolverConfig",
    "Trajectory",
    "bisection",
    "fixed_point",
    "integrate_rk23",
    "MODELS",
    "REGISTRY",
    "get_model",
]

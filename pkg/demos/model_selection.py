"""
Feature sets, fidelity and model selection
==========================================

Each registered model declares the physical phenomena it includes. One
model is of higher fidelity than another when its phenomena strictly
contain the other's; models covering different phenomena are simply not
comparable. Selection picks the least detailed model that is still valid.
"""

import itertools

from fidelity_models.core import (
    FidelityRelation,
    IncreaseKind,
    Scenario,
    classify_increase,
    compare_fidelity,
    is_valid,
    render_gray_box,
    select_model,
)
from fidelity_models.registry import MODELS, get_model

###############################################################################
# The fidelity relation between every pair of registered models.
ids = [m.id for m in MODELS]
width = max(map(len, ids)) + 1
print(" " * width + "".join(f"{i[:10]:>11}" for i in ids))
for a in MODELS:
    cells = []
    for b in MODELS:
        rel = compare_fidelity(a.features, b.features)
        cells.append(f"{rel.value[:10]:>11}")
    print(f"{a.id:<{width}}" + "".join(cells))

###############################################################################
# Where fidelity increases, did the richer model add terms to the simpler one,
# or did it have to be rebuilt from scratch?
print()
for lo, hi in itertools.permutations(MODELS, 2):
    if compare_fidelity(hi.features, lo.features) is FidelityRelation.HIGHER:
        kind = classify_increase(lo, hi)
        arrow = "adds terms to" if kind is IncreaseKind.ALGEBRAIC_EXTENSION else "replaces"
        print(f"{hi.id} {arrow} {lo.id}")

###############################################################################
# Validity verdicts list every reason a model is rejected.
heuristic = get_model("smd.heuristic")
verdict = is_valid(heuristic, Scenario({"zeta": 3.0, "forcing": "step"}, ["energy-dissipation-dynamics"]))
print()
print("smd.heuristic at zeta = 3:", "valid" if verdict else "invalid")
for p in verdict.failed_predicates:
    print("  fails", p.describe())
for tag in verdict.missing_features:
    print("  lacks", tag)

###############################################################################
# Selection across the spring-mass-damper family.
smd = [get_model("smd.heuristic"), get_model("smd.numeric")]
for zeta in (0.1, 0.7, 1.5, 3.0):
    scenario = Scenario({"zeta": zeta, "forcing": "step"}, ["step-forcing"])
    print(f"zeta = {zeta:<4}: {select_model(smd, scenario).id}")

###############################################################################
# The gray box of the dynamic gradeability model: what goes in, how it is
# used and what comes out.
print()
print(render_gray_box(get_model("grade.dynamic")), end="")

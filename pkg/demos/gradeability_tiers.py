"""
Gradeability at three levels of fidelity
========================================

How steep a slope can a vehicle climb from rest? The rigid tier answers
from quasi-static axle loads. The spring tier first lets the suspension
settle on the slope. The dynamic tier drives the vehicle up the slope in
time with an engine map, a torque converter ramp and a pitching body.
"""

from pathlib import Path

from fidelity_models.gradeability import (
    Bisection,
    Sweep,
    Tier,
    analytic_rigid_critical,
    critical_grade,
    rigid_feasibility,
    spring_equilibrium,
)
from fidelity_models.harness import gradeability_report, report_text
from fidelity_models.params import load_document, vehicle_inputs

here = Path(__file__).resolve().parent
doc = load_document(here / "params" / "vehicle.json")
vehicle, springs, dynamic, solver = vehicle_inputs(doc)

###############################################################################
# Rigid tier, with its closed-form answer alongside.
exact = analytic_rigid_critical(vehicle)
print(f"closed form: {exact.critical_grade:.3f}% ({exact.failure_mode.value})")
for method in (Sweep(0.1), Bisection(tol=0.01)):
    r = critical_grade(Tier.RIGID, method, vehicle)
    print(f"rigid {r.solver:<9}: {r.critical_grade:.3f}% after {r.evaluations} evaluations")

###############################################################################
# On a 30% slope the springs compress unevenly, the body pitches nose up and
# load shifts rearward. The driven rear axle gains grip, but the CG also
# moves back, so the net effect on the critical grade is small.
N_f, N_r = rigid_feasibility(30.0, vehicle).N_f, rigid_feasibility(30.0, vehicle).N_r
state = spring_equilibrium(30.0, vehicle, springs)
print()
print(f"30% slope, rigid : N_f = {N_f:8.1f} N, N_r = {N_r:8.1f} N")
print(f"30% slope, spring: N_f = {state.N_f:8.1f} N, N_r = {state.N_r:8.1f} N, "
      f"pitch = {1e3 * state.pitch:.2f} mrad")

###############################################################################
# All three tiers with the same solver, laid out like a comparison table.
print()
print(report_text(gradeability_report(doc, Bisection(tol=0.01))), end="")

###############################################################################
# With very stiff springs, heavy damping, a flat engine map and no converter
# ramp, the dynamic tier collapses onto the quasi-static answer.
limit = load_document(here / "params" / "vehicle_limit.json")
print()
print(report_text(gradeability_report(limit, Bisection(tol=0.05))), end="")

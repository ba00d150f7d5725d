"""
Euler-Bernoulli versus Timoshenko-Ehrenfest cantilevers
=======================================================

A cantilever with a tip load is modelled twice. The Euler-Bernoulli model
keeps only bending; the Timoshenko-Ehrenfest model adds shear on top of the
same bending terms. For slender beams the two agree, for stubby beams the
shear term dominates and the bending-only model is no longer trustworthy.
"""

import numpy as np

from fidelity_models.beam import BeamLoadCase, RectangularSection, eb_profile, te_profile
from fidelity_models.core import Scenario, classify_increase, select_model
from fidelity_models.registry import get_model

# A steel section 50 mm wide and 100 mm tall, loaded with 1 kN at the free end.
section = RectangularSection(b=0.05, h=0.1)
long_beam = BeamLoadCase(P=1000.0, E=200e9, L=1.0, section=section, nu=0.3)
short_beam = BeamLoadCase(P=1000.0, E=200e9, L=0.1, section=section, nu=0.3)

###############################################################################
# Deflection along the long beam. The load sits at x = 0 and the clamp at x = L,
# so both models vanish at the right end.
xs = np.linspace(0.0, long_beam.L, 6)
eb, te = eb_profile(long_beam, xs), te_profile(long_beam, xs)
print("long beam, slenderness", long_beam.slenderness)
print(f"{'x [m]':>6} {'v_EB [mm]':>11} {'v_TE [mm]':>11}")
for x, a, b in zip(xs, eb.v, te.v):
    print(f"{x:6.2f} {1e3 * a:11.5f} {1e3 * b:11.5f}")

###############################################################################
# The gap at the tip as a function of slenderness. With nu = 0.3 and the
# rectangular shear factor 5/6, the shear share of the tip deflection is
# 0.78 (h/L)^2.
print()
print(f"{'L/h':>5} {'EB tip [um]':>12} {'TE tip [um]':>12} {'gap':>8}")
for s in (1, 2, 5, 10, 20):
    case = BeamLoadCase(P=1000.0, E=200e9, L=s * section.h, section=section, nu=0.3)
    a, b = eb_profile(case, 0.0).v[0], te_profile(case, 0.0).v[0]
    print(f"{s:5d} {1e6 * a:12.4f} {1e6 * b:12.4f} {100 * (b - a) / a:7.2f}%")

###############################################################################
# Which model should be used? The registry answers with the lowest-fidelity
# model whose validity frame covers the scenario.
beams = [get_model("beam.eb"), get_model("beam.te")]
for case in (long_beam, short_beam):
    scenario = Scenario({"slenderness": case.slenderness}, ["bending-deflection"])
    print(f"slenderness {case.slenderness:g}: use {select_model(beams, scenario).id}")

# The shear model is built by adding terms to the bending model.
print("increase type:", classify_increase(*beams).value)

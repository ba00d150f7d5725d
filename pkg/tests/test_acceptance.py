"""Acceptance criteria, one check per criterion, each with its runtime budget.

Every check returns ``(passed, detail)``; the pytest wrapper records a
``PASS``/``FAIL`` line (shown in the terminal summary) and asserts. Run this
file directly to print the lines without pytest.

Frozen oracle values below come from independent computations that live in
the unit tests: the settling times from a 1e-4 s scan of the textbook
step-response formula, the tip-deflection ratio from the closed form
3EI/(kappa A G L^2).
"""

import itertools
import math
import random
import sys
import time

import numpy as np
import pytest

from fidelity_models.beam import BeamLoadCase, RectangularSection, eb_profile, te_profile
from fidelity_models.core import (
    VOCABULARY,
    FeatureSet,
    FidelityRelation,
    IncreaseKind,
    Scenario,
    classify_increase,
    compare_fidelity,
    is_valid,
    select_model,
)
from fidelity_models.gradeability import (
    Bisection,
    DynamicParams,
    SpringParams,
    Sweep,
    Tier,
    VehicleParams,
    analytic_rigid_critical,
    critical_grade,
)
from fidelity_models.harness import parse_sweep, run_compare
from fidelity_models.numerics import SolverConfig, integrate_rk23
from fidelity_models.registry import MODELS, get_model
from fidelity_models.sdof import (
    SmdParams,
    StepForcing,
    heuristic_settling_time,
    numeric_settling_time,
    slowest_time_constant,
)

# frozen oracle values
ORACLE_TS_REFERENCE = 3.8384  # (m, c, k) = (1, 2, 100), 2% band, dense scan
ORACLE_TS_ZETA3 = 2.2976  # (m, c, k) = (1, 60, 100), 2% band, dense scan
RATIO_COEFFICIENT = 0.78  # 3 E I / (kappa A G L^2) (L/h)^2 for nu = 0.3, kappa = 5/6

H = FidelityRelation.HIGHER
L = FidelityRelation.LOWER
E = FidelityRelation.EQUAL
I = FidelityRelation.INCOMPARABLE

REFERENCE_VEHICLE = VehicleParams(
    m=3500.0, wheelbase=3.3, l_f=1.6, h_cg=0.9, r_w=0.47, T_max=500.0, G_r=20.0, mu=0.7
)
REFERENCE_DYNAMIC = DynamicParams(
    torque_rpm=(0.0, 1000.0, 2000.0, 3000.0), torque_nm=(400.0, 500.0, 500.0, 450.0),
    c_f=15000.0, c_r=15000.0, I_yy=5000.0,
)


def _settling_tolerance(p, t_s, solver=SolverConfig()):
    """max(1e-3 s, two widths of the integrator step that contains t_s)."""
    F0 = 100.0

    def rhs(t, y):
        return np.array((y[1], (F0 - p.c * y[1] - p.k * y[0]) / p.m))

    times = integrate_rk23(rhs, 0.0, np.zeros(2), 12 * slowest_time_constant(p), solver).times
    i = min(int(np.searchsorted(times, t_s)), len(times) - 1)
    return max(1e-3, 2 * float(times[i] - times[max(i - 1, 0)]))


def ac1():
    rng = np.random.default_rng(20240601)
    worst = 0.0
    for _ in range(100):
        h = rng.uniform(0.01, 0.5)
        case = BeamLoadCase(
            P=rng.uniform(1.0, 1e5), E=rng.uniform(1e9, 400e9), L=h * rng.uniform(1.0, 30.0),
            section=RectangularSection(rng.uniform(0.01, 0.5), h),
            nu=rng.uniform(0.0, 0.49), kappa=rng.uniform(0.5, 1.0),
        )
        xs = np.sort(rng.uniform(0.0, case.L, 50))
        diff = te_profile(case, xs).v - eb_profile(case, xs).v
        exact = -case.P * (case.L - xs) / (case.kappa * case.A * case.shear_modulus)
        worst = max(worst, float(np.max(np.abs(diff - exact) / np.abs(exact))))
    return worst <= 1e-12, f"max relative error {worst:.2e} (limit 1e-12)"


def ac2():
    section = RectangularSection(0.05, 0.1)
    worst = 0.0
    at = {}
    for s in np.concatenate([np.linspace(1.0, 30.0, 59), [10.0, 1.0]]):
        case = BeamLoadCase(P=1000.0, E=200e9, L=s * 0.1, section=section, nu=0.3, kappa=5 / 6)
        eb, te = eb_profile(case, 0.0).v[0], te_profile(case, 0.0).v[0]
        rel = (te - eb) / eb
        expected = RATIO_COEFFICIENT / s**2
        worst = max(worst, abs(rel - expected) / expected)
        at[float(s)] = 100 * rel
    ok = worst <= 1e-6 and abs(at[10.0] - 0.78) <= 0.01 and abs(at[1.0] - 78.0) <= 1.0
    return ok, f"ratio error {worst:.1e}; {at[10.0]:.4f}% at s=10, {at[1.0]:.2f}% at s=1"


def ac3():
    p, f = SmdParams(1.0, 2.0, 100.0), StepForcing(100.0)
    heur = heuristic_settling_time(p, f).t_s
    num = numeric_settling_time(p, f).t_s
    tol = _settling_tolerance(p, num)
    ok = heur == 4.0 and abs(num - ORACLE_TS_REFERENCE) <= tol and abs(num - heur) / heur < 0.15
    return ok, (f"heuristic {heur!r} s; numeric {num:.5f} s vs oracle {ORACLE_TS_REFERENCE} "
                f"(tol {tol:.1e}); gap {100 * abs(num - heur) / heur:.1f}%")


def ac4():
    f = StepForcing(100.0)
    p3 = SmdParams.from_modal(10.0, 3.0)
    num3 = numeric_settling_time(p3, f).t_s
    heur3 = heuristic_settling_time(p3).t_s
    zetas = (1.5, 2.0, 3.0, 5.0)
    heur = [heuristic_settling_time(SmdParams.from_modal(10.0, z)).t_s for z in zetas]
    num = [numeric_settling_time(SmdParams.from_modal(10.0, z), f).t_s for z in zetas]
    ok = (
        abs(num3 - 2.297) <= 0.01
        and abs(heur3 - 0.133) <= 5e-4
        and num3 / heur3 > 5
        and all(b < a for a, b in zip(heur, heur[1:]))
        and all(b > a for a, b in zip(num, num[1:]))
        and abs(num3 - ORACLE_TS_ZETA3) <= _settling_tolerance(p3, num3)
    )
    return ok, (f"zeta=3: numeric {num3:.4f} s, heuristic {heur3:.4f} s, ratio {num3 / heur3:.1f}; "
                f"numeric over zeta {[round(t, 3) for t in num]}")


def _random_vehicle(rng):
    wb = rng.uniform(2.0, 4.5)
    return VehicleParams(
        m=rng.uniform(800, 12000), wheelbase=wb, l_f=wb * rng.uniform(0.25, 0.75),
        h_cg=rng.uniform(0.3, 1.6), r_w=rng.uniform(0.25, 0.6), T_max=rng.uniform(50, 1500),
        G_r=rng.uniform(4, 40), mu=rng.uniform(0.1, 1.2),
    )


def ac5():
    inc, tol = 0.1, 0.01
    agree = max(inc, 2 * tol)
    rng = np.random.default_rng(5)
    worst_oracle = worst_agree = 0.0
    for _ in range(25):
        p = _random_vehicle(rng)
        springs = SpringParams(*rng.uniform(5e4, 5e5, 2))
        exact = analytic_rigid_critical(p).critical_grade
        for tier in (Tier.RIGID, Tier.SPRING):
            s = critical_grade(tier, Sweep(inc), p, springs).critical_grade
            b = critical_grade(tier, Bisection(tol=tol), p, springs).critical_grade
            worst_agree = max(worst_agree, abs(s - b))
            if tier is Tier.RIGID:
                worst_oracle = max(worst_oracle, abs(s - exact), abs(b - exact))
    springs = SpringParams(2e5, 2e5)
    s = critical_grade(Tier.DYNAMIC, Sweep(inc), REFERENCE_VEHICLE, springs, REFERENCE_DYNAMIC)
    b = critical_grade(Tier.DYNAMIC, Bisection(tol=tol), REFERENCE_VEHICLE, springs, REFERENCE_DYNAMIC)
    worst_agree = max(worst_agree, abs(s.critical_grade - b.critical_grade))
    ok = worst_oracle <= inc and worst_agree <= agree
    return ok, (f"rigid vs oracle max {worst_oracle:.4f} pts (limit {inc}); solver gap max "
                f"{worst_agree:.4f} pts (limit {agree}); dynamic {s.critical_grade:.1f}/{b.critical_grade:.3f}")


def ac6():
    p = REFERENCE_VEHICLE
    rigid = critical_grade(Tier.RIGID, Bisection(tol=0.01), p).critical_grade
    spring = critical_grade(Tier.SPRING, Bisection(tol=0.01), p, SpringParams(1e12, 1e12)).critical_grade
    degenerate = DynamicParams(
        torque_rpm=(0.0,), torque_nm=(p.T_max,), c_f=2e6, c_r=2e6, I_yy=5000.0, converter_ramp=0.0,
    )
    dynamic = critical_grade(
        Tier.DYNAMIC, Bisection(tol=0.01), p, SpringParams(1e9, 1e9), degenerate
    ).critical_grade
    ok = abs(spring - rigid) <= 0.1 and abs(dynamic - rigid) <= 3.0
    return ok, f"rigid {rigid:.3f}, stiff spring {spring:.3f}, degenerate dynamic {dynamic:.3f} (%)"


def ac7():
    tags = sorted(VOCABULARY)
    rnd = random.Random(7)
    sets = [m.features for m in MODELS]
    sets += [FeatureSet(rnd.sample(tags, rnd.randint(0, len(tags)))) for _ in range(200)]
    n = len(sets)
    rel = [[compare_fidelity(a, b) for b in sets] for a in sets]
    ok = all(rel[i][i] is E for i in range(n))
    for i, j in itertools.product(range(n), repeat=2):
        ok &= (rel[i][j] is H) == (rel[j][i] is L)
        ok &= (rel[i][j] is E) == (rel[j][i] is E) == (sets[i] == sets[j])
        ok &= not (rel[i][j] is H and rel[j][i] is H)
    higher = [[j for j in range(n) if rel[j][i] is H] for i in range(n)]
    chains = 0
    for i in range(n):
        for j in higher[i]:
            for k in higher[j]:
                chains += 1
                ok &= rel[k][i] is H
    scenarios = [
        Scenario({"slenderness": s, "zeta": z, "forcing": fz}, FeatureSet(req))
        for s, z, fz, req in itertools.product(
            (1.0, 9.99, 10.0, 50.0), (0.1, 0.7, 3.0), ("step", "ramp"),
            ((), ("bending-deflection",), ("step-forcing",), ("tip-over-stability",)),
        )
    ]
    models = list(MODELS)
    for sc in scenarios:
        chosen = select_model(models, sc)
        ok &= bool(is_valid(chosen, sc))
        for _ in range(5):
            shuffled = models[:]
            rnd.shuffle(shuffled)
            ok &= select_model(shuffled, sc) is chosen
    beams = [get_model("beam.eb"), get_model("beam.te")]
    long_beam = select_model(beams, Scenario({"slenderness": 10.0}, FeatureSet(["bending-deflection"]))).id
    short_beam = select_model(beams, Scenario({"slenderness": 1.0}, FeatureSet(["bending-deflection"]))).id
    ok &= long_beam == "beam.eb" and short_beam == "beam.te"
    return bool(ok), (f"{n} feature sets, {chains} chains, {len(scenarios)} scenarios x 5 permutations; "
                      f"long beam -> {long_beam}, short beam -> {short_beam}")


def ac8():
    pairs = [
        ("beam.eb", "beam.te", IncreaseKind.ALGEBRAIC_EXTENSION),
        ("smd.heuristic", "smd.numeric", IncreaseKind.REPLACEMENT),
        ("grade.rigid", "grade.spring", IncreaseKind.ALGEBRAIC_EXTENSION),
        ("grade.spring", "grade.dynamic", IncreaseKind.REPLACEMENT),
    ]
    got = [classify_increase(get_model(lo), get_model(hi)) for lo, hi, _ in pairs]
    ok = all(g is want for g, (_, _, want) in zip(got, pairs))
    return ok, ", ".join(f"{lo}->{hi}: {g.value}" for (lo, hi, _), g in zip(pairs, got))


def ac9():
    smd = {"m": 1.0, "c": 2.0, "k": 100.0, "F0": 100.0}
    beam = {"P": 1000.0, "E": 200e9, "L": 1.0, "section": {"b": 0.05, "h": 0.1}, "nu": 0.3}
    jobs = [
        (("smd.heuristic", "smd.numeric"), smd, parse_sweep("zeta=0.05:3.0:40"), "settling_time"),
        (("beam.eb", "beam.te"), beam, parse_sweep("L=0.1:1.0:10"), "tip_deflection"),
    ]
    rng = np.random.default_rng(9)
    ok = True
    variants = 0
    for models, base, sweep, quantity in jobs:
        reference = run_compare(models, base, sweep, quantity).to_csv().encode("utf-8")
        runs = [run_compare(models, base, sweep, quantity).to_csv()]
        runs.append(run_compare(models, base, sweep, quantity, order=list(range(sweep.n))[::-1]).to_csv())
        runs.append(run_compare(models, base, sweep, quantity, order=list(rng.permutation(sweep.n))).to_csv())
        runs.append(run_compare(models, base, sweep, quantity, workers=4).to_csv())
        variants += len(runs)
        ok &= all(r.encode("utf-8") == reference for r in runs)
    return ok, f"{variants} reruns across 2 comparisons byte-identical"


def ac10():
    cfg = SolverConfig(rtol=1e-3, atol=1e-9)
    worst = 0.0
    cases = [
        (lambda t, y: np.array([2.0 * t + 1.0]), lambda t: [t * t + t]),
        (lambda t, y: np.array([y[1], 2.0]), lambda t: [t * t, 2.0 * t]),
    ]
    for rhs, exact in cases:
        for t0, t1 in ((0.0, 1.0), (-2.0, 3.5)):
            y = integrate_rk23(rhs, t0, exact(t0), t1, cfg).states[-1, 0]
            worst = max(worst, abs(y - exact(t1)[0]))
    errors = []
    for level in range(4):
        scale = 0.5**level
        y = integrate_rk23(lambda t, y: -y, 0.0, [1.0], 1.0, SolverConfig(rtol=1e-5 * scale, atol=1e-8 * scale))
        errors.append(abs(y.states[-1, 0] - math.exp(-1.0)))
    monotone = all(b <= a for a, b in zip(errors, errors[1:]))
    ok = worst <= cfg.atol and monotone
    return ok, f"quadratic error {worst:.1e}; e^-1 errors {', '.join(f'{e:.1e}' for e in errors)}"


CRITERIA = [
    (1, "beam superposition identity", ac1, 1.0),
    (2, "beam divergence vs slenderness", ac2, 1.0),
    (3, "settling-time heuristic", ac3, 5.0),
    (4, "overdamped divergence", ac4, 10.0),
    (5, "gradeability oracle equivalence", ac5, 30.0),
    (6, "tier-limit equivalence", ac6, 60.0),
    (7, "fidelity framework", ac7, 1.0),
    (8, "increase classification", ac8, 1.0),
    (9, "harness determinism", ac9, 10.0),
    (10, "ODE kernel", ac10, 5.0),
]


def evaluate(number, title, check, budget):
    start = time.perf_counter()
    passed, detail = check()
    elapsed = time.perf_counter() - start
    in_budget = elapsed < budget
    status = "PASS" if passed and in_budget else "FAIL"
    line = f"{status} AC{number}: {title}: {detail} [{elapsed:.2f} s, budget {budget:g} s]"
    return passed and in_budget, line


@pytest.mark.parametrize("number, title, check, budget", CRITERIA, ids=[f"AC{c[0]}" for c in CRITERIA])
def test_acceptance(number, title, check, budget, acceptance_log):
    ok, line = evaluate(number, title, check, budget)
    print(line)
    acceptance_log.append(line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)

"""Longitudinal gradeability at three fidelity tiers.

The vehicle starts from rest on a constant grade and must climb it with
the rear axle driven in a single gear. Failure is a tip-over (front axle
unloads) or a shortfall of tractive force, limited either by the
drivetrain or by Coulomb friction at the rear tires.

* ``rigid``: quasi-static axle loads on a rigid chassis.
* ``spring``: the same checks after the suspension springs settle to
  equilibrium, solved by fixed-point iteration.
* ``dynamic``: a planar time-domain model (travel, heave, pitch) with an
  engine torque map, a torque-converter ramp and damped suspension.

Grades are in percent, ``100 * tan(alpha)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    NeverFails,
    ParameterError,
    PreconditionViolation,
    TipOverDuringSettling,
)
from .numerics import OdeSystem, SolverConfig, bisection, fixed_point, integrate_rk23

__all__ = [
    "GRAVITY",
    "FailureMode",
    "Tier",
    "VehicleParams",
    "SpringParams",
    "DynamicParams",
    "GradeFeasibility",
    "GradeResult",
    "SpringState",
    "grade_angle",
    "rigid_normals",
    "rigid_feasibility",
    "analytic_rigid_critical",
    "spring_equilibrium",
    "spring_feasibility",
    "dynamic_feasibility",
    "Sweep",
    "Bisection",
    "critical_grade",
]

GRAVITY = 9.80665
SWEEP_LIMIT = 400.0


class FailureMode(str, enum.Enum):
    TIP_OVER = "TipOver"
    TRACTION_LIMIT = "TractionLimit"
    TORQUE_LIMIT = "TorqueLimit"
    TIMEOUT = "Timeout"


class Tier(str, enum.Enum):
    RIGID = "rigid"
    SPRING = "spring"
    DYNAMIC = "dynamic"


@dataclass(frozen=True)
class VehicleParams:
    """Rigid-body vehicle data. ``mu`` and ``T_max`` may be zero."""

    m: float
    wheelbase: float
    l_f: float
    h_cg: float
    r_w: float
    T_max: float
    G_r: float
    mu: float

    def __post_init__(self):
        for name in ("m", "wheelbase", "l_f", "h_cg", "r_w", "G_r"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive, got {value!r}")
        for name in ("T_max", "mu"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ParameterError(f"{name} must be non-negative, got {value!r}")
        if not self.l_f < self.wheelbase:
            raise ParameterError("CG must lie between the axles (l_f < wheelbase)")

    @property
    def l_r(self) -> float:
        return self.wheelbase - self.l_f

    @property
    def weight(self) -> float:
        return self.m * GRAVITY

    @property
    def drive_force_limit(self) -> float:
        """Largest tractive force the drivetrain can deliver, T_max G_r / r_w."""
        return self.T_max * self.G_r / self.r_w


@dataclass(frozen=True)
class SpringParams:
    k_f: float
    k_r: float

    def __post_init__(self):
        for name in ("k_f", "k_r"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"spring rate {name} must be positive, got {value!r}")


@dataclass(frozen=True)
class DynamicParams:
    """Inputs used only by the time-domain tier.

    ``torque_rpm``/``torque_nm`` form the engine map, interpolated linearly
    and held constant beyond the end points. Delivered torque ramps from
    ``stall_fraction`` to full over ``converter_ramp`` seconds.
    """

    torque_rpm: tuple[float, ...]
    torque_nm: tuple[float, ...]
    c_f: float
    c_r: float
    I_yy: float
    converter_ramp: float = 1.0
    stall_fraction: float = 0.5
    distance: float = 20.0
    time_limit: float = 20.0

    def __post_init__(self):
        rpm = tuple(float(x) for x in self.torque_rpm)
        tq = tuple(float(x) for x in self.torque_nm)
        object.__setattr__(self, "torque_rpm", rpm)
        object.__setattr__(self, "torque_nm", tq)
        if len(rpm) < 1 or len(rpm) != len(tq):
            raise ParameterError("torque map needs matching, non-empty rpm and torque arrays")
        if any(b <= a for a, b in zip(rpm, rpm[1:])):
            raise ParameterError("torque map rpm breakpoints must be strictly increasing")
        if any(not math.isfinite(x) or x < 0 for x in tq):
            raise ParameterError("torque map values must be finite and non-negative")
        for name in ("c_f", "c_r", "I_yy", "distance", "time_limit"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive, got {value!r}")
        if not self.converter_ramp >= 0:
            raise ParameterError("converter_ramp must be non-negative")
        if not 0.0 <= self.stall_fraction <= 1.0:
            raise ParameterError("stall_fraction must lie in [0, 1]")

    def engine_torque(self, rpm: float) -> float:
        return float(np.interp(rpm, self.torque_rpm, self.torque_nm))

    def converter_factor(self, t: float) -> float:
        if self.converter_ramp == 0.0 or t >= self.converter_ramp:
            return 1.0
        return self.stall_fraction + (1.0 - self.stall_fraction) * t / self.converter_ramp


@dataclass(frozen=True)
class GradeFeasibility:
    passed: bool
    failure_mode: Optional[FailureMode]
    N_f: float
    N_r: float

    def __post_init__(self):
        if self.passed and self.failure_mode is not None:
            raise ParameterError("a passing verdict carries no failure mode")
        if not self.passed and self.failure_mode is None:
            raise ParameterError("a failing verdict needs a failure mode")

    def __bool__(self):
        return self.passed


@dataclass(frozen=True)
class GradeResult:
    critical_grade: float
    failure_mode: Optional[FailureMode]
    solver: str
    tier: Tier
    evaluations: int = 0


def grade_angle(grade: float) -> float:
    return math.atan(grade / 100.0)


def _normals(weight, wheelbase, l_f, l_r, h, alpha):
    ca, sa = math.cos(alpha), math.sin(alpha)
    N_f = weight / wheelbase * (l_r * ca - h * sa)
    N_r = weight / wheelbase * (l_f * ca + h * sa)
    return float(N_f), float(N_r)


def rigid_normals(grade: float, p: VehicleParams) -> tuple[float, float]:
    """Quasi-static front and rear axle loads on the grade."""
    return _normals(p.weight, p.wheelbase, p.l_f, p.l_r, p.h_cg, grade_angle(grade))


def _check(grade: float, p: VehicleParams, N_f: float, N_r: float) -> GradeFeasibility:
    if N_f <= 0.0:
        return GradeFeasibility(False, FailureMode.TIP_OVER, N_f, N_r)
    required = p.weight * math.sin(grade_angle(grade))
    drive = p.drive_force_limit
    friction = p.mu * N_r
    if min(drive, friction) < required:
        mode = FailureMode.TORQUE_LIMIT if drive <= friction else FailureMode.TRACTION_LIMIT
        return GradeFeasibility(False, mode, N_f, N_r)
    return GradeFeasibility(True, None, N_f, N_r)


def _nonnegative_grade(grade):
    if not grade >= 0:
        raise PreconditionViolation(f"grade must be non-negative, got {grade!r}")


def rigid_feasibility(grade: float, p: VehicleParams) -> GradeFeasibility:
    """Tip-over, then drivetrain and friction checks on a rigid chassis."""
    _nonnegative_grade(grade)
    N_f, N_r = rigid_normals(grade, p)
    return _check(grade, p, N_f, N_r)


def analytic_rigid_critical(p: VehicleParams) -> GradeResult:
    """Closed-form rigid-tier critical grade; the smallest limiting angle binds."""
    alpha_tip = math.atan(p.l_r / p.h_cg)
    margin = p.wheelbase - p.mu * p.h_cg
    # with mu h_cg >= wheelbase the grip grows faster than the demand and never binds
    alpha_fric = math.atan(p.mu * p.l_f / margin) if margin > 0 else math.pi / 2
    alpha_torque = math.asin(min(1.0, p.drive_force_limit / p.weight))
    candidates = [
        (alpha_tip, FailureMode.TIP_OVER),
        (alpha_torque, FailureMode.TORQUE_LIMIT),
        (alpha_fric, FailureMode.TRACTION_LIMIT),
    ]
    alpha, mode = min(candidates, key=lambda c: c[0])  # ties follow the check order
    return GradeResult(100.0 * math.tan(alpha), mode, "analytic", Tier.RIGID)


@dataclass(frozen=True)
class SpringState:
    N_f: float
    N_r: float
    delta_f: float
    delta_r: float
    pitch: float
    iterations: int = 0


def _settled_geometry(p: VehicleParams, delta_f: float, delta_r: float):
    L = p.wheelbase
    pitch = (delta_r - delta_f) / L
    l_f = p.l_f + p.h_cg * pitch
    h = p.h_cg - (delta_f * p.l_r + delta_r * p.l_f) / L
    return pitch, l_f, L - l_f, h


def spring_equilibrium(
    grade: float, p: VehicleParams, s: SpringParams, tol: float = 1e-6, max_iter: int = 500
) -> SpringState:
    """Axle loads after the suspension settles on the grade.

    Spring deflections ``(delta_f, delta_r)`` are iterated to a fixed
    point: deflections pitch and lower the body (small angles), which
    shifts the CG and changes the axle loads, which set new deflections.
    """
    _nonnegative_grade(grade)
    alpha = grade_angle(grade)
    W = p.weight

    def update(delta):
        _, l_f, l_r, h = _settled_geometry(p, delta[0], delta[1])
        N_f, N_r = _normals(W, p.wheelbase, l_f, l_r, h, alpha)
        if N_f <= 0.0:
            raise TipOverDuringSettling(
                f"front axle unloads while the suspension settles at {grade}% grade"
            )
        return np.array((N_f / s.k_f, N_r / s.k_r))

    result = fixed_point(update, np.zeros(2), tol=tol, max_iter=max_iter)
    delta_f, delta_r = (float(d) for d in result.x)
    pitch, l_f, l_r, h = _settled_geometry(p, delta_f, delta_r)
    N_f, N_r = _normals(W, p.wheelbase, l_f, l_r, h, alpha)
    return SpringState(N_f, N_r, delta_f, delta_r, pitch, result.iterations)


def spring_feasibility(grade: float, p: VehicleParams, s: SpringParams) -> GradeFeasibility:
    """Rigid-tier checks applied to the settled axle loads."""
    _nonnegative_grade(grade)
    N_f, N_r = rigid_normals(grade, p)
    if N_f <= 0.0:
        return GradeFeasibility(False, FailureMode.TIP_OVER, N_f, N_r)
    try:
        state = spring_equilibrium(grade, p, s)
    except TipOverDuringSettling:
        return GradeFeasibility(False, FailureMode.TIP_OVER, N_f, N_r)
    return _check(grade, p, state.N_f, state.N_r)


# dynamic tier -----------------------------------------------------------------

_S, _V, _Z, _PHI, _ZDOT, _PHIDOT = range(6)


class _Chassis:
    """Planar rigid body on two spring-damper axles with point-contact tires.

    State: travel along the grade ``s``, speed ``v``, heave ``z`` (body
    down positive), pitch ``phi`` (nose up positive) and their rates.
    Front suspension compression is ``z - l_f phi``, rear is ``z + l_r phi``.
    The tractive force acts at the ground, ``h_cg`` below the CG, so its
    pitch moment produces the acceleration weight transfer.
    """

    def __init__(self, grade, p: VehicleParams, s: SpringParams, d: DynamicParams):
        self.p, self.s, self.d = p, s, d
        self.alpha = grade_angle(grade)
        self.sin_a = math.sin(self.alpha)
        self.cos_a = math.cos(self.alpha)
        self.rpm_per_speed = p.G_r / (2.0 * math.pi * p.r_w) * 60.0

    def axle_forces(self, y):
        p, s, d = self.p, self.s, self.d
        comp_f = y[_Z] - p.l_f * y[_PHI]
        comp_r = y[_Z] + p.l_r * y[_PHI]
        rate_f = y[_ZDOT] - p.l_f * y[_PHIDOT]
        rate_r = y[_ZDOT] + p.l_r * y[_PHIDOT]
        return (
            float(s.k_f * comp_f + d.c_f * rate_f),
            float(s.k_r * comp_r + d.c_r * rate_r),
        )

    def traction(self, t, v, N_r):
        """Tractive force and whether the friction bound is the active one."""
        rpm = v * self.rpm_per_speed
        # the map is capped at the rated peak torque T_max
        torque = min(self.d.engine_torque(rpm), self.p.T_max) * self.d.converter_factor(t)
        drive = torque * self.p.G_r / self.p.r_w
        grip = self.p.mu * max(N_r, 0.0)
        if grip < drive:
            return grip, True
        return drive, False

    def rhs(self, t, y):
        p = self.p
        N_f, N_r = self.axle_forces(y)
        F, _ = self.traction(t, y[_V], N_r)
        W = p.weight
        accel = F / p.m - GRAVITY * self.sin_a
        z_acc = (W * self.cos_a - N_f - N_r) / p.m
        phi_acc = (N_f * p.l_f - N_r * p.l_r + F * p.h_cg) / self.d.I_yy
        return np.array((y[_V], accel, y[_ZDOT], y[_PHIDOT], z_acc, phi_acc))

    def initial_state(self):
        """At rest on the grade, suspension settled under the holding brake."""
        p = self.p
        N_f, N_r = _normals(p.weight, p.wheelbase, p.l_f, p.l_r, p.h_cg, self.alpha)
        comp_f = N_f / self.s.k_f
        comp_r = N_r / self.s.k_r
        phi = (comp_r - comp_f) / p.wheelbase
        z = comp_f + p.l_f * phi
        return np.array((0.0, 0.0, z, phi, 0.0, 0.0))


def dynamic_feasibility(
    grade: float,
    p: VehicleParams,
    s: SpringParams,
    d: DynamicParams,
    solver: SolverConfig | None = None,
    window: float = 1.0,
) -> GradeFeasibility:
    """Simulate the climb from rest; pass when ``distance`` is covered in ``time_limit``.

    Integration proceeds in windows of ``window`` seconds so the run can
    stop as soon as the course is completed or the front axle unloads.
    The failure mode of a run that times out is TractionLimit when the
    friction bound was active for at least half of the accepted steps,
    TorqueLimit when the vehicle made no uphill progress, and Timeout
    otherwise.
    """
    _nonnegative_grade(grade)
    solver = solver or SolverConfig(rtol=1e-5, atol=1e-8)
    chassis = _Chassis(grade, p, s, d)
    system = OdeSystem(6, chassis.rhs)

    y = chassis.initial_state()
    t = 0.0
    friction_steps = 0
    total_steps = 0
    N_f, N_r = chassis.axle_forces(y)
    if N_f <= 0.0:
        return GradeFeasibility(False, FailureMode.TIP_OVER, N_f, N_r)

    while t < d.time_limit:
        t_next = min(t + window, d.time_limit)
        traj = integrate_rk23(system, t, y, t_next, solver)
        for ti, yi in zip(traj.times[1:], traj.states[1:]):
            N_f, N_r = chassis.axle_forces(yi)
            if N_f <= 0.0:
                return GradeFeasibility(False, FailureMode.TIP_OVER, N_f, N_r)
            total_steps += 1
            friction_steps += chassis.traction(ti, yi[_V], N_r)[1]
            if yi[_S] >= d.distance:
                return GradeFeasibility(True, None, N_f, N_r)
        t, y = t_next, traj.states[-1]

    if total_steps and friction_steps >= 0.5 * total_steps:
        mode = FailureMode.TRACTION_LIMIT
    elif y[_S] <= 0.0:
        mode = FailureMode.TORQUE_LIMIT
    else:
        mode = FailureMode.TIMEOUT
    return GradeFeasibility(False, mode, N_f, N_r)


# critical-grade drivers ---------------------------------------------------------


@dataclass(frozen=True)
class Sweep:
    increment: float = 0.1
    limit: float = SWEEP_LIMIT

    def __post_init__(self):
        if not self.increment > 0:
            raise ParameterError("sweep increment must be positive")


@dataclass(frozen=True)
class Bisection:
    lo: float = 0.0
    hi: float = SWEEP_LIMIT
    tol: float = 0.01
    max_iter: int = 200

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ParameterError("bisection needs lo < hi")
        if not self.tol > 0:
            raise ParameterError("bisection tolerance must be positive")


def _feasibility_function(tier, p, springs, dynamic, solver):
    tier = Tier(tier)
    if tier is Tier.RIGID:
        return lambda g: rigid_feasibility(g, p)
    if springs is None:
        raise ParameterError(f"the {tier.value} tier needs spring rates")
    if tier is Tier.SPRING:
        return lambda g: spring_feasibility(g, p, springs)
    if dynamic is None:
        raise ParameterError("the dynamic tier needs dynamic parameters")
    return lambda g: dynamic_feasibility(g, p, springs, dynamic, solver)


def critical_grade(
    tier,
    method,
    p: VehicleParams,
    springs: SpringParams | None = None,
    dynamic: DynamicParams | None = None,
    solver: SolverConfig | None = None,
) -> GradeResult:
    """Highest passable grade for ``tier`` found by a sweep or by bisection.

    The sweep climbs from 0% in fixed increments and reports the last grade
    that passed, with the failure mode of the first grade that did not.
    Bisection brackets the pass/fail boundary to ``tol`` and reports the
    passing end of the bracket.
    """
    tier = Tier(tier)
    feasible = _feasibility_function(tier, p, springs, dynamic, solver)

    if isinstance(method, Sweep):
        last_pass = 0.0
        i = 0
        while True:
            grade = i * method.increment
            if grade > method.limit:
                raise NeverFails(
                    f"{tier.value} tier still passes at {last_pass:g}% (sweep limit {method.limit:g}%)"
                )
            verdict = feasible(grade)
            if not verdict:
                return GradeResult(last_pass, verdict.failure_mode, "sweep", tier, i + 1)
            last_pass = grade
            i += 1

    if isinstance(method, Bisection):
        evaluations = 0
        modes: dict[float, GradeFeasibility] = {}

        def indicator(g):
            nonlocal evaluations
            if g in modes:
                return -1.0 if modes[g] else 1.0
            evaluations += 1
            verdict = feasible(g)
            modes[g] = verdict
            return -1.0 if verdict else 1.0

        if indicator(method.lo) > 0:
            raise PreconditionViolation(f"{tier.value} tier fails at the lower bracket {method.lo:g}%")
        if indicator(method.hi) < 0:
            raise PreconditionViolation(f"{tier.value} tier passes at the upper bracket {method.hi:g}%")
        bracket = bisection(indicator, method.lo, method.hi, method.tol, method.max_iter)
        return GradeResult(
            bracket.lo, modes[bracket.hi].failure_mode, "bisection", tier, evaluations
        )

    raise ParameterError(f"unknown critical-grade method {method!r}")

"""Spring-mass-damper settling time under a step force.

Two models of the same quantity: the closed-form heuristic ``4 / (zeta wn)``
and a numerical model that integrates the equation of motion and scans the
response for the last exit from the settling band. The exact step response
is included as a test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import NoSettling, ParameterError, PreconditionViolation, ZeroDamping
from .numerics import OdeSystem, SolverConfig, bisection, integrate_rk23

__all__ = [
    "SmdParams",
    "StepForcing",
    "SettlingCriterion",
    "SettlingResult",
    "modal_parameters",
    "damping_for_ratio",
    "heuristic_settling_time",
    "analytic_step_response",
    "slowest_time_constant",
    "numeric_settling_time",
    "oracle_settling_time",
]


@dataclass(frozen=True)
class SmdParams:
    m: float
    c: float
    k: float

    def __post_init__(self):
        if not self.m > 0:
            raise ParameterError(f"mass must be positive, got {self.m!r}")
        if not self.k > 0:
            raise ParameterError(f"spring rate must be positive, got {self.k!r}")
        if not self.c >= 0:
            raise ParameterError(f"damping rate must be non-negative, got {self.c!r}")

    @classmethod
    def from_modal(cls, wn: float, zeta: float, m: float = 1.0) -> "SmdParams":
        k = m * wn ** 2
        return cls(m=m, c=2.0 * zeta * math.sqrt(k * m), k=k)


@dataclass(frozen=True)
class StepForcing:
    F0: float

    def __post_init__(self):
        if self.F0 == 0 or not math.isfinite(self.F0):
            raise ParameterError("step magnitude must be finite and non-zero")


@dataclass(frozen=True)
class SettlingCriterion:
    band: float = 0.02
    horizon_factor: float = 12.0

    def __post_init__(self):
        if not 0.0 < self.band < 1.0:
            raise ParameterError(f"band must lie in (0, 1), got {self.band!r}")
        if not self.horizon_factor >= 4.0:
            raise ParameterError(f"horizon_factor must be >= 4, got {self.horizon_factor!r}")


@dataclass(frozen=True)
class SettlingResult:
    t_s: float
    steady_state: Optional[float]
    method: str
    steps: int = 0


def modal_parameters(p: SmdParams) -> tuple[float, float]:
    """Natural frequency (rad/s) and damping ratio."""
    wn = math.sqrt(p.k / p.m)
    zeta = p.c / (2.0 * math.sqrt(p.k * p.m))
    return wn, zeta


def damping_for_ratio(m: float, k: float, zeta: float) -> float:
    return 2.0 * zeta * math.sqrt(k * m)


def heuristic_settling_time(p: SmdParams, forcing: Optional[StepForcing] = None) -> SettlingResult:
    wn, zeta = modal_parameters(p)
    if zeta == 0.0:
        raise ZeroDamping("settling heuristic is undefined without damping")
    steady = forcing.F0 / p.k if forcing is not None else None
    return SettlingResult(4.0 / (zeta * wn), steady, "heuristic")


def analytic_step_response(p: SmdParams, f: StepForcing, t):
    """Exact displacement of ``m y'' + c y' + k y = F0`` from rest.

    Accepts scalar or array ``t`` (all ``t >= 0``).
    """
    t_arr = np.asarray(t, dtype=float)
    wn, zeta = modal_parameters(p)
    y_ss = f.F0 / p.k
    if zeta < 1.0:
        wd = wn * math.sqrt(1.0 - zeta * zeta)
        # zeta*wn*sin(wd t)/wd stays well conditioned as zeta -> 1
        decay = np.exp(-zeta * wn * t_arr) * (
            np.cos(wd * t_arr) + zeta * wn * t_arr * np.sinc(wd * t_arr / math.pi)
        )
    elif zeta == 1.0:
        decay = np.exp(-wn * t_arr) * (1.0 + wn * t_arr)
    else:
        root = math.sqrt(zeta * zeta - 1.0)
        s1 = -wn * (zeta - root)  # slow pole
        s2 = -wn * (zeta + root)
        decay = (s2 * np.exp(s1 * t_arr) - s1 * np.exp(s2 * t_arr)) / (s2 - s1)
    y = y_ss * (1.0 - decay)
    return float(y) if np.ndim(t) == 0 else y


def slowest_time_constant(p: SmdParams) -> float:
    wn, zeta = modal_parameters(p)
    if zeta <= 0.0:
        raise ZeroDamping("an undamped system has no finite time constant")
    if zeta <= 1.0:
        return 1.0 / (zeta * wn)
    return 1.0 / (wn * (zeta - math.sqrt(zeta * zeta - 1.0)))


def _smd_system(p: SmdParams, f: StepForcing) -> OdeSystem:
    m, c, k, F0 = p.m, p.c, p.k, f.F0

    def rhs(t, y):
        return np.array((y[1], (F0 - c * y[1] - k * y[0]) / m))

    return OdeSystem(2, rhs)


def numeric_settling_time(
    p: SmdParams,
    f: StepForcing,
    crit: SettlingCriterion | None = None,
    solver: SolverConfig | None = None,
) -> SettlingResult:
    """Settling time from the integrated response.

    The response is integrated over ``horizon_factor`` slowest time
    constants. Scanning back from the end of the trajectory finds the last
    sample outside the band; the exit is then located between that sample
    and its successor by bisection, re-integrating from the outside sample
    to each trial time.
    """
    crit = crit or SettlingCriterion()
    solver = solver or SolverConfig()
    _, zeta = modal_parameters(p)
    if not zeta > 0.0:
        raise PreconditionViolation("numeric settling needs a damped system (zeta > 0)")

    system = _smd_system(p, f)
    horizon = crit.horizon_factor * slowest_time_constant(p)
    traj = integrate_rk23(system, 0.0, np.zeros(2), horizon, solver)

    y_ss = f.F0 / p.k
    limit = crit.band * abs(y_ss)
    outside = np.abs(traj.states[:, 0] - y_ss) > limit
    steps = len(traj) - 1
    if outside[-1]:
        raise NoSettling(
            f"response still outside the {crit.band:.0%} band at the horizon t={horizon:g} s"
        )
    if not outside.any():
        return SettlingResult(0.0, y_ss, "numeric", steps)

    i = int(np.flatnonzero(outside)[-1])
    t_out, t_in = float(traj.times[i]), float(traj.times[i + 1])
    y_out = traj.states[i]

    def band_excess(t):
        if t <= t_out:
            y = y_out[0]
        else:
            # one full-length trial step first, so t = t_in reproduces the stored sample
            sub = replace(solver, h0=t - t_out, h_min=None)
            y = integrate_rk23(system, t_out, y_out, t, sub).states[-1, 0]
        return abs(y - y_ss) - limit

    bracket = bisection(band_excess, t_out, t_in, tol=1e-6)
    # report the in-band end so the result never precedes the true exit
    return SettlingResult(bracket.hi, y_ss, "numeric", steps)


def oracle_settling_time(
    p: SmdParams, f: StepForcing, band: float = 0.02, dt: float = 1e-4, horizon: float | None = None
) -> float:
    """Settling time from a dense scan of the exact response (test oracle)."""
    if horizon is None:
        horizon = 20.0 * slowest_time_constant(p)
    n = int(math.ceil(horizon / dt))
    t = np.arange(n + 1) * dt
    y = analytic_step_response(p, f, t)
    y_ss = f.F0 / p.k
    outside = np.abs(y - y_ss) > band * abs(y_ss)
    if outside[-1]:
        raise NoSettling("oracle horizon too short")
    if not outside.any():
        return 0.0
    return float(t[np.flatnonzero(outside)[-1] + 1])

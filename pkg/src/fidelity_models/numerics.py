"""Numerical kernels: adaptive Bogacki-Shampine 2(3) integration, bisection
and fixed-point iteration.

All three are plain functions over caller-supplied callables and hold no
state between calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    IterationBudget,
    NoSignChange,
    NonConvergence,
    NonFinite,
    ParameterError,
    StepBudgetExhausted,
    StepUnderflow,
)

__all__ = [
    "OdeSystem",
    "SolverConfig",
    "Trajectory",
    "BracketResult",
    "FixedPointResult",
    "integrate_rk23",
    "bisection",
    "fixed_point",
]

# Bogacki-Shampine tableau
_C2, _C3 = 0.5, 0.75
_A21 = 0.5
_A32 = 0.75
_B1, _B2, _B3 = 2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0
# b - b_hat, with b_hat = [7/24, 1/4, 1/3, 1/8]
_E1 = 2.0 / 9.0 - 7.0 / 24.0
_E2 = 1.0 / 3.0 - 1.0 / 4.0
_E3 = 4.0 / 9.0 - 1.0 / 3.0
_E4 = -1.0 / 8.0

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@dataclass(frozen=True)
class OdeSystem:
    """First-order system ``dy/dt = rhs(t, y)`` of the given dimension."""

    dimension: int
    rhs: Callable[[float, np.ndarray], np.ndarray]

    def __post_init__(self):
        if int(self.dimension) < 1:
            raise ParameterError("ODE dimension must be >= 1")


@dataclass(frozen=True)
class SolverConfig:
    """Step-size control settings for :func:`integrate_rk23`.

    ``h0`` and ``h_min`` default to fractions of the integration interval
    and are resolved per call.
    """

    rtol: float = 1e-6
    atol: float = 1e-9
    h0: Optional[float] = None
    h_min: Optional[float] = None
    max_steps: int = 1_000_000

    def __post_init__(self):
        if not self.rtol >= 1e-14:
            raise ParameterError(f"rtol must be >= 1e-14, got {self.rtol}")
        if not self.atol > 0:
            raise ParameterError(f"atol must be positive, got {self.atol}")
        for name in ("h0", "h_min"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ParameterError(f"{name} must be positive, got {value}")
        if self.max_steps < 1:
            raise ParameterError("max_steps must be positive")

    def initial_step(self, span: float) -> float:
        return self.h0 if self.h0 is not None else span / 100.0

    def minimum_step(self, span: float) -> float:
        return self.h_min if self.h_min is not None else 1e-12 * span


@dataclass(frozen=True)
class Trajectory:
    """Accepted integration steps: ``states[i]`` is the state at ``times[i]``."""

    times: np.ndarray
    states: np.ndarray

    def __len__(self):
        return len(self.times)

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    @property
    def step_sizes(self) -> np.ndarray:
        return np.diff(self.times)


def integrate_rk23(system, t0, y0, t_end, config: SolverConfig | None = None) -> Trajectory:
    """Integrate ``system`` from ``t0`` to ``t_end`` with the Bogacki-Shampine pair.

    The third-order solution is propagated and the embedded second-order
    solution provides the local error estimate. A step is accepted when
    ``max_i |e_i| / (atol + rtol * max(|y_i|, |y_new_i|)) <= 1``. The final
    step is clamped so the trajectory ends exactly at ``t_end``.

    Parameters
    ----------
    system : OdeSystem or callable
        Right-hand side ``f(t, y)``; a bare callable is accepted as well.
    t0, t_end : float
        Integration interval, ``t_end > t0``.
    y0 : array_like
        Initial state.
    config : SolverConfig, optional

    Returns
    -------
    Trajectory
        All accepted steps including the initial point.

    Raises
    ------
    StepUnderflow
        If the controller asks for a step below ``h_min``.
    StepBudgetExhausted
        If more than ``max_steps`` steps (accepted or rejected) are needed.
    """
    config = config or SolverConfig()
    if isinstance(system, OdeSystem):
        f = system.rhs
        dim = system.dimension
    else:
        f = system
        dim = None
    t0 = float(t0)
    t_end = float(t_end)
    if not t_end > t0:
        raise ParameterError(f"t_end must exceed t0 (got t0={t0}, t_end={t_end})")
    y = np.array(y0, dtype=float).reshape(-1)
    if dim is not None and y.size != dim:
        raise ParameterError(f"initial state has dimension {y.size}, system expects {dim}")

    span = t_end - t0
    h = min(config.initial_step(span), span)
    h_min = config.minimum_step(span)
    rtol, atol = config.rtol, config.atol

    times = [t0]
    states = [y.copy()]
    t = t0
    k1 = np.asarray(f(t, y), dtype=float)
    steps = 0
    while t < t_end:
        if steps >= config.max_steps:
            raise StepBudgetExhausted(
                f"exceeded {config.max_steps} steps at t={t!r} before reaching {t_end!r}"
            )
        steps += 1
        last = False
        if t + h >= t_end:
            h = t_end - t
            last = True
        elif h < h_min:
            raise StepUnderflow(f"step size {h!r} below minimum {h_min!r} at t={t!r}")

        k2 = np.asarray(f(t + _C2 * h, y + h * _A21 * k1), dtype=float)
        k3 = np.asarray(f(t + _C3 * h, y + h * _A32 * k2), dtype=float)
        y_new = y + h * (_B1 * k1 + _B2 * k2 + _B3 * k3)
        t_new = t_end if last else t + h
        k4 = np.asarray(f(t_new, y_new), dtype=float)

        err = h * (_E1 * k1 + _E2 * k2 + _E3 * k3 + _E4 * k4)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err_norm = float(np.max(np.abs(err) / scale))
        if not math.isfinite(err_norm):
            # treat a non-finite estimate as a hard rejection
            factor = _MIN_FACTOR
            accepted = False
        else:
            accepted = err_norm <= 1.0
            if err_norm == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err_norm ** (-1.0 / 3.0)))

        if accepted:
            t = t_new
            y = y_new
            k1 = k4  # first same as last
            times.append(t)
            states.append(y)
        h = h * factor
        if not accepted and h < h_min:
            raise StepUnderflow(f"step size {h!r} below minimum {h_min!r} at t={t!r}")

    return Trajectory(times=np.asarray(times), states=np.vstack(states))


@dataclass(frozen=True)
class BracketResult:
    """Outcome of :func:`bisection`.

    ``lo`` and ``hi`` are the final bracket ends, oriented so that ``lo``
    keeps the sign of the original lower end.
    """

    root: float
    iterations: int
    residual: float
    lo: float
    hi: float


def bisection(f, lo, hi, tol=1e-6, max_iter=200) -> BracketResult:
    """Halve ``[lo, hi]`` around a sign change of ``f`` until its width is <= ``tol``.

    Returns the midpoint of the final bracket. A zero at either end point is
    returned immediately.
    """
    lo = float(lo)
    hi = float(hi)
    if not lo < hi:
        raise ParameterError(f"bisection needs lo < hi, got [{lo}, {hi}]")
    if not tol > 0:
        raise ParameterError("bisection tolerance must be positive")
    f_lo = float(f(lo))
    if f_lo == 0.0:
        return BracketResult(lo, 0, 0.0, lo, lo)
    f_hi = float(f(hi))
    if f_hi == 0.0:
        return BracketResult(hi, 0, 0.0, hi, hi)
    if f_lo * f_hi > 0:
        raise NoSignChange(f"f({lo})={f_lo} and f({hi})={f_hi} have the same sign")

    iterations = 0
    while hi - lo > tol:
        if iterations >= max_iter:
            raise IterationBudget(
                f"bracket width {hi - lo!r} still above {tol!r} after {max_iter} iterations"
            )
        iterations += 1
        mid = lo + 0.5 * (hi - lo)
        f_mid = float(f(mid))
        if f_mid == 0.0:
            return BracketResult(mid, iterations, 0.0, mid, mid)
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    root = lo + 0.5 * (hi - lo)
    return BracketResult(root, iterations, abs(float(f(root))), lo, hi)


@dataclass(frozen=True)
class FixedPointResult:
    x: np.ndarray | float
    iterations: int
    residual: float


def fixed_point(g, x0, tol=1e-10, max_iter=1000) -> FixedPointResult:
    """Iterate ``x <- g(x)`` until ``max|g(x) - x| <= tol``.

    The value returned is ``g(x)`` from the final, converged iteration.
    Scalar starts give scalar results.
    """
    if not tol > 0:
        raise ParameterError("fixed-point tolerance must be positive")
    scalar = np.ndim(x0) == 0
    x = np.array(x0, dtype=float)
    if not np.all(np.isfinite(x)):
        raise NonFinite(f"non-finite starting point {x0!r}")
    for i in range(1, max_iter + 1):
        gx = np.array(g(float(x) if scalar else x), dtype=float)
        if not np.all(np.isfinite(gx)):
            raise NonFinite(f"iterate {i} is not finite: {gx!r}")
        residual = float(np.max(np.abs(gx - x)))
        if residual <= tol:
            return FixedPointResult(float(gx) if scalar else gx, i, residual)
        x = gx
    raise NonConvergence(f"no convergence within {max_iter} iterations (last change {residual!r})")

"""Cantilever beam with a tip point load: Euler-Bernoulli and
Timoshenko-Ehrenfest deflection.

Coordinates follow the closed forms directly: the clamp sits at ``x = L``
(both deflections vanish there) and the load acts at the free end
``x = 0``. Vertical deflection is negative (downward).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import MissingShearData, NonPositiveDimension, OutOfDomain, ParameterError

__all__ = [
    "RectangularSection",
    "DirectSection",
    "BeamLoadCase",
    "DeflectionProfile",
    "slenderness",
    "eb_profile",
    "te_profile",
    "shear_terms",
    "tip_deflection_ratio",
]


def _positive(name, value):
    if not value > 0:
        raise NonPositiveDimension(f"{name} must be strictly positive, got {value!r}")


@dataclass(frozen=True)
class RectangularSection:
    b: float
    h: float

    def __post_init__(self):
        _positive("section width b", self.b)
        _positive("section height h", self.h)

    @property
    def I(self) -> float:
        return self.b * self.h ** 3 / 12.0

    @property
    def A(self) -> float:
        return self.b * self.h


@dataclass(frozen=True)
class DirectSection:
    I: float
    A: float
    h: float

    def __post_init__(self):
        _positive("second moment I", self.I)
        _positive("area A", self.A)
        _positive("section height h", self.h)


@dataclass(frozen=True)
class BeamLoadCase:
    """Tip load ``P`` on a prismatic cantilever of length ``L``.

    Either ``G`` or ``nu`` supplies the shear modulus; ``G`` wins when
    both are given. ``kappa`` is the shear correction factor.
    """

    P: float
    E: float
    L: float
    section: Union[RectangularSection, DirectSection]
    G: Optional[float] = None
    nu: Optional[float] = None
    kappa: float = 5.0 / 6.0

    def __post_init__(self):
        _positive("load P", self.P)
        _positive("Young's modulus E", self.E)
        _positive("length L", self.L)
        if self.G is not None:
            _positive("shear modulus G", self.G)
        if self.nu is not None and not -1.0 < self.nu < 0.5:
            raise ParameterError(f"Poisson ratio must lie in (-1, 0.5), got {self.nu!r}")
        if not 0.0 < self.kappa <= 1.0:
            raise ParameterError(f"shear correction factor must lie in (0, 1], got {self.kappa!r}")

    @property
    def I(self) -> float:
        return self.section.I

    @property
    def A(self) -> float:
        return self.section.A

    @property
    def h(self) -> float:
        return self.section.h

    @property
    def shear_modulus(self) -> float:
        if self.G is not None:
            return self.G
        if self.nu is not None:
            return self.E / (2.0 * (1.0 + self.nu))
        raise MissingShearData("shear deflection needs either G or nu")

    @property
    def shear_stiffness(self) -> float:
        """kappa * A * G"""
        return self.kappa * self.A * self.shear_modulus

    @property
    def slenderness(self) -> float:
        return slenderness(self.L, self.h)


@dataclass(frozen=True)
class DeflectionProfile:
    xs: np.ndarray
    theta: np.ndarray
    v: np.ndarray

    @property
    def tip_deflection(self) -> float:
        """Vertical deflection at the sample closest to the free end."""
        return float(self.v[np.argmin(self.xs)])


def slenderness(L, h) -> float:
    """Length over cross-section height."""
    _positive("length L", L)
    _positive("section height h", h)
    return L / h


def _positions(case: BeamLoadCase, xs) -> np.ndarray:
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(~np.isfinite(xs)) or np.any(xs < 0.0) or np.any(xs > case.L):
        raise OutOfDomain(f"positions must lie in [0, {case.L}]")
    return xs


def _bending(case: BeamLoadCase, xs: np.ndarray):
    P, E, I, L = case.P, case.E, case.I, case.L
    # factored forms of (L^2 - x^2) and (-x^3 + 3 L^2 x - 2 L^3): they vanish
    # exactly at the clamp and keep their sign under rounding
    theta = P / (2.0 * E * I) * ((L - xs) * (L + xs))
    v = -P / (6.0 * E * I) * ((L - xs) ** 2 * (xs + 2.0 * L))
    return theta, v


def shear_terms(case: BeamLoadCase, xs):
    """Shear contributions ``(P/kAG, -P(L-x)/kAG)`` added on top of bending."""
    xs = _positions(case, xs)
    kAG = case.shear_stiffness
    return np.full_like(xs, case.P / kAG), -case.P * (case.L - xs) / kAG


def eb_profile(case: BeamLoadCase, xs) -> DeflectionProfile:
    """Bending-only (Euler-Bernoulli) rotation and deflection at ``xs``."""
    xs = _positions(case, xs)
    theta, v = _bending(case, xs)
    return DeflectionProfile(xs, theta, v)


def te_profile(case: BeamLoadCase, xs) -> DeflectionProfile:
    """Timoshenko-Ehrenfest profile: the bending terms plus shear terms."""
    xs = _positions(case, xs)
    theta_s, v_s = shear_terms(case, xs)
    theta_b, v_b = _bending(case, xs)
    return DeflectionProfile(xs, theta_s + theta_b, v_b + v_s)


def tip_deflection_ratio(case: BeamLoadCase) -> float:
    """Shear-to-bending tip deflection ratio, ``3EI / (kappa A G L^2)``."""
    return 3.0 * case.E * case.I / (case.shear_stiffness * case.L ** 2)

"""Polytropic pressure law P(rho) = T rho**gamma and its derivatives.

Everything downstream only needs P, the internal energy F (through
F'' = P'/rho) and h(rho; V) = V**2/rho**3 - F''(rho), each at a handful of
orders, so all three are written as closed-form falling-factorial products.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _falling(a: float, n: int) -> float:
    out = 1.0
    for i in range(n):
        out *= a - i
    return out


@dataclass(frozen=True)
class PressureLaw:
    """Power law ``P(rho) = T * rho**gamma`` with ``T > 0`` and ``gamma >= 1``."""

    T: float
    gamma: float

    def __post_init__(self):
        if not (np.isfinite(self.T) and self.T > 0):
            raise ValueError(f"pressure coefficient T must be positive, got {self.T!r}")
        if not (np.isfinite(self.gamma) and self.gamma >= 1):
            raise ValueError(f"adiabatic exponent gamma must be >= 1, got {self.gamma!r}")

    @property
    def sound_speed_sq(self) -> float:
        """P'(1) = T * gamma."""
        return self.T * self.gamma

    def is_supersonic(self, V: float) -> bool:
        return V * V > self.sound_speed_sq


def _check_rho(rho):
    if np.any(np.asarray(rho) <= 0):
        raise ValueError("density must be positive")


def p_deriv(law: PressureLaw, rho, order: int):
    """``order``-th derivative of ``T rho**gamma`` (order 0..5)."""
    if not 0 <= order <= 5:
        raise ValueError("order must be in 0..5")
    _check_rho(rho)
    c = law.T * _falling(law.gamma, order)
    return c * np.power(rho, law.gamma - order) if c != 0.0 else 0.0 * np.asarray(rho, float)


def f_deriv(law: PressureLaw, rho, order: int):
    """``order``-th derivative of the internal energy, order 2..5.

    Only derivatives of order >= 2 are defined; F itself is fixed up to an
    affine function by ``F'' = P'/rho``.
    """
    if not 2 <= order <= 5:
        raise ValueError("order must be in 2..5")
    _check_rho(rho)
    c = law.T * law.gamma * _falling(law.gamma - 2, order - 2)
    return c * np.power(rho, law.gamma - order) if c != 0.0 else 0.0 * np.asarray(rho, float)


def h_deriv(law: PressureLaw, rho, V: float, order: int = 0):
    """``order``-th rho-derivative of ``h(rho; V) = V**2/rho**3 - F''(rho)`` (order 0..3)."""
    if not 0 <= order <= 3:
        raise ValueError("order must be in 0..3")
    _check_rho(rho)
    kinetic = V * V * _falling(-3.0, order) * np.power(rho, -3.0 - order)
    return kinetic - f_deriv(law, rho, order + 2)


def h_at_one(law: PressureLaw, V: float) -> tuple[float, float, float]:
    """(h, h', h'') at rho = 1."""
    return tuple(float(h_deriv(law, 1.0, V, n)) for n in range(3))

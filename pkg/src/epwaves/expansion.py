"""Amplitude expansion of the Bloch symbol around the constant state.

Each periodic coefficient of the linearized symbol is expanded as a power
series in the amplitude delta whose coefficients are trigonometric
polynomials.  Series are stored as arrays ``c[order, P + p]`` holding the
``delta**order exp(2 pi i p x)`` coefficient for ``order <= 3`` and
``|p| <= 3``.  The wave enters through ``e = k E`` up to the terms the
third-order crossing analysis needs:

    e = delta k0 E1 + delta**2 k0 E2 + delta**3 (sin(6 pi x) part of k0 E3 + k2 E1).

The third-order part of ``k0 E3`` is only known on the modes ``+-3``, so
third-order blocks are only available for shifts ``+-3``.
"""
from __future__ import annotations

import math

import numpy as np

from .pressure import PressureLaw, f_deriv, h_at_one

ORDERS = 4
MODES = 3
_WIDTH = 2 * MODES + 1


def _zero():
    return np.zeros((ORDERS, _WIDTH), dtype=complex)


def _const(c):
    out = _zero()
    out[0, MODES] = c
    return out


def _mul(a, b):
    out = _zero()
    for i in range(ORDERS):
        for k in range(ORDERS - i):
            out[i + k] += np.convolve(a[i], b[k])[MODES:MODES + _WIDTH]
    return out


def _ddx(a):
    return a * (2j * math.pi * np.arange(-MODES, MODES + 1))


def _sine(order, mode, amplitude):
    out = _zero()
    out[order, MODES + mode] += amplitude / 2j
    out[order, MODES - mode] -= amplitude / 2j
    return out


def _compose(coeffs, n):
    """sum_r coeffs[r] n**r for a series ``n`` without constant term."""
    out = _const(coeffs[0])
    power = _const(1.0)
    for c in coeffs[1:]:
        power = _mul(power, n)
        out = out + c * power
    return out


class SymbolExpansion:
    """Taylor coefficients in delta of the Bloch symbol blocks at speed V."""

    def __init__(self, law: PressureLaw, V: float):
        h, dh, d2h = h_at_one(law, V)
        if not h > 0:
            raise ValueError("speed is not supersonic")
        self.law, self.V = law, V
        self.k0 = 1.0 / (2.0 * math.pi * math.sqrt(h))
        ratio = dh / h
        k2_rel = ratio ** 2 / 12.0 - d2h / (16.0 * h)
        sigma2 = 3.0 / 16.0 * (ratio ** 2 - 0.25 * d2h / h)

        first = _sine(1, 1, 1.0 / (2.0 * math.pi))
        e = first + _sine(2, 2, -ratio / 3.0 / (4.0 * math.pi)) + _sine(3, 3, sigma2 / (6.0 * math.pi))
        e = e + k2_rel * np.roll(first, 2, axis=0)
        n = _ddx(e)
        F = [float(f_deriv(law, 1.0, r)) for r in range(2, 6)]

        self._k_ratio = _zero()
        self._k_ratio[0, MODES] = 1.0
        self._k_ratio[2, MODES] = k2_rel
        self.transport = _const(V) - V * _compose([0.0, 1.0, -1.0, 1.0], n)
        self.density = _const(1.0) + n
        self.f2 = _compose([F[0], F[1], F[2] / 2.0, F[3] / 6.0], n)
        k2E2 = self.k0 * _mul(self._k_ratio, _ddx(_ddx(e)))
        self.f3_k2E2 = _mul(_compose([F[1], F[2], F[3] / 2.0], n), k2E2)
        self.k_du = V * _mul(k2E2, _compose([1.0, -2.0, 3.0, -4.0], n))

    def block(self, order: int, shift: int, mode: int, xi: float) -> np.ndarray:
        """delta**order coefficient of the 2x2 block sending Fourier mode
        ``mode`` to mode ``mode + shift`` at Floquet exponent ``xi``."""
        if not (0 <= order < ORDERS and abs(shift) <= MODES):
            raise ValueError("order must be 0..3 and |shift| <= 3")
        if order == 3 and abs(shift) != 3:
            raise ValueError("third-order blocks are only resolved on shifts +-3")
        z = 2j * math.pi * self.k0 * (mode + xi / (2.0 * math.pi)) * self._k_ratio
        z2 = _mul(z, z)
        EE = _mul(self.transport, z)
        Eu = -self.density
        uE = -_mul(self.f2, z2) - _mul(self.f3_k2E2, z)
        if shift == 0:
            uE = uE + _const(1.0)
        uu = EE - self.k_du
        col = MODES + shift
        return np.array([[EE[order, col], Eu[order, col]], [uE[order, col], uu[order, col]]])

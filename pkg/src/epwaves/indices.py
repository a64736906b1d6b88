"""Analytic stability indices: side-band coefficients and the ell = 3 index.

The index Gamma is the delta**3 coupling between the two colliding modes of
the first non-trivial crossing (gap 3, sign +).  It is computed twice: from
closed scalar formulas, and from products of 2x2 symbol blocks and
resolvents built by ``expansion.SymbolExpansion``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .crossings import Crossing, find_crossing
from .expansion import SymbolExpansion
from .pressure import PressureLaw, f_deriv, h_at_one
from .profile import asymptotic_coeffs

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ModulationReport:
    V: float
    k0: float
    k2: float
    c02: float
    classification: str


def modulational_index(law: PressureLaw, V: float) -> ModulationReport:
    coeffs = asymptotic_coeffs(law, V)
    c02 = -coeffs.k2 * (V * V - law.sound_speed_sq) / V
    label = "side-band-stable" if coeffs.k2 > 0 else "side-band-unstable"
    return ModulationReport(V=V, k0=coeffs.k0, k2=coeffs.k2, c02=c02, classification=label)


def gamma_asymptotic_fraction(gamma_exponent) -> Fraction:
    """Large-speed limit of Gamma as an exact rational."""
    g = Fraction(gamma_exponent)
    if g < 1:
        raise ValueError("gamma must be >= 1")
    return -(65 * g ** 3 + 315 * g ** 2 + 115 * g - 135) / 6144


def gamma_asymptotic(gamma_exponent) -> float:
    return float(gamma_asymptotic_fraction(gamma_exponent))


@dataclass(frozen=True)
class GammaReport:
    """Gamma with every intermediate quantity of the scalar route."""

    V: float
    crossing: Crossing
    gamma_matrix: complex
    gamma_scalar: complex
    gamma_abs: float
    f_gamma_limit: float
    growth_coefficient: float
    s: float
    kappa0: float
    sigma: tuple
    alphas: tuple
    chi: tuple
    d: tuple
    omega_j: float
    omega_jprime: float
    terms: tuple

    @property
    def imag_fraction(self) -> float:
        return abs(self.gamma_matrix.imag) / self.gamma_abs if self.gamma_abs else 0.0


def _sigmas(law, V):
    h, dh, d2h = h_at_one(law, V)
    F3, F4, F5 = (float(f_deriv(law, 1.0, n)) for n in (3, 4, 5))
    r = dh / (3.0 * h)
    s0 = V * (0.5 + r)
    s1 = F3 * r - F4 / 4.0
    s2 = 3.0 / 16.0 * ((dh / h) ** 2 - 0.25 * d2h / h)
    s3 = V * (s2 + 0.25 + r)
    s4 = F3 * s2 - F4 * dh / (6.0 * h) + F5 / 24.0
    return r, (s0, s1, s2, s3, s4)


def _crossing3(law, V):
    c = find_crossing(law, V, 3, "+")
    k0 = 1.0 / (2.0 * math.pi * math.sqrt(h_at_one(law, V)[0]))
    return c, TWO_PI * k0, c.z - 1.5


def _resolvent(law, V, kappa0, crossing, m):
    a = m + crossing.xi0 / TWO_PI
    block = np.array([[1j * V * kappa0 * a, -1.0], [1.0 + law.sound_speed_sq * (kappa0 * a) ** 2, 1j * V * kappa0 * a]])
    return np.linalg.inv(crossing.lambda0 * np.eye(2) - block)


def gamma_matrix(law: PressureLaw, V: float) -> complex:
    """Gamma from 2x2 symbol blocks and constant-state resolvents."""
    c, kappa0, _ = _crossing3(law, V)
    series = SymbolExpansion(law, V)
    j, xi = c.j, c.xi0
    L = lambda order, shift, mode: series.block(order, shift, mode, xi)
    G = lambda m: _resolvent(law, V, kappa0, c, m)
    core = (
        L(3, -3, j)
        + L(1, -1, j - 2) @ G(j - 2) @ L(2, -2, j)
        + L(2, -2, j - 1) @ G(j - 1) @ L(1, -1, j)
        + L(1, -1, j - 2) @ G(j - 2) @ L(1, -1, j - 1) @ G(j - 1) @ L(1, -1, j)
    )
    left = np.array([-1j * c.omega_jprime, 1.0])
    right = np.array([1.0, 1j * c.omega_j])
    return complex(left @ core @ right)


def gamma_scalar(law: PressureLaw, V: float) -> GammaReport:
    """Gamma as the sum of four closed-form scalar terms, with all intermediates."""
    c, kap, s = _crossing3(law, V)
    r, sig = _sigmas(law, V)
    s0, s1, s2, s3, s4 = sig
    F3 = float(f_deriv(law, 1.0, 3))
    wj, wjp = c.omega_j, c.omega_jprime
    lam0, j = c.lambda0, c.j
    KV = kap * V

    def chi(m):
        return lam0 - 1j * KV * (m + c.xi0 / TWO_PI)

    def dm(m):
        a = m + c.xi0 / TWO_PI
        return 1.0 / (chi(m) ** 2 + 1.0 + law.sound_speed_sq * (kap * a) ** 2)

    c1, c2 = chi(j - 1), chi(j - 2)
    d1, d2 = dm(j - 1), dm(j - 2)
    a1 = 1j * KV * c2 + F3 * kap ** 2 * (s - 0.5)
    a2 = 1j * kap * s0 * c2 + kap ** 2 * s1 * (s - 0.5)
    a3 = -r * c2 + 1j * kap * s0 * (s - 0.5)
    a4 = 1j * kap * s0 * (s + 0.5) - c1 * r
    a5 = kap ** 2 * s1 * (s + 0.5) + 1j * kap * s0 * c1
    a6 = 1j * KV * c1 + F3 * kap ** 2 * (s + 0.5)

    lo, hi = s - 1.5, s + 1.5
    R1 = (
        0.5 * (kap * s3 * (s * (wj - wjp) - 1.5 * (wjp + wj)) - s2 * wj * wjp + kap ** 2 * s4 * (s * s - 2.25))
        + 0.25 * (-wjp + KV * lo) * (kap * s0 * hi + wj * r)
        + 0.25 * (-wjp * r + kap * s0 * lo) * (KV * hi + wj)
        + 0.125 * (-wjp + KV * lo) * (KV * hi + wj)
    )
    R2 = d2 / 8.0 * (-wjp * (1j * KV * (s - 0.5) - c2) + 1j * a1 * lo) * (
        -2.0 * (1j * a2 * hi + wj * a3) + (c2 - 1j * KV * (s - 0.5)) * (KV * hi + wj)
    )
    R3 = d1 / 8.0 * (-1j * a6 * hi + wj * (c1 - 1j * KV * (s + 0.5))) * (
        2.0 * (-wjp * a4 + 1j * a5 * lo) + (1j * KV * (s + 0.5) - c1) * (-wjp + KV * lo)
    )
    R4 = (
        d1 * d2 / 8.0
        * (a1 * (s + 0.5) - c1 * (c2 - 1j * KV * (s - 0.5)))
        * (1j * wjp * (1j * KV * (s - 0.5) - c2) + a1 * lo)
        * (a6 * hi + 1j * wj * (c1 - 1j * KV * (s + 0.5)))
    )
    scalar = complex(R1 + R2 + R3 + R4)
    matrix = gamma_matrix(law, V)
    return GammaReport(
        V=V,
        crossing=c,
        gamma_matrix=matrix,
        gamma_scalar=scalar,
        gamma_abs=abs(matrix),
        f_gamma_limit=gamma_asymptotic(law.gamma),
        growth_coefficient=abs(matrix) / (2.0 * math.sqrt(wj * wjp)),
        s=s,
        kappa0=kap,
        sigma=sig,
        alphas=(a1, a2, a3, a4, a5, a6),
        chi=(c1, c2),
        d=(d1, d2),
        omega_j=wj,
        omega_jprime=wjp,
        terms=(complex(R1), complex(R2), complex(R3), complex(R4)),
    )


def predicted_growth(law: PressureLaw, V: float, delta: float) -> float:
    """Leading-order real part of the ell = 3 bubble at amplitude ``delta``."""
    return gamma_scalar(law, V).growth_coefficient * delta ** 3


SWEEP_HEADER = ["V", "k0", "k2", "c02", "gamma_re", "gamma_im", "gamma_abs", "f_limit", "growth_coeff"]


def sweep_rows(law: PressureLaw, speeds) -> list[list[float]]:
    rows = []
    for V in speeds:
        mod = modulational_index(law, float(V))
        g = gamma_scalar(law, float(V))
        rows.append([float(V), mod.k0, mod.k2, mod.c02, g.gamma_matrix.real, g.gamma_matrix.imag,
                     g.gamma_abs, g.f_gamma_limit, g.growth_coefficient])
    return rows


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for row in rows:
            writer.writerow([repr(float(v)) for v in row])

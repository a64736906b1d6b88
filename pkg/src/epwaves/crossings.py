"""Dispersion branches of the constant state and their double eigenvalues.

At zero amplitude the Bloch symbol decouples into 2x2 blocks whose
eigenvalues are ``lambda_pm^j(xi) = i (V z +- sqrt(1 + P'(1) z**2))`` with
``z = k0 (2 pi j + xi)``.  Two branches ``lambda_-^j`` and
``lambda_+^{j - ell}`` coincide at exactly one Floquet exponent per sign
when ``ell >= 3`` and at ``xi = 0`` when ``ell = 2``.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import NotFound
from .pressure import PressureLaw
from .profile import k0_from_speed

TWO_PI = 2.0 * math.pi


def _branch_sign(branch) -> int:
    if branch in ("+", 1, +1.0):
        return 1
    if branch in ("-", "−", -1, -1.0):
        return -1
    raise ValueError(f"branch must be '+' or '-', got {branch!r}")


def omega(law: PressureLaw, V: float, j, xi):
    """``omega_j(xi) = sqrt(1 + P'(1) k0**2 (2 pi j + xi)**2)``."""
    z = k0_from_speed(law, V) * (TWO_PI * np.asarray(j, float) + np.asarray(xi, float))
    out = np.sqrt(1.0 + law.sound_speed_sq * z * z)
    return float(out) if np.ndim(out) == 0 else out


def lambda_branch(law: PressureLaw, V: float, branch, j, xi):
    """Purely imaginary constant-state eigenvalue on branch ``+`` or ``-``."""
    sign = _branch_sign(branch)
    z = k0_from_speed(law, V) * (TWO_PI * np.asarray(j, float) + np.asarray(xi, float))
    out = 1j * (V * z + sign * np.sqrt(1.0 + law.sound_speed_sq * z * z))
    return complex(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class Crossing:
    """Double eigenvalue ``lambda_-^j(xi0) = lambda_+^{j_prime}(xi0)``."""

    ell: int
    sign: str
    j: int
    j_prime: int
    xi0: float
    lambda0: complex
    omega_j: float
    omega_jprime: float
    at_minus_pi: bool = False

    @property
    def z(self) -> float:
        """Scaled position ``j + xi0 / 2 pi`` of the crossing."""
        return self.j + self.xi0 / TWO_PI

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda0"] = {"re": self.lambda0.real, "im": self.lambda0.imag}
        return d


def _normalize_sign(ell: int, sign) -> tuple[int, str]:
    ell = int(ell)
    if ell < 2:
        raise ValueError("frequency gap ell must be >= 2")
    if ell == 2:
        return 1, "+"
    s = _branch_sign(sign)
    return s, "+" if s > 0 else "-"


def _make(law, V, ell, sign_label, j, xi0, at_minus_pi):
    jp = j - ell
    lam = 0j if ell == 2 else lambda_branch(law, V, "-", j, xi0)
    return Crossing(
        ell=ell,
        sign=sign_label,
        j=int(j),
        j_prime=int(jp),
        xi0=float(xi0),
        lambda0=complex(0.0, lam.imag),
        omega_j=omega(law, V, j, xi0),
        omega_jprime=omega(law, V, jp, xi0),
        at_minus_pi=at_minus_pi,
    )


def find_crossing(law: PressureLaw, V: float, ell: int, sign="+") -> Crossing:
    """Closed-form crossing location.

    With ``z = (ell + 1 +- sqrt(ell**2 - 4) V / sqrt(P'(1))) / 2``, the index is
    ``floor(z)`` and ``xi0 / 2 pi`` is the fractional part of z minus 1/2.
    """
    k0_from_speed(law, V)  # supersonic check
    s, label = _normalize_sign(ell, sign)
    if ell == 2:
        return _make(law, V, 2, label, 1, 0.0, False)
    z = 0.5 * (ell + 1 + s * math.sqrt(ell * ell - 4) * V / math.sqrt(law.sound_speed_sq))
    j = math.floor(z)
    frac = z - j
    xi0 = TWO_PI * (frac - 0.5)
    return _make(law, V, ell, label, j, xi0, frac == 0.0)


def _gap(law, V, ell, j, xi):
    """Im(lambda_-^j - lambda_+^{j - ell}) at xi."""
    return (lambda_branch(law, V, "-", j, xi) - lambda_branch(law, V, "+", j - ell, xi)).imag


def _gap_slope(law, V, ell, j, xi):
    k0 = k0_from_speed(law, V)
    c = law.sound_speed_sq * k0 * k0

    def d_omega(m):
        z = TWO_PI * m + xi
        return c * z / math.sqrt(1.0 + c * z * z)

    return -d_omega(j) - d_omega(j - ell)


def crossing_oracle(law: PressureLaw, V: float, ell: int, sign="+", samples: int = 64) -> Crossing:
    """Locate the crossing by scanning Fourier indices and bisecting in xi.

    The gap ``Im(lambda_-^j - lambda_+^{j-ell})`` is a concave function of
    ``j + xi/2 pi``; its larger root belongs to sign ``+`` and its smaller to
    sign ``-``.  At ``ell = 2`` the two roots merge into a tangency, found by
    bisecting the monotone slope instead.
    """
    s, label = _normalize_sign(ell, sign)
    k0_from_speed(law, V)
    window = int(math.ceil(ell * (1.0 + V / math.sqrt(law.sound_speed_sq)))) + 2
    grid = np.linspace(-math.pi, math.pi, samples + 1)
    roots = []
    for j in range(-window, window + 1):
        if ell == 2:
            f = lambda xi, j=j: _gap_slope(law, V, ell, j, xi)
        else:
            f = lambda xi, j=j: _gap(law, V, ell, j, xi)
        vals = np.array([f(x) for x in grid])
        for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
            if fa == 0.0:
                root = a
            elif fa * fb < 0:
                root = bisect(f, a, b, xtol=1e-15, rtol=1e-15, maxiter=200)
            else:
                continue
            if ell == 2 and abs(_gap(law, V, ell, j, root)) > 1e-9:
                continue
            roots.append((j + root / TWO_PI, j, root))
    if not roots:
        raise NotFound(f"no crossing for ell={ell} at V={V!r}")
    z, j, xi0 = max(roots) if s > 0 else min(roots)
    if xi0 >= math.pi:
        j, xi0 = j + 1, xi0 - TWO_PI
    return _make(law, V, ell, label, j, xi0, xi0 == -math.pi)


def crossing_catalogue(law: PressureLaw, V: float, ell_max: int) -> list[Crossing]:
    out = [find_crossing(law, V, 2)]
    for ell in range(3, ell_max + 1):
        out.extend(find_crossing(law, V, ell, s) for s in ("+", "-"))
    return out


def write_crossings_json(crossings, path) -> None:
    with open(path, "w") as fh:
        json.dump([c.to_dict() for c in crossings], fh, indent=2)
        fh.write("\n")

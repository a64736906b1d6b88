"""Small-amplitude periodic traveling waves and their asymptotic coefficients.

A wave of amplitude ``delta`` and speed ``V`` is the odd 1-periodic field E
with wavenumber k solving

    1/2 E**2 + W(1 + k E'; V) = mu,   mu = h(1; V) delta**2 / 2,

with ``W' = (rho - 1) h`` and ``W(1) = 0``.  The density is
``rho = 1 + k E'`` and the velocity ``u = V (1 - 1/rho)``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Mapping

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import bisect

from ._backend import integrate_profile
from .errors import NoConvergence, NonPeriodic, NoRoot, PeakonProximity
from .pressure import PressureLaw, f_deriv, h_at_one, h_deriv

_GL_X, _GL_W = leggauss(48)
_GL_S = 0.5 * (_GL_X + 1.0)
_GL_SW = 0.5 * _GL_W * _GL_S  # weights for the first moment on [0, 1]

NEWTON_MAXITER = 50
NEWTON_RESIDUAL = 1e-13
PERIOD_NODES = 256
PERIODICITY_TOL = 1e-8
PEAKON_MARGIN = 1e-6

COEFFICIENT_NAMES = ("V_minus_u", "rho", "f2", "f3_k2E2", "k_du")


def _supersonic_h1(law: PressureLaw, V: float) -> float:
    h1 = float(h_deriv(law, 1.0, V, 0))
    if not h1 > 0:
        raise ValueError(f"speed V={V!r} is not supersonic (V^2 must exceed P'(1)={law.sound_speed_sq!r})")
    return h1


def _h_moment(law, V, eps):
    """int_0^1 s h(1 + eps s) ds, vectorized over ``eps``."""
    eps = np.asarray(eps, dtype=float)
    rho = 1.0 + eps[..., None] * _GL_S
    return h_deriv(law, rho, V, 0) @ _GL_SW


def w_potential(law: PressureLaw, rho, V: float):
    """Potential ``W(rho; V) = int_1^rho (r - 1) h(r; V) dr``."""
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr <= 0):
        raise ValueError("density must be positive")
    eps = rho_arr - 1.0
    out = eps * eps * _h_moment(law, V, eps)
    return float(out) if out.ndim == 0 else out


def w_dagger(law: PressureLaw, zeta, V: float):
    """Root n near 1 of ``W(1 + zeta n; V) = zeta**2 h(1; V) / 2``.

    Newton's method is run on the rescaled equation
    ``n**2 int_0^1 s h(1 + zeta n s) ds = h(1)/2``, which stays well
    conditioned as ``zeta -> 0``.  Accepts scalars or arrays.
    """
    h1, dh1, _ = h_at_one(law, V)
    if not h1 > 0:
        raise ValueError("speed is not supersonic")
    zeta_arr = np.asarray(zeta, dtype=float)
    n = 1.0 - zeta_arr * dh1 / (3.0 * h1)
    target = 0.5 * h1
    residual = np.full_like(n, np.inf)
    for _ in range(NEWTON_MAXITER):
        residual = n * n * _h_moment(law, V, zeta_arr * n) - target
        slope = n * h_deriv(law, np.maximum(1.0 + zeta_arr * n, 1e-300), V, 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(residual == 0.0, 0.0, residual / slope)
        if not np.all(np.isfinite(step)):
            break
        n = n - step
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps * np.abs(n)):
            residual = n * n * _h_moment(law, V, zeta_arr * n) - target
            break
    if not (np.all(np.isfinite(n)) and np.all(np.abs(residual) < NEWTON_RESIDUAL) and np.all(n > 0)):
        raise NoConvergence(f"W-dagger Newton iteration failed for zeta={zeta!r}, V={V!r}")
    n = np.where(zeta_arr == 0.0, 1.0, n)
    return float(n) if n.ndim == 0 else n


def wavenumber(law: PressureLaw, delta: float, V: float, nodes: int = PERIOD_NODES) -> float:
    """Wavenumber k of the amplitude-``delta`` wave, by the periodic trapezoid rule."""
    h1 = _supersonic_h1(law, V)
    if delta == 0:
        return 1.0 / (2.0 * np.pi * np.sqrt(h1))
    theta = -np.pi + 2.0 * np.pi * np.arange(nodes) / nodes
    integral = 2.0 * np.pi / nodes * np.sum(1.0 / w_dagger(law, delta * np.cos(theta), V))
    return 1.0 / (np.sqrt(h1) * integral)


def k0_from_speed(law: PressureLaw, V: float) -> float:
    return 1.0 / (2.0 * np.pi * np.sqrt(_supersonic_h1(law, V)))


def speed_from_k0(law: PressureLaw, k0: float) -> float:
    """Invert ``k0 = 1/(2 pi sqrt(V**2 - P'(1)))`` for V."""
    if not k0 > 0:
        raise ValueError("k0 must be positive")
    return float(np.sqrt(law.sound_speed_sq + 1.0 / (2.0 * np.pi * k0) ** 2))


@dataclass(frozen=True)
class PeakonBound:
    rho_max: float
    delta_max: float


@lru_cache(maxsize=256)
def rho_max(law: PressureLaw, V: float) -> PeakonBound:
    """Peakon density (root of h on (1, inf)) and the matching amplitude bound."""
    h1 = _supersonic_h1(law, V)
    upper = 2.0
    while h_deriv(law, upper, V, 0) > 0:
        upper *= 2.0
        if upper > 1024.0:
            raise NoRoot(f"h(.; V={V!r}) has no sign change on (1, 1024)")
    root = bisect(lambda r: float(h_deriv(law, r, V, 0)), 1.0, upper, xtol=1e-14, rtol=1e-15, maxiter=400)
    return PeakonBound(root, float(np.sqrt(2.0 * w_potential(law, root, V) / h1)))


@dataclass(frozen=True)
class WaveParams:
    """Amplitude and speed of a wave; ``mu`` is derived."""

    law: PressureLaw
    delta: float
    V: float
    mu: float = field(init=False)

    def __post_init__(self):
        h1 = _supersonic_h1(self.law, self.V)
        if not (np.isfinite(self.delta) and self.delta >= 0):
            raise ValueError(f"amplitude delta must be >= 0, got {self.delta!r}")
        bound = rho_max(self.law, self.V).delta_max
        if self.delta >= bound:
            raise ValueError(
                f"amplitude delta={self.delta!r} is beyond the peakon bound delta_max={bound:.6g} for V={self.V!r}"
            )
        object.__setattr__(self, "mu", 0.5 * h1 * self.delta ** 2)


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class WaveProfile:
    """Sampled wave on the uniform grid ``x_m = m/M`` plus FFT data.

    ``fourier[name][p]`` is the coefficient of ``exp(2 pi i p x)`` (index taken
    modulo M) of the coefficient functions used by the Bloch symbol:
    ``V - u``, ``rho = 1 + k E'``, ``F''(rho)``, ``F'''(rho) k^2 E''`` and ``k u'``.
    """

    params: WaveParams
    k: float
    x: np.ndarray
    grid_E: np.ndarray
    grid_dE: np.ndarray
    grid_u: np.ndarray
    grid_n: np.ndarray
    grid_k2E2: np.ndarray
    fourier: Mapping[str, np.ndarray]
    periodicity_residual: float

    @property
    def M(self) -> int:
        return self.x.size

    @property
    def law(self) -> PressureLaw:
        return self.params.law

    @property
    def grid_rho(self) -> np.ndarray:
        return 1.0 + self.grid_n

    def coefficient(self, name: str, p) -> np.ndarray:
        return self.fourier[name][np.asarray(p) % self.M]

    def max_fourier_index(self) -> int:
        """Largest |p| resolved without aliasing onto the Nyquist mode."""
        return self.M // 2 - 1

    def invariant_residual(self) -> float:
        """Sup norm of ``E**2/2 + W(rho) - mu`` on the grid."""
        lhs = 0.5 * self.grid_E ** 2 + w_potential(self.law, self.grid_rho, self.params.V)
        return float(np.max(np.abs(lhs - self.params.mu)))

    def crest_density(self) -> float:
        return float(np.max(self.grid_rho))


def solve_profile(law: PressureLaw, params: WaveParams, M: int = 2048) -> WaveProfile:
    """Integrate the profile ODE over one period with classical RK4 at step 1/M."""
    if M < 512 or M & (M - 1):
        raise ValueError("grid size M must be a power of two >= 512")
    if params.law != law:
        raise ValueError("params were built for a different pressure law")
    V, delta = params.V, params.delta
    k = wavenumber(law, delta, V)
    x = np.arange(M) / M
    if delta == 0:
        E = np.zeros(M + 1)
        dE = np.zeros(M + 1)
        residual = 0.0
    else:
        bound = rho_max(law, V)
        dE0 = delta * w_dagger(law, delta, V) / k
        if bound.rho_max - (1.0 + k * dE0) < PEAKON_MARGIN:
            raise PeakonProximity(f"crest density within {PEAKON_MARGIN} of the peakon density")
        E, dE, min_h = integrate_profile(0.0, dE0, k, M, V, law.T, law.gamma)
        if not (min_h > 0 and np.all(np.isfinite(dE))) or bound.rho_max - (1.0 + k * np.max(dE)) < PEAKON_MARGIN:
            raise PeakonProximity("profile density reached the peakon density during integration")
        residual = float(max(abs(E[M] - E[0]), abs(dE[M] - dE[0])))
        if residual > PERIODICITY_TOL:
            raise NonPeriodic(f"periodicity residual {residual:.3e} exceeds {PERIODICITY_TOL:g}")
    E, dE = E[:M], dE[:M]
    n = k * dE
    rho = 1.0 + n
    u = V * (1.0 - 1.0 / rho)
    k2E2 = -E / h_deriv(law, rho, V, 0)
    samples = {
        "V_minus_u": V - u,
        "rho": rho,
        "f2": f_deriv(law, rho, 2),
        "f3_k2E2": f_deriv(law, rho, 3) * k2E2,
        "k_du": V * k2E2 / rho ** 2,
    }
    if delta == 0:
        # constant coefficients: keep the symbol exactly block diagonal
        spectra = {}
        for name, v in samples.items():
            c = np.zeros(M, dtype=complex)
            c[0] = v[0]
            spectra[name] = c
    else:
        spectra = {name: np.fft.fft(v) / M for name, v in samples.items()}
    fourier = MappingProxyType({name: _frozen(c) for name, c in spectra.items()})
    return WaveProfile(
        params=params,
        k=k,
        x=_frozen(x),
        grid_E=_frozen(E),
        grid_dE=_frozen(dE),
        grid_u=_frozen(u),
        grid_n=_frozen(n),
        grid_k2E2=_frozen(k2E2),
        fourier=fourier,
        periodicity_residual=residual,
    )


def make_profile(law: PressureLaw, delta: float, V: float, M: int = 2048) -> WaveProfile:
    return solve_profile(law, WaveParams(law, delta, V), M)


@dataclass(frozen=True)
class AsymptoticCoeffs:
    """Small-amplitude expansion data at fixed speed.

    ``k(delta) = k0 + k2 delta**2 + O(delta**4)`` and the sine amplitudes of
    ``k0 E1``, ``k0 E2`` (on sin 4 pi x) and the sin 6 pi x part of ``k0 E3``.
    """

    k0: float
    k2: float
    E1_amp: float
    E2_amp: float
    E3_amp6: float

    @property
    def k2_over_k0(self) -> float:
        return self.k2 / self.k0


def asymptotic_coeffs(law: PressureLaw, V: float) -> AsymptoticCoeffs:
    h, dh, d2h = h_at_one(law, V)
    if not h > 0:
        raise ValueError("speed is not supersonic")
    k0 = 1.0 / (2.0 * np.pi * np.sqrt(h))
    ratio = dh / h
    k2 = k0 * (ratio ** 2 / 12.0 - d2h / (16.0 * h))
    sigma2 = 3.0 / 16.0 * (ratio ** 2 - 0.25 * d2h / h)
    return AsymptoticCoeffs(
        k0=float(k0),
        k2=float(k2),
        E1_amp=1.0 / (2.0 * np.pi),
        E2_amp=float(-ratio / 3.0 / (4.0 * np.pi)),
        E3_amp6=float(sigma2 / (6.0 * np.pi)),
    )


def write_profile_csv(profile: WaveProfile, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "E", "dE", "u", "n"])
        for row in zip(profile.x, profile.grid_E, profile.grid_dE, profile.grid_u, profile.grid_n):
            writer.writerow([repr(float(v)) for v in row])

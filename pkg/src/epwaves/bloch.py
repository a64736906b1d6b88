"""Hill's method for the Floquet-Bloch spectrum of the linearized wave operator.

For Floquet exponent xi the Bloch symbol acts on 1-periodic pairs (E, u).
Truncating to Fourier modes ``|j| <= N`` gives a dense complex matrix of size
``2(2N+1)``; row/column ``2(j+N) + c`` holds mode j of component c, with
c = 0 for E and c = 1 for u.  Coefficient functions multiply to the left of
derivatives.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.optimize import brentq, minimize_scalar

from .crossings import Crossing, omega
from .errors import EigensolverFailure, InsufficientFourier
from .profile import WaveProfile

DEFAULT_N = 32


@dataclass(frozen=True, eq=False)
class BlochOperator:
    xi: float
    N: int
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def block(self, j: int, m: int) -> np.ndarray:
        """2x2 block coupling output mode j to input mode m."""
        r, c = 2 * (j + self.N), 2 * (m + self.N)
        return self.matrix[r:r + 2, c:c + 2]


@dataclass(frozen=True, eq=False)
class SpectrumSlice:
    xi: float
    eigenvalues: np.ndarray

    @property
    def max_real(self) -> float:
        return float(np.max(self.eigenvalues.real))


def assemble(profile: WaveProfile, xi: float, N: int = DEFAULT_N) -> BlochOperator:
    """Truncated Bloch matrix at Floquet exponent ``xi``."""
    if N < 4:
        raise ValueError("truncation N must be >= 4")
    if 2 * N > profile.max_fourier_index():
        raise InsufficientFourier(
            f"profile resolves Fourier indices up to {profile.max_fourier_index()}, need {2 * N}"
        )
    modes = np.arange(-N, N + 1)
    diff = modes[:, None] - modes[None, :]
    D = 1j * profile.k * (2.0 * np.pi * modes + xi)
    transport = profile.coefficient("V_minus_u", diff) * D[None, :]
    size = 2 * (2 * N + 1)
    A = np.empty((size, size), dtype=complex)
    A[0::2, 0::2] = transport
    A[0::2, 1::2] = -profile.coefficient("rho", diff)
    A[1::2, 0::2] = (
        np.eye(2 * N + 1)
        - profile.coefficient("f2", diff) * (D * D)[None, :]
        - profile.coefficient("f3_k2E2", diff) * D[None, :]
    )
    A[1::2, 1::2] = transport - profile.coefficient("k_du", diff)
    return BlochOperator(xi=float(xi), N=N, matrix=A)


def spectrum(op: BlochOperator) -> SpectrumSlice:
    """All eigenvalues of the truncated matrix (dense QR/Schur solver)."""
    try:
        vals = scipy.linalg.eigvals(op.matrix, overwrite_a=False, check_finite=True)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverFailure(str(exc)) from exc
    return SpectrumSlice(xi=op.xi, eigenvalues=vals)


def scan(profile: WaveProfile, xi_grid: Sequence[float], N: int = DEFAULT_N, workers: int | None = None) -> list[SpectrumSlice]:
    """Spectrum at each grid point, in input order.

    ``workers > 1`` evaluates slices on a thread pool; LAPACK releases the
    GIL so this scales, and results do not depend on the worker count.
    """
    job = lambda xi: spectrum(assemble(profile, float(xi), N))
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(job, xi_grid))
    return [job(xi) for xi in xi_grid]


def uniform_grid(points: int) -> np.ndarray:
    """``points`` equispaced Floquet exponents covering [-pi, pi)."""
    return -np.pi + 2.0 * np.pi * np.arange(points) / points


def wrap(xi):
    """Reduce to [-pi, pi)."""
    return (np.asarray(xi) + np.pi) % (2.0 * np.pi) - np.pi


def noise_floor(profile: WaveProfile, N: int = DEFAULT_N, samples: int = 8) -> float:
    """Largest |Re lambda| of the zero-amplitude operator at the same speed and truncation."""
    from .profile import make_profile

    flat = make_profile(profile.law, 0.0, profile.params.V, profile.M)
    slices = scan(flat, uniform_grid(samples), N)
    return max(float(np.max(np.abs(s.eigenvalues.real))) for s in slices)


@dataclass(frozen=True)
class Bubble:
    xi_center: float
    xi_extent: tuple[float, float]
    max_growth: float
    lambda_at_max: complex

    def to_dict(self) -> dict:
        return {
            "xi_center": self.xi_center,
            "xi_extent": list(self.xi_extent),
            "max_growth": self.max_growth,
            "lambda_re": self.lambda_at_max.real,
            "lambda_im": self.lambda_at_max.imag,
        }


def defective_radius(slices: Sequence[SpectrumSlice]) -> float:
    """Radius around 0 where round-off on the defective zero eigenvalue dominates.

    A Jordan block turns round-off ``eps * |A|`` into eigenvalue errors of
    size ``sqrt(eps * |A|)``; eigenvalues closer to the origin than ten times
    that carry no sign information in their real parts.
    """
    scale = max(float(np.max(np.abs(s.eigenvalues))) for s in slices)
    return 10.0 * math.sqrt(np.finfo(float).eps * scale)


def bubble_detect(slices: Sequence[SpectrumSlice], threshold: float, exclude_radius: float = 0.0) -> list[Bubble]:
    """Maximal runs of consecutive slices whose max real part exceeds ``threshold``.

    Eigenvalues with ``|lambda| < exclude_radius`` are ignored.
    """

    def peak(s):
        vals = s.eigenvalues[np.abs(s.eigenvalues) >= exclude_radius] if exclude_radius > 0 else s.eigenvalues
        if vals.size == 0:
            return -math.inf, 0j
        i = int(np.argmax(vals.real))
        return float(vals[i].real), complex(vals[i])

    bubbles = []
    run: list[tuple[SpectrumSlice, float, complex]] = []
    for s in list(slices) + [None]:
        if s is not None:
            top, lam = peak(s)
            if top > threshold:
                run.append((s, top, lam))
                continue
        if run:
            best = max(run, key=lambda r: r[1])
            bubbles.append(
                Bubble(
                    xi_center=best[0].xi,
                    xi_extent=(run[0][0].xi, run[-1][0].xi),
                    max_growth=best[1],
                    lambda_at_max=best[2],
                )
            )
            run = []
    return bubbles


def pair_discriminant(profile: WaveProfile, crossing: Crossing, xi: float, N: int = DEFAULT_N):
    """Squared half-gap of the eigenvalue pair born from ``crossing``.

    The pair is picked by eigenvector overlap with the two colliding
    constant-state modes (``lambda_-`` on mode j and ``lambda_+`` on mode
    j'), measured in the coordinates that diagonalize every zero-amplitude
    block.  For a Hamiltonian pair ``c +- x`` the value ``x**2`` is real:
    positive inside an instability bubble (growth rate ``sqrt``) and negative
    outside.  Returns ``(value, pair)``.
    """
    if max(abs(crossing.j), abs(crossing.j_prime)) > N:
        raise InsufficientFourier("crossing modes lie outside the truncation window")
    op = assemble(profile, xi, N)
    try:
        vals, vecs = scipy.linalg.eig(op.matrix)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverFailure(str(exc)) from exc
    freq = omega(profile.law, profile.params.V, np.arange(-N, N + 1), xi)[:, None]
    x, y = vecs[0::2], vecs[1::2]
    plus = 0.5 * (x + 1j * y / freq)
    minus = 0.5 * (x - 1j * y / freq)
    norm = np.sum(np.abs(plus) ** 2 + np.abs(minus) ** 2, axis=0)
    weight = (np.abs(minus[crossing.j + N]) ** 2 + np.abs(plus[crossing.j_prime + N]) ** 2) / norm
    a, b = vals[np.argsort(-weight, kind="stable")[:2]]
    if a.real < b.real:
        a, b = b, a
    return float(((0.5 * (a - b)) ** 2).real), (complex(a), complex(b))


def refine_bubble(
    profile: WaveProfile,
    crossing: Crossing,
    N: int = DEFAULT_N,
    half_window: float = 0.5,
    coarse_points: int = 101,
    passes: int = 4,
) -> Bubble | None:
    """Locate the instability bubble seeded by ``crossing`` to full precision.

    Bubbles are only ``O(delta**ell)`` wide, far below any practical uniform
    grid, so the pair discriminant is maximized instead: a coarse scan over
    ``xi0 +- half_window`` followed by bounded Brent searches in an offset
    variable, re-centred each pass so the relative tolerance shrinks with
    the bracket.  Returns ``None`` when the maximum is not positive.
    """
    f = lambda xi: pair_discriminant(profile, crossing, xi, N)[0]
    coarse = crossing.xi0 + np.linspace(-half_window, half_window, coarse_points)
    values = [f(x) for x in coarse]
    best = int(np.argmax(values))
    centre = float(coarse[best])
    half = float(coarse[1] - coarse[0])
    for _ in range(passes):
        res = minimize_scalar(lambda t: -f(centre + t), bounds=(-half, half), method="bounded",
                              options={"xatol": 1e-18})
        centre += float(res.x)
        half *= 1e-3
    peak, pair = pair_discriminant(profile, crossing, centre, N)
    if not peak > 0:
        return None

    def edge(direction):
        step = 1e-15
        while f(centre + direction * step) > 0:
            step *= 4.0
            if step > half_window:
                return centre + direction * half_window
        return brentq(lambda t: f(centre + direction * t), 0.0, step, xtol=1e-18, rtol=1e-15) * direction + centre

    return Bubble(
        xi_center=float(wrap(centre)),
        xi_extent=(float(wrap(edge(-1.0))), float(wrap(edge(1.0)))),
        max_growth=math.sqrt(peak),
        lambda_at_max=pair[0],
    )


def write_spectrum_csv(slices: Sequence[SpectrumSlice], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["xi", "re", "im"])
        for s in slices:
            for lam in s.eigenvalues:
                writer.writerow([repr(float(s.xi)), repr(float(lam.real)), repr(float(lam.imag))])


def write_bubbles_json(bubbles: Sequence[Bubble], path) -> None:
    with open(path, "w") as fh:
        json.dump([b.to_dict() for b in bubbles], fh, indent=2)
        fh.write("\n")

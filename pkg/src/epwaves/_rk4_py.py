"""Pure-Python RK4 integrator for the traveling-profile ODE (fallback kernel)."""
from __future__ import annotations

import numpy as np


def integrate_profile(E0, dE0, k, M, V, T, gamma):
    """Integrate E'' = -E / (k^2 h(1 + k E')) over one period with step 1/M.

    Returns ``(E, dE, min_h)`` where ``E`` and ``dE`` hold M+1 samples
    (both endpoints included) and ``min_h`` is the smallest value of
    ``h(1 + k E')`` met at any stage evaluation.
    """
    V2 = V * V
    Tg = T * gamma
    ge = gamma - 2.0
    k2 = k * k
    step = 1.0 / M
    half = 0.5 * step
    E = np.empty(M + 1)
    dE = np.empty(M + 1)
    E[0] = e = E0
    dE[0] = d = dE0
    min_h = np.inf

    def rhs(e, d):
        nonlocal min_h
        rho = 1.0 + k * d
        if rho <= 0.0:
            min_h = -np.inf
            return d, np.nan
        h = V2 / (rho * rho * rho) - Tg * rho ** ge
        if h < min_h:
            min_h = h
        return d, -e / (k2 * h)

    for m in range(M):
        a1, b1 = rhs(e, d)
        a2, b2 = rhs(e + half * a1, d + half * b1)
        a3, b3 = rhs(e + half * a2, d + half * b2)
        a4, b4 = rhs(e + step * a3, d + step * b3)
        e += step / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4)
        d += step / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4)
        E[m + 1] = e
        dE[m + 1] = d
    return E, dE, float(min_h)

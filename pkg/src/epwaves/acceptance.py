"""End-to-end acceptance checks with measured values.

Each ``criterion_*`` function runs one check at its stated tolerance and
returns a ``CriterionResult``.  Errors raised by the numerics are caught and
reported as failures with the error text, never swallowed into a pass.
Checks whose stated amplitudes exceed the peakon bound of their wave family
also have a companion run at admissible amplitudes; companions are reported
separately and do not replace the original verdict.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import bloch
from .crossings import crossing_oracle, find_crossing, lambda_branch
from .errors import EPWavesError
from .indices import gamma_asymptotic_fraction, gamma_scalar, predicted_growth
from .pressure import PressureLaw
from .profile import asymptotic_coeffs, make_profile, rho_max, speed_from_k0, wavenumber

FAMILY_LAW = PressureLaw(0.25, 2.0)


def family_speed() -> float:
    """Speed of the gamma = 2, T = 1/4 family with unit base wavenumber."""
    return speed_from_k0(FAMILY_LAW, 1.0)


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    measured: dict = field(default_factory=dict)
    detail: str = ""
    seconds: float = 0.0
    companion: bool = False

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.key}: {self.title} -- {self.detail}"


def _run(key, title, body: Callable[[], tuple[bool, dict, str]], companion=False) -> CriterionResult:
    start = time.perf_counter()
    try:
        passed, measured, detail = body()
    except (EPWavesError, ValueError, ArithmeticError) as exc:
        passed, measured, detail = False, {"error": f"{type(exc).__name__}: {exc}"}, f"{type(exc).__name__}: {exc}"
    return CriterionResult(key, title, bool(passed), measured, detail, time.perf_counter() - start, companion)


def _fit_slope(x, y) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


# 1 ---------------------------------------------------------------------------
def criterion_1(tol: float = 1e-10, N: int = 32, xi_count: int = 50, j_max: int = 30) -> CriterionResult:
    def body():
        V = family_speed()
        flat = make_profile(FAMILY_LAW, 0.0, V)
        worst = 0.0
        modes = np.arange(-j_max, j_max + 1)
        for xi in bloch.uniform_grid(xi_count):
            vals = bloch.spectrum(bloch.assemble(flat, xi, N)).eigenvalues
            exact = np.concatenate([lambda_branch(FAMILY_LAW, V, b, modes, xi) for b in "+-"])
            worst = max(worst, float(np.max(np.min(np.abs(exact[:, None] - vals[None, :]), axis=1))))
        return worst < tol, {"max_abs_error": worst, "tolerance": tol}, f"max |lambda - exact| = {worst:.3e} (< {tol:g})"

    return _run("1", "constant-state spectrum matches dispersion branches", body)


# 2 ---------------------------------------------------------------------------
def criterion_2(tol: float = 1e-10, speeds=(0.72, 1.0, 2.0, 5.0, 10.0), ells=range(2, 9)) -> CriterionResult:
    def body():
        worst, mismatches = 0.0, []
        for V in speeds:
            for ell in ells:
                for sign in "+-":
                    a = find_crossing(FAMILY_LAW, V, ell, sign)
                    b = crossing_oracle(FAMILY_LAW, V, ell, sign)
                    worst = max(worst, abs(a.xi0 - b.xi0))
                    if (a.j, a.j_prime) != (b.j, b.j_prime):
                        mismatches.append((V, ell, sign))
        c2 = find_crossing(FAMILY_LAW, 1.0, 2)
        gap2 = (c2.j, c2.j_prime, c2.xi0, c2.lambda0) == (1, -1, 0.0, 0j)
        ok = worst < tol and not mismatches and gap2
        return ok, {"max_xi_error": worst, "index_mismatches": len(mismatches), "ell2_exact": gap2}, (
            f"max |dxi0| = {worst:.3e}, index mismatches = {len(mismatches)}, ell=2 exact = {gap2}"
        )

    return _run("2", "closed-form crossings agree with root-finding oracle", body)


# 3 ---------------------------------------------------------------------------
def criterion_3(tol: float = 1e-8, min_exponent: float = 1.8, V: float = 1.0,
                deltas=(0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08)) -> CriterionResult:
    def body():
        worst, rem_n, rem_u = 0.0, [], []
        for d in deltas:
            p = make_profile(FAMILY_LAW, d, V)
            worst = max(worst, p.invariant_residual())
            base = np.cos(2 * np.pi * p.x)
            rem_n.append(np.max(np.abs(p.grid_n - d * base)))
            rem_u.append(np.max(np.abs(p.grid_u - V * d * base)))
        en, eu = _fit_slope(deltas, rem_n), _fit_slope(deltas, rem_u)
        ok = worst < tol and en >= min_exponent and eu >= min_exponent
        return ok, {"invariant_residual": worst, "exponent_n": en, "exponent_u": eu}, (
            f"invariant residual {worst:.2e}, remainder exponents n: {en:.3f}, u: {eu:.3f}"
        )

    return _run("3", "profile invariant and first-harmonic laws", body)


# 4 ---------------------------------------------------------------------------
def criterion_4(rel_tol: float = 0.02, delta: float = 0.02) -> CriterionResult:
    cases = ((2.0, 0.25, 1.0), (1.0, 1.0, 2.0), (3.0, 1.0, 2.0))

    def body():
        errs = {}
        for g, T, V in cases:
            law = PressureLaw(T, g)
            co = asymptotic_coeffs(law, V)
            est = (wavenumber(law, delta, V) - co.k0) / delta ** 2
            errs[f"gamma={g},T={T},V={V}"] = abs(est / co.k2 - 1.0)
        worst = max(errs.values())
        return worst < rel_tol, {"relative_errors": errs}, f"worst relative error {worst:.3%} (< {rel_tol:.0%})"

    return _run("4", "quadratic wavenumber correction", body)


def criterion_4_convergence(deltas=(0.01, 0.005), ratio_band=(3.6, 4.4)) -> CriterionResult:
    """Halving delta divides the relative error of the quadratic correction by about four."""
    cases = ((2.0, 0.25, 1.0), (1.0, 1.0, 2.0), (3.0, 1.0, 2.0))

    def body():
        ratios = {}
        for g, T, V in cases:
            law = PressureLaw(T, g)
            co = asymptotic_coeffs(law, V)
            errs = [abs((wavenumber(law, d, V) - co.k0) / d ** 2 / co.k2 - 1.0) for d in deltas]
            ratios[f"gamma={g},T={T},V={V}"] = errs[0] / errs[1]
        ok = all(ratio_band[0] < r < ratio_band[1] for r in ratios.values())
        return ok, {"error_ratios": ratios}, "error ratios " + ", ".join(f"{r:.3f}" for r in ratios.values())

    return _run("4*", "companion of 4: relative error decays like delta^2", body, companion=True)


# 5 ---------------------------------------------------------------------------
def criterion_5(tol: float = 1e-9, points: int = 20) -> CriterionResult:
    laws = [PressureLaw(T, g) for g in (1.0, 1.5, 2.0, 3.0) for T in (0.25, 1.0)]

    def body():
        worst = 0.0
        for law in laws:
            c = math.sqrt(law.sound_speed_sq)
            for V in np.geomspace(1.02 * c, 60.0 * c, points):
                r = gamma_scalar(law, float(V))
                worst = max(worst, abs(r.gamma_matrix - r.gamma_scalar) / (1.0 + abs(r.gamma_matrix)))
        return worst < tol, {"max_scaled_gap": worst}, f"max |G_mat - G_sca|/(1+|G|) = {worst:.2e} over {len(laws)} laws"

    return _run("5", "two-route index consistency", body)


# 6 ---------------------------------------------------------------------------
def criterion_6(rel_tol: float = 0.05, min_order: float = 0.9) -> CriterionResult:
    def body():
        out, ok = {}, True
        for g in (1, 2, 3):
            law = PressureLaw(0.25, float(g))
            limit = float(gamma_asymptotic_fraction(g))
            rel = abs(gamma_scalar(law, 100.0).gamma_matrix - limit) / abs(limit)
            speeds = (10.0, 20.0, 40.0, 80.0)
            errs = [abs(gamma_scalar(law, V).gamma_matrix - limit) for V in speeds]
            order = -_fit_slope(speeds, errs)
            out[f"gamma={g}"] = {"rel_err_V100": rel, "decay_order": order, "limit": str(gamma_asymptotic_fraction(g))}
            ok &= rel < rel_tol and order >= min_order
        detail = ", ".join(f"{k}: rel {v['rel_err_V100']:.1e}, order {v['decay_order']:.2f}" for k, v in out.items())
        return ok, out, detail

    return _run("6", "large-speed limit of the index", body)


# 7 ---------------------------------------------------------------------------
def _growth_check(deltas, rel_tol, exp_tol, centre_tol, N):
    V = family_speed()
    crossing = find_crossing(FAMILY_LAW, V, 3, "+")
    rows = []
    for d in deltas:
        prof = make_profile(FAMILY_LAW, d, V)
        bub = bloch.refine_bubble(prof, crossing, N)
        pred = predicted_growth(FAMILY_LAW, V, d)
        if bub is None:
            rows.append({"delta": d, "measured": 0.0, "predicted": pred, "rel_err": 1.0, "centre_offset": math.inf})
            continue
        offset = abs(float(bloch.wrap(bub.xi_center - crossing.xi0)))
        rows.append({"delta": d, "measured": bub.max_growth, "predicted": pred,
                     "rel_err": abs(bub.max_growth / pred - 1.0), "centre_offset": offset})
    measured = [r["measured"] for r in rows]
    exponent = _fit_slope(deltas, measured) if all(m > 0 for m in measured) else float("nan")
    ok = (all(r["rel_err"] < rel_tol and r["centre_offset"] < centre_tol for r in rows)
          and abs(exponent - 3.0) <= exp_tol)
    detail = "; ".join(f"delta={r['delta']:g}: growth {r['measured']:.4e} vs {r['predicted']:.4e} "
                       f"({r['rel_err']:.1%}), centre offset {r['centre_offset']:.3f}" for r in rows)
    return ok, {"rows": rows, "exponent": exponent}, detail + f"; exponent {exponent:.3f}"


def criterion_7(deltas=(0.03, 0.05, 0.08), rel_tol=0.15, exp_tol=0.3, centre_tol=0.1, N=32) -> CriterionResult:
    return _run("7", "ell=3 bubble growth matches prediction (k0=1 family)",
                lambda: _growth_check(deltas, rel_tol, exp_tol, centre_tol, N))


def criterion_7_admissible(fractions=(0.1, 0.2, 0.4), rel_tol=0.15, exp_tol=0.3, centre_tol=0.1, N=32):
    """Same check with amplitudes set as fractions of the family's peakon bound."""
    bound = rho_max(FAMILY_LAW, family_speed()).delta_max
    deltas = tuple(round(f * bound, 6) for f in fractions)
    return _run("7*", f"companion of 7 at admissible delta={deltas}",
                lambda: _growth_check(deltas, rel_tol, exp_tol, centre_tol, N), companion=True)


# 8 ---------------------------------------------------------------------------
def _modulation_check(deltas, radius, factor, xi_half, xi_count, N):
    V = family_speed()
    grid = np.linspace(-xi_half, xi_half, xi_count)
    rows = []
    for d in deltas:
        prof = make_profile(FAMILY_LAW, d, V)
        worst = -math.inf
        for s in bloch.scan(prof, grid, N):
            near = s.eigenvalues[np.abs(s.eigenvalues) < radius]
            if near.size:
                worst = max(worst, float(np.max(near.real)))
        rows.append({"delta": d, "max_real_near_origin": worst, "bound": factor * d})
    ok = all(r["max_real_near_origin"] < r["bound"] for r in rows)
    detail = "; ".join(f"delta={r['delta']:g}: max Re {r['max_real_near_origin']:.2e} (< {r['bound']:.1e})" for r in rows)
    return ok, {"rows": rows}, detail


def criterion_8(deltas=(0.03, 0.05), radius=0.2, factor=0.01, xi_half=0.3, xi_count=61, N=32) -> CriterionResult:
    return _run("8", "no side-band instability near the origin (k0=1 family)",
                lambda: _modulation_check(deltas, radius, factor, xi_half, xi_count, N))


def criterion_8_admissible(fractions=(0.3, 0.6), radius=0.2, factor=0.01, xi_half=0.3, xi_count=61, N=32):
    bound = rho_max(FAMILY_LAW, family_speed()).delta_max
    deltas = tuple(round(f * bound, 6) for f in fractions)
    return _run("8*", f"companion of 8 at admissible delta={deltas}",
                lambda: _modulation_check(deltas, radius, factor, xi_half, xi_count, N), companion=True)


# 9 ---------------------------------------------------------------------------
def _hausdorff(a, b) -> float:
    dist = np.abs(a[:, None] - b[None, :])
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


def pairing_residual(profile, xi, N) -> float:
    """Worst distance from an interior eigenvalue to the reflection of the spectrum."""
    vals = bloch.spectrum(bloch.assemble(profile, xi, N)).eigenvalues
    window = profile.params.V * asymptotic_coeffs(profile.law, profile.params.V).k0 * 2 * np.pi * N / 2
    interior = vals[np.abs(vals.imag) < window]
    return float(np.max(np.min(np.abs(interior[:, None] + np.conj(vals)[None, :]), axis=1)))


def criterion_9(conj_tol=1e-10, pair_tol=1e-6, delta=0.004, xi_values=(0.3, 1.1, -2.2, 2.9)) -> CriterionResult:
    def body():
        prof = make_profile(FAMILY_LAW, delta, family_speed())
        conj = max(
            _hausdorff(bloch.spectrum(bloch.assemble(prof, -xi, 32)).eigenvalues,
                       np.conj(bloch.spectrum(bloch.assemble(prof, xi, 32)).eigenvalues))
            for xi in xi_values
        )
        r32 = max(pairing_residual(prof, xi, 32) for xi in xi_values)
        r48 = max(pairing_residual(prof, xi, 48) for xi in xi_values)
        ok = conj < conj_tol and r32 < pair_tol and r48 < r32
        return ok, {"conjugation": conj, "pairing_N32": r32, "pairing_N48": r48}, (
            f"conjugation {conj:.2e}, pairing N=32 {r32:.2e}, N=48 {r48:.2e}"
        )

    return _run("9", "conjugation and Hamiltonian pairing symmetries", body)


def criterion_9_exactness(floor=1e-12, delta=0.004, sizes=(16, 24, 32, 48), xi_values=(0.3, 1.1, -2.2, 2.9)):
    """Pairing residual sits at round-off for every truncation size."""

    def body():
        prof = make_profile(FAMILY_LAW, delta, family_speed())
        res = {N: max(pairing_residual(prof, xi, N) for xi in xi_values) for N in sizes}
        return max(res.values()) < floor, {"pairing": res}, ", ".join(f"N={N}: {r:.2e}" for N, r in res.items())

    return _run("9*", "companion of 9: pairing holds to round-off at every N", body, companion=True)


# 10 --------------------------------------------------------------------------
def criterion_10(fraction: float = 0.3, N: int = 32, centre_tol: float = 0.1) -> CriterionResult:
    def body():
        V = family_speed()
        delta = round(fraction * rho_max(FAMILY_LAW, V).delta_max, 6)
        prof = make_profile(FAMILY_LAW, delta, V)
        threshold = 10.0 * bloch.noise_floor(prof, N)
        rows = []
        for ell in (3, 4, 5):
            crossing = find_crossing(FAMILY_LAW, V, ell, "+")
            bub = bloch.refine_bubble(prof, crossing, N)
            if bub is None:
                rows.append({"ell": ell, "growth": 0.0, "detected": False, "offset": math.inf})
                continue
            lo, hi = bub.xi_extent
            local = bloch.scan(prof, np.linspace(lo, hi, 21)[1:-1], N)
            found = bloch.bubble_detect(local, threshold)
            rows.append({"ell": ell, "growth": bub.max_growth, "detected": bool(found),
                         "offset": abs(float(bloch.wrap(bub.xi_center - crossing.xi0)))})
        growth = [r["growth"] for r in rows]
        ok = (all(r["detected"] and r["offset"] < centre_tol for r in rows)
              and growth[0] > growth[1] > growth[2])
        detail = f"delta={delta:g}, threshold {threshold:.1e}: " + ", ".join(
            f"ell={r['ell']} growth {r['growth']:.3e} detected={r['detected']} offset {r['offset']:.3f}" for r in rows)
        return ok, {"delta": delta, "threshold": threshold, "rows": rows}, detail

    return _run("10", "bubbles at ell=3,4,5 with decreasing growth", body)


CRITERIA = (
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_4_convergence, criterion_5, criterion_6,
    criterion_7, criterion_7_admissible, criterion_8, criterion_8_admissible, criterion_9, criterion_9_exactness, criterion_10,
)


def run_all() -> list[CriterionResult]:
    return [c() for c in CRITERIA]


def write_report(results, path) -> None:
    payload = {
        "passed": all(r.passed for r in results if not r.companion),
        "criteria": [asdict(r) for r in results],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=float)
        fh.write("\n")

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.optimize import brentq

from epwaves import (
    NoConvergence,
    PressureLaw,
    WaveParams,
    asymptotic_coeffs,
    make_profile,
    rho_max,
    solve_profile,
    w_dagger,
    w_potential,
    wavenumber,
)
from epwaves._rk4_py import integrate_profile as python_kernel
from epwaves.pressure import h_deriv
from epwaves.profile import k0_from_speed, speed_from_k0, write_profile_csv


def w_closed_form(rho):
    """Antiderivative of (r - 1)(1/r^3 - 1/2) for gamma=2, T=1/4, V=1."""
    F = lambda r: -1 / r + 1 / (2 * r * r) - r * r / 4 + r / 2
    return F(rho) - F(1.0)


def w_dagger_bisection(law, zeta, V):
    h1 = h_deriv(law, 1.0, V)
    return brentq(lambda n: w_potential(law, 1 + zeta * n, V) - zeta ** 2 * h1 / 2, 0.5, 2.0, xtol=1e-15)


class TestPotential:
    def test_normalization(self, law):
        assert w_potential(law, 1.0, 1.0) == 0.0

    @pytest.mark.parametrize("rho", [0.6, 0.9, 1.2, 1.5, 2.5])
    def test_matches_antiderivative(self, law, rho):
        assert w_potential(law, rho, 1.0) == pytest.approx(w_closed_form(rho), abs=1e-12)

    def test_quadratic_near_one(self, law):
        eps = 1e-4
        assert w_potential(law, 1 + eps, 1.0) == pytest.approx(0.25 * eps ** 2, rel=1e-3)

    def test_vectorized(self, law):
        rho = np.array([0.8, 1.0, 1.3])
        np.testing.assert_allclose(w_potential(law, rho, 1.0), [w_closed_form(r) for r in rho], atol=1e-13)


class TestWDagger:
    def test_zero(self, law):
        assert w_dagger(law, 0.0, 1.0) == 1.0

    @pytest.mark.parametrize("zeta", [0.01, -0.01])
    def test_first_order_slope(self, law, zeta):
        assert w_dagger(law, zeta, 1.0) == pytest.approx(1 + 2 * zeta, abs=1e-3)

    @pytest.mark.parametrize("zeta", [-0.12, -0.05, 0.003, 0.07, 0.12])
    def test_against_bisection(self, law, zeta):
        assert w_dagger(law, zeta, 1.0) == pytest.approx(w_dagger_bisection(law, zeta, 1.0), rel=1e-13)

    def test_beyond_peakon_fails(self, law):
        with pytest.raises(NoConvergence):
            w_dagger(law, 0.3, 1.0)


class TestWavenumber:
    def test_base_value(self, law):
        assert wavenumber(law, 0.0, 1.0) == pytest.approx(1 / (2 * math.pi * math.sqrt(0.5)), rel=1e-15)
        assert wavenumber(law, 0.0, 1.0) == pytest.approx(0.225079, abs=1e-6)

    def test_quadratic_correction(self, law):
        co = asymptotic_coeffs(law, 1.0)
        rest = lambda d: wavenumber(law, d, 1.0) - co.k0 * (1 + d * d * co.k2_over_k0)
        assert abs(rest(0.1)) < 10 * 0.1 ** 4
        assert rest(0.05) / rest(0.025) == pytest.approx(16.0, rel=0.1)

    def test_even_in_amplitude(self, law):
        # the integrand at -delta is the integrand at +delta shifted by pi
        theta = np.linspace(-math.pi, math.pi, 256, endpoint=False)
        a = np.sum(1 / w_dagger(law, 0.07 * np.cos(theta), 1.0))
        b = np.sum(1 / w_dagger(law, -0.07 * np.cos(theta), 1.0))
        assert a == pytest.approx(b, rel=1e-13)

    def test_converged_in_nodes(self, law):
        assert wavenumber(law, 0.1, 1.0, nodes=128) == pytest.approx(wavenumber(law, 0.1, 1.0), rel=1e-14)

    @pytest.mark.parametrize("g, T, V", [(2.0, 0.25, 1.0), (1.0, 1.0, 2.0), (3.0, 1.0, 2.0)])
    def test_quadratic_limit(self, g, T, V):
        law = PressureLaw(T, g)
        co = asymptotic_coeffs(law, V)
        est = (wavenumber(law, 0.004, V) - co.k0) / 0.004 ** 2
        assert est == pytest.approx(co.k2, rel=5e-3)

    def test_speed_from_k0_roundtrip(self, law):
        V = speed_from_k0(law, 1.0)
        assert V == pytest.approx(0.724797, abs=1e-6)
        assert k0_from_speed(law, V) == pytest.approx(1.0, rel=1e-14)


class TestPeakonBound:
    def test_root_and_bound(self, law):
        b = rho_max(law, 1.0)
        assert b.rho_max == pytest.approx(2 ** (1 / 3), abs=1e-12)
        assert abs(h_deriv(law, b.rho_max, 1.0)) < 1e-10
        assert b.delta_max == pytest.approx(math.sqrt(2 * w_closed_form(2 ** (1 / 3)) / 0.5), rel=1e-12)

    @given(st.floats(0.25, 3.0), st.floats(1.0, 4.0), st.floats(1.05, 4.0))
    @settings(max_examples=40, deadline=None)
    def test_power_law_closed_form(self, T, g, mach):
        law = PressureLaw(T, g)
        V = mach * math.sqrt(T * g)
        expected = (V * V / (T * g)) ** (1 / (g + 1))
        assert rho_max(law, V).rho_max == pytest.approx(expected, rel=1e-11)

    def test_bound_decreases_with_exponent(self):
        values = [rho_max(PressureLaw(0.25, g), 2.0).delta_max for g in (1.0, 1.5, 2.0, 2.5, 3.0, 4.0)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_crest_density_reaches_peakon(self, law):
        b = rho_max(law, 1.0)
        crest = lambda d: 1 + d * w_dagger(law, d, 1.0)
        assert crest(0.999999 * b.delta_max) == pytest.approx(b.rho_max, abs=1e-3)


class TestParams:
    def test_mu(self, law):
        p = WaveParams(law, 0.05, 1.0)
        assert p.mu == 0.5 * 0.5 * 0.05 ** 2

    @pytest.mark.parametrize("delta, V", [(-0.01, 1.0), (0.01, 0.5), (0.2, 1.0)])
    def test_rejections(self, law, delta, V):
        with pytest.raises(ValueError):
            WaveParams(law, delta, V)

    def test_grid_size_validation(self, law):
        with pytest.raises(ValueError):
            solve_profile(law, WaveParams(law, 0.01, 1.0), 1000)


class TestProfile:
    def test_flat(self, law):
        p = make_profile(law, 0.0, 1.0)
        assert np.all(p.grid_E == 0) and np.all(p.grid_u == 0)
        assert p.k == wavenumber(law, 0.0, 1.0)

    def test_invariants(self, wave_v1):
        p = wave_v1
        M = p.M
        assert p.invariant_residual() < 1e-8
        assert p.periodicity_residual < 1e-8
        mirror = np.roll(p.grid_E[::-1], 1)
        assert np.max(np.abs(p.grid_E + mirror)) < 1e-8
        assert np.max(np.abs(p.grid_u - np.roll(p.grid_u[::-1], 1))) < 1e-8
        assert np.all(p.grid_rho > 0)
        np.testing.assert_allclose(p.grid_u, p.params.V * (1 - 1 / p.grid_rho), rtol=0, atol=1e-15)
        assert M == 2048

    def test_arrays_are_read_only(self, wave_v1):
        with pytest.raises(ValueError):
            wave_v1.grid_E[0] = 1.0

    def test_parametric_oracle(self, law):
        """Compare with the exact parametrization x(theta), E(theta) of the orbit."""
        delta, V = 0.08, 1.0
        p = make_profile(law, delta, V)
        h1 = 0.5
        coeffs = np.fft.rfft(p.grid_E) / p.M
        modes = np.arange(coeffs.size)

        def E_at(x):
            c = coeffs.copy()
            c[1:] *= 2
            return float(np.real(np.sum(c * np.exp(2j * math.pi * modes * x))))

        for theta in (0.3, 1.0, 2.0, 2.9):
            x = p.k * math.sqrt(h1) * quad(lambda t: 1 / w_dagger(law, delta * math.cos(t), V), 0, theta,
                                          epsabs=1e-13, epsrel=1e-12)[0]
            assert E_at(x) == pytest.approx(math.sqrt(h1) * delta * math.sin(theta), abs=1e-10)
        assert x < 0.5

    def test_first_harmonic(self, law):
        rem = []
        for d in (0.01, 0.02, 0.04):
            p = make_profile(law, d, 1.0)
            base = np.cos(2 * math.pi * p.x)
            rem.append(np.max(np.abs(p.grid_n - d * base)))
            assert np.max(np.abs(p.grid_u - d * base)) < 5 * d * d
        assert math.log(rem[2] / rem[0]) / math.log(4) == pytest.approx(2.0, abs=0.1)

    def test_fourier_amplitudes_match_expansion(self, law):
        co = asymptotic_coeffs(law, 1.0)
        d = 0.004
        p = make_profile(law, d, 1.0)
        kE = np.fft.fft(p.k * p.grid_E) / p.M
        sin_amp = lambda q: -2 * kE[q].imag
        assert sin_amp(1) / d == pytest.approx(co.E1_amp, rel=1e-3)
        assert sin_amp(2) / d ** 2 == pytest.approx(co.E2_amp, rel=1e-2)
        assert sin_amp(3) / d ** 3 == pytest.approx(co.E3_amp6, rel=2e-2)

    def test_compiled_and_python_kernels_agree(self, law):
        from epwaves._backend import integrate_profile

        k = wavenumber(law, 0.08, 1.0)
        dE0 = 0.08 * w_dagger(law, 0.08, 1.0) / k
        a = integrate_profile(0.0, dE0, k, 1024, 1.0, 0.25, 2.0)
        b = python_kernel(0.0, dE0, k, 1024, 1.0, 0.25, 2.0)
        np.testing.assert_allclose(a[0], b[0], rtol=1e-14, atol=1e-16)
        np.testing.assert_allclose(a[1], b[1], rtol=1e-14, atol=1e-16)

    def test_near_peakon_still_closes(self, law):
        b = rho_max(law, 1.0)
        p = make_profile(law, 0.8 * b.delta_max, 1.0)
        assert p.invariant_residual() < 1e-8
        assert p.crest_density() < b.rho_max

    def test_csv_export(self, wave_v1, tmp_path):
        path = tmp_path / "p.csv"
        write_profile_csv(wave_v1, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "x,E,dE,u,n"
        assert len(lines) == wave_v1.M + 1


class TestAsymptotics:
    def test_reference_values(self, law):
        co = asymptotic_coeffs(law, 1.0)
        assert co.k2_over_k0 == pytest.approx(1.5, rel=1e-14)
        assert co.E1_amp == pytest.approx(1 / (2 * math.pi))
        assert co.E2_amp == pytest.approx(1 / (2 * math.pi), rel=1e-14)

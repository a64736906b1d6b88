import math

import numpy as np
import pytest

from epwaves import InsufficientFourier, assemble, bubble_detect, lambda_branch, make_profile, scan, spectrum
from epwaves.bloch import (
    SpectrumSlice,
    defective_radius,
    noise_floor,
    pair_discriminant,
    refine_bubble,
    uniform_grid,
    write_bubbles_json,
    write_spectrum_csv,
)
from epwaves.crossings import find_crossing


def _hausdorff(a, b):
    d = np.abs(a[:, None] - b[None, :])
    return max(d.min(0).max(), d.min(1).max())


class TestAssembly:
    def test_flat_is_block_diagonal(self, flat_family, family_V):
        op = assemble(flat_family, 0.7, 8)
        k0 = flat_family.k
        for j in range(-8, 9):
            for m in range(-8, 9):
                blk = op.block(j, m)
                if j != m:
                    assert np.all(blk == 0)
            a = k0 * (2 * math.pi * j + 0.7)
            expected = np.array([[1j * family_V * a, -1], [1 + 0.5 * a * a, 1j * family_V * a]])
            np.testing.assert_allclose(op.block(j, j), expected, rtol=1e-14)

    def test_density_diagonal_is_minus_one(self, wave_v1):
        op = assemble(wave_v1, 0.3, 10)
        for j in range(-10, 11):
            assert op.block(j, j)[0, 1] == pytest.approx(-1.0, abs=1e-12)

    def test_first_harmonic_coupling(self, wave_v1):
        d, V = 0.05, 1.0
        op = assemble(wave_v1, 0.4, 10)
        for j in (-3, 0, 5):
            D = 1j * wave_v1.k * (2 * math.pi * (j - 1) + 0.4)
            first = wave_v1.coefficient("V_minus_u", 1)
            assert op.block(j, j - 1)[0, 0] == pytest.approx(first * D, rel=1e-12)
        assert abs(first) == pytest.approx(V * d / 2, rel=0.05)

    def test_conjugation_symmetry_exact(self, wave_v1):
        N = 10
        A = assemble(wave_v1, 1.1, N).matrix
        B = assemble(wave_v1, -1.1, N).matrix
        # flip Fourier index j -> -j, keep the component
        perm = np.array([2 * (2 * N - i // 2) + (i % 2) for i in range(A.shape[0])])
        np.testing.assert_allclose(B, np.conj(A[np.ix_(perm, perm)]), rtol=1e-15, atol=1e-15)

    def test_insufficient_fourier(self, law):
        p = make_profile(law, 0.01, 1.0, M=512)
        assemble(p, 0.0, 127)
        with pytest.raises(InsufficientFourier):
            assemble(p, 0.0, 128)
        with pytest.raises(ValueError):
            assemble(p, 0.0, 3)


class TestSpectrum:
    def test_flat_spectrum_small(self, flat_family, law, family_V):
        vals = spectrum(assemble(flat_family, 0.0, 8)).eigenvalues
        modes = np.arange(-8, 9)
        exact = np.concatenate([lambda_branch(law, family_V, b, modes, 0.0) for b in "+-"])
        assert _hausdorff(vals, exact) < 1e-12
        assert np.min(np.abs(vals - 1j)) < 1e-13 and np.min(np.abs(vals + 1j)) < 1e-13

    def test_count(self, wave_v1):
        s = spectrum(assemble(wave_v1, 0.2, 12))
        assert s.eigenvalues.size == 2 * 25
        assert s.max_real == np.max(s.eigenvalues.real)

    def test_flat_scan_purely_imaginary(self, flat_family):
        assert max(s.max_real for s in scan(flat_family, uniform_grid(20), 16)) < 1e-10

    def test_reflected_grid(self, wave_v1):
        grid = np.array([0.3, 1.2, 2.5])
        a = scan(wave_v1, grid, 16)
        b = scan(wave_v1, -grid, 16)
        for sa, sb in zip(a, b):
            assert _hausdorff(sb.eigenvalues, np.conj(sa.eigenvalues)) < 1e-10

    def test_scan_deterministic_with_threads(self, wave_v1):
        grid = uniform_grid(8)
        a = scan(wave_v1, grid, 16)
        b = scan(wave_v1, grid, 16, workers=4)
        for sa, sb in zip(a, b):
            assert sa.xi == sb.xi
            np.testing.assert_array_equal(sa.eigenvalues, sb.eigenvalues)

    def test_truncation_stability(self, wave_v1):
        import scipy.linalg

        vals, vecs = scipy.linalg.eig(assemble(wave_v1, 0.5, 24).matrix)
        hi = spectrum(assemble(wave_v1, 0.5, 32)).eigenvalues
        low_modes = np.sum(np.abs(vecs[2 * 12:2 * 37]) ** 2, axis=0) / np.sum(np.abs(vecs) ** 2, axis=0)
        interior = vals[low_modes > 1 - 1e-12]
        assert interior.size >= 20
        assert np.max(np.min(np.abs(interior[:, None] - hi[None, :]), axis=1)) < 1e-8

    def test_hamiltonian_pairing(self, family_wave):
        vals = spectrum(assemble(family_wave, 0.9, 32)).eigenvalues
        interior = vals[np.abs(vals.imag) < 100]
        assert np.max(np.min(np.abs(interior[:, None] + np.conj(vals)[None, :]), axis=1)) < 1e-6


class TestBubbles:
    def test_detect_runs(self):
        mk = lambda xi, r: SpectrumSlice(xi, np.array([r + 1j, -r + 1j]))
        slices = [mk(0.0, 0.0), mk(0.1, 1e-3), mk(0.2, 3e-3), mk(0.3, 0.0), mk(0.4, 2e-3)]
        found = bubble_detect(slices, 1e-4)
        assert [(b.xi_center, b.xi_extent) for b in found] == [(0.2, (0.1, 0.2)), (0.4, (0.4, 0.4))]
        assert found[0].max_growth == 3e-3

    def test_detect_exclusion_radius(self):
        s = SpectrumSlice(0.0, np.array([1e-8 + 0j, -1e-8 + 0j, 2j]))
        assert bubble_detect([s], 1e-10) and not bubble_detect([s], 1e-10, exclude_radius=1e-6)

    def test_flat_has_no_bubbles(self, flat_family):
        slices = scan(flat_family, uniform_grid(40), 16)
        assert bubble_detect(slices, 10 * noise_floor(flat_family, 16)) == []

    def test_defective_radius_positive(self, family_wave):
        assert 0 < defective_radius(scan(family_wave, [0.0], 16)) < 1e-4

    def test_refined_bubble_near_crossing(self, family_wave, law, family_V):
        c = find_crossing(law, family_V, 3, "+")
        b = refine_bubble(family_wave, c)
        assert b is not None
        assert abs(b.xi_center - c.xi0) < 0.1
        assert b.xi_extent[0] < b.xi_center < b.xi_extent[1]
        value, pair = pair_discriminant(family_wave, c, b.xi_center)
        assert pair[0].real == pytest.approx(-pair[1].real, rel=1e-3)
        assert pair[0].imag == pytest.approx(pair[1].imag, abs=1e-9)
        # the plain scan sees it once the grid resolves the bubble
        grid = np.linspace(*b.xi_extent, 9)[1:-1]
        found = bubble_detect(scan(family_wave, grid, 32), 10 * noise_floor(family_wave, 32))
        assert len(found) == 1 and found[0].max_growth == pytest.approx(b.max_growth, rel=0.1)

    def test_flat_has_no_refined_bubble(self, flat_family, law, family_V):
        b = refine_bubble(flat_family, find_crossing(law, family_V, 3, "+"), coarse_points=21)
        assert b is None or b.max_growth < 10 * noise_floor(flat_family, 32)

    def test_exports(self, wave_v1, tmp_path):
        slices = scan(wave_v1, [0.1, 0.2], 8)
        write_spectrum_csv(slices, tmp_path / "s.csv")
        lines = (tmp_path / "s.csv").read_text().splitlines()
        assert lines[0] == "xi,re,im" and len(lines) == 1 + 2 * 34
        mk = SpectrumSlice(0.0, np.array([1e-3 + 1j]))
        write_bubbles_json(bubble_detect([mk], 0.0), tmp_path / "b.json")
        assert '"lambda_im": 1.0' in (tmp_path / "b.json").read_text()

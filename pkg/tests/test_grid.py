import math
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis.strategies import floats

from weft.errors import GridError, PreconditionError
from weft.grid import (Grid, PhaseSpaceField, Representation, SampledState, ambiguity_lattice, hbar_fourier,
                       hbar_fourier_at, inner_product, lattice_dft, make_grid, make_reference_state,
                       mass_outside_central, normalize, wigner_lattice)
from tests.helpers import default_grid, gaussian, ground, hermite, max_abs

coefficient = floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


class TestGrid(unittest.TestCase):

    def test_make_grid_momentum_spacing(self):
        grid = make_grid(256, 0.1, 1.0)
        self.assertAlmostEqual(grid.dp, 0.245437, places=6)
        self.assertAlmostEqual(grid.dx * grid.dp * grid.n, 2 * math.pi * grid.hbar, places=12)

    def test_make_grid_is_symmetric(self):
        grid = make_grid(8, 1.0)
        np.testing.assert_array_equal(grid.x, [-4, -3, -2, -1, 0, 1, 2, 3])
        self.assertTrue(grid.is_symmetric())
        self.assertAlmostEqual(grid.p[grid.n // 2], 0.0)

    def test_make_grid_rejects_bad_parameters(self):
        for n, dx, hbar in ((7, 0.1, 1.0), (4, 0.1, 1.0), (256, 0.0, 1.0), (256, 0.1, -1.0), (256, -0.1, 1.0)):
            with self.assertRaises(GridError):
                make_grid(n, dx, hbar)

    def test_grid_rejects_non_power_of_two(self):
        with self.assertRaises(GridError):
            Grid(x_min=0.0, dx=0.1, n=100)

    def test_lattice_index_snapping(self):
        grid = default_grid()
        self.assertEqual(grid.x_index(0.0), 128)
        self.assertEqual(grid.p_index(3 * grid.dp), 131)
        with self.assertRaises(GridError):
            grid.x_index(0.05)
        with self.assertRaises(GridError):
            grid.p_index(3.5 * grid.dp)

    def test_to_json(self):
        self.assertEqual(make_grid(8, 1.0).to_json(), {"n": 8, "dx": 1.0, "x_min": -4.0, "hbar": 1.0})


class TestPhaseSpaceField(unittest.TestCase):

    def setUp(self):
        self.grid = default_grid()
        self.zeros = np.zeros((self.grid.n, self.grid.n))

    def test_accepts_wigner_and_ambiguity_lattices(self):
        wigner = wigner_lattice(self.grid)
        self.assertAlmostEqual(wigner["dx"] * wigner["dp"] * self.grid.n, math.pi, places=12)
        ambiguity = ambiguity_lattice(self.grid)
        self.assertAlmostEqual(ambiguity["dx"] * ambiguity["dp"] * self.grid.n, 4 * math.pi, places=12)
        for lattice in (wigner, ambiguity):
            field = PhaseSpaceField(self.grid, self.zeros, **lattice)
            self.assertEqual(field.lattice(), lattice)

    def test_accepts_lattices_at_reduced_hbar(self):
        grid = default_grid(hbar=0.5)
        PhaseSpaceField(grid, self.zeros, **wigner_lattice(grid))
        PhaseSpaceField(grid, self.zeros, **ambiguity_lattice(grid))

    def test_rejects_other_lattices(self):
        fourier = {"x_min": self.grid.x_min, "dx": self.grid.dx, "p_min": self.grid.p_min, "dp": self.grid.dp}
        shifted = dict(wigner_lattice(self.grid), x_min=self.grid.x_min + 0.05)
        for lattice in (fourier, shifted):
            with self.assertRaises(GridError):
                PhaseSpaceField(self.grid, self.zeros, **lattice)


class TestSampledState(unittest.TestCase):

    def setUp(self):
        self.grid = default_grid()

    def test_values_are_read_only(self):
        psi = ground(self.grid)
        with self.assertRaises(ValueError):
            psi.values[0] = 1.0

    def test_shape_and_finiteness_checks(self):
        with self.assertRaises(GridError):
            SampledState(self.grid, np.zeros(self.grid.n - 1))
        values = np.zeros(self.grid.n)
        values[3] = np.nan
        with self.assertRaises(PreconditionError):
            SampledState(self.grid, values)

    def test_arithmetic_requires_same_grid(self):
        other = make_grid(128, 0.1)
        with self.assertRaises(GridError):
            ground(self.grid) + ground(other)

    def test_inner_product_examples(self):
        psi0 = ground(self.grid)
        self.assertAlmostEqual(abs(inner_product(psi0, psi0) - 1.0), 0.0, delta=1e-10)
        self.assertAlmostEqual(abs(inner_product(hermite(self.grid), psi0)), 0.0, delta=1e-10)
        shifted = gaussian(self.grid, x0=1.0)
        self.assertAlmostEqual(inner_product(shifted, psi0).real, math.exp(-0.25), delta=1e-8)

    def test_inner_product_conjugate_symmetry(self):
        phi = gaussian(self.grid, x0=0.4, p0=0.7)
        psi = gaussian(self.grid, x0=-0.3, p0=-0.2, width=1.2)
        self.assertAlmostEqual(abs(inner_product(phi, psi) - np.conj(inner_product(psi, phi))), 0.0, delta=1e-15)

    def test_inner_product_grid_mismatch(self):
        with self.assertRaises(GridError):
            inner_product(ground(self.grid), ground(make_grid(128, 0.1)))

    @settings(max_examples=25, deadline=None)
    @given(coefficient, coefficient, coefficient, coefficient)
    def test_inner_product_sesquilinear(self, a_re, a_im, b_re, b_im):
        a, b = complex(a_re, a_im), complex(b_re, b_im)
        phi = gaussian(self.grid, x0=0.2, p0=0.5)
        psi1 = gaussian(self.grid, x0=-0.5)
        psi2 = hermite(self.grid, 2)
        combined = inner_product(phi, a * psi1 + b * psi2)
        separate = a * inner_product(phi, psi1) + b * inner_product(phi, psi2)
        self.assertLess(abs(combined - separate), 1e-12 * (1 + abs(a) + abs(b)))

    def test_normalize(self):
        psi0 = ground(self.grid)
        self.assertLess(max_abs(normalize(2 * psi0).values, psi0.values), 1e-14)
        self.assertLess(max_abs(normalize(psi0).values, psi0.values), 1e-14)
        with self.assertRaises(PreconditionError):
            normalize(SampledState(self.grid, np.zeros(self.grid.n)))


class TestFourier(unittest.TestCase):

    def setUp(self):
        self.grid = default_grid()

    def test_gaussian_is_an_eigenfunction(self):
        transformed = hbar_fourier(ground(self.grid))
        self.assertIs(transformed.representation, Representation.MOMENTUM)
        expected = math.pi ** -0.25 * np.exp(-0.5 * self.grid.p ** 2)
        self.assertLess(max_abs(transformed.values, expected), 1e-8)

    def test_gaussian_eigenfunction_with_other_hbar(self):
        grid = default_grid(hbar=0.5)
        expected = (math.pi * 0.5) ** -0.25 * np.exp(-grid.p ** 2)
        self.assertLess(max_abs(hbar_fourier(ground(grid)).values, expected), 1e-8)

    def test_inverse_undoes_forward(self):
        psi = gaussian(self.grid, x0=1.3, p0=-0.8, width=0.9) + 0.5j * hermite(self.grid, 3)
        round_trip = hbar_fourier(hbar_fourier(psi, "forward"), "inverse")
        self.assertLess(max_abs(round_trip.values, psi.values), 1e-12)

    def test_parseval(self):
        psi = gaussian(self.grid, x0=-0.7, p0=1.1) + hermite(self.grid, 4)
        self.assertAlmostEqual(hbar_fourier(psi).norm(), psi.norm(), delta=1e-10)

    def test_plane_wave_is_a_discrete_delta(self):
        p0 = 5 * self.grid.dp
        transformed = hbar_fourier(make_reference_state("plane_wave", self.grid, p0=p0))
        k0 = self.grid.p_index(p0)
        self.assertAlmostEqual(abs(transformed.values[k0] - 1.0 / self.grid.dp), 0.0, delta=1e-9)
        others = np.delete(transformed.values, k0)
        self.assertLess(float(np.max(np.abs(others))), 1e-10)

    def test_direction_checks_representation(self):
        psi0 = ground(self.grid)
        with self.assertRaises(PreconditionError):
            hbar_fourier(psi0, "inverse")
        with self.assertRaises(PreconditionError):
            hbar_fourier(hbar_fourier(psi0), "forward")

    def test_fourier_at_matches_fft_on_lattice(self):
        psi = gaussian(self.grid, x0=0.6, p0=0.4)
        self.assertLess(max_abs(hbar_fourier_at(psi, self.grid.p), hbar_fourier(psi).values), 1e-12)

    def test_lattice_dft_matches_direct_sum(self):
        rng = np.random.default_rng(7)
        n, hbar = 16, 0.7
        src_min, src_step = -1.3, 0.25
        dst_step = 2 * math.pi * hbar / (n * src_step)
        dst_min = -3 * dst_step
        values = rng.normal(size=n) + 1j * rng.normal(size=n)
        s = src_min + np.arange(n) * src_step
        q = dst_min + np.arange(n) * dst_step
        for sign in (-1, 1):
            direct = np.exp(sign * 1j * np.outer(q, s) / hbar) @ values
            self.assertLess(max_abs(lattice_dft(values, 0, src_min, src_step, dst_min, dst_step, sign, hbar), direct),
                            1e-12)

    def test_lattice_dft_rejects_non_dual_lattices(self):
        with self.assertRaises(GridError):
            lattice_dft(np.ones(8), 0, 0.0, 0.1, 0.0, 0.1, -1, 1.0)


class TestReferenceStates(unittest.TestCase):

    def setUp(self):
        self.grid = default_grid()

    def test_gaussian_peak(self):
        self.assertAlmostEqual(ground(self.grid).values[self.grid.x_index(0.0)].real, 0.751126, places=6)

    def test_hermite_parity(self):
        h1 = hermite(self.grid)
        self.assertEqual(h1.values[self.grid.x_index(0.0)], 0)
        self.assertAlmostEqual(h1.norm(), 1.0, places=12)

    def test_plane_wave_prefactor(self):
        wave = make_reference_state("plane_wave", self.grid, p0=2 * self.grid.dp)
        np.testing.assert_allclose(np.abs(wave.values), (2 * math.pi) ** -0.5, rtol=1e-14)

    def test_plane_wave_off_lattice(self):
        with self.assertRaises(GridError):
            make_reference_state("plane_wave", self.grid, p0=3.5 * self.grid.dp)

    def test_rejects_bad_width(self):
        with self.assertRaises(PreconditionError):
            make_reference_state("gaussian", self.grid, width=0.0)

    def test_mass_outside_central(self):
        self.assertLess(mass_outside_central(ground(self.grid)), 1e-8)
        self.assertGreater(mass_outside_central(gaussian(self.grid, x0=9.0)), 0.5)


if __name__ == '__main__':
    unittest.main()

import math
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis.strategies import floats

from weft.errors import GridError, PreconditionError
from weft.grid import hbar_fourier, inner_product, make_grid
from weft.phase_space import (PhasePoint, ambiguity_lattice, cross_ambiguity, cross_wigner, cross_wigner_via_gr,
                              grossmann_royer_apply, symplectic_fourier, wigner_distribution, wigner_lattice)
from tests.helpers import INV_PI, default_grid, gaussian, ground, hermite, max_abs, small_grid

coefficient = floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)


class TestCrossWigner(unittest.TestCase):

    def setUp(self):
        self.grid = default_grid()
        self.psi0 = ground(self.grid)
        self.h1 = hermite(self.grid)

    def test_ground_state_at_origin(self):
        W = wigner_distribution(self.psi0)
        self.assertEqual(W.kind, "wigner")
        self.assertAlmostEqual(abs(W.value_at(0.0, 0.0) - INV_PI), 0.0, delta=1e-12)

    def test_first_excited_state_at_origin(self):
        W = wigner_distribution(self.h1)
        self.assertAlmostEqual(abs(W.value_at(0.0, 0.0) + INV_PI), 0.0, delta=1e-12)

    def test_parity_kills_mixed_origin_value(self):
        self.assertAlmostEqual(abs(cross_wigner(self.psi0, self.h1).value_at(0.0, 0.0)), 0.0, delta=1e-14)

    def test_ground_state_closed_form(self):
        W = wigner_distribution(self.psi0)
        expected = INV_PI * np.exp(-W.x[:, None] ** 2 - W.p[None, :] ** 2)
        self.assertLess(max_abs(W.values, expected), 1e-6)

    def test_closed_form_with_other_hbar(self):
        grid = default_grid(hbar=0.5)
        W = wigner_distribution(ground(grid))
        expected = np.exp(-(W.x[:, None] ** 2 + W.p[None, :] ** 2) / 0.5) / (math.pi * 0.5)
        self.assertLess(max_abs(W.values, expected), 1e-6)

    def test_lattice(self):
        W = wigner_distribution(self.psi0)
        self.assertEqual(W.lattice(), wigner_lattice(self.grid))
        self.assertAlmostEqual(W.dp, math.pi / (256 * 0.1), places=12)
        np.testing.assert_array_equal(W.x, self.grid.x)

    def test_conjugation_symmetry(self):
        phi = gaussian(self.grid, x0=0.5, p0=-0.3)
        psi = gaussian(self.grid, x0=-0.4, p0=0.8, width=1.3)
        forward = cross_wigner(phi, psi)
        backward = cross_wigner(psi, phi)
        self.assertLess(max_abs(backward.values, np.conj(forward.values)), 1e-13)

    def test_wigner_is_real_and_bounded(self):
        psi = gaussian(self.grid, x0=1.0, p0=0.5) + hermite(self.grid, 2)
        W = wigner_distribution(psi)
        self.assertLess(float(np.max(np.abs(W.values.imag))), 1e-13)
        self.assertLessEqual(float(np.max(np.abs(W.values))), psi.norm() ** 2 * INV_PI * (1 + 1e-12))

    def test_normalization(self):
        W = wigner_distribution(self.psi0)
        self.assertAlmostEqual(abs(W.integral() - 1.0), 0.0, delta=1e-10)

    def test_grid_and_representation_checks(self):
        with self.assertRaises(GridError):
            cross_wigner(self.psi0, ground(make_grid(128, 0.1)))
        with self.assertRaises(PreconditionError):
            cross_wigner(hbar_fourier(self.psi0), self.psi0)

    def test_worker_count_does_not_change_result(self):
        phi = gaussian(self.grid, x0=0.3, p0=0.2)
        psi = gaussian(self.grid, x0=-0.6, p0=-0.1)
        single = cross_wigner(phi, psi, workers=1)
        pooled = cross_wigner(phi, psi, workers=4)
        self.assertLess(max_abs(single.values, pooled.values), 1e-14)

    @settings(max_examples=15, deadline=None)
    @given(coefficient, coefficient, coefficient, coefficient)
    def test_interference_identity(self, a_re, a_im, b_re, b_im):
        grid = small_grid()
        phi = complex(a_re, a_im) * gaussian(grid, x0=0.5, p0=0.4)
        psi = complex(b_re, b_im) * hermite(grid, 1)
        combined = wigner_distribution(phi + psi).values
        expected = (wigner_distribution(phi).values + wigner_distribution(psi).values
                    + 2 * cross_wigner(phi, psi).values.real)
        self.assertLess(max_abs(combined, expected), 1e-12 * (1 + abs(a_re) + abs(a_im) + abs(b_re) + abs(b_im)) ** 2)


class TestGrossmannRoyer(unittest.TestCase):

    def setUp(self):
        self.grid = default_grid()
        self.psi0 = ground(self.grid)

    def test_phase_point_must_be_finite(self):
        with self.assertRaises(PreconditionError):
            PhasePoint(float("nan"), 0.0)
        with self.assertRaises(PreconditionError):
            PhasePoint(0.0, float("inf"))

    def test_kernel_identity_at_origin(self):
        value = cross_wigner_via_gr(self.psi0, self.psi0, PhasePoint(0.0, 0.0))
        self.assertAlmostEqual(abs(value - INV_PI), 0.0, delta=1e-12)

    def test_involution(self):
        psi = gaussian(self.grid, x0=0.4, p0=0.7)
        z = PhasePoint(self.grid.x[130], 0.9)
        twice = grossmann_royer_apply(z, grossmann_royer_apply(z, psi))
        self.assertLess(max_abs(twice.values, psi.values), 1e-12)

    def test_unitarity(self):
        psi = gaussian(self.grid, x0=-0.8, p0=0.2, width=0.7)
        moved = grossmann_royer_apply(PhasePoint(self.grid.x[125], -1.1), psi)
        self.assertAlmostEqual(moved.norm(), psi.norm(), delta=1e-12)

    def test_reflection_about_origin(self):
        psi = gaussian(self.grid, x0=1.0)
        reflected = grossmann_royer_apply(PhasePoint(0.0, 0.0), psi)
        expected = gaussian(self.grid, x0=-1.0)
        self.assertLess(max_abs(reflected.values[1:], expected.values[1:]), 1e-14)

    def test_off_lattice_point(self):
        with self.assertRaises(GridError):
            grossmann_royer_apply(PhasePoint(0.05, 0.0), self.psi0)

    def test_momentum_state_rejected(self):
        with self.assertRaises(PreconditionError):
            grossmann_royer_apply(PhasePoint(0.0, 0.0), hbar_fourier(self.psi0))

    def test_matches_field_at_lattice_points(self):
        phi = gaussian(self.grid, x0=0.3, p0=0.5)
        psi = gaussian(self.grid, x0=-0.2, p0=-0.4, width=1.1)
        W = cross_wigner(phi, psi)
        for j, k in ((128, 128), (120, 135), (140, 100), (110, 160)):
            z = PhasePoint(W.x[j], W.p[k])
            self.assertAlmostEqual(abs(cross_wigner_via_gr(phi, psi, z) - W.values[j, k]), 0.0, delta=1e-12)

    def test_kernel_is_an_inner_product(self):
        phi = gaussian(self.grid, x0=0.1)
        z = PhasePoint(0.0, 0.5)
        expected = inner_product(grossmann_royer_apply(z, phi), self.psi0) * INV_PI
        self.assertAlmostEqual(abs(cross_wigner_via_gr(phi, self.psi0, z) - expected), 0.0, delta=1e-15)


class TestAmbiguity(unittest.TestCase):

    def setUp(self):
        self.grid = default_grid()
        self.psi0 = ground(self.grid)

    def test_ground_state_at_origin(self):
        A = cross_ambiguity(self.psi0, self.psi0)
        self.assertEqual(A.kind, "ambiguity")
        self.assertEqual(A.lattice(), ambiguity_lattice(self.grid))
        self.assertAlmostEqual(abs(A.value_at(0.0, 0.0) - 0.5 * INV_PI), 0.0, delta=1e-12)

    def test_parity_kills_mixed_origin_value(self):
        A = cross_ambiguity(self.psi0, hermite(self.grid))
        self.assertAlmostEqual(abs(A.value_at(0.0, 0.0)), 0.0, delta=1e-14)

    def test_symplectic_fourier_of_wigner_is_ambiguity(self):
        phi = gaussian(self.grid, x0=0.6, p0=0.3)
        psi = gaussian(self.grid, x0=-0.5, p0=-0.6, width=0.8)
        via_transform = symplectic_fourier(cross_wigner(phi, psi))
        direct = cross_ambiguity(phi, psi)
        self.assertTrue(via_transform.same_lattice(direct))
        self.assertEqual(via_transform.kind, "ambiguity")
        self.assertLess(max_abs(via_transform.values, direct.values), 1e-12)

    def test_symplectic_fourier_is_an_involution(self):
        for sign in (-1, 1):
            W = cross_wigner(gaussian(self.grid, x0=0.2, p0=0.9), hermite(self.grid, 2))
            twice = symplectic_fourier(symplectic_fourier(W, sign), sign)
            self.assertTrue(twice.same_lattice(W))
            self.assertEqual(twice.kind, "wigner")
            self.assertLess(max_abs(twice.values, W.values), 1e-12)

    def test_symplectic_fourier_of_zero(self):
        W = wigner_distribution(self.psi0)
        zero = symplectic_fourier(W.with_values(np.zeros((self.grid.n, self.grid.n))))
        self.assertEqual(float(np.max(np.abs(zero.values))), 0.0)

    def test_symplectic_sign_checked(self):
        with self.assertRaises(PreconditionError):
            symplectic_fourier(wigner_distribution(self.psi0), sign=2)


if __name__ == '__main__':
    unittest.main()

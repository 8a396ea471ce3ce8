"""
Tests for spectral measures, outer functions and Blaschke products.
"""

import numpy as np
import pytest
from scipy import integrate

from jacobi_scattering.core.harmonics import BesovClassError, CircleFunction, DomainError, grid_nodes
from jacobi_scattering.core.spectral import (
    BlaschkeProduct,
    MassPoint,
    SpectralMeasure,
    absolutely_continuous_mass,
    blaschke_derivative,
    blaschke_eval,
    density_f,
    inverse_joukowski,
    joukowski,
    masses_to_mus,
    mus_to_masses,
    normalize,
    outer_D,
    outer_D0,
    outer_D0_boundary,
    total_mass,
)
from jacobi_scattering.utils.closed_forms import OnePoleCase, OneZeroCase, SingleEigenvalueCase


def flat_measure(grid_log2=8, **kwargs):
    return SpectralMeasure(0, 0, CircleFunction.constant(0.0, grid_log2), **kwargs)


class TestJoukowski:
    """Test the Joukowski map and its inverse."""

    def test_forward(self):
        """Test 0.5 maps to 2.5."""
        assert joukowski(0.5) == pytest.approx(2.5)

    def test_inverse(self):
        """Test 2.5 maps back to 0.5 and -2.5 to -0.5."""
        assert inverse_joukowski(2.5) == pytest.approx(0.5)
        assert inverse_joukowski(-2.5) == pytest.approx(-0.5)

    def test_reciprocal_symmetry(self):
        """Test joukowski(z) = joukowski(1/z)."""
        z = 0.3 + 0.4j
        assert joukowski(z) == pytest.approx(joukowski(1 / z))

    def test_large_eigenvalue(self):
        """Test the inverse stays accurate far from the spectrum."""
        z = inverse_joukowski(1e8)
        assert z + 1 / z == pytest.approx(1e8)
        assert z == pytest.approx(1e-8)

    def test_inside_band(self):
        """Test that |lambda| <= 2 is refused."""
        with pytest.raises(DomainError):
            inverse_joukowski(2.0)


class TestBlaschke:
    """Test finite Blaschke products with real zeros."""

    def test_positive_at_origin(self):
        """Test the product is positive at 0."""
        assert blaschke_eval(BlaschkeProduct((0.5,)), 0.0) == pytest.approx(0.5)
        assert blaschke_eval(BlaschkeProduct((-0.5, 0.3)), 0.0) == pytest.approx(0.15)

    def test_vanishes_at_zeros(self):
        """Test B(z_k) = 0."""
        product = BlaschkeProduct((0.5, -0.2))
        assert abs(product(0.5)) < 1e-15
        assert abs(product(-0.2)) < 1e-15

    def test_unimodular_on_circle(self):
        """Test |B(t)| = 1 and B(conj t) = 1/B(t) on the grid."""
        product = BlaschkeProduct((0.5, -0.7))
        t = grid_nodes(6)
        values = product(t)
        assert np.allclose(np.abs(values), 1.0)
        assert np.allclose(product(np.conj(t)), 1 / values)

    def test_derivative(self):
        """Test B'(z_k) against a central difference."""
        product = BlaschkeProduct((0.5, -0.3))
        h = 1e-6
        numeric = (product(0.5 + h) - product(0.5 - h)) / (2 * h)
        assert blaschke_derivative(product, 0.5) == pytest.approx(numeric.real, rel=1e-8)

    def test_derivative_single_zero(self):
        """Test B'(z) = -1/(1 - z^2) for one positive zero."""
        assert blaschke_derivative(BlaschkeProduct((0.5,)), 0.5) == pytest.approx(-1 / 0.75)

    def test_invalid_zeros(self):
        """Test that zeros outside (-1, 1) or repeated are refused."""
        with pytest.raises(DomainError):
            BlaschkeProduct((1.2,))
        with pytest.raises(DomainError):
            BlaschkeProduct((0.4, 0.4))


class TestSpectralMeasure:
    """Test construction and validation of spectral measures."""

    def test_invalid_gamma(self):
        """Test exponents outside {0, 1} are refused."""
        with pytest.raises(DomainError):
            SpectralMeasure(2, 0, CircleFunction.constant(0.0, 6))

    def test_invalid_mass(self):
        """Test non-positive masses and points outside the interval are refused."""
        with pytest.raises(DomainError):
            flat_measure(masses=(MassPoint(0.5, -1.0),))
        with pytest.raises(DomainError):
            flat_measure(masses=(MassPoint(1.5, 1.0),))

    def test_rough_density_rejected(self):
        """Test a log-density with a heavy spectral tail fails the Besov test."""
        rng = np.random.default_rng(0)
        noise = rng.normal(size=256)
        log_rho0 = CircleFunction(8, noise + noise[np.r_[0, 255:0:-1]])
        with pytest.raises(BesovClassError):
            SpectralMeasure(0, 0, log_rho0)

    def test_json_form(self):
        """Test that the JSON form restores masses and exponents."""
        measure = SingleEigenvalueCase().measure(8)
        restored = SpectralMeasure.from_dict(measure.to_dict())
        assert restored.zeros == measure.zeros
        assert restored.sigmas == pytest.approx(measure.sigmas)
        assert restored.normalized

    def test_from_density(self):
        """Test the density constructor stores the log of the density."""
        measure = SpectralMeasure.from_density(lambda t: 1 / np.abs(1 - 0.5 * t) ** 2, 8)
        assert np.allclose(measure.rho0_hat, 1 / np.abs(1 - 0.5 * grid_nodes(8)) ** 2)


class TestOuterFunctions:
    """Test D0 and D."""

    def test_trivial(self):
        """Test log_rho0 = 0 gives D = 1."""
        assert outer_D(flat_measure(), 0.4) == pytest.approx(1.0)

    def test_one_pole(self):
        """Test D(z) = 1/(1 - az) for the one-pole measure."""
        measure = OnePoleCase(0.5).measure(10)
        for z in (0.0, 0.3, -0.6, 0.2 + 0.5j):
            assert outer_D(measure, z) == pytest.approx(1 / (1 - 0.5 * z), abs=1e-10)

    def test_one_zero(self):
        """Test D(z) = c(1 - az) for the one-zero measure."""
        measure = OneZeroCase(0.5).measure(10)
        c = outer_D(measure, 0.0)
        assert outer_D(measure, 0.4) == pytest.approx(c * (1 - 0.2), abs=1e-10)

    def test_resonance_factors(self):
        """Test D = D0 / ((1 - z)^g1 (1 + z)^g2)."""
        measure = SpectralMeasure(1, 1, CircleFunction.constant(0.0, 6))
        z = 0.3
        assert outer_D(measure, z) == pytest.approx(1 / ((1 - z) * (1 + z)))

    def test_boundary_modulus_and_symmetry(self):
        """Test |D0(t)|^2 = rho0_hat on the grid and D0(conj z) = conj D0(z)."""
        measure = OnePoleCase(0.5).measure(10)
        boundary = outer_D0_boundary(measure)
        assert np.allclose(np.abs(boundary.samples) ** 2, measure.rho0_hat, atol=1e-8)
        z = 0.3 + 0.4j
        assert outer_D0(measure, np.conj(z)) == pytest.approx(np.conj(outer_D0(measure, z)))

    def test_zero_free(self):
        """Test the outer function does not vanish at sample points."""
        measure = OneZeroCase(0.9).measure(10)
        z = 0.95 * np.exp(2j * np.pi * np.arange(16) / 16)
        assert np.all(np.abs(outer_D0(measure, z)) > 0)


class TestDensityAndMass:
    """Test densities, quadrature and normalization."""

    def test_semicircle(self):
        """Test f(0) = 1/pi and total mass 1 for log_rho0 = 0."""
        measure = flat_measure()
        assert density_f(measure, 0.0) == pytest.approx(1 / np.pi)
        assert total_mass(measure) == pytest.approx(1.0, abs=1e-12)

    def test_one_pole_density(self):
        """Test f(x) = sqrt(4 - x^2) / (2 pi (1 - 0.5x + 0.25))."""
        measure = OnePoleCase(0.5).measure(10)
        x = np.array([-1.5, 0.0, 0.7, 1.9])
        expected = np.sqrt(4 - x ** 2) / (2 * np.pi * (1 - 0.5 * x + 0.25))
        assert np.allclose(density_f(measure, x), expected, atol=1e-10)

    def test_reflection(self):
        """Test swapping the exponents and reflecting rho0 reflects f."""
        log_rho0 = CircleFunction.from_function(lambda t: -2 * np.log(np.abs(1 - 0.3 * t)), 9)
        reflected = CircleFunction.from_function(lambda t: -2 * np.log(np.abs(1 + 0.3 * t)), 9)
        left = SpectralMeasure(1, 0, log_rho0)
        right = SpectralMeasure(0, 1, reflected)
        x = np.array([-1.2, 0.4, 1.7])
        assert np.allclose(density_f(left, x), density_f(right, -x))

    def test_quadrature_against_scipy(self):
        """Test theta-grid quadrature against adaptive quadrature, with endpoint resonances."""
        log_rho0 = CircleFunction.from_function(lambda t: -2 * np.log(np.abs(1 - 0.4 * t)), 10)
        for gamma1, gamma2 in ((0, 0), (1, 0), (1, 1)):
            measure = SpectralMeasure(gamma1, gamma2, log_rho0)
            reference, _ = integrate.quad(lambda x: density_f(measure, x), -2 + 1e-14, 2 - 1e-14, limit=200)
            assert absolutely_continuous_mass(measure) == pytest.approx(reference, rel=1e-6)

    def test_grid_invariance(self):
        """Test the mass does not depend on the grid for band-limited log_rho0."""
        coefficients = {0: 0.1, 1: 0.2, -1: 0.2, 3: 0.05, -3: 0.05}
        coarse = SpectralMeasure(0, 0, CircleFunction.from_coefficients(coefficients, 7))
        fine = SpectralMeasure(0, 0, CircleFunction.from_coefficients(coefficients, 11))
        assert total_mass(coarse) == pytest.approx(total_mass(fine), abs=1e-10)

    def test_normalize(self):
        """Test normalize gives unit mass, scales masses together and is idempotent."""
        measure = flat_measure(masses=(MassPoint(0.5, 2.0),))
        normalized = normalize(measure)
        assert total_mass(normalized) == pytest.approx(1.0, abs=1e-12)
        assert normalized.sigmas[0] == pytest.approx(2.0 / 3.0)
        again = normalize(normalized)
        assert again.sigmas == pytest.approx(normalized.sigmas)
        assert np.allclose(again.log_rho0.samples, normalized.log_rho0.samples)

    def test_single_eigenvalue_constant(self):
        """Test c0^{-2} = 1/(1 - z1^2) + mu1/z1^4 leaves unit mass."""
        case = SingleEigenvalueCase(0.5, 1.0)
        assert 1 / case.c0_squared == pytest.approx(1 / 0.75 + 16.0)
        assert total_mass(case.measure(10)) == pytest.approx(1.0, abs=1e-10)


class TestNormalizingConstants:
    """Test the maps between masses and normalizing constants."""

    def test_single_mass_flat_density(self):
        """Test sigma = mu (1 - z^2)^4 / z^4 for D = 1 and one zero."""
        z, mu = 0.5, 1.0
        sigmas = mus_to_masses(0, 0, (z,), (mu,), CircleFunction.constant(0.0, 6))
        assert sigmas[0] == pytest.approx(mu * (1 - z ** 2) ** 4 / z ** 4)

    def test_single_eigenvalue_case(self):
        """Test sigma1 = c0^2 mu1 / z1^4 in the single-eigenvalue family."""
        case = SingleEigenvalueCase(0.5, 1.0)
        measure = case.measure(10)
        assert measure.sigmas[0] == pytest.approx(case.c0_squared * case.mu1 / 0.5 ** 4, rel=1e-10)
        assert masses_to_mus(measure)[0] == pytest.approx(1.0, rel=1e-10)

    def test_round_trip(self):
        """Test mu -> sigma -> mu is the identity."""
        log_rho0 = CircleFunction.from_function(lambda t: np.log(np.abs(1 + 0.3 * t)), 9)
        zeros, mus = (0.5, -0.7, 0.2), (0.3, 1.5, 2.0)
        sigmas = mus_to_masses(0, 1, zeros, mus, log_rho0)
        measure = SpectralMeasure(0, 1, log_rho0, tuple(MassPoint(z, s) for z, s in zip(zeros, sigmas)))
        assert masses_to_mus(measure) == pytest.approx(list(mus), rel=1e-10)

    def test_scale_invariant(self):
        """Test the normalizing constants ignore the overall scale."""
        measure = flat_measure(masses=(MassPoint(0.5, 2.0),))
        assert masses_to_mus(normalize(measure)) == pytest.approx(masses_to_mus(measure), rel=1e-12)

"""
Tests for admissibility checks and the inverse scattering map.
"""

import numpy as np
import pytest

from jacobi_scattering.core.harmonics import CircleFunction, grid_nodes
from jacobi_scattering.core.inverse import (
    AdmissibilityError,
    GammaError,
    IndexMismatchError,
    PositivityError,
    SymmetryError,
    UnimodularityError,
    ZeroSetError,
    extract_v0,
    inverse,
    validate_data,
)
from jacobi_scattering.core.scattering import ScatteringData, forward
from jacobi_scattering.core.spectral import MassPoint, SpectralMeasure, normalize, total_mass
from jacobi_scattering.utils.closed_forms import OnePoleCase, SingleEigenvalueCase

GRID = 9


def power(k, sign=1.0):
    return CircleFunction.from_function(lambda t: sign * t ** k, GRID)


def random_measure(rng):
    """Band-limited log-density, random exponents and up to three eigenvalues."""
    coefficients = {0: rng.normal()}
    for n in range(1, 7):
        c = 0.3 * rng.normal() / n
        coefficients[n] = coefficients[-n] = c
    log_rho0 = CircleFunction.from_coefficients(coefficients, GRID)
    count = int(rng.integers(0, 4))
    zeros = []
    while len(zeros) < count:
        z = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.1, 0.8))
        if all(abs(z - other) > 0.05 for other in zeros):
            zeros.append(z)
    masses = tuple(MassPoint(z, float(rng.uniform(0.05, 2.0))) for z in zeros)
    gamma1, gamma2 = (int(g) for g in rng.integers(0, 2, size=2))
    return SpectralMeasure(gamma1, gamma2, log_rho0, masses)


class TestValidateData:
    """Test the item-by-item admissibility check."""

    def test_admissible(self):
        """Test closed-form data pass."""
        assert validate_data(OnePoleCase(0.5).scattering(GRID)).ok
        assert validate_data(SingleEigenvalueCase(0.5, 1.0).scattering(GRID)).ok

    def test_index_mismatch(self):
        """Test s = t without eigenvalues or resonances is rejected on the index."""
        data = ScatteringData(0, 0, (), (), power(1))
        with pytest.raises(IndexMismatchError) as info:
            validate_data(data)
        assert info.value.item == "index"

    def test_gamma1_sign_mismatch(self):
        """Test s = -t declared as a resonance at -1 is rejected on the sign at t = 1."""
        data = ScatteringData(0, 1, (), (), power(1, -1.0))
        with pytest.raises(IndexMismatchError):
            validate_data(data)

    def test_negative_constant(self):
        """Test a negative normalizing constant is rejected."""
        data = ScatteringData(0, 0, (0.5,), (-1.0,), power(2))
        with pytest.raises(PositivityError):
            validate_data(data)

    def test_bad_gamma(self):
        """Test exponents outside {0, 1}."""
        data = ScatteringData(2, 0, (), (), power(2))
        with pytest.raises(GammaError):
            validate_data(data)

    def test_repeated_zeros(self):
        """Test repeated zeros are rejected."""
        data = ScatteringData(0, 0, (0.5, 0.5), (1.0, 1.0), power(4))
        with pytest.raises(ZeroSetError):
            validate_data(data)

    def test_not_unimodular(self):
        """Test |s| != 1 is rejected."""
        data = ScatteringData(0, 0, (), (), CircleFunction.constant(2.0, GRID))
        with pytest.raises(UnimodularityError):
            validate_data(data)

    def test_not_symmetric(self):
        """Test s = i violates s(conj t) = conj s(t)."""
        data = ScatteringData(0, 0, (), (), CircleFunction.constant(1j, GRID))
        with pytest.raises(SymmetryError):
            validate_data(data)

    def test_report_lists_every_item(self):
        """Test the non-strict report collects all violations in order."""
        data = ScatteringData(0, 0, (1.5,), (-1.0,), CircleFunction.constant(2.0, GRID))
        report = validate_data(data, strict=False)
        assert not report.ok
        assert [v.item for v in report.violations] == ["zeros", "mus", "unimodular"]
        assert report.to_dict()["ok"] is False

    def test_errors_share_a_base(self):
        """Test every specific error is an AdmissibilityError."""
        for error in (GammaError, ZeroSetError, PositivityError, UnimodularityError, SymmetryError):
            assert issubclass(error, AdmissibilityError)


class TestInverse:
    """Test the inverse map."""

    def test_extract_v0(self):
        """Test the phase of the one-pole data is -2 arg(1 - at)."""
        v0 = extract_v0(OnePoleCase(0.5).scattering(GRID))
        assert np.allclose(v0.samples, -2 * np.angle(1 - 0.5 * grid_nodes(GRID)))

    def test_trivial(self):
        """Test s = 1 gives the semicircle law."""
        measure = inverse(ScatteringData(0, 0, (), (), CircleFunction.constant(1.0, GRID)))
        assert np.allclose(measure.log_rho0.samples, 0.0, atol=1e-12)
        assert measure.masses == ()

    def test_one_pole(self):
        """Test the one-pole density is recovered."""
        case = OnePoleCase(0.5)
        measure = inverse(case.scattering(GRID))
        assert np.allclose(measure.log_rho0.samples, case.log_rho0(grid_nodes(GRID)), atol=1e-10)

    def test_single_eigenvalue(self):
        """Test the eigenvalue mass and the a.c. part of the single-eigenvalue family."""
        case = SingleEigenvalueCase(0.5, 1.0)
        measure = inverse(case.scattering(GRID))
        assert measure.zeros == (0.5,)
        assert measure.sigmas[0] == pytest.approx(case.sigma1, rel=1e-9)
        assert np.allclose(measure.log_rho0.samples, case.log_rho0(grid_nodes(GRID)), atol=1e-9)

    def test_normalized(self):
        """Test the output always has unit mass."""
        rng = np.random.default_rng(3)
        measure = inverse(forward(random_measure(rng)))
        assert measure.normalized
        assert total_mass(measure) == pytest.approx(1.0, abs=1e-12)

    def test_inadmissible(self):
        """Test inverse refuses inadmissible data."""
        with pytest.raises(IndexMismatchError):
            inverse(ScatteringData(0, 0, (), (), power(1)))

    def test_random_round_trip(self):
        """Test forward(inverse(data)) = data and inverse(forward(measure)) = normalized measure."""
        rng = np.random.default_rng(2024)
        for _ in range(25):
            original = random_measure(rng)
            data = forward(original)
            recovered = inverse(data)
            again = forward(recovered)

            assert np.max(np.abs(again.s.samples - data.s.samples)) < 1e-8
            assert again.mus == pytest.approx(data.mus, rel=1e-8)
            assert (again.gamma1, again.gamma2) == (data.gamma1, data.gamma2)

            expected = normalize(original)
            assert np.allclose(recovered.log_rho0.samples, expected.log_rho0.samples, atol=1e-8)
            assert recovered.sigmas == pytest.approx(expected.sigmas, rel=1e-8)

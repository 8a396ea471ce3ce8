"""
Tests for the forward scattering map.
"""

import numpy as np
import pytest

from jacobi_scattering.core.harmonics import CircleFunction, DomainError, grid_nodes
from jacobi_scattering.core.jacobi import JacobiParams
from jacobi_scattering.core.scattering import (
    InconsistentDataError,
    ScatteringData,
    blaschke_phase,
    compare_normalizing_constants,
    decompose_index,
    forward,
    scattering_from_jost,
    scattering_function,
)
from jacobi_scattering.core.spectral import MassPoint, SpectralMeasure
from jacobi_scattering.utils.closed_forms import OnePoleCase, OneZeroCase, SingleEigenvalueCase, TwoPoleCase


class TestForward:
    """Test forward() on measures with known scattering data."""

    def test_trivial(self):
        """Test log_rho0 = 0 without masses gives s = 1."""
        data = forward(SpectralMeasure(0, 0, CircleFunction.constant(0.0, 8)))
        assert np.allclose(data.s.samples, 1.0)
        assert data.index == 0
        assert data.mus == ()

    def test_one_pole(self):
        """Test s(t) = (1 - at) / (1 - a conj t)."""
        case = OnePoleCase(0.5)
        data = forward(case.measure(10))
        t = grid_nodes(10)
        assert np.max(np.abs(data.s.samples - case.scattering_samples(t))) < 1e-10

    def test_two_pole(self):
        """Test the two-pole scattering function."""
        case = TwoPoleCase(0.3, 0.6)
        data = forward(case.measure(10))
        t = grid_nodes(10)
        assert np.max(np.abs(data.s.samples - case.scattering_samples(t))) < 1e-10

    def test_single_eigenvalue(self):
        """Test s(t) = t^2 and the normalizing constant mu1."""
        case = SingleEigenvalueCase(0.5, 1.0)
        data = forward(case.measure(10))
        t = grid_nodes(10)
        assert np.max(np.abs(data.s.samples - t ** 2)) < 1e-8
        assert data.zeros == (0.5,)
        assert data.mus[0] == pytest.approx(1.0, rel=1e-10)
        assert data.index == 2

    def test_endpoint_resonance(self):
        """Test gamma1 = 1 gives s(1) = -1 and winding one."""
        data = forward(SpectralMeasure(1, 0, CircleFunction.constant(0.0, 8)))
        assert data.s.samples[0] == pytest.approx(-1.0)
        assert np.allclose(data.s.samples, -grid_nodes(8))

    def test_unimodular_and_symmetric(self):
        """Test |s| = 1 and s(conj t) = conj s(t)."""
        log_rho0 = CircleFunction.from_function(lambda t: np.log(np.abs(1 + 0.4 * t)) + 0.2 * np.real(t ** 3), 9)
        measure = SpectralMeasure(0, 1, log_rho0, (MassPoint(-0.6, 0.2), MassPoint(0.3, 0.1)))
        s = forward(measure).s
        assert np.allclose(np.abs(s.samples), 1.0)
        assert np.allclose(s.reflected().samples, np.conj(s.samples))

    def test_scale_invariance(self):
        """Test rescaling the measure leaves s unchanged."""
        measure = SingleEigenvalueCase(0.5, 1.0).measure(9)
        scaled = SpectralMeasure(0, 0, measure.log_rho0.shifted(np.log(3.0)), tuple(
            MassPoint(m.z, 3.0 * m.sigma) for m in measure.masses
        ))
        assert np.allclose(scattering_function(scaled).samples, scattering_function(measure).samples)
        assert forward(scaled).mus == pytest.approx(forward(measure).mus)

    def test_blaschke_phase(self):
        """Test B(t)^2 = t^{2N} exp(-i v1)."""
        zeros = (0.5, -0.3)
        v1 = blaschke_phase(zeros, 7)
        t = grid_nodes(7)
        b = np.ones_like(t)
        for z in zeros:
            b = b * np.sign(z) * (z - t) / (1 - z * t)
        assert np.allclose(b ** 2, t ** 4 * np.exp(-1j * v1.samples))

    def test_json_form(self):
        """Test ScatteringData survives its JSON form."""
        data = SingleEigenvalueCase(0.5, 1.0).scattering(7)
        restored = ScatteringData.from_dict(data.to_dict())
        assert restored.zeros == data.zeros
        assert restored.mus == data.mus
        assert np.allclose(restored.s.samples, data.s.samples)

    def test_malformed_json(self):
        """Test a payload without s is refused."""
        with pytest.raises(DomainError):
            ScatteringData.from_dict({"gamma1": 0, "gamma2": 0})


class TestDecomposeIndex:
    """Test the split s = (-1)^gamma1 t^M exp(-i v)."""

    def test_t_squared_one_eigenvalue(self):
        """Test s = t^2 with one eigenvalue has gamma = (0, 0)."""
        s = CircleFunction.from_function(lambda t: t ** 2, 7)
        pieces = decompose_index(s, 1)
        assert (pieces.gamma1, pieces.gamma2, pieces.index) == (0, 0, 2)
        assert np.allclose(pieces.phase.samples, 0.0)

    def test_minus_t(self):
        """Test s = -t without eigenvalues is a resonance at t = 1."""
        s = CircleFunction.from_function(lambda t: -t, 7)
        pieces = decompose_index(s, 0)
        assert (pieces.gamma1, pieces.gamma2) == (1, 0)

    def test_t(self):
        """Test s = t without eigenvalues is a resonance at t = -1."""
        s = CircleFunction.from_function(lambda t: t, 7)
        assert (decompose_index(s, 0).gamma1, decompose_index(s, 0).gamma2) == (0, 1)

    def test_constant(self):
        """Test s = 1 has index 0."""
        pieces = decompose_index(CircleFunction.constant(1.0, 7), 0)
        assert pieces.index == 0

    def test_phase_recovered(self):
        """Test the phase of a one-pole scattering function is -2 arg(1 - at)."""
        case = OnePoleCase(0.5)
        pieces = decompose_index(case.scattering(9).s, 0)
        expected = -2 * np.angle(1 - 0.5 * grid_nodes(9))
        assert np.allclose(pieces.phase.samples, expected)

    @pytest.mark.parametrize(
        "case",
        [OnePoleCase(0.5), OneZeroCase(0.5), TwoPoleCase(0.3, 0.6), SingleEigenvalueCase(0.5, 1.0)],
        ids=lambda c: c.name,
    )
    def test_closed_form_cases(self, case):
        """Test every closed-form family splits with gamma = (0, 0) and M = 2N."""
        data = case.scattering(9)
        pieces = decompose_index(data.s, len(data.zeros))
        assert (pieces.gamma1, pieces.gamma2) == (0, 0)
        assert pieces.index == 2 * len(data.zeros)
        rebuilt = data.s.nodes ** pieces.index * np.exp(-1j * pieces.phase.samples)
        assert np.allclose(rebuilt, data.s.samples, atol=1e-12)

    def test_inconsistent(self):
        """Test a winding of 3 cannot come from zero eigenvalues."""
        s = CircleFunction.from_function(lambda t: t ** 3, 7)
        with pytest.raises(InconsistentDataError):
            decompose_index(s, 0)


class TestJacobiSide:
    """Test quantities computed from the Jacobi parameters."""

    def test_scattering_from_jost(self):
        """Test phi_0(t) / phi_0(conj t) matches forward() for each closed form."""
        for case in (OnePoleCase(0.5), TwoPoleCase(0.3, 0.6), SingleEigenvalueCase(0.5, 1.0)):
            from_jost = scattering_from_jost(case.jacobi(128), 9)
            from_measure = forward(case.measure(9)).s
            assert np.max(np.abs(from_jost.samples - from_measure.samples)) < 1e-8

    def test_resonance_refused(self):
        """Test a Jost zero on the circle is reported."""
        params = JacobiParams((), (1.0,), None, 16)
        with pytest.raises(DomainError):
            scattering_from_jost(params, 6)

    def test_normalizing_constants(self):
        """Test the constant from both sides, the mass identity and phi_1(z1)."""
        case = SingleEigenvalueCase(0.5, 1.0)
        check = compare_normalizing_constants(case.jacobi(256), case.measure(10), 0)
        assert check.gap < 1e-6
        assert check.mass_identity == pytest.approx(1.0, rel=1e-6)
        assert check.phi1_gap < 1e-6

    def test_normalizing_constant_other_family(self):
        """Test the identities for another eigenvalue position."""
        case = SingleEigenvalueCase(0.3, 0.3)
        check = compare_normalizing_constants(case.jacobi(256), case.measure(10), 0)
        assert check.gap < 1e-6 * max(1.0, check.mu)
        assert check.mass_identity == pytest.approx(1.0, rel=1e-6)

    def test_index_out_of_range(self):
        """Test asking for a missing eigenvalue fails."""
        case = OnePoleCase(0.5)
        with pytest.raises(IndexError):
            compare_normalizing_constants(case.jacobi(16), case.measure(8), 0)

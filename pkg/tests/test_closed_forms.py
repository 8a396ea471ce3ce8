"""
Tests for the closed-form families and their registry.
"""

import numpy as np
import pytest

from jacobi_scattering.core.harmonics import DomainError, grid_nodes
from jacobi_scattering.core.jacobi import jost_function
from jacobi_scattering.core.spectral import total_mass
from jacobi_scattering.utils.closed_forms import (
    CASES,
    OnePoleCase,
    OneZeroCase,
    SingleEigenvalueCase,
    TwoPoleCase,
    build_case,
    resolve_case,
)

ALL_CASES = [OnePoleCase(0.5), OneZeroCase(0.5), TwoPoleCase(0.3, 0.6), SingleEigenvalueCase(0.5, 1.0)]


class TestRegistry:
    """Test lookup and construction by name."""

    def test_names(self):
        """Test the four families are registered."""
        assert list(CASES) == ["one-pole", "one-zero", "two-pole", "single-eigenvalue"]

    def test_aliases(self):
        """Test numeric aliases and case-insensitive names."""
        assert resolve_case("3") is TwoPoleCase
        assert resolve_case(" One-Pole ") is OnePoleCase

    def test_unknown(self):
        """Test an unknown name is refused."""
        with pytest.raises(DomainError):
            resolve_case("three-pole")

    def test_build_ignores_missing(self):
        """Test parameters left as None fall back to the defaults."""
        case = build_case("single-eigenvalue", a=None, b=None, z1=0.4, mu1=None)
        assert case.parameters() == {"z1": 0.4, "mu1": 1.0}

    def test_build_wrong_parameter(self):
        """Test a parameter the family does not take is refused."""
        with pytest.raises(DomainError):
            build_case("one-pole", z1=0.3)

    @pytest.mark.parametrize("name,params", [
        ("one-pole", {"a": 1.2}),
        ("one-zero", {"a": -0.1}),
        ("two-pole", {"b": 1.0}),
        ("single-eigenvalue", {"z1": 0.0}),
        ("single-eigenvalue", {"mu1": -1.0}),
    ])
    def test_parameter_ranges(self, name, params):
        """Test out-of-range parameters are refused."""
        with pytest.raises(DomainError):
            build_case(name, **params)


class TestConsistency:
    """Test each family against the generic machinery."""

    @pytest.mark.parametrize("case", ALL_CASES, ids=lambda c: c.name)
    def test_unit_mass(self, case):
        """Test the closed-form density has total mass 1 before normalization."""
        assert total_mass(case.measure(10)) == pytest.approx(1.0, abs=1e-10)
        assert case.measure(10).log_rho0.samples.real == pytest.approx(case.log_rho0(grid_nodes(10)), abs=1e-10)

    @pytest.mark.parametrize("case", ALL_CASES, ids=lambda c: c.name)
    def test_jost_function(self, case):
        """Test the closed-form Jost function against the backward recursion."""
        z = np.array([0.3, -0.6, 0.2 + 0.5j, np.exp(1.1j)])
        computed = jost_function(case.jacobi(256), z)
        assert np.allclose(computed, case.jost_function(z), atol=1e-9)

    @pytest.mark.parametrize("case", ALL_CASES, ids=lambda c: c.name)
    def test_scattering_from_parameters(self, case):
        """Test s = phi_0(t) / phi_0(conj t) with the closed-form Jost function."""
        t = grid_nodes(7)
        phi0 = case.jost_function(t)
        assert np.allclose(case.scattering_samples(t), phi0 / np.conj(phi0))

    def test_single_eigenvalue_head(self):
        """Test the head reaches the point where the parameters are free in double precision."""
        case = SingleEigenvalueCase(0.5, 1.0)
        assert case.head_length == 31
        a, b = case.jacobi_coefficients(case.head_length)
        assert abs(a[-1] - 1.0) < 1e-15
        assert abs(b[-1]) < 1e-15

    def test_single_eigenvalue_constants(self):
        """Test sigma1 = epsilon * (mass of the a.c. part)."""
        case = SingleEigenvalueCase(0.5, 1.0)
        ac_mass = case.c0_squared / (1 - 0.25)
        assert case.sigma1 == pytest.approx(case.epsilon * ac_mass)
        assert case.eigenvalue == pytest.approx(2.5)

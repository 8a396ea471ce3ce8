"""
Forward scattering map from spectral data to scattering data.

The scattering function is assembled on the grid as

    s(t) = (-1)^gamma1 t^M exp(-i (v0(t) + v1(t))),   M = 2N + gamma1 + gamma2,

where v0 is the harmonic conjugate of log rho0_hat and v1 the phase of the
squared Blaschke product, computed from the zeros rather than by dividing
grid samples.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..config import get_setting
from .harmonics import (
    BesovClassError,
    CircleFunction,
    DomainError,
    JacobiScatteringError,
    conjugate,
    grid_nodes,
    is_besov_admissible,
    unwrap_phase,
    winding_number,
)
from .jacobi import JacobiParams, guseinov_constant, jost_function, jost_solution, sine_norm_squared
from .spectral import SpectralMeasure, blaschke_derivative, masses_to_mus, outer_D

logger = logging.getLogger(__name__)


class InconsistentDataError(JacobiScatteringError):
    """Raised when a scattering function contradicts its declared index."""
    pass


@dataclass(frozen=True, eq=False)
class ScatteringData:
    """
    Scattering data of a Jacobi matrix.

    Attributes:
        gamma1: Resonance exponent at x = 2
        gamma2: Resonance exponent at x = -2
        zeros: Eigenvalue parameters z_k
        mus: Normalizing constants, one per zero
        s: Unimodular scattering function on the grid
    """

    gamma1: int
    gamma2: int
    zeros: Tuple[float, ...]
    mus: Tuple[float, ...]
    s: CircleFunction

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(float(z) for z in self.zeros))
        object.__setattr__(self, "mus", tuple(float(m) for m in self.mus))

    @property
    def count(self) -> int:
        """Number of eigenvalues N."""
        return len(self.zeros)

    @property
    def index(self) -> int:
        return 2 * self.count + self.gamma1 + self.gamma2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "zeros": list(self.zeros),
            "mus": list(self.mus),
            "s": self.s.to_dict(),
        }

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "ScatteringData":
        try:
            return cls(
                gamma1=int(payload["gamma1"]),
                gamma2=int(payload["gamma2"]),
                zeros=tuple(payload.get("zeros", [])),
                mus=tuple(payload.get("mus", [])),
                s=CircleFunction.from_dict(payload["s"]),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"Malformed scattering data: {e}")


def blaschke_phase(zeros: Sequence[float], grid_log2: int) -> CircleFunction:
    """
    Phase v1 with B(t)^2 = t^{2N} exp(-i v1(t)) on the circle.

    Each real zero contributes 4 arg(1 - z_k t), which is real, odd under
    t -> conj(t) and free of branch jumps since |z_k| < 1.
    """
    t = grid_nodes(grid_log2)
    phase = np.zeros(t.size)
    for zero in zeros:
        phase += 4.0 * np.angle(1.0 - zero * t)
    return CircleFunction(grid_log2, phase)


def representation(gamma1: int, index: int, phase: CircleFunction) -> CircleFunction:
    """(-1)^gamma1 t^M exp(-i v) on the grid of ``phase``."""
    t = phase.nodes
    samples = (-1.0) ** gamma1 * t ** index * np.exp(-1j * phase.samples.real)
    return CircleFunction(phase.grid_log2, samples)


def scattering_function(measure: SpectralMeasure) -> CircleFunction:
    """
    Scattering function of a measure on its own grid.

    The result does not depend on the overall scale of the measure.
    """
    v0 = conjugate(measure.log_rho0)
    v1 = blaschke_phase(measure.zeros, measure.grid_log2)
    index = 2 * len(measure.masses) + measure.gamma1 + measure.gamma2
    return representation(measure.gamma1, index, v0 + v1)


def forward(measure: SpectralMeasure) -> ScatteringData:
    """
    Scattering data (gamma1, gamma2, Z, mu, s) of a spectral measure.

    Raises:
        BesovClassError: If log_rho0 fails the Besov truncation test
    """
    if not is_besov_admissible(measure.log_rho0, get_setting("besov_tail_ratio", 1e-8)):
        raise BesovClassError("log_rho0 fails the Besov truncation test")
    mus = masses_to_mus(measure)
    s = scattering_function(measure)
    logger.info(
        f"Forward map: gamma=({measure.gamma1}, {measure.gamma2}), "
        f"{len(mus)} eigenvalues, grid 2^{measure.grid_log2}"
    )
    return ScatteringData(measure.gamma1, measure.gamma2, measure.zeros, tuple(mus), s)


@dataclass(frozen=True, eq=False)
class IndexDecomposition:
    """Pieces of s = (-1)^gamma1 t^M exp(-i v)."""

    gamma1: int
    gamma2: int
    index: int
    phase: CircleFunction


def decompose_index(s: CircleFunction, count: int) -> IndexDecomposition:
    """
    Split a unimodular s into (-1)^gamma1 t^M exp(-i v).

    Args:
        s: Unimodular scattering function on the grid
        count: Number of eigenvalues N

    Returns:
        IndexDecomposition with M the winding number of s, gamma1 read off
        the sign at t = 1 and gamma2 = M - 2N - gamma1

    Raises:
        InconsistentDataError: If M - 2N is not compatible with gamma in {0, 1}^2
        BesovClassError: If the phase v fails the Besov truncation test
    """
    tol = get_setting("unimodular_tolerance", 1e-8)
    index = winding_number(s, tol)
    remainder = s.samples * s.nodes ** (-index)
    gamma1 = 0 if remainder[0].real > 0 else 1
    gamma2 = index - 2 * count - gamma1
    if gamma2 not in (0, 1):
        raise InconsistentDataError(
            f"Winding number {index} is incompatible with {count} eigenvalues (gamma1={gamma1})"
        )
    phase = -unwrap_phase(CircleFunction(s.grid_log2, (-1.0) ** gamma1 * remainder), tol)
    if not is_besov_admissible(phase, get_setting("besov_tail_ratio", 1e-8)):
        raise BesovClassError("Scattering phase fails the Besov truncation test")
    logger.debug(f"Index decomposition: M={index}, gamma=({gamma1}, {gamma2})")
    return IndexDecomposition(gamma1, gamma2, index, phase)


@dataclass(frozen=True)
class NormalizingConstantCheck:
    """Normalizing constant from both sides plus two identities at an eigenvalue."""

    mu: float
    guseinov: float
    mass_identity: float
    phi1_computed: float
    phi1_predicted: float

    @property
    def gap(self) -> float:
        return abs(self.mu - self.guseinov)

    @property
    def phi1_gap(self) -> float:
        return abs(self.phi1_computed - self.phi1_predicted)


def compare_normalizing_constants(
    params: JacobiParams,
    measure: SpectralMeasure,
    k: int,
    n_max: Optional[int] = None,
) -> NormalizingConstantCheck:
    """
    Compare mu_k from the spectral side with sum_{n>=1} phi_n(z_k)^2.

    Also reports sigma_k sum_{n>=1} s_n(z_k)^2, which equals 1, and phi_1(z_k)
    against sigma_k B'(z_k) / ((1 - z_k^{-2}) D(z_k)).

    Args:
        params: Jacobi parameters of the operator
        measure: Its normalized spectral measure
        k: Zero-based eigenvalue index
        n_max: Recurrence length

    Raises:
        IndexError: If k is out of range
    """
    mass = measure.masses[k]
    z_k = mass.z
    mu = masses_to_mus(measure)[k]
    guseinov = guseinov_constant(params, z_k, n_max)
    mass_identity = mass.sigma * sine_norm_squared(params, z_k, n_max)
    phi1 = float(jost_solution(params, z_k, n_max).values[1].real)
    derivative = blaschke_derivative(measure.blaschke, z_k)
    predicted = mass.sigma / (1.0 - z_k ** -2) * derivative / outer_D(measure, z_k).real
    return NormalizingConstantCheck(mu, guseinov, mass_identity, phi1, float(predicted))


def scattering_from_jost(params: JacobiParams, grid_log2: int, n_max: Optional[int] = None) -> CircleFunction:
    """
    Scattering function phi_0(t) / phi_0(conj t) computed from the Jacobi parameters.

    Raises:
        DomainError: If the Jost function vanishes on the grid (a resonance at t = +-1)
    """
    t = grid_nodes(grid_log2)
    phi0 = jost_function(params, t, n_max)
    if np.min(np.abs(phi0)) < 1e-12:
        raise DomainError("Jost function vanishes on the circle; the ratio is undefined there")
    return CircleFunction(grid_log2, phi0 / np.conj(phi0))

"""
Spectral measures on [-2, 2] with finitely many eigenvalues outside it.

A measure is stored through its circle data: the exponents (gamma1, gamma2)
of the endpoint singularities, the log of the regular part of the density as
a CircleFunction in the variable t with x = t + 1/t, and the eigenvalue
masses in disk coordinates z_k with lambda_k = z_k + 1/z_k.

Every integral over [-2, 2] is computed in theta, x = 2 cos(theta), where
the endpoint factors become smooth powers of sin(theta/2) and cos(theta/2).
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, List, Mapping, Sequence, Tuple

import numpy as np

from .harmonics import (
    ArrayLike,
    BesovClassError,
    CircleFunction,
    DomainError,
    grid_angles,
    herglotz_outer_boundary,
    herglotz_outer_eval,
    is_besov_admissible,
)

logger = logging.getLogger(__name__)


def joukowski(z: ArrayLike) -> ArrayLike:
    """lambda = z + 1/z."""
    z_arr = np.asarray(z, dtype=complex)
    if np.any(z_arr == 0):
        raise DomainError("Joukowski map is undefined at z = 0")
    value = z_arr + 1.0 / z_arr
    if value.ndim:
        return value
    return float(value.real) if value.imag == 0 else complex(value)


def inverse_joukowski(lam: float) -> float:
    """
    Preimage of an eigenvalue lambda outside [-2, 2] inside (-1, 1).

    Raises:
        DomainError: If |lambda| <= 2
    """
    lam = float(lam)
    if abs(lam) <= 2.0:
        raise DomainError(f"Eigenvalue {lam} must lie outside [-2, 2]")
    root = np.sqrt(lam * lam - 4.0)
    # 2 / (|lam| + root) avoids cancellation for large |lam|
    return float(np.sign(lam) * 2.0 / (abs(lam) + root))


@dataclass(frozen=True)
class MassPoint:
    """Eigenvalue mass sigma at lambda = z + 1/z."""

    z: float
    sigma: float

    @property
    def lam(self) -> float:
        return self.z + 1.0 / self.z


@dataclass(frozen=True)
class BlaschkeProduct:
    """
    Finite Blaschke product with real zeros, normalized to be positive at 0.

    Each factor is (|z_k|/z_k)(z_k - z)/(1 - z_k z).
    """

    zeros: Tuple[float, ...] = ()

    def __post_init__(self):
        zeros = tuple(float(z) for z in self.zeros)
        for z in zeros:
            if not 0 < abs(z) < 1:
                raise DomainError(f"Blaschke zero {z} must lie in (-1, 1) without 0")
        if len(set(zeros)) != len(zeros):
            raise DomainError(f"Blaschke zeros must be distinct: {zeros}")
        object.__setattr__(self, "zeros", zeros)

    @property
    def degree(self) -> int:
        return len(self.zeros)

    def __call__(self, z: ArrayLike) -> ArrayLike:
        return blaschke_eval(self, z)


def _blaschke_factor(zero: float, z: np.ndarray) -> np.ndarray:
    return np.sign(zero) * (zero - z) / (1.0 - zero * z)


def blaschke_eval(product: BlaschkeProduct, z: ArrayLike) -> ArrayLike:
    """Evaluate the product at a point or array in the closed disk."""
    z_arr = np.asarray(z, dtype=complex)
    value = np.ones_like(z_arr)
    for zero in product.zeros:
        value = value * _blaschke_factor(zero, z_arr)
    return value if value.ndim else complex(value)


def blaschke_derivative(product: BlaschkeProduct, zero: float) -> float:
    """
    Derivative of the product at one of its zeros.

    Raises:
        DomainError: If ``zero`` is not a zero of the product
    """
    if zero not in product.zeros:
        raise DomainError(f"{zero} is not a zero of the Blaschke product")
    own = -np.sign(zero) / (1.0 - zero * zero)
    others = [z for z in product.zeros if z != zero]
    rest = blaschke_eval(BlaschkeProduct(tuple(others)), zero)
    return float(own * rest.real)


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """
    Spectral measure of a Jacobi matrix in Ryckman's class.

    Attributes:
        gamma1: Exponent of the (2 - x) singularity, 0 or 1
        gamma2: Exponent of the (2 + x) singularity, 0 or 1
        log_rho0: Real symmetric CircleFunction, log of the regular density part
        masses: Eigenvalue masses in disk coordinates
        normalized: Whether total_mass has been brought to 1
    """

    gamma1: int
    gamma2: int
    log_rho0: CircleFunction
    masses: Tuple[MassPoint, ...] = ()
    normalized: bool = False
    besov_tail_ratio: float = field(default=1e-8, repr=False)

    def __post_init__(self):
        if self.gamma1 not in (0, 1) or self.gamma2 not in (0, 1):
            raise DomainError(f"Exponents must be 0 or 1, got ({self.gamma1}, {self.gamma2})")
        if not self.log_rho0.real_valued:
            raise DomainError("log_rho0 must be real-valued")
        masses = tuple(self.masses)
        for mass in masses:
            if not 0 < abs(mass.z) < 1:
                raise DomainError(f"Mass point z={mass.z} must lie in (-1, 1) without 0")
            if mass.sigma <= 0:
                raise DomainError(f"Mass at z={mass.z} must be positive, got {mass.sigma}")
        if len({m.z for m in masses}) != len(masses):
            raise DomainError("Mass points must be distinct")
        if not is_besov_admissible(self.log_rho0, self.besov_tail_ratio):
            raise BesovClassError("log_rho0 fails the Besov truncation test; refine the grid")
        object.__setattr__(self, "masses", masses)

    @property
    def grid_log2(self) -> int:
        return self.log_rho0.grid_log2

    @property
    def zeros(self) -> Tuple[float, ...]:
        return tuple(m.z for m in self.masses)

    @property
    def sigmas(self) -> Tuple[float, ...]:
        return tuple(m.sigma for m in self.masses)

    @property
    def blaschke(self) -> BlaschkeProduct:
        return BlaschkeProduct(self.zeros)

    @property
    def rho0_hat(self) -> np.ndarray:
        """Regular density part on the grid."""
        return np.exp(self.log_rho0.samples.real)

    def without_masses(self) -> "SpectralMeasure":
        return replace(self, masses=(), normalized=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "log_rho0": self.log_rho0.to_dict(),
            "masses": [{"z": m.z, "sigma": m.sigma} for m in self.masses],
            "normalized": self.normalized,
        }

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "SpectralMeasure":
        try:
            masses = tuple(MassPoint(float(m["z"]), float(m["sigma"])) for m in payload.get("masses", []))
            return cls(
                gamma1=int(payload["gamma1"]),
                gamma2=int(payload["gamma2"]),
                log_rho0=CircleFunction.from_dict(payload["log_rho0"]),
                masses=masses,
                normalized=bool(payload.get("normalized", False)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"Malformed spectral measure: {e}")

    @classmethod
    def from_density(
        cls,
        rho0_hat: Callable[[np.ndarray], np.ndarray],
        grid_log2: int,
        gamma1: int = 0,
        gamma2: int = 0,
        masses: Sequence[MassPoint] = (),
    ) -> "SpectralMeasure":
        """Build a measure from a positive function t -> rho0_hat(t) on the circle."""
        log_rho0 = CircleFunction.from_function(lambda t: np.log(np.abs(rho0_hat(t))), grid_log2)
        return cls(gamma1, gamma2, log_rho0, tuple(masses))


def outer_D0(measure: SpectralMeasure, z: ArrayLike) -> ArrayLike:
    """Outer function with |D0(t)|^2 = rho0_hat(t) on the circle."""
    return herglotz_outer_eval(measure.log_rho0, z)


def _outer(log_rho0: CircleFunction, gamma1: int, gamma2: int, z: ArrayLike) -> ArrayLike:
    z_arr = np.asarray(z, dtype=complex)
    value = herglotz_outer_eval(log_rho0, z_arr)
    value = value / ((1.0 - z_arr) ** gamma1 * (1.0 + z_arr) ** gamma2)
    return value if np.ndim(value) else complex(value)


def outer_D(measure: SpectralMeasure, z: ArrayLike) -> ArrayLike:
    """
    D(z) = D0(z) / ((1 - z)^gamma1 (1 + z)^gamma2).

    Raises:
        DomainError: If some |z| >= 1
    """
    return _outer(measure.log_rho0, measure.gamma1, measure.gamma2, z)


def outer_D0_boundary(measure: SpectralMeasure) -> CircleFunction:
    """Boundary values of D0 on the grid."""
    return herglotz_outer_boundary(measure.log_rho0)


def endpoint_weight(measure: SpectralMeasure, theta: np.ndarray) -> np.ndarray:
    """sin^2(theta) / ((2 - x)^gamma1 (2 + x)^gamma2) written without division."""
    half_sin = np.sin(0.5 * theta)
    half_cos = np.cos(0.5 * theta)
    g1, g2 = measure.gamma1, measure.gamma2
    return 4.0 ** (1 - g1 - g2) * half_sin ** (2 * (1 - g1)) * half_cos ** (2 * (1 - g2))


def density_f(measure: SpectralMeasure, x: ArrayLike) -> ArrayLike:
    """
    Absolutely continuous density f(x) on (-2, 2).

    Raises:
        DomainError: If some |x| >= 2
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(np.abs(x_arr) >= 2.0):
        raise DomainError("Density is defined on the open interval (-2, 2)")
    theta = np.arccos(0.5 * x_arr)
    rho0 = np.exp(np.real(measure.log_rho0.evaluate(np.exp(1j * theta))))
    rho = rho0 / ((2.0 - x_arr) ** measure.gamma1 * (2.0 + x_arr) ** measure.gamma2)
    value = rho * np.sqrt(4.0 - x_arr ** 2) / (2 * np.pi)
    return value if value.ndim else float(value)


def absolutely_continuous_mass(measure: SpectralMeasure) -> float:
    """Integral of f over [-2, 2] by the trapezoid rule in theta."""
    theta = grid_angles(measure.grid_log2)
    return float(2.0 * np.mean(measure.rho0_hat * endpoint_weight(measure, theta)))


def total_mass(measure: SpectralMeasure) -> float:
    """Absolutely continuous mass plus all eigenvalue masses."""
    return absolutely_continuous_mass(measure) + float(sum(measure.sigmas))


def normalize(measure: SpectralMeasure) -> SpectralMeasure:
    """Rescale density and masses by a common factor so the total mass is 1."""
    mass = total_mass(measure)
    if measure.normalized and abs(mass - 1.0) < 1e-14:
        return measure
    factor = 1.0 / mass
    logger.debug(f"Normalizing measure of mass {mass:.12g}")
    return SpectralMeasure(
        gamma1=measure.gamma1,
        gamma2=measure.gamma2,
        log_rho0=measure.log_rho0.shifted(np.log(factor)),
        masses=tuple(MassPoint(m.z, m.sigma * factor) for m in measure.masses),
        normalized=True,
        besov_tail_ratio=measure.besov_tail_ratio,
    )


def _eigen_factor(product: BlaschkeProduct, d_values: np.ndarray) -> np.ndarray:
    """|B'(z_k) / D(z_k)|^2 |1 - z_k^{-2}|^{-2} for every zero."""
    zeros = np.asarray(product.zeros, dtype=float)
    derivatives = np.array([blaschke_derivative(product, z) for z in zeros])
    return np.abs(derivatives / d_values) ** 2 / np.abs(1.0 - zeros ** -2.0) ** 2


def masses_to_mus(measure: SpectralMeasure) -> List[float]:
    """
    Normalizing constants mu_k = sigma_k |B'(z_k)/D(z_k)|^2 |1 - z_k^{-2}|^{-2}.

    The constants do not change when the measure is rescaled.
    """
    if not measure.masses:
        return []
    d_values = np.atleast_1d(outer_D(measure, np.asarray(measure.zeros, dtype=complex)))
    factors = _eigen_factor(measure.blaschke, d_values)
    return [float(s * f) for s, f in zip(measure.sigmas, factors)]


def mus_to_masses(
    gamma1: int,
    gamma2: int,
    zeros: Sequence[float],
    mus: Sequence[float],
    log_rho0: CircleFunction,
) -> List[float]:
    """
    Inverse of :func:`masses_to_mus` for the outer function built from log_rho0.

    Returns:
        sigma_k = mu_k |D(z_k)/B'(z_k)|^2 |1 - z_k^{-2}|^2
    """
    if len(zeros) != len(mus):
        raise DomainError(f"Got {len(zeros)} zeros but {len(mus)} constants")
    if not zeros:
        return []
    product = BlaschkeProduct(tuple(zeros))
    d_values = np.atleast_1d(_outer(log_rho0, gamma1, gamma2, np.asarray(product.zeros, dtype=complex)))
    factors = _eigen_factor(product, d_values)
    return [float(mu / f) for mu, f in zip(mus, factors)]


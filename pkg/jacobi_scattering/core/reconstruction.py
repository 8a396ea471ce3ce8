"""
From spectral measures to Jacobi parameters.

The mass-free part is carried to the unit circle by the Szegő transform,
whose Verblunsky coefficients come from a Levinson recursion on grid
moments and are turned into Jacobi parameters by the Geronimus relations.
Eigenvalues are then added one at a time with Nevai's update formulas,
which need only Christoffel kernels of the current parameters.

A discretized Stieltjes procedure gives an independent route that also
handles measures with resonances at the band edges.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from ..config import get_n_max
from .harmonics import CircleFunction, DomainError, GridSizeError, JacobiScatteringError, grid_angles
from .jacobi import JacobiParams, sine_solution
from .spectral import (
    SpectralMeasure,
    endpoint_weight,
    absolutely_continuous_mass,
    inverse_joukowski,
    normalize,
)

logger = logging.getLogger(__name__)

DEGENERACY_MARGIN = 1e-12
ORTHOGONALITY_TOLERANCE = 1e-10


class NumericalDegeneracyError(JacobiScatteringError):
    """Raised when a Verblunsky coefficient reaches the unit circle."""
    pass


class UnsupportedGammaError(JacobiScatteringError):
    """Raised for band-edge resonances, which need the even and mixed Szegő transforms."""
    pass


@dataclass(frozen=True, eq=False)
class CircleMeasure:
    """Symmetric measure w(t) m(dt) on the unit circle."""

    weight: CircleFunction
    normalized: bool = False

    def __post_init__(self):
        if not self.weight.real_valued:
            raise DomainError("Circle measure weight must be real")
        if np.any(self.weight.samples.real < 0):
            raise DomainError("Circle measure weight must be nonnegative")

    def moments(self, count: int) -> np.ndarray:
        """Real trigonometric moments c_0..c_{count-1}."""
        if count > self.weight.size // 2:
            raise GridSizeError(f"{count} moments need a grid of at least {2 * count} points")
        return np.array(self.weight.coeffs[:count].real)


@dataclass(frozen=True, eq=False)
class VerblunskySeq:
    """Real Verblunsky coefficients alpha_0, alpha_1, ..."""

    alphas: np.ndarray

    def __post_init__(self):
        alphas = np.asarray(self.alphas, dtype=float)
        if np.any(np.abs(alphas) >= 1):
            raise DomainError("Verblunsky coefficients must lie in (-1, 1)")
        object.__setattr__(self, "alphas", alphas)

    def __len__(self) -> int:
        return self.alphas.size

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"n": np.arange(self.alphas.size), "alpha": self.alphas})

    def to_dict(self) -> Dict[str, Any]:
        return {"alphas": self.alphas.tolist()}


def szego_transform(measure: SpectralMeasure) -> CircleMeasure:
    """
    Szegő transform of a measure without eigenvalues or band-edge resonances.

    On the circle f(t + 1/t) / |1 - t^2| equals rho_hat(t) / (2 pi), so the
    weight is rho_hat rescaled to unit mass and no singular quotient is formed.

    Raises:
        DomainError: If gamma != (0, 0) or the measure has eigenvalues
    """
    if measure.gamma1 or measure.gamma2:
        raise DomainError("Szegő transform requires gamma1 = gamma2 = 0")
    if measure.masses:
        raise DomainError("Szegő transform requires a measure without eigenvalues")
    rho = measure.rho0_hat
    weight = CircleFunction(measure.grid_log2, rho / np.mean(rho))
    return CircleMeasure(weight, normalized=True)


def verblunsky(mu: CircleMeasure, n_max: int) -> VerblunskySeq:
    """
    Verblunsky coefficients alpha_0..alpha_{n_max} by the Levinson recursion.

    With c_k the moments and phi_n the coefficients of the monic orthogonal
    polynomial, alpha_n = (sum_j phi_{n,j} c_{j+1}) / E_n,
    E_{n+1} = (1 - alpha_n^2) E_n and Phi_{n+1} = z Phi_n - alpha_n Phi_n^*.

    Raises:
        NumericalDegeneracyError: If some |alpha_n| >= 1 - 1e-12
        GridSizeError: If the grid cannot resolve n_max + 2 moments
    """
    moments = mu.moments(n_max + 2)
    moments = moments / moments[0]
    alphas = np.zeros(n_max + 1)
    poly = np.zeros(n_max + 2)
    poly[0] = 1.0
    energy = 1.0
    for n in range(n_max + 1):
        alpha = float(np.dot(poly[:n + 1], moments[1:n + 2])) / energy
        if abs(alpha) >= 1.0 - DEGENERACY_MARGIN:
            raise NumericalDegeneracyError(f"alpha_{n} = {alpha} is at the boundary of the moment problem")
        alphas[n] = alpha
        reversed_poly = poly[:n + 1][::-1].copy()
        poly[1:n + 2] = poly[:n + 1].copy()
        poly[0] = 0.0
        poly[:n + 1] -= alpha * reversed_poly
        energy *= 1.0 - alpha * alpha
    logger.debug(f"Computed {alphas.size} Verblunsky coefficients, final energy {energy:.6g}")
    return VerblunskySeq(alphas)


def geronimus(alphas: VerblunskySeq, n_max: Optional[int] = None) -> JacobiParams:
    """
    Jacobi parameters from Verblunsky coefficients:

        b_{n+1} = alpha_{2n} (1 - alpha_{2n+1}) - alpha_{2n+2} (1 + alpha_{2n+1})
        a_{n+1}^2 = (1 - alpha_{2n+3}) (1 - alpha_{2n+2}^2) (1 + alpha_{2n+1})

    K coefficients determine (K - 2) // 2 pairs; the matrix is free beyond.
    """
    alpha = alphas.alphas
    count = max((alpha.size - 2) // 2, 0)
    n = np.arange(count)
    b = alpha[2 * n] * (1 - alpha[2 * n + 1]) - alpha[2 * n + 2] * (1 + alpha[2 * n + 1])
    a_squared = (1 - alpha[2 * n + 3]) * (1 - alpha[2 * n + 2] ** 2) * (1 + alpha[2 * n + 1])
    return JacobiParams(tuple(np.sqrt(a_squared)), tuple(b), None, n_max or get_n_max())


def _christoffel_sequence(params0: JacobiParams, lambda1: float, count: int) -> np.ndarray:
    """K_0..K_count at lambda1."""
    z1 = inverse_joukowski(lambda1)
    p = sine_solution(params0, z1, max(count, 2)).values[1:count + 1].real
    return np.concatenate(([0.0], np.cumsum(p ** 2)))


def christoffel_kernel(params0: JacobiParams, lambda1: float, n: int) -> float:
    """
    K_n(lambda1) = sum_{k<n} p_k(lambda1)^2, with K_0 = 0.

    Raises:
        DomainError: If |lambda1| <= 2
    """
    if n == 0:
        inverse_joukowski(lambda1)
        return 0.0
    return float(_christoffel_sequence(params0, lambda1, n)[n])


def nevai_insert(params0: JacobiParams, lambda1: float, epsilon: float, n_max: Optional[int] = None) -> JacobiParams:
    """
    Jacobi parameters of (sigma0 + epsilon delta(lambda1)) / (1 + epsilon).

    The updates

        a_n^2 -> a_n^2 (1 + eps K_{n-1})(1 + eps K_{n+1}) / (1 + eps K_n)^2
        b_n -> b_n - a_{n-1} V_{n-1} + a_n V_n,  V_n = eps p_{n-1} p_n / (1 + eps K_n)

    are evaluated with P_n = p_n / sqrt(1 + eps K_n) and R_n = 1 + eps P_n^2,
    which stay bounded while p_n grows geometrically.

    Raises:
        DomainError: If |lambda1| <= 2 or epsilon < 0
    """
    inverse_joukowski(lambda1)
    if epsilon < 0:
        raise DomainError(f"Inserted mass ratio must be nonnegative, got {epsilon}")
    if epsilon == 0:
        return params0
    n_max = n_max or params0.n_max
    a, b = params0.coefficients(n_max)

    scaled = np.zeros(n_max + 1)
    ratio = np.ones(n_max + 1)
    scaled[0] = 1.0
    ratio[0] = 1.0 + epsilon
    for n in range(1, n_max + 1):
        a_prev = a[n - 2] if n >= 2 else 1.0
        lower = scaled[n - 2] / np.sqrt(ratio[n - 2]) if n >= 2 else 0.0
        scaled[n] = ((lambda1 - b[n - 1]) * scaled[n - 1] - a_prev * lower) / (a[n - 1] * np.sqrt(ratio[n - 1]))
        ratio[n] = 1.0 + epsilon * scaled[n] ** 2

    new_a = np.empty(n_max)
    new_b = np.empty(n_max)
    correction_prev = 0.0
    for n in range(1, n_max + 1):
        new_a[n - 1] = a[n - 1] * np.sqrt(ratio[n] / ratio[n - 1])
        correction = epsilon * scaled[n - 1] * scaled[n] / np.sqrt(ratio[n - 1])
        a_prev = a[n - 2] if n >= 2 else 1.0
        new_b[n - 1] = b[n - 1] - a_prev * correction_prev + a[n - 1] * correction
        correction_prev = correction
    logger.debug(f"Inserted mass {epsilon:.6g} at lambda={lambda1:.6g}")
    return JacobiParams(tuple(new_a), tuple(new_b), None, params0.n_max)


def insert_masses(params0: JacobiParams, measure: SpectralMeasure, n_max: Optional[int] = None) -> JacobiParams:
    """
    Add the eigenvalues of a normalized measure to the parameters of its a.c. part.

    Masses go in by decreasing |lambda|; each mass ratio is taken against the
    total already present.
    """
    params = params0
    present = absolutely_continuous_mass(measure)
    for mass in sorted(measure.masses, key=lambda m: -abs(m.lam)):
        params = nevai_insert(params, mass.lam, mass.sigma / present, n_max)
        present += mass.sigma
    return params


def jacobi_from_spectral(measure: SpectralMeasure, n_max: Optional[int] = None) -> JacobiParams:
    """
    Jacobi parameters of a spectral measure without band-edge resonances.

    Args:
        measure: Spectral measure, normalized or not
        n_max: Number of Jacobi parameters to compute

    Returns:
        JacobiParams with n_max head entries and a free tail

    Raises:
        UnsupportedGammaError: If gamma != (0, 0)
        GridSizeError: If the grid holds fewer than 2 n_max + 3 moments
    """
    if measure.gamma1 or measure.gamma2:
        raise UnsupportedGammaError(
            "Band-edge resonances need the even and mixed Szegő transforms, which are not implemented; "
            "use stieltjes_jacobi instead"
        )
    n_max = n_max or get_n_max()
    measure = normalize(measure)
    base = normalize(measure.without_masses())
    alphas = verblunsky(szego_transform(base), 2 * n_max + 1)
    params = geronimus(alphas, n_max)
    if measure.masses:
        params = insert_masses(params, measure, n_max)
    logger.info(f"Reconstructed {n_max} Jacobi parameter pairs with {len(measure.masses)} eigenvalues")
    return params


def stieltjes_jacobi(measure: SpectralMeasure, n_max: Optional[int] = None) -> JacobiParams:
    """
    Jacobi parameters by the Stieltjes procedure on the discretized measure.

    The a.c. part becomes nodes x_j = 2 cos(theta_j) with trapezoid weights in
    theta; eigenvalues enter as point masses. Any gamma is accepted. The
    recursion is run as a Lanczos process on diag(nodes) with full
    reorthogonalization, which stays accurate for eigenvalues far outside
    [-2, 2].

    Raises:
        GridSizeError: If n_max exceeds a quarter of the grid
        NumericalDegeneracyError: If the Lanczos basis is no longer orthonormal
    """
    n_max = n_max or get_n_max()
    measure = normalize(measure)
    theta = grid_angles(measure.grid_log2)
    if n_max > theta.size // 4:
        raise GridSizeError(f"Stieltjes procedure with n_max={n_max} needs grid_log2 > {measure.grid_log2}")
    nodes = np.concatenate((2.0 * np.cos(theta), [m.lam for m in measure.masses]))
    weights = np.concatenate((
        2.0 * measure.rho0_hat * endpoint_weight(measure, theta) / theta.size,
        measure.sigmas,
    ))
    a, b = _lanczos(nodes, weights, n_max)
    logger.info(f"Stieltjes procedure gave {n_max} Jacobi parameter pairs on {nodes.size} nodes")
    return JacobiParams(tuple(a), tuple(b), None, n_max)


def _lanczos(nodes: np.ndarray, weights: np.ndarray, n_max: int):
    # Columns are sqrt(w) p_n(x), kept orthonormal by two full Gram-Schmidt passes per step
    basis = np.zeros((nodes.size, n_max + 1))
    start = np.sqrt(weights)
    basis[:, 0] = start / np.linalg.norm(start)
    a = np.empty(n_max)
    b = np.empty(n_max)
    for n in range(n_max):
        following = nodes * basis[:, n]
        b[n] = basis[:, n] @ following
        following -= b[n] * basis[:, n]
        if n > 0:
            following -= a[n - 1] * basis[:, n - 1]
        for _ in range(2):
            previous = basis[:, :n + 1]
            following -= previous @ (previous.T @ following)
        a[n] = np.linalg.norm(following)
        if a[n] <= DEGENERACY_MARGIN:
            raise NumericalDegeneracyError(f"Discretized measure has fewer than {n + 1} support points")
        basis[:, n + 1] = following / a[n]

    drift = float(np.max(np.abs(basis.T @ basis - np.eye(n_max + 1))))
    if drift > ORTHOGONALITY_TOLERANCE:
        raise NumericalDegeneracyError(f"Orthogonality lost in the Stieltjes procedure (drift {drift:.2e})")
    logger.debug(f"Lanczos basis drift {drift:.2e}")
    return a, b

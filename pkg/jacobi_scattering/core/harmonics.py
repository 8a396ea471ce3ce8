"""
Fourier analysis on the unit circle.

This module holds the grid representation of circle functions used by the
rest of the package: discrete Fourier coefficients, the half-order Besov
seminorm, harmonic conjugation, Herglotz (outer function) evaluation,
winding numbers and phase unwrapping.

All grids are uniform, t_j = exp(2*pi*i*j/M) with M = 2**grid_log2.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Mapping, Union

import numpy as np
from scipy import fft as sp_fft

logger = logging.getLogger(__name__)

MIN_GRID_LOG2 = 3
DETECTION_TOLERANCE = 1e-10

ArrayLike = Union[complex, np.ndarray]


class JacobiScatteringError(Exception):
    """Base class for all errors raised by the package."""
    pass


class DomainError(JacobiScatteringError):
    """Raised when an argument lies outside the domain of an operation."""
    pass


class GridSizeError(JacobiScatteringError):
    """Raised when sample counts do not match the requested grid."""
    pass


class ResolutionError(JacobiScatteringError):
    """Raised when the grid is too coarse to follow a phase."""
    pass


class BesovClassError(JacobiScatteringError):
    """Raised when a function fails the Besov truncation test."""
    pass


class Symmetry(str, Enum):
    """Reflection symmetry of a circle function under t -> conj(t)."""

    NONE = "none"
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"


def grid_nodes(grid_log2: int) -> np.ndarray:
    """Return the grid points t_j on the unit circle."""
    size = 1 << grid_log2
    return np.exp(2j * np.pi * np.arange(size) / size)


def grid_angles(grid_log2: int) -> np.ndarray:
    """Return the angles theta_j in [0, 2*pi)."""
    size = 1 << grid_log2
    return 2 * np.pi * np.arange(size) / size


def _frequencies(size: int) -> np.ndarray:
    """Signed integer frequencies in FFT order."""
    return np.rint(sp_fft.fftfreq(size, 1.0 / size)).astype(int)


def _reflect(values: np.ndarray) -> np.ndarray:
    """Map samples g(t_j) to g(conj(t_j)), i.e. index j -> -j mod M."""
    return np.roll(values[::-1], 1)


def _detect_symmetry(samples: np.ndarray, tol: float) -> Symmetry:
    scale = tol * (1.0 + float(np.max(np.abs(samples))))
    reflected = _reflect(samples)
    if np.max(np.abs(reflected - samples)) <= scale:
        return Symmetry.SYMMETRIC
    if np.max(np.abs(reflected + samples)) <= scale:
        return Symmetry.ANTISYMMETRIC
    return Symmetry.NONE


@dataclass(frozen=True, eq=False)
class CircleFunction:
    """
    A function on the unit circle held as grid samples and Fourier coefficients.

    Coefficients are stored in FFT order, ``coeffs[k]`` being the coefficient
    of frequency ``frequencies[k]``; use :meth:`coeff` for signed access.

    Attributes:
        grid_log2: Grid size exponent, M = 2**grid_log2
        samples: Complex samples g(t_j)
        coeffs: Discrete Fourier coefficients (1/M) sum_j g(t_j) t_j^{-n}
        symmetry: Detected reflection symmetry
        real_valued: Whether the samples are real within tolerance
    """

    grid_log2: int
    samples: np.ndarray
    coeffs: np.ndarray = field(init=False, repr=False)
    symmetry: Symmetry = field(init=False)
    real_valued: bool = field(init=False)

    def __post_init__(self):
        samples = np.array(self.samples, dtype=complex)
        if self.grid_log2 < MIN_GRID_LOG2:
            raise GridSizeError(f"grid_log2 must be at least {MIN_GRID_LOG2}, got {self.grid_log2}")
        if samples.ndim != 1 or samples.size != (1 << self.grid_log2):
            raise GridSizeError(
                f"Expected {1 << self.grid_log2} samples for grid_log2={self.grid_log2}, got {samples.size}"
            )
        if not np.all(np.isfinite(samples)):
            raise DomainError("Circle function samples must be finite")

        scale = DETECTION_TOLERANCE * (1.0 + float(np.max(np.abs(samples))))
        real_valued = bool(np.max(np.abs(samples.imag)) <= scale)
        if real_valued:
            samples = samples.real.astype(complex)
        samples.setflags(write=False)
        coeffs = sp_fft.fft(samples) / samples.size
        coeffs.setflags(write=False)

        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "real_valued", real_valued)
        object.__setattr__(self, "symmetry", _detect_symmetry(samples, DETECTION_TOLERANCE))

    # Constructors

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], grid_log2: int) -> "CircleFunction":
        """Sample ``func`` at the grid points t_j."""
        return cls(grid_log2, np.asarray(func(grid_nodes(grid_log2)), dtype=complex))

    @classmethod
    def from_coefficients(cls, coefficients: Mapping[int, complex], grid_log2: int) -> "CircleFunction":
        """
        Build a circle function from a sparse mapping n -> g_n.

        Args:
            coefficients: Signed frequency to coefficient mapping, |n| < M/2
            grid_log2: Grid size exponent

        Returns:
            CircleFunction with the given coefficients

        Raises:
            GridSizeError: If a frequency does not fit the grid
        """
        size = 1 << grid_log2
        spectrum = np.zeros(size, dtype=complex)
        for n, value in coefficients.items():
            if abs(n) >= size // 2:
                raise GridSizeError(f"Frequency {n} does not fit a grid of size {size}")
            spectrum[n % size] = value
        return cls(grid_log2, sp_fft.ifft(spectrum) * size)

    @classmethod
    def constant(cls, value: complex, grid_log2: int) -> "CircleFunction":
        """Constant function on the grid."""
        return cls(grid_log2, np.full(1 << grid_log2, value, dtype=complex))

    # Accessors

    @property
    def size(self) -> int:
        return self.samples.size

    @property
    def nodes(self) -> np.ndarray:
        return grid_nodes(self.grid_log2)

    @property
    def frequencies(self) -> np.ndarray:
        return _frequencies(self.size)

    def coeff(self, n: int) -> complex:
        """Fourier coefficient of signed frequency n."""
        if abs(n) > self.size // 2:
            raise GridSizeError(f"Frequency {n} outside grid of size {self.size}")
        return complex(self.coeffs[n % self.size])

    def reflected(self) -> "CircleFunction":
        """The function t -> g(conj(t))."""
        return CircleFunction(self.grid_log2, _reflect(self.samples))

    def conj(self) -> "CircleFunction":
        return CircleFunction(self.grid_log2, np.conj(self.samples))

    def exp(self) -> "CircleFunction":
        return CircleFunction(self.grid_log2, np.exp(self.samples))

    def shifted(self, constant: complex) -> "CircleFunction":
        return CircleFunction(self.grid_log2, self.samples + constant)

    def evaluate(self, t: ArrayLike) -> ArrayLike:
        """
        Evaluate the trigonometric interpolant off the grid.

        The Nyquist coefficient is split evenly between frequencies +-M/2 so
        that real functions stay real.
        """
        t = np.asarray(t, dtype=complex)
        half = self.size // 2
        positive = np.array(self.coeffs[:half], dtype=complex)
        negative = np.array(self.coeffs[half + 1:][::-1], dtype=complex)
        positive = np.append(positive, 0.5 * self.coeffs[half])
        negative = np.concatenate(([0.0], negative, [0.5 * self.coeffs[half]]))
        value = np.polynomial.polynomial.polyval(t, positive)
        value = value + np.polynomial.polynomial.polyval(1.0 / t, negative)
        return value if value.ndim else complex(value)

    def resample(self, grid_log2: int) -> "CircleFunction":
        """Move to another grid by zero-padding or truncating the spectrum."""
        if grid_log2 == self.grid_log2:
            return self
        new_size = 1 << grid_log2
        keep = min(self.size, new_size) // 2
        spectrum = np.zeros(new_size, dtype=complex)
        for n in range(-keep + 1, keep):
            spectrum[n % new_size] = self.coeffs[n % self.size]
        return CircleFunction(grid_log2, sp_fft.ifft(spectrum) * new_size)

    def _check_grid(self, other: "CircleFunction") -> None:
        if other.grid_log2 != self.grid_log2:
            raise GridSizeError(f"Grid mismatch: {self.grid_log2} vs {other.grid_log2}")

    def __mul__(self, other: Union["CircleFunction", complex]) -> "CircleFunction":
        if isinstance(other, CircleFunction):
            self._check_grid(other)
            return CircleFunction(self.grid_log2, self.samples * other.samples)
        return CircleFunction(self.grid_log2, self.samples * other)

    __rmul__ = __mul__

    def __add__(self, other: Union["CircleFunction", complex]) -> "CircleFunction":
        if isinstance(other, CircleFunction):
            self._check_grid(other)
            return CircleFunction(self.grid_log2, self.samples + other.samples)
        return CircleFunction(self.grid_log2, self.samples + other)

    __radd__ = __add__

    def __neg__(self) -> "CircleFunction":
        return CircleFunction(self.grid_log2, -self.samples)

    def __sub__(self, other: Union["CircleFunction", complex]) -> "CircleFunction":
        return self + (-other)

    # Serialization

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready form; coefficients are recomputed on load."""
        return {
            "grid_log2": self.grid_log2,
            "samples": [[float(v.real), float(v.imag)] for v in self.samples],
        }

    @classmethod
    def from_dict(cls, payload: Mapping[str, Any]) -> "CircleFunction":
        try:
            grid_log2 = int(payload["grid_log2"])
            samples = [complex(re, im) for re, im in payload["samples"]]
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"Malformed circle function: {e}")
        return cls(grid_log2, np.asarray(samples, dtype=complex))


def analyze(samples, grid_log2: int) -> CircleFunction:
    """
    Build a CircleFunction from raw samples on the grid.

    Args:
        samples: M = 2**grid_log2 complex values at t_j
        grid_log2: Grid size exponent, at least 3

    Returns:
        CircleFunction with coefficients and symmetry flags

    Raises:
        GridSizeError: If the sample count does not match the grid
    """
    function = CircleFunction(grid_log2, np.asarray(samples, dtype=complex))
    logger.debug(f"Analyzed {function.size} samples, symmetry={function.symmetry.value}")
    return function


def besov_seminorm(f: CircleFunction) -> float:
    """
    Square root of sum |n| |g_n|^2 over 0 < |n| < M/2.

    The Nyquist mode is left out as in ``conjugate``, so the seminorm of u
    and of its conjugate agree on every grid.
    """
    weights = np.abs(f.frequencies)
    weights[weights == f.size // 2] = 0
    return float(np.sqrt(np.sum(weights * np.abs(f.coeffs) ** 2)))


def is_besov_admissible(f: CircleFunction, tail_ratio: float = 1e-8) -> bool:
    """
    Truncation test for membership in the half-order Besov class.

    The high-frequency part sum_{|n| > M/4} |n| |g_n|^2 must stay below
    ``tail_ratio`` of the full sum. A constant function always passes.
    """
    weights = np.abs(f.frequencies)
    energy = weights * np.abs(f.coeffs) ** 2
    total = float(np.sum(energy))
    if total == 0.0:
        return True
    tail = float(np.sum(energy[weights > f.size // 4]))
    return tail < tail_ratio * total


def _require_real(f: CircleFunction, what: str) -> None:
    if not f.real_valued:
        raise DomainError(f"{what} must be real-valued")


def conjugate(u: CircleFunction) -> CircleFunction:
    """
    Harmonic conjugate of a real circle function.

    Uses v_n = -i sgn(n) u_n. The zero mode and the Nyquist mode are dropped,
    the latter having no well-defined sign.

    Raises:
        DomainError: If u is not real-valued
    """
    _require_real(u, "Conjugation input")
    kernel = -1j * np.sign(u.frequencies)
    kernel[u.size // 2] = 0.0
    samples = sp_fft.ifft(kernel * u.coeffs) * u.size
    return CircleFunction(u.grid_log2, samples.real)


def inverse_conjugate(v: CircleFunction, tol: float = 1e-8) -> CircleFunction:
    """
    Recover u with zero mean whose harmonic conjugate is v.

    Args:
        v: Real, antisymmetric circle function with zero mean
        tol: Relative tolerance for the zero-mean and symmetry checks

    Returns:
        u with u_n = i sgn(n) v_n and u_0 = 0

    Raises:
        DomainError: If v is not real, not antisymmetric or has nonzero mean
    """
    _require_real(v, "Inverse conjugation input")
    scale = tol * (1.0 + float(np.max(np.abs(v.samples))))
    if abs(v.coeff(0)) > scale:
        raise DomainError(f"Zero mode {abs(v.coeff(0)):.3e} exceeds tolerance {scale:.3e}")
    if np.max(np.abs(_reflect(v.samples) + v.samples)) > scale:
        raise DomainError("Inverse conjugation input must be antisymmetric")
    kernel = 1j * np.sign(v.frequencies)
    kernel[v.size // 2] = 0.0
    samples = sp_fft.ifft(kernel * v.coeffs) * v.size
    return CircleFunction(v.grid_log2, samples.real)


def _herglotz_series(log_modulus: CircleFunction) -> np.ndarray:
    half = log_modulus.size // 2
    series = 2.0 * np.array(log_modulus.coeffs[:half], dtype=complex)
    series[0] = log_modulus.coeffs[0]
    return series


def herglotz_outer_eval(log_modulus: CircleFunction, z: ArrayLike) -> ArrayLike:
    """
    Evaluate the outer function with boundary log-modulus ``log_modulus``.

    The Herglotz integral of h is h_0 + 2 sum_{n>=1} h_n z^n, and the outer
    function is the exponential of half of it.

    Args:
        log_modulus: Real circle function h = log|F|^2 on the boundary
        z: Point or array of points in the open unit disk

    Returns:
        exp(Herglotz(h)(z) / 2)

    Raises:
        DomainError: If h is not real or some |z| >= 1
    """
    _require_real(log_modulus, "Log-modulus")
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("Outer function evaluation requires |z| < 1")
    value = np.exp(0.5 * np.polynomial.polynomial.polyval(z, _herglotz_series(log_modulus)))
    return value if value.ndim else complex(value)


def herglotz_outer_boundary(log_modulus: CircleFunction) -> CircleFunction:
    """Boundary values exp((h + i conj(h)) / 2) of the outer function on the grid."""
    _require_real(log_modulus, "Log-modulus")
    phase = conjugate(log_modulus)
    return CircleFunction(log_modulus.grid_log2, np.exp(0.5 * (log_modulus.samples + 1j * phase.samples)))


def _phase_increments(s: CircleFunction, unimodular_tol: float) -> np.ndarray:
    deviation = float(np.max(np.abs(np.abs(s.samples) - 1.0)))
    if deviation > unimodular_tol:
        raise DomainError(f"Function is not unimodular (max deviation {deviation:.3e})")
    increments = np.angle(np.roll(s.samples, -1) / s.samples)
    worst = float(np.max(np.abs(increments)))
    # angle() returns (-pi, pi]; an increment at pi has no defined branch
    if worst >= np.pi * (1.0 - 1e-9):
        raise ResolutionError(
            f"Phase increment {worst:.3f} rad between adjacent nodes; refine grid_log2 beyond {s.grid_log2}"
        )
    return increments


def winding_number(s: CircleFunction, unimodular_tol: float = 1e-8) -> int:
    """
    Winding number of a unimodular function around the origin.

    Raises:
        DomainError: If s is not unimodular
        ResolutionError: If adjacent samples are a half-turn or more apart
    """
    increments = _phase_increments(s, unimodular_tol)
    winding = int(np.rint(np.sum(increments) / (2 * np.pi)))
    logger.debug(f"Winding number {winding} on grid of size {s.size}")
    return winding


def unwrap_phase(s: CircleFunction, unimodular_tol: float = 1e-8) -> CircleFunction:
    """
    Continuous real phase phi with s = exp(i phi) on the grid.

    The phase is shifted by a multiple of 2*pi so that its mean lies in
    (-pi, pi].

    Raises:
        DomainError: If s is not unimodular or has nonzero winding number
    """
    increments = _phase_increments(s, unimodular_tol)
    winding = int(np.rint(np.sum(increments) / (2 * np.pi)))
    if winding != 0:
        raise DomainError(f"Cannot unwrap a phase with winding number {winding}")
    phase = np.unwrap(np.angle(s.samples))
    mean = float(np.mean(phase))
    turns = np.ceil((mean - np.pi) / (2 * np.pi))
    return CircleFunction(s.grid_log2, phase - 2 * np.pi * turns)

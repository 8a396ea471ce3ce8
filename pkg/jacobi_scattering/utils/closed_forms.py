"""
Closed-form Jacobi matrices with known spectral and scattering data.

Four families have every quantity of the forward and inverse problems in
closed form:

- one-pole:  b_1 = a, otherwise free; density proportional to 1/|1 - a t|^2
- one-zero:  density proportional to |1 - a t|^2; infinitely many nonfree parameters
- two-pole:  density proportional to 1/(|1 - a t|^2 |1 - b t|^2)
- single-eigenvalue:  one eigenvalue at z1 + 1/z1 with scattering function t^2

They are oracles for the numerical pipeline and back the CLI ``example`` command.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple, Type

import numpy as np

from ..config import get_n_max
from ..core.harmonics import CircleFunction, DomainError
from ..core.jacobi import JacobiParams
from ..core.scattering import ScatteringData
from ..core.spectral import MassPoint, SpectralMeasure, normalize

logger = logging.getLogger(__name__)


def _check_unit(name: str, value: float, allow_zero: bool = True) -> None:
    lower_ok = value >= 0 if allow_zero else value > 0
    if not (lower_ok and value < 1):
        interval = "[0, 1)" if allow_zero else "(0, 1)"
        raise DomainError(f"Parameter {name}={value} must lie in {interval}")


class ClosedFormCase(ABC):
    """Common interface of the closed-form families."""

    name: str = ""
    aliases: Tuple[str, ...] = ()
    tolerance: float = 1e-8

    @abstractmethod
    def log_rho0(self, t: np.ndarray) -> np.ndarray:
        """log rho0_hat of the normalized measure at points of the unit circle."""

    @abstractmethod
    def scattering_samples(self, t: np.ndarray) -> np.ndarray:
        """Closed-form scattering function on the circle."""

    @abstractmethod
    def alphas(self, count: int) -> np.ndarray:
        """Verblunsky coefficients alpha_0..alpha_{count-1} of the (mass-free) Szegő transform."""

    @abstractmethod
    def jacobi_coefficients(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        """Arrays (a_1..a_count, b_1..b_count)."""

    @abstractmethod
    def parameters(self) -> Dict[str, float]:
        """Family parameters, for reports."""

    def masses(self) -> Tuple[MassPoint, ...]:
        return ()

    def mus(self) -> Tuple[float, ...]:
        return ()

    def measure(self, grid_log2: int) -> SpectralMeasure:
        """Normalized spectral measure on a grid of 2^grid_log2 points."""
        log_rho0 = CircleFunction.from_function(lambda t: self.log_rho0(t).astype(complex), grid_log2)
        return normalize(SpectralMeasure(0, 0, log_rho0, self.masses()))

    def scattering(self, grid_log2: int) -> ScatteringData:
        s = CircleFunction.from_function(self.scattering_samples, grid_log2)
        return ScatteringData(0, 0, tuple(m.z for m in self.masses()), self.mus(), s)

    def jacobi(self, n_max: Optional[int] = None) -> JacobiParams:
        """Jacobi parameters; families with infinitely many nonfree entries use a tail rule."""
        n_max = n_max or get_n_max()
        a, b = self.jacobi_coefficients(self.head_length)
        return JacobiParams(tuple(a), tuple(b), None, n_max)

    @property
    def head_length(self) -> int:
        return 1

    @abstractmethod
    def jost_function(self, z: np.ndarray) -> np.ndarray:
        """Jost function phi_0 = B / D of the normalized measure."""


@dataclass(frozen=True)
class OnePoleCase(ClosedFormCase):
    """b_1 = a, all other parameters free."""

    a: float = 0.5

    name = "one-pole"
    aliases = ("1",)

    def __post_init__(self):
        _check_unit("a", self.a)

    def parameters(self) -> Dict[str, float]:
        return {"a": self.a}

    def log_rho0(self, t: np.ndarray) -> np.ndarray:
        return -2.0 * np.log(np.abs(1.0 - self.a * t))

    def scattering_samples(self, t: np.ndarray) -> np.ndarray:
        return (1.0 - self.a * t) / (1.0 - self.a * np.conj(t))

    def alphas(self, count: int) -> np.ndarray:
        alphas = np.zeros(count)
        if count:
            alphas[0] = self.a
        return alphas

    def jacobi_coefficients(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        b = np.zeros(count)
        if count:
            b[0] = self.a
        return np.ones(count), b

    def jost_function(self, z: np.ndarray) -> np.ndarray:
        return 1.0 - self.a * np.asarray(z, dtype=complex)


@dataclass(frozen=True)
class OneZeroCase(ClosedFormCase):
    """Density proportional to |1 - a t|^2."""

    a: float = 0.5

    name = "one-zero"
    aliases = ("2",)
    tolerance = 1e-7

    def __post_init__(self):
        _check_unit("a", self.a)

    def parameters(self) -> Dict[str, float]:
        return {"a": self.a}

    def log_rho0(self, t: np.ndarray) -> np.ndarray:
        # unit mass fixes the constant at 1 / (1 + a^2)
        return 2.0 * np.log(np.abs(1.0 - self.a * t)) - np.log(1.0 + self.a ** 2)

    def scattering_samples(self, t: np.ndarray) -> np.ndarray:
        return (1.0 - self.a * np.conj(t)) / (1.0 - self.a * t)

    def alphas(self, count: int) -> np.ndarray:
        a = self.a
        n = np.arange(count)
        return -(1.0 - a * a) * a ** (n + 1) / (1.0 - a ** (2 * n + 4))

    def jacobi_coefficients(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        return self._tail(np.arange(1, count + 1))

    def _tail(self, indices: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        a = self.a
        n = np.asarray(indices) - 1
        q = (1.0 - a * a) ** 2
        b = -a ** (2 * n + 1) * q / ((1.0 - a ** (2 * n + 2)) * (1.0 - a ** (2 * n + 4)))
        a_squared = 1.0 - a ** (2 * n + 2) * q / (1.0 - a ** (2 * n + 4)) ** 2
        return np.sqrt(a_squared), b

    def jacobi(self, n_max: Optional[int] = None) -> JacobiParams:
        return JacobiParams((), (), self._tail, n_max or get_n_max())

    def jost_function(self, z: np.ndarray) -> np.ndarray:
        return np.sqrt(1.0 + self.a ** 2) / (1.0 - self.a * np.asarray(z, dtype=complex))


@dataclass(frozen=True)
class TwoPoleCase(ClosedFormCase):
    """b_1 = a + b, a_1^2 = 1 - ab, all other parameters free."""

    a: float = 0.3
    b: float = 0.6

    name = "two-pole"
    aliases = ("3",)

    def __post_init__(self):
        _check_unit("a", self.a)
        _check_unit("b", self.b)

    def parameters(self) -> Dict[str, float]:
        return {"a": self.a, "b": self.b}

    def log_rho0(self, t: np.ndarray) -> np.ndarray:
        a, b = self.a, self.b
        return -2.0 * np.log(np.abs((1.0 - a * t) * (1.0 - b * t))) + np.log(1.0 - a * b)

    def scattering_samples(self, t: np.ndarray) -> np.ndarray:
        a, b = self.a, self.b
        t_bar = np.conj(t)
        return (1.0 - a * t) * (1.0 - b * t) / ((1.0 - a * t_bar) * (1.0 - b * t_bar))

    def alphas(self, count: int) -> np.ndarray:
        alphas = np.zeros(count)
        head = [(self.a + self.b) / (1.0 + self.a * self.b), -self.a * self.b]
        alphas[:min(count, 2)] = head[:count]
        return alphas

    def jacobi_coefficients(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        a = np.ones(count)
        b = np.zeros(count)
        if count:
            a[0] = np.sqrt(1.0 - self.a * self.b)
            b[0] = self.a + self.b
        return a, b

    def jost_function(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return (1.0 - self.a * z) * (1.0 - self.b * z) / np.sqrt(1.0 - self.a * self.b)


@dataclass(frozen=True)
class SingleEigenvalueCase(ClosedFormCase):
    """
    One eigenvalue at z1 + 1/z1 with normalizing constant mu1 and s(t) = t^2.

    The a.c. part sigma0 = c0^2 |1 - z1 t|^{-4} is the two-pole family with
    a = b = z1; the mass point enters through the ratio
    epsilon = sigma1 / sigma0([-2, 2]) = mu1 z1^{-4} (1 - z1^2).
    """

    z1: float = 0.5
    mu1: float = 1.0

    name = "single-eigenvalue"
    aliases = ("4",)
    tolerance = 1e-6

    def __post_init__(self):
        _check_unit("z1", self.z1, allow_zero=False)
        if self.mu1 <= 0:
            raise DomainError(f"Parameter mu1={self.mu1} must be positive")

    def parameters(self) -> Dict[str, float]:
        return {"z1": self.z1, "mu1": self.mu1}

    @property
    def c0_squared(self) -> float:
        r = self.z1
        return 1.0 / (1.0 / (1.0 - r * r) + self.mu1 / r ** 4)

    @property
    def sigma1(self) -> float:
        return self.c0_squared * self.mu1 / self.z1 ** 4

    @property
    def epsilon(self) -> float:
        r = self.z1
        return self.mu1 * (1.0 - r * r) / r ** 4

    @property
    def eigenvalue(self) -> float:
        return self.z1 + 1.0 / self.z1

    def masses(self) -> Tuple[MassPoint, ...]:
        return (MassPoint(self.z1, self.sigma1),)

    def mus(self) -> Tuple[float, ...]:
        return (self.mu1,)

    def log_rho0(self, t: np.ndarray) -> np.ndarray:
        return np.log(self.c0_squared) - 4.0 * np.log(np.abs(1.0 - self.z1 * t))

    def scattering_samples(self, t: np.ndarray) -> np.ndarray:
        return t ** 2

    def base_case(self) -> TwoPoleCase:
        """The a.c. part, normalized to a probability measure."""
        return TwoPoleCase(self.z1, self.z1)

    def alphas(self, count: int) -> np.ndarray:
        return self.base_case().alphas(count)

    def christoffel(self, n: int) -> float:
        """K_n(sigma0, lambda1) = z1^{-2(n-1)} for n >= 1, K_0 = 0."""
        return 0.0 if n == 0 else self.z1 ** (-2.0 * (n - 1))

    def base_polynomial(self, z: complex, n: int) -> complex:
        """p_n(sigma0, z + 1/z) for n >= 1."""
        r = self.z1
        q = np.sqrt(1.0 - r * r)
        upper = z ** (n + 1) * (1.0 - r / z) ** 2
        lower = z ** (-n - 1) * (1.0 - r * z) ** 2
        return complex((upper - lower) / (q * (z - 1.0 / z)))

    def jacobi_coefficients(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        r, eps = self.z1, self.epsilon
        n = np.arange(1, count + 1)
        q = (1.0 - r * r) ** 2
        a_squared = 1.0 + eps * q * r ** (2 * n - 4.0) / (r ** (2 * n - 2.0) + eps) ** 2
        b = eps * q * r ** (2 * n - 5.0) / ((eps + r ** (2 * n - 2.0)) * (eps + r ** (2 * n - 4.0)))
        if count:
            a_squared[0] = (1.0 - r * r) * (1.0 + eps / (r * r)) / (1.0 + eps) ** 2
            b[0] = 2.0 * r + eps * (1.0 - r * r) / (r * (1.0 + eps))
        return np.sqrt(a_squared), b

    @property
    def head_length(self) -> int:
        # parameters decay like z1^{2n}; stop once they are below double precision
        return int(np.ceil(np.log(1e-17) / (2.0 * np.log(self.z1)))) + 2

    def jost_function(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        r = self.z1
        return (r - z) * (1.0 - r * z) / np.sqrt(self.c0_squared)


CASES: Dict[str, Type[ClosedFormCase]] = {
    cls.name: cls for cls in (OnePoleCase, OneZeroCase, TwoPoleCase, SingleEigenvalueCase)
}


def resolve_case(name: str) -> Type[ClosedFormCase]:
    """
    Look up a family by name or numeric alias.

    Raises:
        DomainError: If the name is unknown
    """
    key = str(name).strip().lower()
    for cls in CASES.values():
        if key == cls.name or key in cls.aliases:
            return cls
    raise DomainError(f"Unknown example {name!r}; choose one of {', '.join(CASES)} or 1-4")


def build_case(name: str, **parameters: Any) -> ClosedFormCase:
    """Instantiate a family, ignoring parameters left as None."""
    cls = resolve_case(name)
    given = {k: v for k, v in parameters.items() if v is not None}
    try:
        case = cls(**given)
    except TypeError as e:
        raise DomainError(f"Bad parameters for {cls.name}: {e}")
    logger.debug(f"Built closed-form case {case.name} with {case.parameters()}")
    return case

"""
Inverse scattering: from admissible scattering data to a spectral measure.

The pipeline runs in a fixed order: index extraction, removal of the
Blaschke and resonance factors, phase unwrapping, inverse harmonic
conjugation, exponentiation, eigenvalue masses, normalization. The free
additive constant of log rho0 is settled only by the unit-mass condition.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Type

import numpy as np

from ..config import get_setting, get_tolerance
from .harmonics import (
    BesovClassError,
    CircleFunction,
    JacobiScatteringError,
    ResolutionError,
    inverse_conjugate,
    is_besov_admissible,
    unwrap_phase,
    winding_number,
)
from .scattering import InconsistentDataError, ScatteringData, blaschke_phase, decompose_index
from .spectral import MassPoint, SpectralMeasure, mus_to_masses, normalize

logger = logging.getLogger(__name__)


class AdmissibilityError(JacobiScatteringError):
    """Raised when scattering data violate an admissibility condition."""

    item = "data"


class GammaError(AdmissibilityError):
    """Resonance exponents outside {0, 1}."""

    item = "gamma"


class ZeroSetError(AdmissibilityError):
    """Zeros not distinct, not in (-1, 1) without 0, or not matched by constants."""

    item = "zeros"


class PositivityError(AdmissibilityError):
    """A normalizing constant is not positive."""

    item = "mus"


class UnimodularityError(AdmissibilityError):
    """The scattering function leaves the unit circle."""

    item = "unimodular"


class SymmetryError(AdmissibilityError):
    """s(conj t) differs from conj(s(t)), or the phase is not odd."""

    item = "symmetry"


class IndexMismatchError(AdmissibilityError):
    """The winding of s disagrees with 2N + gamma1 + gamma2 or with gamma1."""

    item = "index"


class PhaseClassError(AdmissibilityError):
    """The phase of s is not in the Besov class."""

    item = "besov"


@dataclass(frozen=True)
class Violation:
    item: str
    message: str
    error: Type[AdmissibilityError] = field(repr=False, default=AdmissibilityError)


@dataclass
class AdmissibilityReport:
    """Outcome of :func:`validate_data`; empty ``violations`` means admissible."""

    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, error: Type[AdmissibilityError], message: str) -> None:
        self.violations.append(Violation(error.item, message, error))

    def raise_for_violations(self) -> None:
        """Raise the specific error of the first violation, if any."""
        if self.violations:
            first = self.violations[0]
            raise first.error(f"[{first.item}] {first.message}")

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [{"item": v.item, "message": v.message} for v in self.violations]}


def _reflect(samples: np.ndarray) -> np.ndarray:
    return np.roll(samples[::-1], 1)


def validate_data(data: ScatteringData, strict: bool = True, tol: Optional[float] = None) -> AdmissibilityReport:
    """
    Check scattering data item by item.

    Args:
        data: Candidate scattering data
        strict: Raise the first violation instead of returning the report
        tol: Admissibility tolerance, defaults to the configured ladder

    Returns:
        AdmissibilityReport listing every violated item

    Raises:
        AdmissibilityError: A specific subclass, when ``strict`` and something fails
    """
    tol = tol if tol is not None else get_tolerance()
    report = AdmissibilityReport()

    if data.gamma1 not in (0, 1) or data.gamma2 not in (0, 1):
        report.add(GammaError, f"gamma=({data.gamma1}, {data.gamma2}) must lie in {{0, 1}}^2")

    zeros = np.asarray(data.zeros, dtype=float)
    if np.any((np.abs(zeros) >= 1) | (zeros == 0)):
        report.add(ZeroSetError, f"zeros {list(data.zeros)} must lie in (-1, 1) without 0")
    if len(set(data.zeros)) != len(data.zeros):
        report.add(ZeroSetError, "zeros must be distinct")
    if len(data.mus) != len(data.zeros):
        report.add(ZeroSetError, f"{len(data.zeros)} zeros but {len(data.mus)} normalizing constants")

    if any(mu <= 0 for mu in data.mus):
        report.add(PositivityError, f"normalizing constants {list(data.mus)} must be positive")

    samples = data.s.samples
    deviation = float(np.max(np.abs(np.abs(samples) - 1.0)))
    if deviation > tol:
        report.add(UnimodularityError, f"|s| deviates from 1 by {deviation:.3e}")
    else:
        asymmetry = float(np.max(np.abs(_reflect(samples) - np.conj(samples))))
        if asymmetry > tol:
            report.add(SymmetryError, f"s(conj t) differs from conj(s(t)) by {asymmetry:.3e}")
        else:
            _validate_index(data, report, tol)

    if not report.ok:
        logger.info(f"Scattering data rejected: {[v.item for v in report.violations]}")
        if strict:
            report.raise_for_violations()
    return report


def _validate_index(data: ScatteringData, report: AdmissibilityReport, tol: float) -> None:
    expected = data.index
    try:
        index = winding_number(data.s, tol)
    except ResolutionError as e:
        report.add(IndexMismatchError, str(e))
        return
    if index != expected:
        report.add(IndexMismatchError, f"winding number {index} differs from 2N + gamma1 + gamma2 = {expected}")
        return
    try:
        decomposition = decompose_index(data.s, data.count)
    except InconsistentDataError as e:
        report.add(IndexMismatchError, str(e))
        return
    except BesovClassError as e:
        report.add(PhaseClassError, str(e))
        return
    if decomposition.gamma1 != data.gamma1:
        report.add(IndexMismatchError, f"sign of s at t = 1 gives gamma1={decomposition.gamma1}, data say {data.gamma1}")
        return
    phase = decomposition.phase.samples.real
    oddness = float(np.max(np.abs(_reflect(phase) + phase)))
    if oddness > tol * (1.0 + float(np.max(np.abs(phase)))):
        report.add(SymmetryError, f"phase is not odd under t -> conj(t) (defect {oddness:.3e})")


def extract_v0(data: ScatteringData) -> CircleFunction:
    """
    Phase v0 of the outer-function ratio after removing resonance and Blaschke factors.

    Raises:
        InconsistentDataError: If the remainder still winds around the origin
    """
    t = data.s.nodes
    v1 = blaschke_phase(data.zeros, data.s.grid_log2)
    remainder = data.s.samples * (-1.0) ** data.gamma1 * t ** (-data.index) * np.exp(1j * v1.samples.real)
    remainder_fn = CircleFunction(data.s.grid_log2, remainder)
    tol = get_setting("unimodular_tolerance", 1e-8)
    winding = winding_number(remainder_fn, tol)
    if winding != 0:
        raise InconsistentDataError(f"Outer-function ratio winds {winding} times around the origin")
    return -unwrap_phase(remainder_fn, tol)


def inverse(data: ScatteringData) -> SpectralMeasure:
    """
    Normalized spectral measure with the given scattering data.

    Args:
        data: Admissible scattering data

    Returns:
        SpectralMeasure with total mass 1

    Raises:
        AdmissibilityError: If the data are not admissible
    """
    validate_data(data, strict=True)
    v0 = extract_v0(data)
    u0 = inverse_conjugate(v0, get_tolerance())
    if not is_besov_admissible(u0, get_setting("besov_tail_ratio", 1e-8)):
        raise PhaseClassError("Reconstructed log-density fails the Besov truncation test")
    sigmas = mus_to_masses(data.gamma1, data.gamma2, data.zeros, data.mus, u0)
    provisional = SpectralMeasure(
        gamma1=data.gamma1,
        gamma2=data.gamma2,
        log_rho0=u0,
        masses=tuple(MassPoint(z, s) for z, s in zip(data.zeros, sigmas)),
    )
    measure = normalize(provisional)
    logger.info(f"Inverse map: recovered measure with {len(sigmas)} eigenvalues")
    return measure


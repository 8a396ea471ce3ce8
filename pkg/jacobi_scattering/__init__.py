"""
jacobi-scattering - Scattering and inverse scattering for Jacobi matrices.

This package computes the scattering data of Jacobi matrices in Ryckman's
class from their spectral measures, solves the inverse problem back to the
measure, and reconstructs the Jacobi parameters through the Szegő transform,
the Geronimus relations and Nevai's mass-point insertion.
"""

__version__ = "1.0.0"
__author__ = "jacobi-scattering developers"

from .core.harmonics import CircleFunction, JacobiScatteringError
from .core.jacobi import JacobiParams, jost_solution, sine_solution, weyl_function
from .core.spectral import MassPoint, SpectralMeasure, normalize
from .core.scattering import ScatteringData, forward
from .core.inverse import inverse, validate_data
from .core.reconstruction import jacobi_from_spectral, stieltjes_jacobi

__all__ = [
    "CircleFunction",
    "JacobiScatteringError",
    "JacobiParams",
    "jost_solution",
    "sine_solution",
    "weyl_function",
    "MassPoint",
    "SpectralMeasure",
    "normalize",
    "ScatteringData",
    "forward",
    "inverse",
    "validate_data",
    "jacobi_from_spectral",
    "stieltjes_jacobi",
]

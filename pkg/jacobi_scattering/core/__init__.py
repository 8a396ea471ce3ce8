"""Numerical core: circle harmonics, recurrences, spectral and scattering maps."""

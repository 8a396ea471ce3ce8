"""Test suite for jacobi-scattering."""

"""Closed-form cases and file input/output."""

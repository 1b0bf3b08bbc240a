"""Algebra builders module."""

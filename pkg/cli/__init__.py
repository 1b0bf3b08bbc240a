"""Command-line module."""

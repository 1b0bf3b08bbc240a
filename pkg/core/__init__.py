"""Core algebra module."""

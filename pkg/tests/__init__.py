"""Tests package marker for ruff/packaging."""

__all__ = []

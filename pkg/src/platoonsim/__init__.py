"""Deterministic convoy platooning simulator with lossy V2V messaging."""

__version__ = "0.1.0"

"""Spectral geometry of rapidly branching graphs and tessellation patches."""

__version__ = "0.1.0"

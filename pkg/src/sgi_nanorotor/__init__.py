"""Stern-Gerlach interferometer simulation for a spinning NV nanodiamond."""

__version__ = "0.1.0"

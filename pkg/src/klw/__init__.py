"""Exact Weyl group, Hecke algebra and Kazhdan-Lusztig cell computations."""

__version__ = "0.1.0"

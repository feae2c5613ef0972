"""Exact construction and verification of unitriangular symplectic factorizations."""

__version__ = "0.1.0"

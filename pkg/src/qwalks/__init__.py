"""Exact enumeration and kernel-method analysis of two quarter-plane walk models."""

__version__ = "0.1.0"

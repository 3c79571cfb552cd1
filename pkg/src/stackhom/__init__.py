"""Exact homology engine for finite simplicial models and finite group quotients."""

__version__ = "0.1.0"

"""Exact verification of Galois-refined weight-counting identities for blocks
of modular group algebras, on a corpus of small finite groups."""

from .report import VERSION as __version__

__all__ = ["__version__"]

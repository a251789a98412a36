"""Magnitude-path spectral sequences of directed graphs.

Reachability chain complexes filtered by trail length, their spectral
sequence pages (magnitude homology on page one, bigraded path homology on
page two), relative and product constructions, and exact homological
algebra over Z, Q and prime fields.
"""

from .digraph import (INF, DiGraph, GraphMap, bidirected_cycle, box_product, cone, directed_cycle,
                      point, sphere, suspension)
from .homalg import QQ, ZZ, ExactMatrix, HomologyGroup, PrimeField, parse_ring
from .chains import magnitude_homology, reachability_complex, relative_complex
from .spectral import SpectralSequence, compute_page, spectral_sequence

__version__ = "0.1.0"

__all__ = [
    "INF", "DiGraph", "GraphMap", "bidirected_cycle", "box_product", "cone", "directed_cycle",
    "point", "sphere", "suspension", "QQ", "ZZ", "ExactMatrix", "HomologyGroup", "PrimeField",
    "parse_ring", "magnitude_homology", "reachability_complex", "relative_complex",
    "SpectralSequence", "compute_page", "spectral_sequence",
]

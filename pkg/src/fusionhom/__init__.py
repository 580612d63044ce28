"""Exact homological invariants of fusion rings and related structures.

Subpackages cover exact arithmetic over Q(delta), fusion rings and their
Perron-Frobenius data, tube algebras with their bar homology, the annular
low-degree chain complex, L2-Betti number bookkeeping, and amenability
checks (Folner sets and the Kesten criterion).
"""

__version__ = "0.1.0"

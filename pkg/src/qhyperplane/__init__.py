"""Exact computations around the quantum hyperplane section theorem.

Hypergeometric series and mirror maps for complete intersections in products
of projective spaces, equivariant correlators on Grassmannians and type-A flag
manifolds by fixed-point recursion, and quantum relations of flag manifolds.
"""

__version__ = "0.1.0"

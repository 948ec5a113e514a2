"""Exact-arithmetic homological algebra for bar complexes of graded algebras.

Subpackages are intentionally flat:

- exactlin: sparse rational matrices, kernels, cohomology slices
- complexes: graded spaces, graded maps, (double) complexes, sign helpers
- dga: differential graded algebras with positional index sets
- bar: simplicial and reduced bar complexes, coalgebra structure
- twisted: twisted complexes over an algebra and their morphism calculus
- comod: comodules over the bar coalgebra and the equivalence functors
- connect: integrable connections, patching of algebras along maps
- cli: command line entry points
"""

__version__ = "0.1.0"

__all__ = [
    "exactlin",
    "complexes",
    "dga",
    "bar",
    "twisted",
    "comod",
    "connect",
    "cli",
]

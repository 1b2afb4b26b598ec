"""Exact-arithmetic engine for the monoidal Dold-Kan correspondence of
commutative algebras over the rationals, at finite degree and weight
truncation.

Subpackages:

- ``linalg``: sparse rational matrices, chain complexes, homology.
- ``simplicial``: truncated simplicial vector spaces, normalized chains,
  the Dold-Kan inverse, shuffles.
- ``cdga``: semifree graded-commutative DG algebras with a weight grading,
  Koszul complexes and Tor.
- ``simplicial_algebra``: levelwise polynomial simplicial algebras, the
  free functor, the left adjoint of normalized chains, unit certificates.
- ``cartesian``: classical points, tangent complexes, weak-equivalence and
  fibration checks, differential-forms generators.
- ``cli``: the ``dk`` batch front end.
"""

__version__ = "0.1.0"

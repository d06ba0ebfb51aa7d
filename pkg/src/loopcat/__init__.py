"""loopcat: exact diagram calculus over small categories.

Submodules:
  linalg       exact rational linear/polynomial algebra
  fincat       finite categories, free monoids, loop and interval classes
  diagrams     the rigid symmetric monoidal envelope: labelled matchings
  statespaces  universal-construction state spaces (field, Boolean, Hankel)
  pseudochar   pseudocharacters: degrees, charpolys, lifting, holonomy
  frobenius    commutative Frobenius algebras and surface invariants
  cli          command-line front end
"""

from .errors import DomainError

__all__ = ["DomainError"]

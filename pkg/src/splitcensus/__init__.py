"""Split-reduction census toolkit for abelian surfaces over Q.

Subpackages cover exact finite-field arithmetic (ffield), degree-4 Weil
polynomial classification (weil), genus-2 point counting (curve), the
prime census (census), finite symplectic group verification (gsp4), and
the square sieve (sieve). The ``splitcensus`` CLI fronts all of them.
"""

from splitcensus.errors import InternalCheckError

__version__ = "0.1.0"

__all__ = ["InternalCheckError", "__version__"]

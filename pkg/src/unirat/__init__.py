"""Exact computer algebra for constructive unirationality of quartic and
quintic hypersurfaces containing or singular along linear subspaces.

The public surface is small: build a job describing the hypersurface and the
subspace, run the matching pipeline, get back an explicit dominant rational
map with an exact vanishing certificate and a finite-field Jacobian rank
check.
"""

__version__ = "0.1.0"

from .fields import FF, GF, QQ
from .poly import Poly, PolyRing

__all__ = ["QQ", "GF", "FF", "PolyRing", "Poly", "__version__"]

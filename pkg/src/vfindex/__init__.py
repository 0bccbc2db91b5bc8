"""Indices of vector fields on compact domains and closed surfaces.

The library computes interior zero indices (Brouwer degrees), boundary
half-indices of tangential zeros, and Euler characteristics, and verifies
that the interior and boundary contributions sum to chi (even dimensions)
or 0 (odd dimensions), together with the standard consequences of that
identity.
"""

from .complexfield import ComplexField, complex_verdict
from .errors import VfError
from .euler import chi_catalog, chi_for, chi_voxel
from .expr import Expression, parse
from .fields import CallableField, ExpressionField, VectorField
from .indices import (HalfInteger, IndexReport, full_index,
                      hypersurface_index, interior_index)
from .manifold import Collar, DomainManifold, Hypersurface
from .verify import Verdict, make_tame, run_all

__version__ = "0.1.0"

__all__ = [
    "CallableField", "Collar", "ComplexField", "DomainManifold",
    "Expression", "ExpressionField", "HalfInteger", "Hypersurface",
    "IndexReport", "Verdict", "VectorField", "VfError", "chi_catalog",
    "chi_for", "chi_voxel", "complex_verdict", "full_index",
    "hypersurface_index", "interior_index", "make_tame", "parse", "run_all",
]

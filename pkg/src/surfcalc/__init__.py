"""Exact intersection calculus on blow-ups of ruled surfaces over an elliptic curve."""
from .errors import (
    CertificateInvalid, NotContractible, NotDescendable, ObstructionNotComputable,
    SurfcalcError, UnsupportedConfiguration, UsageError,
)
from .picard import DivClass, Pic0Class, RelationSet, intersect, lin_equiv
from .surface import (
    AtIntersection, AtPoint, DivisorExpr, General, SurfaceModel, blow_up, new_ruled_surface,
    restrict_to_curve,
)

__version__ = "0.1.0"

__all__ = [
    "AtIntersection", "AtPoint", "CertificateInvalid", "DivClass", "DivisorExpr", "General",
    "NotContractible", "NotDescendable", "ObstructionNotComputable", "Pic0Class",
    "RelationSet", "SurfaceModel", "SurfcalcError", "UnsupportedConfiguration", "UsageError",
    "blow_up", "intersect", "lin_equiv", "new_ruled_surface", "restrict_to_curve",
]

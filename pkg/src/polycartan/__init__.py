"""Exact graded-commutative calculus for poly-symplectic geometry."""

from .algebra import (
    Chart,
    ChartError,
    DegreeError,
    Derivation,
    Generator,
    GradedPoly,
    commutator,
    coordinate_field,
    normalize,
    partial,
    partial_right,
    promote,
    restrict,
    substitute,
)
from .cartan import (
    PolyForm,
    ShiftedChart,
    de_rham,
    euler,
    interior,
    is_cohomological,
    lie_derivative,
)

__all__ = [
    "Chart",
    "ChartError",
    "DegreeError",
    "Derivation",
    "Generator",
    "GradedPoly",
    "PolyForm",
    "ShiftedChart",
    "commutator",
    "coordinate_field",
    "de_rham",
    "euler",
    "interior",
    "is_cohomological",
    "lie_derivative",
    "normalize",
    "partial",
    "partial_right",
    "promote",
    "restrict",
    "substitute",
]

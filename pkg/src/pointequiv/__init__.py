"""Point classification of y'' = P + 3Q y' + 3R y'^2 + S y'^3.

Computes the pseudotensorial fields and scalar invariants of an equation in
arbitrary coordinates, then reports its equivalence case and the dimension
of its point-symmetry algebra.
"""

from .classify import (ClassificationReport, ClassifyOptions, Signature, classify,
                       compare_signatures, signature)
from .fields import BaseFields, Equation, mirror
from .transform import PointTransform, apply, check_theta_law, check_weight_law

__version__ = "0.1.0"

__all__ = [
    "BaseFields", "ClassificationReport", "ClassifyOptions", "Equation", "PointTransform",
    "Signature", "apply", "check_theta_law", "check_weight_law", "classify",
    "compare_signatures", "mirror", "signature",
]

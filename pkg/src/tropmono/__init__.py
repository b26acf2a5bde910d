"""Exact calculus of bigraded superforms with a monodromy operator, plus the
combinatorial weight filtration machinery attached to a semistable dual
complex: order maps, corner comparison, and the simplex descent tower.

All arithmetic is rational and exact; nothing here touches floating point.
"""

from .forms import AffineMap, Superform
from .linalg import QMatrix
from .poly import Poly
from .simplex import SimplexContext, SimplexForm, SimplexCochain
from .dual_complex import H2Model, SemistableCombinatorics, Stratum
from .order_map import Presentation, dolbeault_ladder, ord_vector

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "H2Model",
    "Poly",
    "Presentation",
    "QMatrix",
    "SemistableCombinatorics",
    "SimplexCochain",
    "SimplexContext",
    "SimplexForm",
    "Stratum",
    "Superform",
    "dolbeault_ladder",
    "ord_vector",
    "__version__",
]

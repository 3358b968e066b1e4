"""Z_p-torsion modules of quadratic fields."""

from .kernels import BACKEND
from .quadclass import AbGroup, QuadField

__version__ = "0.1.0"

__all__ = ["BACKEND", "AbGroup", "QuadField", "__version__"]

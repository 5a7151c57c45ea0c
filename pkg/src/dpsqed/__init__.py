"""Numerics for quantum electrodynamics on a discrete phase space.

Modules:

* ``basis``: Hermite basis functions and their large-n counterparts.
* ``difference``: difference operator, principal-value Green's function, toy models.
* ``vertex``: vertex distribution, its closed form and large-N tails.
* ``oscillatory``: segment summation of oscillatory integrals.
* ``diagram``: power counting for QED graphs.
* ``greens``: three-dimensional Green's functions and cutoff scans.
"""

from .errors import DpsError, OutOfRegimeError, QuadratureError, SingularPointError, ValidationError
from .quadrature import QuadConfig, QuadratureResult

__version__ = "0.1.0"

__all__ = [
    "DpsError",
    "OutOfRegimeError",
    "QuadratureError",
    "SingularPointError",
    "ValidationError",
    "QuadConfig",
    "QuadratureResult",
]

"""Weyl group combinatorics, flag positions and chamber-valued metrics
for discrete matrix groups."""

from . import (configurations, coxeter, errors, flagdyn, morse, symspace,
               thickenings)

__version__ = "0.1.0"

__all__ = [
    "configurations",
    "coxeter",
    "errors",
    "flagdyn",
    "morse",
    "symspace",
    "thickenings",
    "__version__",
]

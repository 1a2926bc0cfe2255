"""Möbius-invariant second-order operators on scalar fields in the plane.

Points are ``(x1, x2)`` tuples and symmetric matrices are nested 2x2 tuples.
Library errors derive from :class:`Error`.
"""

from ._conformal2d import *  # noqa: F401,F403
from ._conformal2d import (
    ConeIndex,
    Error,
    MobiusMap,
    ScalarField,
    SymmetricFunction,
    run_suite,
)

__version__ = "0.1.0"


def suite_passed(name, seed=7):
    """Run a named check suite and report whether every check passed."""
    return all(r.passed for r in run_suite(name, seed))

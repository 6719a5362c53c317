"""Exception types raised across the package."""

import numpy as np


class NumRangeError(ValueError):
    """Base class for input errors detected by this package."""


class NotHermitian(NumRangeError):
    pass


class NotNilpotent(NumRangeError):
    pass


class DegenerateRange(NumRangeError):
    """The numerical range is a point or a line segment (empty interior)."""


class DependentVectors(NumRangeError):
    pass


class BadModulus(NumRangeError):
    pass


class ZeroRadius(NumRangeError):
    """Some r_j vanishes, so the tau-based branch of the flat test does not apply."""


class BadParams(NumRangeError):
    pass


class ZeroA1(NumRangeError):
    pass


class NoConvergence(np.linalg.LinAlgError):
    """The Jacobi sweep cap was exhausted."""

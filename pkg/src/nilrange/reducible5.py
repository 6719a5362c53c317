"""The 5x5 nilpotent family A1 + A2 (block diagonal) with a 2x2 and a 3x3 block.

A1 = [[0, r], [0, 0]] has a disk of radius r/2 as numerical range.  The
3x3 block A2 = [[0, r1, r2], [0, 0, r3], [0, 0, 0]] has support distances
given by the largest root of lambda^3 - s lambda - 2 t cos(theta), with
s = r1^2 + r2^2 + r3^2 and t = r1 r2 r3.
"""

from dataclasses import dataclass

import numpy as np

from .errors import BadParams


@dataclass(frozen=True)
class Reducible5Params:
    r: float
    r1: float
    r2: float
    r3: float

    def __post_init__(self):
        for name in ("r", "r1", "r2", "r3"):
            val = getattr(self, name)
            if not np.isfinite(val) or np.iscomplexobj(val):
                raise BadParams(f"{name} must be a finite real number")
            object.__setattr__(self, name, float(val))
        if not (self.r > 0 and self.r1 > 0 and self.r3 > 0 and self.r2 >= 0):
            raise BadParams("need r, r1, r3 > 0 and r2 >= 0")

    @property
    def s(self):
        return self.r1**2 + self.r2**2 + self.r3**2

    @property
    def t(self):
        return self.r1 * self.r2 * self.r3

    @property
    def equal(self):
        return self.r1 == self.r2 == self.r3


def support_distance_3x3(p, theta):
    """Half the largest root of lambda^3 - s lambda - 2 t cos(theta), by Viete.

    This is the largest eigenvalue of Re(e^{i theta} A2), i.e. the distance
    from the origin to the supporting line of F(A2) in direction -theta.
    Accepts scalar or array ``theta``.
    """
    if not isinstance(p, Reducible5Params):
        raise BadParams("expected Reducible5Params")
    s, t = p.s, p.t
    theta = np.asarray(theta, dtype=float)
    if t == 0:
        out = np.full(theta.shape, np.sqrt(s) / 2)
    else:
        arg = np.clip(3 * np.sqrt(3) * t * np.cos(theta) / s**1.5, -1.0, 1.0)
        out = np.sqrt(s / 3) * np.cos(np.arccos(arg) / 3)
    return float(out) if out.ndim == 0 else out


def cubic_max_root(p, theta):
    """Largest real root of the same cubic via companion-matrix eigenvalues."""
    roots = np.roots([1.0, 0.0, -p.s, -2 * p.t * np.cos(theta)])
    return float(np.max(roots[np.abs(roots.imag) < 1e-9].real))


def cardioid_point(theta):
    """(2 cos t + cos 2t) + i (2 sin t + sin 2t)."""
    return complex(2 * np.cos(theta) + np.cos(2 * theta), 2 * np.sin(theta) + np.sin(2 * theta))


def flat_count_5x5(p):
    """Number of flat portions on the boundary of F(A1 + A2).

    * r2 = 0: both ranges are disks centred at 0, no flat portion.
    * r1, r2, r3 not all equal: F(A2) has no flat portion; the convex hull of
      the disk and F(A2) has two bitangent segments exactly when r/2 lies
      strictly between the smallest and largest support distance of A2.
    * r1 = r2 = r3 = rho: F(A2) is bounded by a cardioid arc and one segment.
      The segment survives for r <= rho, two bitangents appear for
      rho < r < 2 rho, and the disk swallows everything for r >= 2 rho.
    """
    if not isinstance(p, Reducible5Params):
        raise BadParams("expected Reducible5Params")
    if p.r2 == 0:
        return 0
    half = p.r / 2
    if not p.equal:
        lo = support_distance_3x3(p, np.pi)
        hi = support_distance_3x3(p, 0.0)
        return 2 if lo < half < hi else 0
    rho = p.r1
    if p.r <= rho:
        return 1
    if p.r < 2 * rho:
        return 2
    return 0


def assemble_5x5(p):
    """Block diagonal matrix [[0, r], [0, 0]] + [[0, r1, r2], [0, 0, r3], [0, 0, 0]]."""
    A = np.zeros((5, 5), dtype=np.complex128)
    A[0, 1] = p.r
    A[2, 3], A[2, 4], A[3, 4] = p.r1, p.r2, p.r3
    return A


def cardioid_curve(rho, n=256):
    """Scaled and shifted cardioid arc bounding F(A2) for r1 = r2 = r3 = rho.

    Returns points for |phi| <= 2 pi / 3, which together with the segment
    joining the two end points bound the numerical range.
    """
    phi = np.linspace(-2 * np.pi / 3, 2 * np.pi / 3, n)
    z = 2 * np.cos(phi) + np.cos(2 * phi) + 1j * (2 * np.sin(phi) + np.sin(2 * phi))
    return rho / 3 * z

"""Closed-form criteria for structured 4x4 nilpotent matrices.

Covers the family of strictly upper triangular matrices having an
exceptional supporting line, the tau-polynomial test for a flat portion on
that line, the canonical form with two parallel flat portions, and the real
family whose only possible flat portion is vertical.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import BadModulus, BadParams, ZeroA1, ZeroRadius
from .linalg import (
    MULT_REL,
    as_cmat,
    eigvalsh,
    frob,
    im_part,
    nilpotent_triangularize,
    normalize_superdiagonal,
)
from .numrange import SupportLine, angle_distance, flat_portions

MODULUS_SLACK = 1e-12
ZERO_TOL = 1e-9


def _e(t):
    return np.exp(1j * t)


@dataclass(frozen=True)
class ExceptionalParams:
    """Parameters (alpha, a1, a2, a3, theta1, theta2) of the exceptional family.

    Derived quantities are ``r_j = sqrt(1 - |a_j|^2)`` and
    ``theta3 = theta2 - theta1``.
    """

    alpha: complex
    a1: complex
    a2: complex
    a3: complex
    theta1: float = 0.0
    theta2: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "a1", "a2", "a3"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        for name in ("theta1", "theta2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for j, a in enumerate(self.a, 1):
            if not np.isfinite(a):
                raise BadParams(f"a{j} is not finite")
            if abs(a) > 1 + MODULUS_SLACK:
                raise BadModulus(f"|a{j}| = {abs(a)!r} exceeds 1")

    @property
    def a(self):
        return (self.a1, self.a2, self.a3)

    @property
    def r(self):
        return tuple(float(np.sqrt(max(0.0, 1.0 - abs(a) ** 2))) for a in self.a)

    @property
    def r1(self):
        return self.r[0]

    @property
    def r2(self):
        return self.r[1]

    @property
    def r3(self):
        return self.r[2]

    @property
    def theta3(self):
        return self.theta2 - self.theta1

    @property
    def line(self):
        """Supporting line carrying the exceptional point."""
        return SupportLine(np.angle(self.alpha), -abs(self.alpha) / 2)


@dataclass(frozen=True)
class UpperNilpotent4:
    """Strictly upper triangular 4x4 matrix given by its six entries."""

    a12: complex
    a13: complex
    a14: complex
    a23: complex
    a24: complex
    a34: complex

    @classmethod
    def from_matrix(cls, M, tol=1e-12):
        M = as_cmat(M)
        if M.shape != (4, 4):
            raise ValueError("expected a 4x4 matrix")
        if np.abs(np.tril(M)).max() > tol * (1 + frob(M)):
            raise ValueError("matrix is not strictly upper triangular")
        return cls(M[0, 1], M[0, 2], M[0, 3], M[1, 2], M[1, 3], M[2, 3])

    @classmethod
    def from_a(cls, a1, a2, a3, a4, a5, a6):
        return cls(a1, a2, a3, a4, a5, a6)

    @property
    def a(self):
        """Entries in row-major order, (a1, ..., a6)."""
        return (self.a12, self.a13, self.a14, self.a23, self.a24, self.a34)

    def matrix(self):
        M = np.zeros((4, 4), dtype=np.complex128)
        M[0, 1], M[0, 2], M[0, 3] = self.a12, self.a13, self.a14
        M[1, 2], M[1, 3], M[2, 3] = self.a23, self.a24, self.a34
        return M


class GramResidual(NamedTuple):
    G: np.ndarray
    minors: tuple
    eigenvalues: np.ndarray


def construct_exceptional(p):
    """alpha times the upper triangular matrix built from ``p``.

    The entries below the first row are
    ``a4 = conj(a1) a2 + r1 r2 e^{i theta1}``,
    ``a5 = conj(a1) a3 + r1 r3 e^{i theta2}`` and
    ``a6 = conj(a2) a3 + r2 r3 e^{i theta3}``.
    """
    a1, a2, a3 = p.a
    r1, r2, r3 = p.r
    a4 = np.conj(a1) * a2 + r1 * r2 * _e(p.theta1)
    a5 = np.conj(a1) * a3 + r1 * r3 * _e(p.theta2)
    a6 = np.conj(a2) * a3 + r2 * r3 * _e(p.theta3)
    return p.alpha * UpperNilpotent4(a1, a2, a3, a4, a5, a6).matrix()


def gram_residual(m):
    """The 3x3 Hermitian matrix G whose PSD rank-one property decides exceptionality."""
    a1, a2, a3, a4, a5, a6 = m.a
    c = np.conj
    G = np.array(
        [
            [1 - abs(a1) ** 2, a4 - c(a1) * a2, a5 - c(a1) * a3],
            [c(a4) - a1 * c(a2), 1 - abs(a2) ** 2, a6 - c(a2) * a3],
            [c(a5) - a1 * c(a3), c(a6) - a2 * c(a3), 1 - abs(a3) ** 2],
        ],
        dtype=np.complex128,
    )
    minors = tuple(
        float((G[i, i] * G[j, j] - abs(G[i, j]) ** 2).real) for i, j in ((0, 1), (0, 2), (1, 2))
    )
    return GramResidual(G, minors, eigvalsh(G))


def condex_residuals(m):
    """Residuals of the three modulus equations and of the argument relation.

    The argument residual is ``None`` when some |a_j| (j = 1, 2, 3) equals 1
    within 1e-12, in which case the relation is vacuous, or when one of the
    three differences vanishes and its argument is undefined.
    """
    a1, a2, a3, a4, a5, a6 = m.a
    c = np.conj
    d4, d5, d6 = a4 - c(a1) * a2, a5 - c(a1) * a3, a6 - c(a2) * a3
    s1, s2, s3 = (1 - abs(a) ** 2 for a in (a1, a2, a3))
    mods = (abs(d4) ** 2 - s1 * s2, abs(d5) ** 2 - s1 * s3, abs(d6) ** 2 - s2 * s3)
    arg_res = None
    if min(abs(1 - abs(a)) for a in (a1, a2, a3)) > MODULUS_SLACK and min(map(abs, (d4, d5, d6))) > 0:
        arg_res = float(angle_distance(np.angle(d6), np.angle(d5) - np.angle(d4)))
    return mods, arg_res


def exceptional_criterion(m, alpha=1.0, tol=None):
    """Whether ``alpha * m`` has an exceptional supporting line at angle arg(alpha).

    Equivalent to the three modulus equations plus the argument relation;
    evaluated as "G is positive semidefinite with rank at most one", i.e. the
    two smallest eigenvalues of G lie in [-tol, tol] and the largest is
    >= -tol, with ``tol = 1e-8 (1 + ||G||_F)``.  The line itself is
    {z : Re(e^{-i arg alpha} z) = -|alpha| / 2}.
    """
    if not isinstance(m, UpperNilpotent4):
        m = UpperNilpotent4.from_matrix(m)
    if not all(np.isfinite(m.a)):
        return False
    if any(abs(a) > 1 + MODULUS_SLACK for a in m.a[:3]):
        return False
    gr = gram_residual(m)
    if tol is None:
        tol = MULT_REL * (1 + frob(gr.G))
    w = gr.eigenvalues
    return bool(w[0] >= -tol and w[1] <= tol)


def tau1(p):
    """Polynomial whose vanishing is the first quadratic-form identity on the exceptional line."""
    a1, a2, a3 = p.a
    r1, r2, r3 = _radii(p)
    t1, t2 = p.theta1, p.theta2
    c = np.conj
    return complex(
        r3 * (r1**2 + r2**2 - r1**2 * r2**2) * (c(a1) * a3 * _e(-t2) - a1 * c(a3) * _e(t2))
        + r2 * (r1**2 + r3**2 - r1**2 * r3**2) * (a1 * c(a2) * _e(t1) - c(a1) * a2 * _e(-t1))
        + r1 * r2 * r3 * abs(a1) ** 2 * (a2 * c(a3) * _e(t2 - t1) - c(a2) * a3 * _e(t1 - t2))
    )


def tau2(p):
    """Polynomial whose vanishing is the second quadratic-form identity on the exceptional line."""
    a1, a2, a3 = p.a
    r1, r2, r3 = _radii(p)
    t1, t2 = p.theta1, p.theta2
    c = np.conj
    return complex(
        c(a2) * a3 * r1 * (r1**2 + 2 * r2**2 - 2 * r1**2 * r2**2)
        - a1 * c(a2) ** 2 * a3 * r1**2 * r2 * _e(t1)
        + c(a1) * a3 * r2 * (-(r2**2) - r1**2 + r1**2 * r2**2) * _e(-t1)
        + a1 * c(a2) * r1**2 * r3 * abs(a2) ** 2 * _e(t2)
        + r1 * r2 * r3 * (1 - 2 * abs(a1) ** 2 * abs(a2) ** 2) * _e(t2 - t1)
        + c(a1) * a2 * abs(a1) ** 2 * r2**2 * r3 * _e(t2 - 2 * t1)
    )


def _radii(p):
    r = p.r
    if min(r) <= ZERO_TOL:
        raise ZeroRadius("some r_j vanishes; use the single-zero branches instead")
    return r


def _multiple_of_pi(t):
    return angle_distance(t, np.round(t / np.pi) * np.pi) <= 1e-12


def real_tau2(a1, a2, a3, theta1=0.0, theta2=0.0):
    """tau2 specialised to real a_j and angles that are multiples of pi."""
    try:
        a1, a2, a3 = (float(x) for x in (a1, a2, a3))
    except TypeError as exc:
        raise BadParams("a_j must be real") from exc
    if not (_multiple_of_pi(theta1) and _multiple_of_pi(theta2)):
        raise BadParams("theta1 and theta2 must be multiples of pi")
    p = ExceptionalParams(1.0, a1, a2, a3, theta1, theta2)
    r1, r2, r3 = _radii(p)
    e1, e2, e3 = np.cos(theta1), np.cos(theta2), np.cos(p.theta3)
    return complex(
        r1 * a2 * a3 * (r1**2 + 2 * r2**2 - 2 * r1**2 * r2**2)
        - a1 * r2 * a3 * (r2**2 + 2 * r1**2 - 2 * r1**2 * r2**2) * e1
        + a1 * a2 * r3 * (r1**2 + r2**2 - 2 * r1**2 * r2**2) * e2
        + r1 * r2 * r3 * (1 - 2 * a1**2 * a2**2) * e3
    )


class FlatBranch(NamedTuple):
    """Outcome of the closed-form flat test.

    ``flat`` is ``None`` when the decisive branch needs the argument of a
    zero entry; ``branch`` names the branch that decided.
    """

    flat: Optional[bool]
    branch: str


def flat_branch(p, tol=ZERO_TOL):
    """Closed-form decision whether F(A) meets its exceptional line in a segment."""
    r1, r2, r3 = p.r
    a1, a2, a3 = p.a
    zero = [r <= tol for r in (r1, r2, r3)]
    if sum(zero) >= 2:
        return FlatBranch(True, "two-zero")
    if not any(zero):
        small = abs(tau1(p)) + abs(tau2(p)) <= tol
        return FlatBranch(not small, "i")

    def same_angle(x, y):
        return angle_distance(x, y) <= tol

    if zero[0]:
        name, rr, (x, y), shift = "ii", (r2, r3), (a3, a2), p.theta3
    elif zero[1]:
        name, rr, (x, y), shift = "iii", (r1, r3), (a3, a1), p.theta2 + np.pi
    else:
        name, rr, (x, y), shift = "iv", (r1, r2), (a2, a1), p.theta1
    if abs(rr[0] - rr[1]) > tol:
        return FlatBranch(True, name)
    if abs(x) <= tol or abs(y) <= tol:
        return FlatBranch(None, name + ":not-applicable")
    return FlatBranch(not same_angle(np.angle(x), np.angle(y) + shift), name)


def oracle_flat_on_line(A, line, tol_angle=1e-6, **kw):
    """Whether the oracle reports a flat portion on ``line`` (angle and distance)."""
    for fp in flat_portions(A, **kw):
        if angle_distance(fp.line.theta, line.theta) <= tol_angle and abs(
            fp.line.d - line.d
        ) <= 1e-6 * (1 + abs(line.d)):
            return True
    return False


def has_flat_on_line(p):
    """Whether F(construct_exceptional(p)) has a flat portion on its exceptional line.

    Branches whose condition involves the argument of a zero entry fall back
    to the eigenvalue oracle.
    """
    res = flat_branch(p)
    if res.flat is not None:
        return res.flat
    q = ExceptionalParams(1.0, p.a1, p.a2, p.a3, p.theta1, p.theta2)
    return oracle_flat_on_line(construct_exceptional(q), q.line)


# -- two parallel flat portions ------------------------------------------


def parallel_canonical(a1, a2, a3, alpha=1.0):
    """alpha times the canonical nilpotent matrix with two parallel flat portions.

    The portions lie on the two lines at distance
    ``|alpha| sqrt(a1^2 + a2^2 + a3^2) / 2`` from the origin, parallel to
    the direction arg(alpha).
    """
    for name, v in (("a1", a1), ("a2", a2), ("a3", a3)):
        if np.iscomplexobj(v) and np.imag(v) != 0:
            raise BadParams(f"{name} must be real")
    a1, a2, a3 = float(np.real(a1)), float(np.real(a2)), float(np.real(a3))
    if not (a1 > 0 and a3 > 0):
        raise BadParams("a1 and a3 must be positive")
    if alpha == 0 or not np.isfinite(alpha):
        raise BadParams("alpha must be finite and nonzero")
    M = np.array(
        [[0, a1, a2, a3], [0, 0, a3, -a2], [0, 0, 0, a1], [0, 0, 0, 0]], dtype=np.complex128
    )
    return complex(alpha) * M


def parallel_distance(a1, a2, a3, alpha=1.0):
    return abs(alpha) * np.sqrt(a1**2 + a2**2 + a3**2) / 2


class ParallelMatch(NamedTuple):
    matched: bool
    a1: float
    a2: float
    a3: float
    residual: float


def match_parallel_canonical(A, direction, tol=1e-8):
    """Test whether A is unitarily similar to a multiple of the canonical parallel form.

    ``direction`` is the common direction angle of the two parallel
    portions.  After rotating them to horizontal, Im A must have eigenvalues
    +-lambda, each double, and the (unique, since A^3 != 0) triangular form
    with nonnegative superdiagonal must have the canonical entry pattern,
    which forces A^2 = a1 a3 (E13 + E24) in that frame.
    """
    A = as_cmat(A)
    B = np.exp(-1j * direction) * A
    scale = 1 + frob(B)
    k = eigvalsh(im_part(B))
    lam = (k[3] - k[0]) / 2
    im_res = max(abs(k[0] + lam), abs(k[1] + lam), abs(k[2] - lam), abs(k[3] - lam), abs(k.sum()))
    _, T = nilpotent_triangularize(B)
    T = normalize_superdiagonal(T)
    a1, a3, a2 = T[0, 1].real, T[1, 2].real, T[0, 2].real
    want = np.array([[0, a1, a2, a3], [0, 0, a3, -a2], [0, 0, 0, a1], [0, 0, 0, 0]])
    form_res = np.abs(T - want).max()
    sq = T @ T
    sq_want = np.zeros((4, 4))
    sq_want[0, 2] = sq_want[1, 3] = a1 * a3
    sq_res = np.abs(sq - sq_want).max()
    lam_res = abs(lam - np.sqrt(a1**2 + a2**2 + a3**2) / 2)
    residual = float(max(im_res, form_res, sq_res, lam_res))
    ok = residual <= tol * scale and a1 > tol and a3 > tol
    return ParallelMatch(bool(ok), float(a1), float(a2), float(a3), residual)


# -- real family ---------------------------------------------------------


def real_family_matrix(a1, a2, a3):
    return np.array(
        [[0, a1, a2, a3], [0, 0, a3, a2], [0, 0, 0, a1], [0, 0, 0, 0]], dtype=np.complex128
    )


def real_family_eigenvalues(a1, a2, a3, theta):
    """Closed-form eigenvalues (lambda1, ..., lambda4) of Re(e^{-i theta} A) for the real family."""
    c = np.cos(theta)
    m = np.sqrt(max(0.0, a1**2 + a3**2 - 2 * a1 * a3 * c))
    p = np.sqrt(max(0.0, a1**2 + a3**2 + 2 * a1 * a3 * c))
    return np.array([(-a2 - m) / 2, (a2 - p) / 2, (-a2 + m) / 2, (a2 + p) / 2])


def real_family_vertical_flat(a1, a2, a3):
    """Whether F(A) has a vertical flat portion: |a1| = |a3| and |a2| >= |a1|."""
    if a1 == 0:
        raise ZeroA1("a1 must be nonzero")
    return abs(a1) == abs(a3) and abs(a2) >= abs(a1)


def is_vertical(fp, tol=1e-6):
    """Whether a flat portion is vertical, i.e. its support angle is 0 or pi."""
    return bool(angle_distance(2 * fp.line.theta, 0.0) <= 2 * tol)


__all__ = [
    "ExceptionalParams",
    "UpperNilpotent4",
    "GramResidual",
    "FlatBranch",
    "ParallelMatch",
    "construct_exceptional",
    "gram_residual",
    "condex_residuals",
    "exceptional_criterion",
    "tau1",
    "tau2",
    "real_tau2",
    "flat_branch",
    "has_flat_on_line",
    "oracle_flat_on_line",
    "parallel_canonical",
    "parallel_distance",
    "match_parallel_canonical",
    "real_family_matrix",
    "real_family_eigenvalues",
    "real_family_vertical_flat",
    "is_vertical",
]

"""Kippenhahn polynomial det(uH + vK + wI) and its real affine singular points.

For a nilpotent 4x4 matrix the polynomial is a quartic with six coefficients
given by trace formulas; for general matrices it is expanded from power-sum
traces through Newton's identities.
"""

from dataclasses import dataclass
from itertools import product
from typing import NamedTuple

import numpy as np

from .errors import NotNilpotent
from .linalg import as_cmat, frob, im_part, nilpotency_defect, pencil_eigvals, re_part
from .numrange import TWO_PI

IMAG_REL = 1e-10


@dataclass(frozen=True)
class KippenhahnQuartic:
    """Quartic c1 u^4 + c2 u^3 v + c3 u^3 w + (c1 + c4) u^2 v^2 + c5 u^2 w^2
    + c6 u^2 v w + c2 u v^3 + c3 u v^2 w + c4 v^4 + c6 v^3 w + c5 v^2 w^2 + w^4.

    ``imag`` records the largest imaginary part discarded when the
    coefficients were computed from complex traces.
    """

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float
    imag: float = 0.0

    @property
    def c(self):
        return np.array([self.c1, self.c2, self.c3, self.c4, self.c5, self.c6])

    def __call__(self, u, v, w=1.0):
        c1, c2, c3, c4, c5, c6 = self.c
        return (
            c1 * u**4
            + c2 * u**3 * v
            + c3 * u**3 * w
            + (c1 + c4) * u**2 * v**2
            + c5 * u**2 * w**2
            + c6 * u**2 * v * w
            + c2 * u * v**3
            + c3 * u * v**2 * w
            + c4 * v**4
            + c6 * v**3 * w
            + c5 * v**2 * w**2
            + w**4
        )

    def gradient(self, u, v, w=1.0):
        """Partial derivatives (p_u, p_v, p_w)."""
        c1, c2, c3, c4, c5, c6 = self.c
        pu = (
            4 * c1 * u**3
            + 3 * c2 * u**2 * v
            + 3 * c3 * u**2 * w
            + 2 * (c1 + c4) * u * v**2
            + 2 * c5 * u * w**2
            + 2 * c6 * u * v * w
            + c2 * v**3
            + c3 * v**2 * w
        )
        pv = (
            c2 * u**3
            + 2 * (c1 + c4) * u**2 * v
            + c6 * u**2 * w
            + 3 * c2 * u * v**2
            + 2 * c3 * u * v * w
            + 4 * c4 * v**3
            + 3 * c6 * v**2 * w
            + 2 * c5 * v * w**2
        )
        pw = (
            c3 * u**3
            + 2 * c5 * u**2 * w
            + c6 * u**2 * v
            + c3 * u * v**2
            + c6 * v**3
            + 2 * c5 * v**2 * w
            + 4 * w**3
        )
        return pu, pv, pw

    def as_form(self):
        """The same polynomial as a general :class:`HomogeneousForm`."""
        c1, c2, c3, c4, c5, c6 = self.c
        coeffs = {
            (4, 0, 0): c1,
            (3, 1, 0): c2,
            (3, 0, 1): c3,
            (2, 2, 0): c1 + c4,
            (2, 0, 2): c5,
            (2, 1, 1): c6,
            (1, 3, 0): c2,
            (1, 2, 1): c3,
            (0, 4, 0): c4,
            (0, 3, 1): c6,
            (0, 2, 2): c5,
            (0, 0, 4): 1.0,
        }
        return HomogeneousForm.from_dict(4, coeffs)


@dataclass(frozen=True)
class HomogeneousForm:
    """Homogeneous polynomial of degree n in (u, v, w).

    ``coeffs[k]`` holds the coefficients of the degree-k part in (u, v) that
    multiplies w^(n-k), ordered as u^k, u^(k-1) v, ..., v^k.  For n = 4
    there are 15 coefficients in total.
    """

    degree: int
    coeffs: tuple

    @classmethod
    def from_dict(cls, n, d):
        parts = [np.zeros(k + 1) for k in range(n + 1)]
        for (i, j, k), val in d.items():
            parts[i + j][j] += val
        return cls(n, tuple(parts))

    def coefficient(self, i, j, k):
        """Coefficient of u^i v^j w^k."""
        if i + j + k != self.degree:
            raise ValueError("exponents must sum to the degree")
        return float(self.coeffs[i + j][j])

    def as_dict(self):
        return {
            (k - j, j, self.degree - k): float(c)
            for k, part in enumerate(self.coeffs)
            for j, c in enumerate(part)
        }

    def __call__(self, u, v, w=1.0):
        total = 0.0
        for k, part in enumerate(self.coeffs):
            for j, c in enumerate(part):
                total = total + c * u ** (k - j) * v**j * w ** (self.degree - k)
        return total


def _check_nilpotent4(A):
    A = as_cmat(A)
    if A.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    defect, bound = nilpotency_defect(A)
    if defect > bound:
        raise NotNilpotent(f"||A^4||_F = {defect:.3e} exceeds {bound:.3e}")
    return A


def coeffs_nilpotent4_complex(A):
    """The six quartic coefficients of a nilpotent 4x4 matrix before dropping imaginary parts."""
    A = _check_nilpotent4(A)
    S = A.conj().T
    A2, S2 = A @ A, S @ S
    t31 = np.trace(A2 @ A @ S)
    t13 = np.trace(S2 @ S @ A)
    t22 = np.trace(A2 @ S2)
    tabab = np.trace(S @ A @ S @ A)
    t11 = np.trace(A @ S)
    s21 = np.trace(S2 @ A)
    s12 = np.trace(A2 @ S)
    c1 = -(t31 + t13 + t22 + tabab / 2 - t11**2 / 2) / 16
    c2 = 1j * (t31 - t13) / 8
    c3 = (s21 + s12) / 8
    c4 = (t31 + t13 - t22 - tabab / 2 + t11**2 / 2) / 16
    c5 = -t11 / 4
    c6 = 1j * (s21 - s12) / 8
    return np.array([c1, c2, c3, c4, c5, c6], dtype=np.complex128)


def coeffs_nilpotent4(A, check=True):
    """Quartic coefficients of p_A for a nilpotent 4x4 matrix from trace formulas.

    Raises ``ValueError`` if ``check`` and some imaginary part exceeds
    1e-10 (1 + ||A||_F)^4.
    """
    c = coeffs_nilpotent4_complex(A)
    imag = float(np.abs(c.imag).max())
    if check and imag > IMAG_REL * (1 + frob(as_cmat(A))) ** 4:
        raise ValueError(f"quartic coefficients have imaginary part {imag:.3e}")
    return KippenhahnQuartic(*map(float, c.real), imag=imag)


def eval_general(A, u, v, w):
    """det(uH + vK + wI) by LU factorization."""
    A = as_cmat(A)
    M = u * re_part(A) + v * im_part(A) + w * np.eye(A.shape[0])
    return float(np.linalg.det(M).real)


def newton_coefficients(M):
    """Coefficients q_0..q_n with det(M + wI) = sum_j q_j w^(n-j).

    Computed from the power sums Tr(M^k) by Newton's identities, so q_j is
    the j-th elementary symmetric function of the eigenvalues of M.
    """
    M = as_cmat(M, "M")
    n = M.shape[0]
    p = np.empty(n + 1, dtype=np.complex128)
    P = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        P = P @ M
        p[k] = np.trace(P)
    q = np.zeros(n + 1, dtype=np.complex128)
    q[0] = 1
    for m in range(1, n + 1):
        q[m] = sum((-1) ** (i - 1) * q[m - i] * p[i] for i in range(1, m + 1)) / m
    if np.allclose(M, M.conj().T):
        return q.real
    return q


def _poly_mul(a, b):
    return np.convolve(a, b)


def _power_sum_forms(H, K, n):
    """Tr((uH + vK)^m) as binary forms, m = 1..n (coefficients of u^(m-j) v^j)."""
    out = [None]
    mats = (H, K)
    for m in range(1, n + 1):
        form = np.zeros(m + 1)
        for word in product((0, 1), repeat=m):
            P = np.eye(H.shape[0], dtype=np.complex128)
            for letter in word:
                P = P @ mats[letter]
            form[sum(word)] += np.trace(P).real
        out.append(form)
    return out


def kippenhahn_form(A):
    """p_A(u, v, w) = det(uH + vK + wI) as a :class:`HomogeneousForm` of degree n."""
    A = as_cmat(A)
    n = A.shape[0]
    p = _power_sum_forms(re_part(A), im_part(A), n)
    e = [np.ones(1)]
    for m in range(1, n + 1):
        acc = np.zeros(m + 1)
        for i in range(1, m + 1):
            acc += (-1) ** (i - 1) * _poly_mul(e[m - i], p[i])
        e.append(acc / m)
    return HomogeneousForm(n, tuple(e))


def general_quartic(A):
    """The 15-coefficient quartic p_A for an arbitrary 4x4 matrix."""
    A = as_cmat(A)
    if A.shape != (4, 4):
        raise ValueError("expected a 4x4 matrix")
    return kippenhahn_form(A)


# -- singular points -----------------------------------------------------


class SingularPoint(NamedTuple):
    u: float
    v: float
    residual: float


def _residuals(c, u, v):
    c1, c2, c3, c4, c5, c6 = c
    u2, v2 = u * u, v * v
    e1 = (
        c1 * (4 * u2 * u + 2 * u * v2)
        + c2 * (3 * u2 * v + v2 * v)
        + c3 * (3 * u2 + v2)
        + c4 * (2 * u * v2)
        + c5 * (2 * u)
        + c6 * (2 * u * v)
    )
    e2 = (
        c1 * (2 * u2 * v)
        + c2 * (u2 * u + 3 * u * v2)
        + c3 * (2 * u * v)
        + c4 * (2 * u2 * v + 4 * v2 * v)
        + c5 * (2 * v)
        + c6 * (u2 + 3 * v2)
    )
    e3 = c3 * (u2 * u + u * v2) + c5 * (2 * u2 + 2 * v2) + c6 * (u2 * v + v2 * v) + 4
    return np.stack([e1, e2, e3])


def _jacobian(c, u, v):
    c1, c2, c3, c4, c5, c6 = c
    u2, v2, uv = u * u, v * v, u * v
    j11 = c1 * (12 * u2 + 2 * v2) + 6 * c2 * uv + 6 * c3 * u + 2 * c4 * v2 + 2 * c5 + 2 * c6 * v
    j12 = 4 * c1 * uv + 3 * c2 * (u2 + v2) + 2 * c3 * v + 4 * c4 * uv + 2 * c6 * u
    j22 = 2 * c1 * u2 + 6 * c2 * uv + 2 * c3 * u + c4 * (2 * u2 + 12 * v2) + 2 * c5 + 6 * c6 * v
    j31 = c3 * (3 * u2 + v2) + 4 * c5 * u + 2 * c6 * uv
    j32 = 2 * c3 * uv + 4 * c5 * v + c6 * (u2 + 3 * v2)
    return np.stack([np.stack([j11, j12]), np.stack([j12, j22]), np.stack([j31, j32])])


def singularity_residual(q, u, v):
    """Left-minus-right values of the three gradient equations in the chart w = 1.

    They are p_u, p_v and p_w at (u, v, 1); the third equation reads
    ``c3 (u^3 + u v^2) + 2 c5 (u^2 + v^2) + c6 (u^2 v + v^3) = -4``.
    """
    return tuple(float(x) for x in _residuals(q.c, float(u), float(v)))


def _refine(c, u, v, iters=100, tol=1e-15):
    """Vectorized Levenberg-Marquardt on the overdetermined 3x2 system."""
    mu = np.full(u.shape, 1e-3)
    r = _residuals(c, u, v)
    cost = np.sum(r * r, axis=0)
    for _ in range(iters):
        J = _jacobian(c, u, v)  # shape (3, 2, m)
        a = np.sum(J[:, 0] ** 2, axis=0)
        b = np.sum(J[:, 0] * J[:, 1], axis=0)
        d = np.sum(J[:, 1] ** 2, axis=0)
        g0 = np.sum(J[:, 0] * r, axis=0)
        g1 = np.sum(J[:, 1] * r, axis=0)
        damp = mu * np.maximum(a + d, 1e-300)
        aa, dd = a + damp, d + damp
        det = aa * dd - b * b
        det = np.where(det == 0, 1e-300, det)
        du = -(dd * g0 - b * g1) / det
        dv = -(aa * g1 - b * g0) / det
        un, vn = u + du, v + dv
        rn = _residuals(c, un, vn)
        cn = np.sum(rn * rn, axis=0)
        good = np.isfinite(cn) & (cn < cost)
        u = np.where(good, un, u)
        v = np.where(good, vn, v)
        r = np.where(good, rn, r)
        cost = np.where(good, cn, cost)
        mu = np.where(good, mu / 10, mu * 10)
        mu = np.clip(mu, 1e-16, 1e16)
        if np.all(np.sqrt(cost) <= tol * (1 + np.abs(u) + np.abs(v)) ** 4):
            break
    return u, v, np.max(np.abs(r), axis=0)


def default_search_radius(A, n_samples=256):
    """4 / d_min clamped to [1, 1e3], with d_min the smallest |support value| on a grid."""
    A = as_cmat(A)
    thetas = TWO_PI * np.arange(n_samples) / n_samples
    d = np.abs(pencil_eigvals(re_part(A), im_part(A), thetas)[:, 0]).min()
    if d == 0:
        return 1e3
    return float(np.clip(4.0 / d, 1.0, 1e3))


def singular_points(q, search_radius=1e3, grid=400, seeds=None, accept=1e-10):
    """Real singular points (u, v, 1) of the quartic with u^2 + v^2 <= R^2.

    Seeds are the local minima of the scaled squared residual on a polar
    grid (``grid`` log-spaced radii times ``grid`` angles, plus the origin)
    and any extra ``seeds``.  Each is refined by Levenberg-Marquardt; points
    with max residual <= ``accept * (1 + |u| + |v|)^4`` are kept,
    deduplicated at distance 1e-6 and sorted lexicographically.
    """
    if search_radius <= 0:
        raise ValueError("search_radius must be positive")
    c = q.c
    R = float(search_radius)
    rho = np.geomspace(R * 1e-6, R, grid)
    phi = 2 * np.pi * np.arange(grid) / grid
    P, F = np.meshgrid(rho, phi, indexing="ij")
    U, V = P * np.cos(F), P * np.sin(F)
    res = _residuals(c, U, V)
    f = np.sum(res * res, axis=0) / (1 + P) ** 6
    # local minima over the 8-neighbourhood, cyclic in angle
    pad = np.pad(f, ((1, 1), (0, 0)), constant_values=np.inf)
    is_min = np.ones_like(f, dtype=bool)
    for dr in (-1, 0, 1):
        for dp in (-1, 0, 1):
            if dr == 0 and dp == 0:
                continue
            nb = np.roll(pad, dp, axis=1)[1 + dr : 1 + dr + grid]
            is_min &= f <= nb
    su, sv = [U[is_min], np.zeros(1)], [V[is_min], np.zeros(1)]
    if seeds is not None:
        s = np.asarray(seeds, dtype=float).reshape(-1, 2)
        su.append(s[:, 0])
        sv.append(s[:, 1])
    u, v, r = _refine(c, np.concatenate(su), np.concatenate(sv))
    ok = (r <= accept * (1 + np.abs(u) + np.abs(v)) ** 4) & (u * u + v * v <= R * R)
    pts = sorted(zip(u[ok], v[ok], r[ok]), key=lambda t: t[2])
    kept = []
    for pu, pv, pr in pts:
        if all(np.hypot(pu - k[0], pv - k[1]) > 1e-6 for k in kept):
            kept.append((pu, pv, pr))
    kept.sort(key=lambda t: (t[0], t[1]))
    return [SingularPoint(float(a), float(b), float(e)) for a, b, e in kept]


"""Eigenvalue-based oracle for numerical ranges.

The support function of F(A) in direction theta is the smallest eigenvalue
of ``Re(e^{-i theta} A) = cos(theta) H + sin(theta) K``.  Flat boundary
portions sit on supporting lines where that eigenvalue is multiple; their
endpoints come from compressing ``Im(e^{-i theta} A)`` onto the eigenspace.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateRange, DependentVectors
from .linalg import (
    as_cmat,
    eigh_stack,
    eigvalsh,
    frob,
    hermitian_eig,
    im_part,
    pencil_eigvals,
    re_part,
    rotated_parts,
)

TWO_PI = 2 * np.pi
N_SCAN = 2048
MULT_REL = 1e-8
FLAT_REL = 1e-7
DEGEN_REL = 1e-10
ANGLE_TOL = 1e-12
_INVPHI = (np.sqrt(5.0) - 1) / 2


def canonical_angle(theta):
    """Reduce an angle to [0, 2 pi); values within 1e-12 of 2 pi map to 0."""
    t = float(np.mod(theta, TWO_PI))
    return 0.0 if t >= TWO_PI - ANGLE_TOL else t


def angle_distance(a, b):
    """Distance between two angles on the circle."""
    d = np.mod(np.asarray(a) - np.asarray(b), TWO_PI)
    return np.minimum(d, TWO_PI - d)


@dataclass(frozen=True)
class SupportLine:
    """The line {z : Re(e^{-i theta} z) = d}; F(A) lies where Re(e^{-i theta} z) >= d."""

    theta: float
    d: float

    def __post_init__(self):
        object.__setattr__(self, "theta", canonical_angle(self.theta))
        object.__setattr__(self, "d", float(self.d))

    @property
    def normal(self):
        return complex(np.cos(self.theta), np.sin(self.theta))

    @property
    def direction(self):
        """Unit vector along the line."""
        return 1j * self.normal

    def offset(self, z):
        """Signed value Re(e^{-i theta} z) - d."""
        return (np.exp(-1j * self.theta) * z).real - self.d

    def line_coordinates(self):
        """(u, v) with the line written as u x + v y + 1 = 0 (requires d != 0)."""
        return -np.cos(self.theta) / self.d, -np.sin(self.theta) / self.d


@dataclass(frozen=True)
class FlatPortion:
    line: SupportLine
    z1: complex
    z2: complex
    length: float

    @property
    def direction_angle(self):
        """Angle of the segment itself, reduced to [0, pi)."""
        return float(np.mod(self.line.theta + np.pi / 2, np.pi))


@dataclass(frozen=True, eq=False)
class ExceptionalSubspace:
    """Eigenspace of the (multiple) minimal eigenvalue of Re(e^{-i theta} A)."""

    theta: float
    value: float
    basis: np.ndarray = field(repr=False)
    gap: float = 0.0
    continuum: bool = False

    @property
    def dim(self):
        return self.basis.shape[1]


def _scale(A):
    return 1.0 + frob(A)


def support_value(A, theta):
    """Smallest eigenvalue of Re(e^{-i theta} A)."""
    R, _ = rotated_parts(as_cmat(A), theta)
    return float(eigvalsh(R)[0])


def support_line(A, theta):
    return SupportLine(theta, support_value(A, theta))


def boundary_point(A, theta):
    """<Ax, x> for a unit eigenvector x of the minimal eigenvalue of Re(e^{-i theta} A)."""
    A = as_cmat(A)
    R, _ = rotated_parts(A, theta)
    x = hermitian_eig(R).vectors[:, 0]
    return complex(np.vdot(x, A @ x))


def sample_boundary(A, n_samples=256):
    """Boundary points at ``n_samples`` equally spaced angles in [0, 2 pi)."""
    if n_samples < 16:
        raise ValueError("n_samples must be at least 16")
    A = as_cmat(A)
    H, K = re_part(A), im_part(A)
    thetas = TWO_PI * np.arange(n_samples) / n_samples
    stack = np.cos(thetas)[:, None, None] * H + np.sin(thetas)[:, None, None] * K
    _, V = eigh_stack(stack)
    x = V[:, :, 0]
    return np.einsum("ki,ij,kj->k", x.conj(), A, x)


def is_degenerate(A, tol=None):
    """True when F(A) has empty interior (a point or a segment).

    That happens exactly when the traceless parts of H and K are linearly
    dependent over the reals, i.e. some real combination a H + b K is scalar.
    """
    A = as_cmat(A)
    n = A.shape[0]
    H, K = re_part(A), im_part(A)
    H0 = H - np.trace(H).real / n * np.eye(n)
    K0 = K - np.trace(K).real / n * np.eye(n)
    M = np.stack([H0.ravel(), K0.ravel()], axis=1)
    M = np.concatenate([M.real, M.imag])
    smin = np.linalg.svd(M, compute_uv=False)[-1]
    if tol is None:
        tol = DEGEN_REL * _scale(A)
    return bool(smin <= tol)


def _check_nondegenerate(A):
    if is_degenerate(A):
        raise DegenerateRange("the numerical range has empty interior")


def _gap(H, K, thetas):
    w = pencil_eigvals(H, K, thetas)
    return w[:, 1] - w[:, 0]


def _golden_refine(H, K, lo, hi, tol=ANGLE_TOL):
    """Vectorized golden-section minimization of the gap on each [lo, hi]."""
    a, b = lo.copy(), hi.copy()
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = _gap(H, K, c), _gap(H, K, d)
    while np.max(b - a) > tol:
        left = fc <= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = np.where(left, b - _INVPHI * (b - a), d)
        new_d = np.where(left, c, a + _INVPHI * (b - a))
        probe = np.where(left, new_c, new_d)
        fp = _gap(H, K, probe)
        fd_new = np.where(left, fc, fp)
        fc_new = np.where(left, fp, fd)
        c, d, fc, fd = new_c, new_d, fc_new, fd_new
    mid = (a + b) / 2
    return mid, _gap(H, K, mid)


def _vertex_refine(H, K, theta, steps=(1e-4, 1e-5, 3e-6)):
    """Three-point parabola fits of the gap around ``theta``.

    Near a tangential double eigenvalue the gap is quadratic in the angle, so
    golden section only locates the minimum to about the square root of the
    rounding level.  Fitting a parabola through points far enough out that
    the gap is well above rounding recovers the vertex much more precisely.
    """
    t = np.array(theta, dtype=float)
    for h in steps:
        g = _gap(H, K, np.concatenate([t - h, t, t + h])).reshape(3, -1)
        curv = g[0] + g[2] - 2 * g[1]
        shift = np.where(curv > 0, h * (g[0] - g[2]) / (2 * np.where(curv > 0, curv, 1)), 0.0)
        t = t + np.clip(shift, -h, h)
    return t


def _runs(mask):
    """Cyclic runs of True in ``mask`` as (start, length) pairs."""
    n = mask.size
    if mask.all():
        return [(0, n)]
    if not mask.any():
        return []
    start = int(np.argmin(mask))  # first False, so no run wraps past it
    rolled = np.roll(mask, -start)
    out, k = [], 0
    while k < n:
        if rolled[k]:
            j = k
            while j < n and rolled[j]:
                j += 1
            out.append(((k + start) % n, j - k))
            k = j
        else:
            k += 1
    return out


def _cluster(A, theta, eps):
    R, _ = rotated_parts(A, theta)
    eig = hermitian_eig(R)
    k = max(int(np.sum(eig.values <= eig.values[0] + eps)), 2)
    return eig, k


def _spread(A, theta, eps):
    eig, k = _cluster(A, theta, eps)
    _, I = rotated_parts(A, theta)
    B = eig.vectors[:, :k]
    mu = hermitian_eig(B.conj().T @ I @ B).values
    return mu[-1] - mu[0]


def exceptional_angles(A, n_scan=N_SCAN, tol_mult=None):
    """Angles where the minimal eigenvalue of Re(e^{-i theta} A) is multiple.

    The gap between the two smallest eigenvalues is scanned on ``n_scan``
    equally spaced angles and every local minimum that can possibly dip
    below the tolerance is refined by golden-section search.  An interval
    of angles on which the gap vanishes identically is reported once, at
    its midpoint, with ``continuum=True``.

    Parameters
    ----------
    A : array_like
        Square complex matrix, n <= 8.
    n_scan : int
        Number of scan angles.
    tol_mult : float, optional
        Multiplicity tolerance; defaults to 1e-8 (1 + ||A||_F).

    Returns
    -------
    list of ExceptionalSubspace
        Sorted by angle in [0, 2 pi).

    Raises
    ------
    DegenerateRange
        If F(A) is a point or a segment.
    """
    A = as_cmat(A)
    _check_nondegenerate(A)
    eps = MULT_REL * _scale(A) if tol_mult is None else float(tol_mult)
    H, K = re_part(A), im_part(A)
    step = TWO_PI / n_scan
    grid = step * np.arange(n_scan)
    g = _gap(H, K, grid)
    gl, gr = np.roll(g, 1), np.roll(g, -1)

    hits = []
    below = g <= eps
    plateau_idx = set()
    for start, length in _runs(below):
        if length >= 3:
            mid = start + (length - 1) / 2
            idx = np.arange(start, start + length) % n_scan
            plateau_idx.update(idx.tolist())
            hits.append((canonical_angle(mid * step), float(g[idx].max()), True))

    # a dip of a Lipschitz gap function between grid points cannot go
    # deeper than the neighbouring rise, so most minima are screened out
    is_min = (g < gl) & (g <= gr)
    rise = np.maximum(gl, gr) - g
    cand = np.nonzero(is_min & (g - 2 * rise <= eps))[0]
    cand = np.array([k for k in cand if k not in plateau_idx], dtype=int)
    if cand.size:
        theta, gap = _golden_refine(H, K, grid[cand] - step, grid[cand] + step)
        keep = gap < eps
        theta, gap = theta[keep], gap[keep]
        if theta.size:
            vt = _vertex_refine(H, K, theta)
            vgap = _gap(H, K, vt)
            for t, gv, t2, gv2 in zip(theta, gap, vt, vgap):
                if gv2 < eps and _spread(A, t2, eps) < _spread(A, t, eps):
                    t, gv = t2, gv2
                hits.append((canonical_angle(t), float(gv), False))

    hits.sort()
    merged = []
    for t, gv, cont in hits:
        if merged and angle_distance(t, merged[-1][0]) < 1e-9:
            continue
        merged.append((t, gv, cont))
    if len(merged) > 1 and angle_distance(merged[0][0], merged[-1][0]) < 1e-9:
        merged.pop()

    out = []
    for t, gv, cont in merged:
        eig, k = _cluster(A, t, eps)
        out.append(
            ExceptionalSubspace(
                theta=t,
                value=float(np.mean(eig.values[:k])),
                basis=eig.vectors[:, :k],
                gap=gv,
                continuum=cont,
            )
        )
    return out


def compression_is_scalar(A, y1, y2, tol=None):
    """Whether the compression of A onto span{y1, y2} is a multiple of I.

    Checks the two quadratic-form identities

        <A y1, y1> |y2|^2 = <A y2, y2> |y1|^2,
        <A y2, y1> |y1|^2 = <y2, y1> <A y1, y1>,

    with ``<x, y> = y^* x``, to ``tol * |y1|^2 |y2|^2`` where ``tol``
    defaults to 1e-9 (1 + ||A||_F).
    """
    A = as_cmat(A)
    y1 = np.asarray(y1, dtype=np.complex128).ravel()
    y2 = np.asarray(y2, dtype=np.complex128).ravel()
    n1, n2 = np.vdot(y1, y1).real, np.vdot(y2, y2).real
    g12 = np.vdot(y1, y2)
    if n1 * n2 - abs(g12) ** 2 <= 1e-12 * n1 * n2:
        raise DependentVectors("y1 and y2 are (numerically) linearly dependent")
    if tol is None:
        tol = 1e-9 * _scale(A)
    q11 = np.vdot(y1, A @ y1)
    q22 = np.vdot(y2, A @ y2)
    q21 = np.vdot(y1, A @ y2)
    bound = tol * n1 * n2
    eq1 = abs(q11 * n2 - q22 * n1)
    eq2 = abs(q21 * n1 - g12 * q11)
    return bool(eq1 <= bound and eq2 <= bound)


def segment_on(A, sub):
    """Endpoints and length of F(A) on the supporting line of ``sub``.

    Returns ``(z1, z2, length)``.  The length is the spread of the
    compression of Im(e^{-i theta} A) onto the eigenspace.
    """
    A = as_cmat(A)
    _, I = rotated_parts(A, sub.theta)
    B = sub.basis
    mu = hermitian_eig(B.conj().T @ I @ B).values
    rot = np.exp(1j * sub.theta)
    z1 = complex(rot * (sub.value + 1j * mu[0]))
    z2 = complex(rot * (sub.value + 1j * mu[-1]))
    return z1, z2, float(mu[-1] - mu[0])


def flat_portions(A, n_scan=N_SCAN, tol_mult=None, tol_flat=None, exceptional=None):
    """Line segments contained in the boundary of F(A).

    Parameters
    ----------
    A : array_like
        Square complex matrix, n <= 8.
    n_scan, tol_mult :
        Passed to :func:`exceptional_angles`.
    tol_flat : float, optional
        Minimal segment length; defaults to 1e-7 (1 + ||A||_F).
    exceptional : list of ExceptionalSubspace, optional
        Precomputed result of :func:`exceptional_angles`.

    Returns
    -------
    list of FlatPortion
        Sorted by the angle of the supporting line.
    """
    A = as_cmat(A)
    if exceptional is None:
        exceptional = exceptional_angles(A, n_scan=n_scan, tol_mult=tol_mult)
    eps = FLAT_REL * _scale(A) if tol_flat is None else float(tol_flat)
    out = []
    for sub in exceptional:
        z1, z2, length = segment_on(A, sub)
        if length > eps:
            out.append(FlatPortion(SupportLine(sub.theta, sub.value), z1, z2, length))
    return out

"""Dense complex matrix helpers and the Hermitian eigensolver for n <= 8.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  The heavy
lifting is delegated to the kernel picked by :mod:`nilrange._backend`.
"""

from typing import NamedTuple

import numpy as np

from ._backend import kernel
from .errors import NoConvergence, NotHermitian, NotNilpotent

MAX_DIM = 8
MULT_REL = 1e-8
MAX_SWEEPS = 200


def as_cmat(A, name="A"):
    """Validate and convert ``A`` to a square complex array with n <= 8."""
    M = np.array(A, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {M.shape}")
    if not 1 <= M.shape[0] <= MAX_DIM:
        raise ValueError(f"{name} must have dimension between 1 and {MAX_DIM}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} has non-finite entries")
    return M


def frob(A):
    return float(np.linalg.norm(A))


def mult_tol(M):
    """Eigenvalue-coincidence tolerance 1e-8 (1 + ||M||_F)."""
    return MULT_REL * (1.0 + frob(M))


def re_part(A):
    """Hermitian part (A + A*) / 2."""
    A = as_cmat(A)
    return (A + A.conj().T) / 2


def im_part(A):
    """Hermitian matrix K with A = re_part(A) + i K."""
    A = as_cmat(A)
    return (A - A.conj().T) / 2j


def rotated_parts(A, theta):
    """Return (Re(e^{-i theta} A), Im(e^{-i theta} A))."""
    H, K = re_part(A), im_part(A)
    c, s = np.cos(theta), np.sin(theta)
    return c * H + s * K, c * K - s * H


class HermEig(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def _eig2(H):
    # one Jacobi rotation diagonalizes a 2x2 Hermitian matrix exactly
    a, d, b = H[0, 0].real, H[1, 1].real, H[0, 1]
    g = abs(b)
    if g == 0.0:
        vals = np.array([a, d])
        vecs = np.eye(2, dtype=np.complex128)
    else:
        e = b / g
        tau = (d - a) / (2 * g)
        t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
        c = 1.0 / np.hypot(1.0, t)
        s = t * c
        vals = np.array([a - t * g, d + t * g])
        vecs = np.array([[c, s], [-s * np.conj(e), c * np.conj(e)]])
    order = np.argsort(vals, kind="stable")
    return HermEig(vals[order], vecs[:, order])


def _check_hermitian(H):
    H = as_cmat(H, "H")
    if frob(H - H.conj().T) > 1e-10 * (1.0 + frob(H)):
        raise NotHermitian("matrix is not Hermitian within 1e-10 (1 + ||H||_F)")
    return (H + H.conj().T) / 2


def hermitian_eig(H):
    """Eigen-decomposition of a Hermitian matrix.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvectors as columns.  n = 1, 2 use closed forms; larger matrices
    go through cyclic Jacobi with a cap of 200 sweeps.
    """
    H = _check_hermitian(H)
    n = H.shape[0]
    if n == 1:
        return HermEig(np.array([H[0, 0].real]), np.ones((1, 1), dtype=np.complex128))
    if n == 2:
        return _eig2(H)
    out = kernel.eigh_batch(H[None], True, MAX_SWEEPS)
    if out is None:
        raise NoConvergence("Jacobi iteration did not converge in 200 sweeps")
    w, V = out
    return HermEig(w[0], V[0])


def eigvalsh(H):
    """Ascending eigenvalues of a Hermitian matrix."""
    H = _check_hermitian(H)
    if H.shape[0] <= 2:
        return hermitian_eig(H).values
    w = kernel.eigvalsh_batch(H[None], MAX_SWEEPS)
    if w is None:
        raise NoConvergence("eigenvalue iteration did not converge")
    return w[0]


def eigh_stack(stack):
    """Batched variant of :func:`hermitian_eig` for an (m, n, n) stack."""
    out = kernel.eigh_batch(np.ascontiguousarray(stack, dtype=np.complex128), True, MAX_SWEEPS)
    if out is None:
        raise NoConvergence("Jacobi iteration did not converge in 200 sweeps")
    return out


def pencil_eigvals(H, K, thetas):
    """Ascending eigenvalues of cos(t) H + sin(t) K, one row per angle."""
    w = kernel.pencil_eigvalsh(H, K, np.atleast_1d(np.asarray(thetas, dtype=float)), MAX_SWEEPS)
    if w is None:
        raise NoConvergence("eigenvalue iteration did not converge")
    return w


def nilpotency_defect(A):
    """||A^n||_F together with the admissible bound 1e-8 (1 + ||A||_F)^n."""
    n = A.shape[0]
    return frob(np.linalg.matrix_power(A, n)), 1e-8 * (1.0 + frob(A)) ** n


def is_nilpotent(A):
    defect, bound = nilpotency_defect(as_cmat(A))
    return defect <= bound


def nilpotent_triangularize(A):
    """Unitary Q and strictly upper triangular T with Q* A Q = T.

    Each step takes a null vector of the compression of A onto the
    orthogonal complement of the vectors chosen so far (smallest
    eigenvector of B* B), which builds the flag ker A ⊂ ker A^2 ⊂ ...
    one dimension at a time.
    """
    A = as_cmat(A)
    defect, bound = nilpotency_defect(A)
    if defect > bound:
        raise NotNilpotent(f"||A^n||_F = {defect:.3e} exceeds {bound:.3e}")
    n = A.shape[0]
    Q = np.zeros((n, n), dtype=np.complex128)
    P = np.eye(n, dtype=np.complex128)
    for k in range(n):
        B = P.conj().T @ A @ P
        eig = hermitian_eig(B.conj().T @ B)
        Q[:, k] = P @ eig.vectors[:, 0]
        P = P @ eig.vectors[:, 1:]
    T = Q.conj().T @ A @ Q
    return Q, np.triu(T, 1)


def normalize_superdiagonal(T, return_phases=False):
    """Diagonal unitary similarity making every (k, k+1) entry real and >= 0.

    With ``return_phases`` the diagonal ``d`` of the similarity is returned as
    well, so that ``diag(d)* T diag(d)`` is the result.
    """
    T = as_cmat(T, "T")
    n = T.shape[0]
    d = np.ones(n, dtype=np.complex128)
    for k in range(n - 1):
        t = T[k, k + 1]
        d[k + 1] = d[k] * np.conj(t) / abs(t) if t != 0 else d[k]
    out = d.conj()[:, None] * T * d[None, :]
    idx = np.arange(n - 1)
    out[idx, idx + 1] = np.abs(T[idx, idx + 1])
    if return_phases:
        return out, d
    return out

"""Pure numpy fallback for the compiled kernels in ``_jacobi.pyx``.

Same call signatures and return conventions.  The cyclic Jacobi sweep is
vectorized across the batch axis, so a scan over many angles costs a fixed
number of numpy operations per rotation instead of a Python loop per matrix.
Eigenvalue-only calls reuse Jacobi without accumulating vectors.
"""

import numpy as np

_TINY = np.finfo(np.float64).tiny


def _jacobi(a, vectors, max_sweeps, rel_tol):
    m, n, _ = a.shape
    a = a.astype(np.complex128, copy=True)
    v = np.broadcast_to(np.eye(n, dtype=np.complex128), (m, n, n)).copy() if vectors else None
    tol = rel_tol * np.sqrt(np.einsum("bij,bij->b", a.real, a.real) + np.einsum("bij,bij->b", a.imag, a.imag))
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps + 1):
        off = np.sqrt(np.sum(np.abs(a[:, iu[0], iu[1]]) ** 2, axis=1))
        if np.all(off <= tol):
            break
        for p, q in zip(*iu):
            apq = a[:, p, q]
            g = np.abs(apq)
            # subnormal entries are skipped: complex division would overflow
            live = g > _TINY
            gs = np.where(live, g, 1.0)
            e = np.where(live, (apq.real / gs) + 1j * (apq.imag / gs), 1.0)
            with np.errstate(over="ignore"):
                tau = (a[:, q, q].real - a[:, p, p].real) / (2.0 * gs)
            sign = np.where(tau >= 0.0, 1.0, -1.0)
            t = np.where(live, sign / (np.abs(tau) + np.hypot(1.0, tau)), 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            ce = np.conj(e)
            c_ = c[:, None]
            s_ = s[:, None]
            x = a[:, :, p].copy()
            y = a[:, :, q].copy()
            a[:, :, p] = c_ * x - s_ * ce[:, None] * y
            a[:, :, q] = s_ * x + c_ * ce[:, None] * y
            x = a[:, p, :].copy()
            y = a[:, q, :].copy()
            a[:, p, :] = c_ * x - s_ * e[:, None] * y
            a[:, q, :] = s_ * x + c_ * e[:, None] * y
            a[:, p, q] = 0.0
            a[:, q, p] = 0.0
            a[:, p, p] = a[:, p, p].real
            a[:, q, q] = a[:, q, q].real
            if vectors:
                x = v[:, :, p].copy()
                y = v[:, :, q].copy()
                v[:, :, p] = c_ * x - s_ * ce[:, None] * y
                v[:, :, q] = s_ * x + c_ * ce[:, None] * y
    else:
        return None
    w = np.diagonal(a, axis1=1, axis2=2).real.copy()
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    if vectors:
        v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w, v


def eigh_batch(mats, vectors=True, max_sweeps=200, rel_tol=1e-15):
    mats = np.asarray(mats, dtype=np.complex128)
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2] or mats.shape[1] > 8:
        raise ValueError("expected a stack of square matrices with n <= 8")
    out = _jacobi(mats, vectors, max_sweeps, rel_tol)
    if out is None:
        return None
    w, v = out
    return w, (v if vectors else None)


def eigvalsh_batch(mats, max_iter=200):
    out = eigh_batch(mats, vectors=False, max_sweeps=max_iter)
    return None if out is None else out[0]


def pencil_eigvalsh(H, K, thetas, max_iter=200):
    H = np.asarray(H, dtype=np.complex128)
    K = np.asarray(K, dtype=np.complex128)
    thetas = np.asarray(thetas, dtype=np.float64)
    stack = np.cos(thetas)[:, None, None] * H + np.sin(thetas)[:, None, None] * K
    return eigvalsh_batch(stack, max_iter=max_iter)

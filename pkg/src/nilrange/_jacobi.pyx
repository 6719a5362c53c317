# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for small dense Hermitian eigenproblems (n <= 8).

Matrices are held as split real/imaginary row-major scratch arrays so the
inner loops compile to plain floating point code.  Two solvers live here:

* cyclic complex Jacobi, used whenever eigenvectors are wanted;
* Householder reduction to real tridiagonal form followed by implicit QL,
  used for the eigenvalue-only angle scans.

Both release the GIL and signal non-convergence by returning None.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, cos, sin, fabs, hypot, copysign

cnp.import_array()

cdef enum:
    MAXN = 8


cdef int _jacobi(double* ar, double* ai, int n, double* w,
                 double* vr, double* vi, bint want_v,
                 int max_sweeps, double rel_tol) noexcept nogil:
    cdef int p, q, k, sweep
    cdef double frob = 0.0, off, g, app, aqq, tau, t, c, s, tol
    cdef double er, ei, xr, xi, yr, yi

    for p in range(n * n):
        frob += ar[p] * ar[p] + ai[p] * ai[p]
    tol = rel_tol * sqrt(frob)

    if want_v:
        for p in range(n):
            for q in range(n):
                vr[p * n + q] = 1.0 if p == q else 0.0
                vi[p * n + q] = 0.0

    sweep = 0
    while True:
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += ar[p * n + q] * ar[p * n + q] + ai[p * n + q] * ai[p * n + q]
        if sqrt(off) <= tol:
            break
        if sweep >= max_sweeps:
            return -1
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = sqrt(ar[p * n + q] * ar[p * n + q] + ai[p * n + q] * ai[p * n + q])
                if g == 0.0:
                    continue
                er = ar[p * n + q] / g
                ei = ai[p * n + q] / g
                app = ar[p * n + p]
                aqq = ar[q * n + q]
                tau = (aqq - app) / (2.0 * g)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                # columns: a <- a J, J = [[c, s], [-s conj(e), c conj(e)]]
                for k in range(n):
                    xr = ar[k * n + p]; xi = ai[k * n + p]
                    yr = ar[k * n + q]; yi = ai[k * n + q]
                    ar[k * n + p] = c * xr - s * (er * yr + ei * yi)
                    ai[k * n + p] = c * xi - s * (er * yi - ei * yr)
                    ar[k * n + q] = s * xr + c * (er * yr + ei * yi)
                    ai[k * n + q] = s * xi + c * (er * yi - ei * yr)
                # rows: a <- J^H a
                for k in range(n):
                    xr = ar[p * n + k]; xi = ai[p * n + k]
                    yr = ar[q * n + k]; yi = ai[q * n + k]
                    ar[p * n + k] = c * xr - s * (er * yr - ei * yi)
                    ai[p * n + k] = c * xi - s * (er * yi + ei * yr)
                    ar[q * n + k] = s * xr + c * (er * yr - ei * yi)
                    ai[q * n + k] = s * xi + c * (er * yi + ei * yr)
                ar[p * n + q] = 0.0; ai[p * n + q] = 0.0
                ar[q * n + p] = 0.0; ai[q * n + p] = 0.0
                ai[p * n + p] = 0.0
                ai[q * n + q] = 0.0
                if want_v:
                    for k in range(n):
                        xr = vr[k * n + p]; xi = vi[k * n + p]
                        yr = vr[k * n + q]; yi = vi[k * n + q]
                        vr[k * n + p] = c * xr - s * (er * yr + ei * yi)
                        vi[k * n + p] = c * xi - s * (er * yi - ei * yr)
                        vr[k * n + q] = s * xr + c * (er * yr + ei * yi)
                        vi[k * n + q] = s * xi + c * (er * yi - ei * yr)

    for p in range(n):
        w[p] = ar[p * n + p]
    return sweep


cdef void _tridiagonalize(double* ar, double* ai, int n,
                          double* d, double* e) noexcept nogil:
    # Householder reduction; e[k] is |a[k, k+1]| since the off-diagonal
    # phases are removable by a diagonal unitary similarity.
    cdef int k, i, j
    cdef double xnorm, xr0, xi0, mod0, phr, phi, vnorm2, Kr, Ki, sr, si
    cdef double vr[MAXN]
    cdef double vi[MAXN]
    cdef double pr[MAXN]
    cdef double pim[MAXN]

    for k in range(n - 2):
        xnorm = 0.0
        for i in range(k + 1, n):
            xnorm += ar[i * n + k] * ar[i * n + k] + ai[i * n + k] * ai[i * n + k]
        xnorm = sqrt(xnorm)
        if xnorm == 0.0:
            continue
        xr0 = ar[(k + 1) * n + k]
        xi0 = ai[(k + 1) * n + k]
        mod0 = hypot(xr0, xi0)
        if mod0 == 0.0:
            phr = 1.0; phi = 0.0
        else:
            phr = xr0 / mod0; phi = xi0 / mod0
        for i in range(n):
            vr[i] = 0.0; vi[i] = 0.0
        for i in range(k + 1, n):
            vr[i] = ar[i * n + k]; vi[i] = ai[i * n + k]
        vr[k + 1] += phr * xnorm
        vi[k + 1] += phi * xnorm
        vnorm2 = 0.0
        for i in range(k + 1, n):
            vnorm2 += vr[i] * vr[i] + vi[i] * vi[i]
        # p = 2 A v / (v^H v)
        for i in range(n):
            pr[i] = 0.0; pim[i] = 0.0
            for j in range(k + 1, n):
                pr[i] += ar[i * n + j] * vr[j] - ai[i * n + j] * vi[j]
                pim[i] += ar[i * n + j] * vi[j] + ai[i * n + j] * vr[j]
            pr[i] *= 2.0 / vnorm2
            pim[i] *= 2.0 / vnorm2
        Kr = 0.0; Ki = 0.0
        for i in range(k + 1, n):
            Kr += vr[i] * pr[i] + vi[i] * pim[i]
            Ki += vr[i] * pim[i] - vi[i] * pr[i]
        Kr /= vnorm2; Ki /= vnorm2
        # q = p - K v ; A <- A - v q^H - q v^H
        for i in range(n):
            pr[i] -= Kr * vr[i] - Ki * vi[i]
            pim[i] -= Kr * vi[i] + Ki * vr[i]
        for i in range(n):
            for j in range(n):
                sr = vr[i] * pr[j] + vi[i] * pim[j] + pr[i] * vr[j] + pim[i] * vi[j]
                si = vi[i] * pr[j] - vr[i] * pim[j] + pim[i] * vr[j] - pr[i] * vi[j]
                ar[i * n + j] -= sr
                ai[i * n + j] -= si
    for k in range(n):
        d[k] = ar[k * n + k]
    for k in range(n - 1):
        e[k] = hypot(ar[k * n + k + 1], ai[k * n + k + 1])
    e[n - 1] = 0.0


cdef int _tql(double* d, double* e, int n, int max_iter) noexcept nogil:
    # implicit QL with Wilkinson shifts; e[k] couples d[k] and d[k+1]
    cdef int l, m, i, it
    cdef double g, r = 0.0, s, c, p, f, b, dd
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= 2.2e-16 * dd:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                return -1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(r, g))
            s = 1.0; c = 1.0; p = 0.0
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if r == 0.0 and i >= l:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return 0


cdef void _sort(int n, double* w, double* vr, double* vi, bint want_v) noexcept nogil:
    # insertion sort, ascending; columns of v follow their eigenvalues
    cdef int i, j, k
    cdef double key, tmp
    for i in range(1, n):
        key = w[i]
        j = i - 1
        while j >= 0 and w[j] > key:
            w[j + 1] = w[j]
            if want_v:
                for k in range(n):
                    tmp = vr[k * n + j + 1]; vr[k * n + j + 1] = vr[k * n + j]; vr[k * n + j] = tmp
                    tmp = vi[k * n + j + 1]; vi[k * n + j + 1] = vi[k * n + j]; vi[k * n + j] = tmp
            j -= 1
        w[j + 1] = key


def eigh_batch(cnp.ndarray mats, bint vectors=True, int max_sweeps=200,
               double rel_tol=1e-15):
    """Jacobi eigen-decomposition of a stack of Hermitian matrices (m, n, n)."""
    cdef double complex[:, :, ::1] src = np.ascontiguousarray(mats, dtype=np.complex128)
    cdef Py_ssize_t m = src.shape[0]
    cdef int n = <int>src.shape[1]
    if n > MAXN or src.shape[2] != n:
        raise ValueError("expected a stack of square matrices with n <= 8")
    w_arr = np.empty((m, n), dtype=np.float64)
    if vectors:
        v_arr = np.empty((m, n, n), dtype=np.complex128)
    else:
        v_arr = np.empty((m, 1, 1), dtype=np.complex128)
    cdef double[:, ::1] w = w_arr
    cdef double complex[:, :, ::1] vv = v_arr
    cdef double ar[MAXN * MAXN]
    cdef double ai[MAXN * MAXN]
    cdef double vr[MAXN * MAXN]
    cdef double vi[MAXN * MAXN]
    cdef Py_ssize_t b
    cdef int i, j, status = 0
    with nogil:
        for b in range(m):
            for i in range(n):
                for j in range(n):
                    ar[i * n + j] = src[b, i, j].real
                    ai[i * n + j] = src[b, i, j].imag
            if _jacobi(ar, ai, n, &w[b, 0], vr, vi, vectors, max_sweeps, rel_tol) < 0:
                status = -1
                break
            _sort(n, &w[b, 0], vr, vi, vectors)
            if vectors:
                for i in range(n):
                    for j in range(n):
                        vv[b, i, j] = vr[i * n + j] + 1j * vi[i * n + j]
    if status < 0:
        return None
    return w_arr, (v_arr if vectors else None)


def eigvalsh_batch(cnp.ndarray mats, int max_iter=200):
    """Eigenvalues only (tridiagonal QL) of a stack of Hermitian matrices."""
    cdef double complex[:, :, ::1] src = np.ascontiguousarray(mats, dtype=np.complex128)
    cdef Py_ssize_t m = src.shape[0]
    cdef int n = <int>src.shape[1]
    if n > MAXN or src.shape[2] != n:
        raise ValueError("expected a stack of square matrices with n <= 8")
    w_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] w = w_arr
    cdef double ar[MAXN * MAXN]
    cdef double ai[MAXN * MAXN]
    cdef double e[MAXN]
    cdef double vdummy[1]
    cdef Py_ssize_t b
    cdef int i, j, status = 0
    with nogil:
        for b in range(m):
            for i in range(n):
                for j in range(n):
                    ar[i * n + j] = src[b, i, j].real
                    ai[i * n + j] = src[b, i, j].imag
            _tridiagonalize(ar, ai, n, &w[b, 0], e)
            if _tql(&w[b, 0], e, n, max_iter) < 0:
                status = -1
                break
            _sort(n, &w[b, 0], vdummy, vdummy, False)
    if status < 0:
        return None
    return w_arr


def pencil_eigvalsh(cnp.ndarray H, cnp.ndarray K, cnp.ndarray thetas,
                    int max_iter=200):
    """Ascending eigenvalues of cos(t) H + sin(t) K for every t in ``thetas``."""
    cdef double complex[:, ::1] h = np.ascontiguousarray(H, dtype=np.complex128)
    cdef double complex[:, ::1] k = np.ascontiguousarray(K, dtype=np.complex128)
    cdef double[::1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef int n = <int>h.shape[0]
    if n > MAXN:
        raise ValueError("n <= 8 required")
    cdef Py_ssize_t m = th.shape[0]
    w_arr = np.empty((m, n), dtype=np.float64)
    cdef double[:, ::1] w = w_arr
    cdef double ar[MAXN * MAXN]
    cdef double ai[MAXN * MAXN]
    cdef double e[MAXN]
    cdef double vdummy[1]
    cdef Py_ssize_t b
    cdef int i, j, status = 0
    cdef double ct, st
    with nogil:
        for b in range(m):
            ct = cos(th[b])
            st = sin(th[b])
            for i in range(n):
                for j in range(n):
                    ar[i * n + j] = ct * h[i, j].real + st * k[i, j].real
                    ai[i * n + j] = ct * h[i, j].imag + st * k[i, j].imag
            _tridiagonalize(ar, ai, n, &w[b, 0], e)
            if _tql(&w[b, 0], e, n, max_iter) < 0:
                status = -1
                break
            _sort(n, &w[b, 0], vdummy, vdummy, False)
    if status < 0:
        return None
    return w_arr

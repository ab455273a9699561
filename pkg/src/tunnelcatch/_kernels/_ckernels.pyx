# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled tridiagonal kernels: Sturm bisection, pivoted LU, Crank-Nicolson stepping."""

import numpy as np

from libc.math cimport fabs, fmax

cdef double DBL_EPS = 2.220446049250313e-16
cdef double SAFMIN = 2.2250738585072014e-308


cdef inline int _count(const double* d, const double* e2, Py_ssize_t n, double x, double pivmin) nogil:
    cdef Py_ssize_t i
    cdef int count = 0
    cdef double q = d[0] - x
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = d[i] - x - e2[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def pivmin_of(const double[::1] off2):
    cdef Py_ssize_t i
    cdef double m = 1.0
    for i in range(off2.shape[0]):
        m = fmax(m, off2[i])
    return SAFMIN * m


def sturm_count(const double[::1] diag, const double[::1] off2, double x, double pivmin):
    """Number of eigenvalues strictly below ``x``."""
    if diag.shape[0] == 0:
        return 0
    cdef const double* e2 = &off2[0] if off2.shape[0] else NULL
    return _count(&diag[0], e2, diag.shape[0], x, pivmin)


def bisect_eigenvalues(const double[::1] diag, const double[::1] off, Py_ssize_t i_lo, Py_ssize_t i_hi):
    """Eigenvalues with ascending indices ``i_lo <= j < i_hi`` by Sturm bisection."""
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i, j, it
    cdef double[::1] e2 = np.empty(max(n - 1, 0))
    cdef double glo = 1e308, ghi = -1e308, r, pivmin = 1.0, lo, hi, mid, tol
    cdef double[::1] out = np.empty(max(i_hi - i_lo, 0))
    cdef double floor_lo
    for i in range(n - 1):
        e2[i] = off[i] * off[i]
        pivmin = fmax(pivmin, e2[i])
    pivmin *= SAFMIN
    for i in range(n):
        r = 0.0
        if i > 0:
            r += fabs(off[i - 1])
        if i < n - 1:
            r += fabs(off[i])
        glo = min(glo, diag[i] - r)
        ghi = max(ghi, diag[i] + r)
    r = 2.0 * DBL_EPS * fmax(fabs(glo), fabs(ghi)) * n + 2.0 * pivmin
    glo -= r
    ghi += r
    cdef const double* e2p = &e2[0] if n > 1 else NULL
    floor_lo = glo
    with nogil:
        for j in range(i_lo, i_hi):
            lo = floor_lo
            hi = ghi
            for it in range(400):
                mid = 0.5 * (lo + hi)
                tol = 2.0 * DBL_EPS * fmax(fabs(lo), fabs(hi)) + pivmin
                if hi - lo <= tol or mid <= lo or mid >= hi:
                    break
                if _count(&diag[0], e2p, n, mid, pivmin) > j:
                    hi = mid
                else:
                    lo = mid
            out[j - i_lo] = 0.5 * (lo + hi)
            floor_lo = lo
    return np.asarray(out)


def gt_factor(dl_in, d_in, du_in):
    """LU factorisation with partial pivoting of a real tridiagonal matrix (LAPACK ``dgttrf`` layout)."""
    cdef double[::1] dl = np.array(dl_in, dtype=np.float64)
    cdef double[::1] d = np.array(d_in, dtype=np.float64)
    cdef double[::1] du = np.array(du_in, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0], i
    cdef double[::1] du2 = np.zeros(max(n - 2, 0))
    cdef Py_ssize_t[::1] ipiv = np.arange(n, dtype=np.intp)
    cdef double fact, temp
    with nogil:
        for i in range(n - 1):
            if fabs(d[i]) >= fabs(dl[i]):
                if d[i] != 0.0:
                    fact = dl[i] / d[i]
                    dl[i] = fact
                    d[i + 1] = d[i + 1] - fact * du[i]
            else:
                fact = d[i] / dl[i]
                d[i] = dl[i]
                dl[i] = fact
                temp = du[i]
                du[i] = d[i + 1]
                d[i + 1] = temp - fact * d[i + 1]
                if i < n - 2:
                    du2[i] = du[i + 1]
                    du[i + 1] = -fact * du[i + 1]
                ipiv[i] = i + 1
    return np.asarray(dl), np.asarray(d), np.asarray(du), np.asarray(du2), np.asarray(ipiv)


def gt_solve(factors, b_in):
    """Solve with factors from :func:`gt_factor`; returns a new array."""
    dl_a, d_a, du_a, du2_a, ipiv_a = factors
    cdef const double[::1] dl = dl_a
    cdef const double[::1] d = d_a
    cdef const double[::1] du = du_a
    cdef const double[::1] du2 = du2_a
    cdef const Py_ssize_t[::1] ipiv = ipiv_a
    cdef double[::1] b = np.array(b_in, dtype=np.float64)
    cdef Py_ssize_t n = d.shape[0], i, ip
    cdef double temp
    with nogil:
        for i in range(n - 1):
            ip = ipiv[i]
            if ip == i:
                b[i + 1] = b[i + 1] - dl[i] * b[i]
            else:
                temp = b[i] - dl[i] * b[i + 1]
                b[i] = b[i + 1]
                b[i + 1] = temp
        b[n - 1] = b[n - 1] / d[n - 1]
        if n > 1:
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2]
        for i in range(n - 3, -1, -1):
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i]
    return np.asarray(b)


def cn_propagate(const double[::1] diag, const double[::1] off, psi0, double alpha, double shift,
                 Py_ssize_t steps, Py_ssize_t record_every, Py_ssize_t split, double h):
    """Crank-Nicolson steps ``(1 + i alpha (H - shift)) psi' = (1 - i alpha (H - shift)) psi``.

    Each step is evaluated as ``psi' = 2 A^{-1} psi - psi`` with
    ``A = 1 + i alpha (H - shift)``, which is the same Cayley transform but
    avoids multiplying by the large entries of ``1 - i alpha (H - shift)``.

    Returns ``(p_left, p_right, norm, psi)`` sampled every ``record_every`` steps,
    starting with the initial state.
    """
    cdef Py_ssize_t n = diag.shape[0], i, step, rec = 0
    cdef Py_ssize_t n_rec = steps // record_every + 1
    cdef double complex[::1] psi = np.array(psi0, dtype=np.complex128)
    cdef double complex[::1] rhs = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] cp = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] m = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] sub = np.empty(n, dtype=np.complex128)
    cdef double[::1] pl = np.empty(n_rec), pr = np.empty(n_rec), nrm = np.empty(n_rec)
    cdef double complex ia = 1j * alpha
    cdef double complex denom, prev
    cdef double sl, sr, a2
    # Thomas factors of A; its real part is the identity, so no pivoting is needed.
    for i in range(n):
        sub[i] = ia * off[i - 1] if i > 0 else 0.0
        denom = 1.0 + ia * (diag[i] - shift)
        if i > 0:
            denom = denom - sub[i] * cp[i - 1]
        m[i] = 1.0 / denom
        cp[i] = (ia * off[i]) * m[i] if i < n - 1 else 0.0
    with nogil:
        for step in range(steps + 1):
            if step % record_every == 0:
                sl = 0.0
                sr = 0.0
                for i in range(n):
                    a2 = psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
                    if i < split:
                        sl += a2
                    else:
                        sr += a2
                pl[rec] = sl * h
                pr[rec] = sr * h
                nrm[rec] = ((sl + sr) * h) ** 0.5
                rec += 1
            if step == steps:
                break
            prev = 0.0
            for i in range(n):
                prev = (psi[i] - sub[i] * prev) * m[i]
                rhs[i] = prev
            for i in range(n - 2, -1, -1):
                rhs[i] = rhs[i] - cp[i] * rhs[i + 1]
            for i in range(n):
                psi[i] = 2.0 * rhs[i] - psi[i]
    return np.asarray(pl)[:rec], np.asarray(pr)[:rec], np.asarray(nrm)[:rec], np.asarray(psi)

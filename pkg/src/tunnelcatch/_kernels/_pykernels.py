"""NumPy, LAPACK and SuperLU fallback for the compiled kernels; same call signatures."""

import numpy as np
from scipy import sparse
from scipy.linalg import eigh_tridiagonal, lapack
from scipy.sparse import linalg as sparse_linalg

_SAFMIN = np.finfo(float).tiny


def pivmin_of(off2):
    return _SAFMIN * max(1.0, float(np.max(off2, initial=0.0)))


def _counts(diag, off2, shifts, pivmin):
    q = diag[0] - shifts
    q[np.abs(q) < pivmin] = -pivmin
    count = (q < 0).astype(np.int64)
    for i in range(1, diag.shape[0]):
        q = (diag[i] - shifts) - off2[i - 1] / q
        q[np.abs(q) < pivmin] = -pivmin
        count += q < 0
    return count


def sturm_count(diag, off2, x, pivmin):
    if diag.shape[0] == 0:
        return 0
    return int(_counts(diag, off2, np.array([float(x)]), pivmin)[0])


def bisect_eigenvalues(diag, off, i_lo, i_hi):
    """Sturm bisection by LAPACK ``dstebz`` at the tightest absolute tolerance."""
    if i_hi <= i_lo:
        return np.empty(0)
    return eigh_tridiagonal(np.asarray(diag, dtype=float), np.asarray(off, dtype=float), eigvals_only=True,
                            select="i", select_range=(i_lo, i_hi - 1), lapack_driver="stebz",
                            tol=2.0 * _SAFMIN)


def gt_factor(dl, d, du):
    dl, d, du, du2, ipiv, info = lapack.dgttrf(np.array(dl, dtype=float), np.array(d, dtype=float),
                                               np.array(du, dtype=float))
    if info < 0:
        raise ValueError(f"dgttrf argument error {info}")
    return dl, d, du, du2, ipiv


def gt_solve(factors, b):
    dl, d, du, du2, ipiv = factors
    x, info = lapack.dgttrs(dl, d, du, du2, ipiv, np.array(b, dtype=float))
    if info != 0:
        raise ValueError(f"dgttrs failed with info={info}")
    return x


def cn_propagate(diag, off, psi0, alpha, shift, steps, record_every, split, h):
    ia = 1j * alpha
    A = sparse.diags([ia * off, 1.0 + ia * (diag - shift), ia * off], [-1, 0, 1], format="csc")
    # The real part of A is the identity, so elimination without pivoting is stable;
    # pivoted tridiagonal LU swaps rows here and loses about two digits of unitarity.
    lu = sparse_linalg.splu(A, permc_spec="NATURAL", diag_pivot_thresh=0.0, options={"SymmetricMode": True})
    psi = np.array(psi0, dtype=complex)
    n_rec = steps // record_every + 1
    pl, pr, nrm = np.empty(n_rec), np.empty(n_rec), np.empty(n_rec)
    rec = 0
    for step in range(steps + 1):
        if step % record_every == 0:
            dens = psi.real**2 + psi.imag**2
            sl, sr = dens[:split].sum(), dens[split:].sum()
            pl[rec], pr[rec], nrm[rec] = sl * h, sr * h, np.sqrt((sl + sr) * h)
            rec += 1
        if step == steps:
            break
        # Cayley form: psi' = 2 A^{-1} psi - psi
        psi = 2.0 * lu.solve(psi) - psi
    return pl[:rec], pr[:rec], nrm[:rec], psi

"""Numba-compiled kernels for arithmetic over F_q[G] coefficient arrays.

All kernels operate on integer-code ndarrays:

* field elements are uint8 codes ``0..q-1``; ``ADD``/``MUL``/``NEG``/``INV``
  are the q-by-q (or length-q) lookup tables of the field,
* group elements are indices ``0..nG-1``; ``gmul`` is the nG-by-nG group
  multiplication table,
* an element of R = F_q[G] is a ``(nG,)`` array,
* an element of R[Z]/Z^nz is a ``(nz, nG)`` array (axis 0 = power of Z).

The same signatures are implemented in pure numpy in ``_kernels_numpy``.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def gr_mul(a, b, gmul, MUL, ADD):
    nG = a.shape[0]
    out = np.zeros(nG, dtype=np.uint8)
    for g1 in range(nG):
        x = a[g1]
        if x == 0:
            continue
        for g2 in range(nG):
            y = b[g2]
            if y == 0:
                continue
            k = gmul[g1, g2]
            out[k] = ADD[out[k], MUL[x, y]]
    return out


@njit(cache=True)
def _smul_acc(out, a, b, gmul, MUL, ADD):
    # out += a*b in R[Z]/Z^len(out), all (nz, nG) arrays
    nz = out.shape[0]
    nG = out.shape[1]
    la = a.shape[0]
    lb = b.shape[0]
    imax = la if la < nz else nz
    for i in range(imax):
        jmax = lb if lb < nz - i else nz - i
        for g1 in range(nG):
            x = a[i, g1]
            if x == 0:
                continue
            for j in range(jmax):
                for g2 in range(nG):
                    y = b[j, g2]
                    if y == 0:
                        continue
                    k = gmul[g1, g2]
                    out[i + j, k] = ADD[out[i + j, k], MUL[x, y]]


@njit(cache=True)
def zpoly_mul(a, b, nz, gmul, MUL, ADD):
    out = np.zeros((nz, a.shape[1]), dtype=np.uint8)
    _smul_acc(out, a, b, gmul, MUL, ADD)
    return out


@njit(cache=True)
def zmat_mul(A, B, nz, gmul, MUL, ADD):
    n = A.shape[0]
    m = A.shape[1]
    k = B.shape[1]
    nG = A.shape[3]
    out = np.zeros((n, k, nz, nG), dtype=np.uint8)
    for i in range(n):
        for j in range(k):
            for l in range(m):
                _smul_acc(out[i, j], A[i, l], B[l, j], gmul, MUL, ADD)
    return out


@njit(cache=True)
def zmat_vec(A, v, nz, gmul, MUL, ADD):
    n = A.shape[0]
    m = A.shape[1]
    nG = A.shape[3]
    out = np.zeros((n, nz, nG), dtype=np.uint8)
    for i in range(n):
        for l in range(m):
            _smul_acc(out[i], A[i, l], v[l], gmul, MUL, ADD)
    return out


@njit(cache=True)
def _svec_dot(r, v, nz, gmul, MUL, ADD):
    # r, v: (m, nz, nG); returns sum_l r[l]*v[l]
    out = np.zeros((nz, r.shape[2]), dtype=np.uint8)
    for l in range(r.shape[0]):
        _smul_acc(out, r[l], v[l], gmul, MUL, ADD)
    return out


@njit(cache=True)
def _sneg(a, NEG):
    out = np.empty_like(a)
    for i in range(a.shape[0]):
        for g in range(a.shape[1]):
            out[i, g] = NEG[a[i, g]]
    return out


@njit(cache=True)
def berk_charpoly(M, nz, gmul, MUL, ADD, NEG):
    """Characteristic polynomial of M over S = R[Z]/Z^nz by Berkowitz.

    M has shape (n, n, zM, nG) with zM <= nz.  Returns P of shape
    (n+1, nz, nG) where P[j] is the coefficient of X^(n-j) in
    det(X*I - M); P[0] = 1.
    """
    n = M.shape[0]
    nG = M.shape[3]
    p = np.zeros((1, nz, nG), dtype=np.uint8)
    p[0, 0, 0] = 1
    for k in range(n):
        # column vector of the Toeplitz matrix: [1, -a, -RC, -RAC, ...]
        col = np.zeros((k + 2, nz, nG), dtype=np.uint8)
        col[0, 0, 0] = 1
        col[1] = _sneg(zpoly_mul(M[k, k], col[0], nz, gmul, MUL, ADD), NEG)
        if k > 0:
            v = np.zeros((k, nz, nG), dtype=np.uint8)
            for l in range(k):
                v[l, : M.shape[2]] = M[l, k]
            for j in range(2, k + 2):
                dot = _svec_dot(M[k, :k], v, nz, gmul, MUL, ADD)
                col[j] = _sneg(dot, NEG)
                if j < k + 1:
                    v = zmat_vec(M[:k, :k], v, nz, gmul, MUL, ADD)
        pnew = np.zeros((k + 2, nz, nG), dtype=np.uint8)
        for i in range(k + 2):
            top = i + 1 if i + 1 < p.shape[0] else p.shape[0]
            for j in range(top):
                _smul_acc(pnew[i], col[i - j], p[j], gmul, MUL, ADD)
        p = pnew
    return p


@njit(cache=True)
def echelon(rows, MUL, ADD, NEG, INV):
    """In-place reduced row echelon form over F_q; returns pivot columns."""
    m, nc = rows.shape
    piv = np.full(m, -1, dtype=np.int64)
    r = 0
    for c in range(nc):
        sel = -1
        for i in range(r, m):
            if rows[i, c] != 0:
                sel = i
                break
        if sel < 0:
            continue
        if sel != r:
            for j in range(nc):
                tmp = rows[r, j]
                rows[r, j] = rows[sel, j]
                rows[sel, j] = tmp
        inv = INV[rows[r, c]]
        if inv != 1:
            for j in range(c, nc):
                rows[r, j] = MUL[inv, rows[r, j]]
        for i in range(m):
            if i != r and rows[i, c] != 0:
                f = NEG[rows[i, c]]
                for j in range(c, nc):
                    rows[i, j] = ADD[rows[i, j], MUL[f, rows[r, j]]]
        piv[r] = c
        r += 1
        if r == m:
            break
    return piv

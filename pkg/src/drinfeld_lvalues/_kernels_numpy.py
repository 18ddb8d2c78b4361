"""Pure-numpy fallback for the kernels in ``_kernels_numba``.

Same contracts, no JIT.  Inner loops over group/series indices are kept in
Python with the per-row table lookups vectorized; this backend exists for
environments without a working numba and as the baseline for the benchmark
script.
"""

import numpy as np


def gr_mul(a, b, gmul, MUL, ADD):
    nG = a.shape[0]
    out = np.zeros(nG, dtype=np.uint8)
    for g1 in range(nG):
        x = a[g1]
        if x == 0:
            continue
        prod = MUL[x, b]
        idx = gmul[g1]
        out[idx] = ADD[out[idx], prod]
    return out


def _smul_acc(out, a, b, gmul, MUL, ADD):
    nz, nG = out.shape
    la = min(a.shape[0], nz)
    for i in range(la):
        row = a[i]
        lb = min(b.shape[0], nz - i)
        for g1 in range(nG):
            x = row[g1]
            if x == 0:
                continue
            idx = gmul[g1]
            prod = MUL[x, b[:lb]]
            tgt = out[i : i + lb]
            tgt[:, idx] = ADD[tgt[:, idx], prod]


def zpoly_mul(a, b, nz, gmul, MUL, ADD):
    out = np.zeros((nz, a.shape[1]), dtype=np.uint8)
    _smul_acc(out, a, b, gmul, MUL, ADD)
    return out


def zmat_mul(A, B, nz, gmul, MUL, ADD):
    n, m = A.shape[0], A.shape[1]
    k = B.shape[1]
    nG = A.shape[3]
    out = np.zeros((n, k, nz, nG), dtype=np.uint8)
    for i in range(n):
        for j in range(k):
            for l in range(m):
                _smul_acc(out[i, j], A[i, l], B[l, j], gmul, MUL, ADD)
    return out


def zmat_vec(A, v, nz, gmul, MUL, ADD):
    n, m = A.shape[0], A.shape[1]
    nG = A.shape[3]
    out = np.zeros((n, nz, nG), dtype=np.uint8)
    for i in range(n):
        for l in range(m):
            _smul_acc(out[i], A[i, l], v[l], gmul, MUL, ADD)
    return out


def _svec_dot(r, v, nz, gmul, MUL, ADD):
    out = np.zeros((nz, r.shape[2]), dtype=np.uint8)
    for l in range(r.shape[0]):
        _smul_acc(out, r[l], v[l], gmul, MUL, ADD)
    return out


def berk_charpoly(M, nz, gmul, MUL, ADD, NEG):
    n = M.shape[0]
    nG = M.shape[3]
    p = np.zeros((1, nz, nG), dtype=np.uint8)
    p[0, 0, 0] = 1
    for k in range(n):
        col = np.zeros((k + 2, nz, nG), dtype=np.uint8)
        col[0, 0, 0] = 1
        col[1] = NEG[zpoly_mul(M[k, k], col[0], nz, gmul, MUL, ADD)]
        if k > 0:
            v = np.zeros((k, nz, nG), dtype=np.uint8)
            v[:, : M.shape[2]] = M[:k, k]
            for j in range(2, k + 2):
                col[j] = NEG[_svec_dot(M[k, :k], v, nz, gmul, MUL, ADD)]
                if j < k + 1:
                    v = zmat_vec(M[:k, :k], v, nz, gmul, MUL, ADD)
        pnew = np.zeros((k + 2, nz, nG), dtype=np.uint8)
        for i in range(k + 2):
            for j in range(min(i + 1, p.shape[0])):
                _smul_acc(pnew[i], col[i - j], p[j], gmul, MUL, ADD)
        p = pnew
    return p


def echelon(rows, MUL, ADD, NEG, INV):
    m, nc = rows.shape
    piv = np.full(m, -1, dtype=np.int64)
    r = 0
    for c in range(nc):
        nz = np.nonzero(rows[r:, c])[0]
        if nz.size == 0:
            continue
        sel = r + nz[0]
        if sel != r:
            rows[[r, sel]] = rows[[sel, r]]
        inv = INV[rows[r, c]]
        if inv != 1:
            rows[r] = MUL[inv, rows[r]]
        mask = rows[:, c] != 0
        mask[r] = False
        if mask.any():
            f = NEG[rows[mask, c]]
            rows[mask] = ADD[rows[mask], MUL[f[:, None], rows[r][None, :]]]
        piv[r] = c
        r += 1
        if r == m:
            break
    return piv

"""Matrices over R = F_q[G] and R[t]; division-free determinants and monic
Fitting-ideal generators.

R[t] and R[[Z]]/Z^N have zero divisors, so determinants are computed by the
Berkowitz characteristic-polynomial method (division-free, O(n^4) ring
operations).  A Leibniz-expansion oracle is kept for small sizes.

Matrices over R are (n, n, nG) uint8 arrays; matrices over R[Z]/Z^nz are
(n, n, nz, nG).  Polynomial matrices over R[t] are handled as truncated
Z-matrices with the cap chosen large enough that no truncation occurs.
"""

from __future__ import annotations

from itertools import permutations

import numpy as np

from . import backend
from .errors import DegreeMismatch
from .groupring import GroupRing
from .series import RLaurent, RPoly

__all__ = [
    "fitting_monic",
    "det_division_free",
    "charpoly",
    "leibniz_det",
    "size_ratio_series",
    "nuclear_fitting_identity_check",
    "fq_solve",
    "fq_inv",
    "fq_rank",
]


# --- F_q matrix helpers -------------------------------------------------------


def fq_rank(F, mat) -> int:
    m = np.ascontiguousarray(np.asarray(mat, dtype=np.uint8)).copy()
    if m.size == 0:
        return 0
    piv = backend.echelon(m, F.MUL, F.ADD, F.NEG, F.INV)
    return int((piv >= 0).sum())


def fq_inv(F, mat) -> np.ndarray:
    """Inverse of a square matrix over F_q."""
    n = mat.shape[0]
    m = np.concatenate(
        [np.asarray(mat, dtype=np.uint8), np.eye(n, dtype=np.uint8)], axis=1
    )
    m = np.ascontiguousarray(m)
    piv = backend.echelon(m, F.MUL, F.ADD, F.NEG, F.INV)
    if not all(piv[i] == i for i in range(n)):
        raise np.linalg.LinAlgError("matrix is singular over F_q")
    return m[:, n:].copy()


def fq_solve(F, mat, rhs) -> np.ndarray | None:
    """One solution of mat @ x = rhs over F_q, or None if inconsistent.

    rhs may be a vector or a matrix of stacked right-hand sides.
    """
    a = np.asarray(mat, dtype=np.uint8)
    b = np.asarray(rhs, dtype=np.uint8)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    m = np.ascontiguousarray(np.concatenate([a, b], axis=1))
    piv = backend.echelon(m, F.MUL, F.ADD, F.NEG, F.INV)
    ncols = a.shape[1]
    x = np.zeros((ncols, b.shape[1]), dtype=np.uint8)
    for i in range(m.shape[0]):
        c = piv[i]
        if c < 0:
            continue
        if c >= ncols:
            return None  # pivot in the rhs block: inconsistent
        x[c] = m[i, ncols:]
    return x[:, 0] if vec else x


def fq_nullspace(F, mat) -> np.ndarray:
    """Basis of the right null space over F_q, rows = basis vectors."""
    a = np.ascontiguousarray(np.asarray(mat, dtype=np.uint8).copy())
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.uint8)
    piv = backend.echelon(a, F.MUL, F.ADD, F.NEG, F.INV)
    pivots = [int(c) for c in piv if c >= 0]
    free = [c for c in range(n) if c not in set(pivots)]
    rows = []
    for fcol in free:
        v = np.zeros(n, dtype=np.uint8)
        v[fcol] = 1
        for i, c in enumerate(pivots):
            # row i: x_c + sum_{j free} a[i, j] x_j = 0
            v[c] = F.neg(int(a[i, fcol]))
        rows.append(v)
    return (
        np.array(rows, dtype=np.uint8)
        if rows
        else np.zeros((0, n), dtype=np.uint8)
    )


# --- determinants over R[t] / R[Z]^trunc ---------------------------------------


def _as_zmat(ring: GroupRing, M) -> np.ndarray:
    M = np.asarray(M, dtype=np.uint8)
    if M.ndim == 3:
        M = M[:, :, None, :]
    return np.ascontiguousarray(M)


def charpoly(ring: GroupRing, M) -> RPoly:
    """det(t*I - M) in R[t] for a square matrix over R."""
    M = _as_zmat(ring, M)
    P = backend.berk_charpoly(
        M, 1, ring.G.gmul, ring.F.MUL, ring.F.ADD, ring.F.NEG
    )
    n = M.shape[0]
    c = np.zeros((n + 1, ring.nG), dtype=np.uint8)
    for j in range(n + 1):
        c[n - j] = P[j, 0]
    return RPoly(ring, c)


def fitting_monic(ring: GroupRing, A_t) -> RPoly:
    """Monic generator |M|_G = det(t*I - A_t) of the Fitting ideal of the
    module with t-action matrix A_t on an F_q[G]-free basis."""
    out = charpoly(ring, A_t)
    assert out.is_monic_poly(), "characteristic polynomial lost monicity"
    return out


def det_division_free(ring: GroupRing, M, zcap: int | None = None) -> np.ndarray:
    """Determinant of a square matrix over R[Z]/Z^zcap (Berkowitz).

    With zcap at least n*(max entry length) this is the exact determinant
    over R[t]; entries of length 1 make it a determinant over R.
    Returns a (zcap, nG) coefficient array.
    """
    M = _as_zmat(ring, M)
    n, zlen = M.shape[0], M.shape[2]
    if n == 0:
        out = np.zeros((zcap or 1, ring.nG), dtype=np.uint8)
        out[0] = ring.one()
        return out
    if zcap is None:
        zcap = n * (zlen - 1) + 1
    P = backend.berk_charpoly(
        M, zcap, ring.G.gmul, ring.F.MUL, ring.F.ADD, ring.F.NEG
    )
    det = P[n]  # det(-M)
    if n % 2 == 1:
        det = ring.F.NEG[det]
    return det


def leibniz_det(ring: GroupRing, M, zcap: int | None = None) -> np.ndarray:
    """Permanent-style Leibniz expansion oracle (use only for small n)."""
    M = _as_zmat(ring, M)
    n, zlen = M.shape[0], M.shape[2]
    if zcap is None:
        zcap = n * (zlen - 1) + 1
    out = np.zeros((zcap, ring.nG), dtype=np.uint8)
    if n == 0:
        out[0] = ring.one()
        return out
    for perm in permutations(range(n)):
        sign = _perm_sign(perm)
        term = np.zeros((zcap, ring.nG), dtype=np.uint8)
        term[0] = ring.one()
        for i in range(n):
            term = backend.zpoly_mul(
                term, M[i, perm[i]], zcap, ring.G.gmul, ring.F.MUL, ring.F.ADD
            )
        if sign < 0:
            term = ring.F.NEG[term]
        out = ring.F.ADD[out, term]
    return out


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def rmat_mul(ring: GroupRing, A, B) -> np.ndarray:
    """Product of matrices over R (shape (n, m, nG))."""
    return backend.zmat_mul(
        np.ascontiguousarray(A[:, :, None, :]),
        np.ascontiguousarray(B[:, :, None, :]),
        1,
        ring.G.gmul,
        ring.F.MUL,
        ring.F.ADD,
    )[:, :, 0, :]


def rmat_pow(ring: GroupRing, A, e: int) -> np.ndarray:
    n = A.shape[0]
    out = np.zeros((n, n, ring.nG), dtype=np.uint8)
    for i in range(n):
        out[i, i, 0] = 1
    base = A
    while e:
        if e & 1:
            out = rmat_mul(ring, out, base)
        base = rmat_mul(ring, base, base)
        e >>= 1
    return out


def rmat_add(ring: GroupRing, A, B) -> np.ndarray:
    return ring.F.ADD[A, B]


def rpoly_matrix_to_zmat(ring: GroupRing, rows: list[list[RPoly]]) -> np.ndarray:
    n = len(rows)
    zlen = max(p.c.shape[0] for row in rows for p in row)
    M = np.zeros((n, n, zlen, ring.nG), dtype=np.uint8)
    for i in range(n):
        for j in range(n):
            c = rows[i][j].c
            M[i, j, : c.shape[0]] = c
    return M


def t_identity_minus(ring: GroupRing, A) -> np.ndarray:
    """The R[t]-matrix t*I - A for A over R, as a (n, n, 2, nG) z-matrix."""
    A = np.asarray(A, dtype=np.uint8)
    n = A.shape[0]
    M = np.zeros((n, n, 2, ring.nG), dtype=np.uint8)
    M[:, :, 0, :] = ring.F.NEG[A]
    for i in range(n):
        M[i, i, 1, 0] = 1
    return M


def size_ratio_series(numer: RPoly, denom: RPoly, N: int) -> RLaurent:
    """numer/denom as a Laurent series exact to t^-N; degrees must agree.

    For monic sizes of equal degree the result lies in 1 + t^-1 R[[1/t]].
    """
    if numer.deg != denom.deg:
        raise DegreeMismatch(
            f"deg numerator {numer.deg} != deg denominator {denom.deg}"
        )
    d = denom.deg
    num_l = numer.to_laurent(N + d)
    den_l = denom.to_laurent(N + d)
    ratio = num_l * den_l.inv()
    return ratio.truncate(N)


def nuclear_fitting_identity_check(ring: GroupRing, A_t, N: int | None = None) -> bool:
    """Check |M|_G = t^n * det_{R[[1/T]]}(1 - t T^-1 | M) at T = t.

    The right side is det(I - A_t Z) with Z = T^-1, a polynomial of degree
    <= n in Z; the identity must hold exactly (consistency gate between the
    Fitting and nuclear routes).
    """
    A = np.asarray(A_t, dtype=np.uint8)
    n = A.shape[0]
    zcap = n + 1 if N is None else max(N, n + 1)
    # I - A_t Z as a z-matrix
    M = np.zeros((n, n, 2, ring.nG), dtype=np.uint8)
    M[:, :, 1, :] = ring.F.NEG[A]
    for i in range(n):
        M[i, i, 0, 0] = 1
    det = det_division_free(ring, M, zcap=zcap)
    # t^n * det|_{Z = 1/t}: coefficient of Z^k contributes at t^(n-k)
    lhs = fitting_monic(ring, A)
    if det[n + 1 :].any():
        return False
    rhs = np.zeros((n + 1, ring.nG), dtype=np.uint8)
    for k in range(n + 1):
        rhs[n - k] = det[k]
    return (RPoly(ring, rhs) == lhs)

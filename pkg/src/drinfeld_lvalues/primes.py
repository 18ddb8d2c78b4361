"""Fast enumeration of monic irreducibles of F_q[t] and the closed-form
Euler accumulator for the Carlitz module over the trivial extension.

Polynomials of degree d are coded as integers sum c_i q^i over the
non-leading coefficients (the leading coefficient is 1).  The sieve marks
every product (irreducible of degree e < d) x (monic of degree d - e),
walking the cofactor in odometer order so each mark is an O(e) update of
the running product.

These kernels only support prime q (s = 1); the generic Rabin-test path
in ``fields`` covers non-prime q at small scale.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .fields import FqField, is_irreducible

try:  # pragma: no cover - exercised through the backend choice
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def _mark_composites(mark, pcodes, e, d, q):
    """Mark products pi*g for every prime code in pcodes (degree e) and every
    monic g of degree d-e, by odometer walk on g."""
    p = q  # prime field
    m = d - e
    for idx in range(pcodes.shape[0]):
        code = pcodes[idx]
        pic = np.zeros(e + 1, dtype=np.int64)
        v = code
        for i in range(e):
            pic[i] = v % q
            v //= q
        pic[e] = 1
        # g starts as t^m (all lower digits 0)
        gdig = np.zeros(m, dtype=np.int64)
        prod = np.zeros(d + 1, dtype=np.int64)
        for i in range(e + 1):
            prod[m + i] = pic[i]
        while True:
            # mark current product (leading coeff is 1 at degree d)
            c = 0
            mult = 1
            for i in range(d):
                c += prod[i] * mult
                mult *= q
            mark[c] = 1
            # odometer increment of g with incremental product update
            j = 0
            while j < m:
                old = gdig[j]
                new = old + 1
                if new == p:
                    # digit wraps to 0: subtract old * pi * t^j
                    gdig[j] = 0
                    delta = (0 - old) % p
                    for i in range(e + 1):
                        prod[j + i] = (prod[j + i] + delta * pic[i]) % p
                    j += 1
                    continue
                gdig[j] = new
                for i in range(e + 1):
                    prod[j + i] = (prod[j + i] + pic[i]) % p
                break
            else:
                break


def _sieve_python(mark, pcodes, e, d, q):
    for code in pcodes:
        pic = [(int(code) // q**i) % q for i in range(e)] + [1]
        m = d - e
        for gcode in range(q**m):
            g = [(gcode // q**i) % q for i in range(m)] + [1]
            prod = [0] * (d + 1)
            for i, a in enumerate(pic):
                if a:
                    for j, b in enumerate(g):
                        prod[i + j] = (prod[i + j] + a * b) % q
            c = sum(prod[i] * q**i for i in range(d))
            mark[c] = 1


@lru_cache(maxsize=None)
def prime_codes(q: int, d: int) -> np.ndarray:
    """Codes of all monic irreducibles of degree d over F_q (prime q)."""
    if d == 1:
        return np.arange(q, dtype=np.int64)
    mark = np.zeros(q**d, dtype=np.uint8)
    for e in range(1, d // 2 + 1):
        pc = prime_codes(q, e)
        if HAVE_NUMBA:
            _mark_composites(mark, pc, e, d, q)
        else:
            _sieve_python(mark, pc, e, d, q)
    out = np.nonzero(mark == 0)[0].astype(np.int64)
    out.setflags(write=False)
    return out


def monic_irreducibles_fast(F: FqField, d: int) -> list[tuple]:
    """Monic irreducibles of degree d, (degree, lex) canonical order.

    Uses the code sieve for prime q; falls back to the Rabin scan else."""
    if F.s == 1:
        codes = prime_codes(F.q, d)
        out = []
        for code in codes:
            c = int(code)
            out.append(tuple((c // F.q**i) % F.q for i in range(d)) + (1,))
        out.sort(key=lambda f: tuple(reversed(f[:-1])))
        return out
    from .fields import monic_irreducibles

    return monic_irreducibles(F, d)


@njit(cache=True)
def _carlitz_theta_kernel(codes, d, N, q, acc):
    """Multiply acc (coefficients of t^0..t^-N) by prod pi/(pi-1) over the
    given degree-d prime codes, mod t^-N.  Prime q arithmetic."""
    p = q
    inv_tbl = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        for b in range(1, p):
            if (a * b) % p == 1:
                inv_tbl[a] = b
                break
    w = np.zeros(N + 1, dtype=np.int64)
    s = np.zeros(N + 1, dtype=np.int64)
    fac = np.zeros(N + 1, dtype=np.int64)
    tmp = np.zeros(N + 1, dtype=np.int64)
    for idx in range(codes.shape[0]):
        code = codes[idx]
        # w[j] = coefficient of t^-j in (pi - t^d)/t^d, i.e. c_{d-j}
        for j in range(N + 1):
            w[j] = 0
        v = code
        for i in range(d):
            cj = v % q
            v //= q
            j = d - i
            if j <= N:
                w[j] = cj
        # s = 1/pi * t^0-normalized: (1+w)^{-1}, then shift by d
        # inv[0] = 1; inv[k] = -sum_{j>=1} w[j] inv[k-j]
        s[0] = 1
        for k in range(1, N + 1 - d if N + 1 - d > 0 else 0):
            acc2 = 0
            jmax = k if k < d else d
            for j in range(1, jmax + 1):
                if w[j]:
                    acc2 += w[j] * s[k - j]
            s[k] = (-acc2) % p
        # factor = 1 + t^-d s + t^-2d s^2 + ... (geometric in 1/pi)
        for j in range(N + 1):
            fac[j] = 0
        fac[0] = 1
        # add s shifted by d
        kmax = N // d
        # powers of (t^-d * s): accumulate iteratively
        # cur = t^-d * s
        cur = np.zeros(N + 1, dtype=np.int64)
        for j in range(N + 1 - d):
            cur[j + d] = s[j]
        for _ in range(kmax):
            allz = True
            for j in range(N + 1):
                if cur[j]:
                    allz = False
                fac[j] = (fac[j] + cur[j]) % p
            if allz:
                break
            # cur *= t^-d * s
            for j in range(N + 1):
                tmp[j] = 0
            for a in range(N + 1):
                if cur[a]:
                    va = cur[a]
                    for b in range(d, N + 1 - a):
                        if s[b - d]:
                            tmp[a + b] = (tmp[a + b] + va * s[b - d]) % p
            for j in range(N + 1):
                cur[j] = tmp[j]
        # acc *= fac
        for j in range(N + 1):
            tmp[j] = 0
        for a in range(N + 1):
            if acc[a]:
                va = acc[a]
                for b in range(N + 1 - a):
                    if fac[b]:
                        tmp[a + b] = (tmp[a + b] + va * fac[b]) % p
        for j in range(N + 1):
            acc[j] = tmp[j]


def carlitz_trivial_theta_coeffs(F: FqField, N: int) -> np.ndarray:
    """Coefficients (t^0 .. t^-N) of prod_{deg pi <= N} pi/(pi-1) over F_q,
    q prime, by the closed Carlitz factor.  Returns int64 array."""
    assert F.s == 1, "fast path requires prime q"
    acc = np.zeros(N + 1, dtype=np.int64)
    acc[0] = 1
    for d in range(1, N + 1):
        codes = prime_codes(F.q, d)
        if HAVE_NUMBA:
            _carlitz_theta_kernel(codes, d, N, F.q, acc)
        else:
            _carlitz_theta_python(codes, d, N, F.q, acc)
    return acc


def _carlitz_theta_python(codes, d, N, q, acc):
    p = q
    for code in codes:
        w = [0] * (N + 1)
        v = int(code)
        for i in range(d):
            cj = v % q
            v //= q
            j = d - i
            if j <= N:
                w[j] = cj
        s = [0] * (N + 1)
        s[0] = 1
        for k in range(1, max(N + 1 - d, 0)):
            a2 = 0
            for j in range(1, min(k, d) + 1):
                a2 += w[j] * s[k - j]
            s[k] = (-a2) % p
        fac = [0] * (N + 1)
        fac[0] = 1
        cur = [0] * (N + 1)
        for j in range(N + 1 - d):
            cur[j + d] = s[j]
        for _ in range(N // d):
            if not any(cur):
                break
            for j in range(N + 1):
                fac[j] = (fac[j] + cur[j]) % p
            nxt = [0] * (N + 1)
            for a in range(N + 1):
                if cur[a]:
                    for b in range(d, N + 1 - a):
                        nxt[a + b] = (nxt[a + b] + cur[a] * s[b - d]) % p
            cur = nxt
        nxt = [0] * (N + 1)
        for a in range(N + 1):
            if acc[a]:
                for b in range(N + 1 - a):
                    nxt[a + b] = (nxt[a + b] + acc[a] * fac[b]) % p
        for j in range(N + 1):
            acc[j] = nxt[j]

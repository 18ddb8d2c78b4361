"""Exact finite-field arithmetic.

Two element representations are used:

* :class:`FqField` is the working coefficient field F_q (q = p^s small).
  Elements are integer codes ``0..q-1`` packing the F_p digits of the
  polynomial basis (code = sum digit_i * p^i), and all arithmetic goes
  through dense lookup tables, so the same codes feed the array kernels.

* :class:`ExtField` is a generic extension ``base[x]/(modulus)`` with tuple
  elements, used only for small-scale constructions (splitting fields for
  character idempotents, residue fields of primes).  No tables are built.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "FqField",
    "ExtField",
    "poly_mul",
    "poly_divmod",
    "poly_mod",
    "poly_gcd",
    "poly_powmod",
    "poly_eval",
    "is_irreducible",
    "default_modulus",
]


def _factorize(n: int) -> dict[int, int]:
    fac: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        fac[n] = fac.get(n, 0) + 1
    return fac


# ---------------------------------------------------------------------------
# generic polynomial arithmetic over any field object
#
# Polynomials are tuples of field elements, little-endian by degree, with no
# trailing zeros; () is the zero polynomial.


def _trim(F, c: list) -> tuple:
    while c and c[-1] == F.zero:
        c.pop()
    return tuple(c)


def poly_mul(F, a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == F.zero:
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return _trim(F, out)


def poly_add(F, a: tuple, b: tuple) -> tuple:
    n = max(len(a), len(b))
    out = [F.zero] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = F.add(out[i], y)
    return _trim(F, out)


def poly_neg(F, a: tuple) -> tuple:
    return tuple(F.neg(x) for x in a)


def poly_divmod(F, a: tuple, b: tuple) -> tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    binv = F.inv(b[-1])
    r = list(a)
    q = [F.zero] * max(0, len(a) - len(b) + 1)
    while len(r) >= len(b):
        if r[-1] == F.zero:
            r.pop()
            continue
        f = F.mul(r[-1], binv)
        shift = len(r) - len(b)
        q[shift] = f
        for i, y in enumerate(b):
            r[shift + i] = F.sub(r[shift + i], F.mul(f, y))
        r.pop()
    return _trim(F, q), _trim(F, r)


def poly_mod(F, a: tuple, b: tuple) -> tuple:
    return poly_divmod(F, a, b)[1]


def poly_gcd(F, a: tuple, b: tuple) -> tuple:
    while b:
        a, b = b, poly_mod(F, a, b)
    if a:
        lead_inv = F.inv(a[-1])
        a = tuple(F.mul(lead_inv, x) for x in a)
    return a


def poly_powmod(F, a: tuple, e: int, m: tuple) -> tuple:
    result = (F.one,)
    a = poly_mod(F, a, m)
    while e:
        if e & 1:
            result = poly_mod(F, poly_mul(F, result, a), m)
        a = poly_mod(F, poly_mul(F, a, a), m)
        e >>= 1
    return result


def poly_eval(F, a: tuple, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def monic_irreducibles(F, d: int) -> list[tuple]:
    """Monic irreducibles of degree exactly d over F, in lexicographic order
    of the non-leading coefficient tuple (c_{d-1}, ..., c_0)."""
    out = []
    for code in range(F.order**d):
        coeffs = [(code // F.order**i) % F.order for i in range(d)] + [F.one]
        # reinterpret the enumeration index so (c_{d-1},..,c_0) is lex ordered
        f = tuple(coeffs)
        if is_irreducible(F, f):
            out.append(f)
    out.sort(key=lambda f: tuple(reversed(f[:-1])))
    return out


def is_irreducible(F, f: tuple) -> bool:
    """Rabin irreducibility test for a monic polynomial over the field F."""
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    q = F.order
    x = (F.zero, F.one)
    # x^(q^n) == x mod f
    h = x
    for _ in range(n):
        h = poly_powmod(F, h, q, f)
    if h != poly_mod(F, x, f):
        return False
    for ell in _factorize(n):
        h = x
        for _ in range(n // ell):
            h = poly_powmod(F, h, q, f)
        g = poly_gcd(F, poly_add(F, h, poly_neg(F, x)), f)
        if g != (F.one,):
            return False
    return True


# ---------------------------------------------------------------------------
# F_p base field (tiny helper used to bootstrap FqField moduli)


class _PrimeField:
    def __init__(self, p: int):
        self.p = p
        self.order = p
        self.zero = 0
        self.one = 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        return pow(a, self.p - 2, self.p)


def default_modulus(p: int, s: int) -> tuple[int, ...]:
    """Least monic irreducible of degree s over F_p.

    'Least' means smallest value of sum(c_i * p^i) over the non-leading
    coefficients; for s = 1 this gives the polynomial x.
    """
    Fp = _PrimeField(p)
    for code in range(p**s):
        coeffs = [(code // p**i) % p for i in range(s)] + [1]
        f = tuple(coeffs)
        if is_irreducible(Fp, f):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# the table-driven working field


@lru_cache(maxsize=None)
def _build_field(p: int, s: int, modulus: tuple[int, ...]):
    q = p**s
    if q > 256:
        raise ValueError(f"table field supports q <= 256, got q = {q}")
    # digit decomposition of all codes
    digits = np.zeros((q, s), dtype=np.int64)
    for c in range(q):
        v = c
        for i in range(s):
            digits[c, i] = v % p
            v //= p

    def encode(vec) -> int:
        out = 0
        for i in range(s):
            out += int(vec[i] % p) * p**i
        return out

    ADD = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        for b in range(q):
            ADD[a, b] = encode((digits[a] + digits[b]) % p)
    NEG = np.zeros(q, dtype=np.uint8)
    for a in range(q):
        NEG[a] = encode((-digits[a]) % p)

    # multiplication via polynomial product mod modulus
    red = []  # x^(s+k) reduced mod modulus, for k = 0..s-2, as digit vectors
    m = np.array(modulus[:-1], dtype=np.int64)  # monic assumed
    cur = (-m) % p  # x^s
    red.append(cur.copy())
    for _ in range(s - 1):
        nxt = np.zeros(s, dtype=np.int64)
        nxt[1:] = cur[:-1]
        nxt = (nxt + cur[-1] * red[0]) % p
        cur = nxt
        red.append(cur.copy())
    MUL = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        da = digits[a]
        for b in range(q):
            db = digits[b]
            prod = np.zeros(2 * s - 1, dtype=np.int64)
            for i in range(s):
                if da[i]:
                    prod[i : i + s] += da[i] * db
            prod %= p
            vec = prod[:s].copy()
            for k in range(s - 1):
                if prod[s + k]:
                    vec = (vec + prod[s + k] * red[k]) % p
            MUL[a, b] = encode(vec)
    INV = np.zeros(q, dtype=np.uint8)
    for a in range(1, q):
        # a^(q-2) by square-and-multiply through the table
        acc, base, e = 1, a, q - 2
        while e:
            if e & 1:
                acc = int(MUL[acc, base])
            base = int(MUL[base, base])
            e >>= 1
        INV[a] = acc
    for t in (ADD, MUL, NEG, INV, digits):
        t.setflags(write=False)
    return ADD, MUL, NEG, INV, digits


@dataclass(frozen=True)
class FqField:
    """F_q = F_p[x]/(modulus) with integer-code elements and lookup tables."""

    p: int
    s: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.modulus is None:
            object.__setattr__(self, "modulus", default_modulus(self.p, self.s))
        mod = tuple(int(c) % self.p for c in self.modulus)
        if len(mod) != self.s + 1 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree s")
        if not is_irreducible(_PrimeField(self.p), mod):
            raise ValueError("modulus is reducible")
        object.__setattr__(self, "modulus", mod)
        ADD, MUL, NEG, INV, digits = _build_field(self.p, self.s, mod)
        object.__setattr__(self, "ADD", ADD)
        object.__setattr__(self, "MUL", MUL)
        object.__setattr__(self, "NEG", NEG)
        object.__setattr__(self, "INV", INV)
        object.__setattr__(self, "_digits", digits)

    @property
    def q(self) -> int:
        return self.p**self.s

    # field protocol -------------------------------------------------------
    @property
    def order(self) -> int:
        return self.q

    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        return int(self.ADD[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.ADD[a, self.NEG[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.MUL[a, b])

    def neg(self, a: int) -> int:
        return int(self.NEG[a])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return int(self.INV[a])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc, base = 1, a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def coords(self, a: int) -> tuple[int, ...]:
        """F_p digits of an element in the modulus basis."""
        return tuple(int(x) for x in self._digits[a])

    def from_coords(self, vec) -> int:
        return sum(int(v % self.p) * self.p**i for i, v in enumerate(vec))

    def elements(self) -> range:
        return range(self.q)

    def random_sampler(self, seed: int = 0):
        rng = np.random.default_rng(seed)
        return lambda: int(rng.integers(0, self.q))

    def check_axioms(self, trials: int = 200, seed: int = 0) -> None:
        """Spot-check field axioms and x^q = x on random samples."""
        rnd = self.random_sampler(seed)
        for _ in range(trials):
            a, b, c = rnd(), rnd(), rnd()
            assert self.mul(a, self.add(b, c)) == self.add(self.mul(a, b), self.mul(a, c))
            assert self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
            assert self.pow(a, self.q) == a
            if a != 0:
                assert self.mul(a, self.inv(a)) == 1

    def __repr__(self):
        return f"FqField(p={self.p}, s={self.s})"

    def __hash__(self):
        return hash((self.p, self.s, self.modulus))


# ---------------------------------------------------------------------------
# generic extensions (tuple elements; small-scale use only)


class ExtField:
    """base[x]/(modulus); elements are tuples over the base field."""

    def __init__(self, base, modulus: tuple):
        if len(modulus) < 2 or modulus[-1] != base.one:
            raise ValueError("modulus must be monic of degree >= 1")
        if not is_irreducible(base, modulus):
            raise ValueError("modulus is reducible over the base field")
        self.base = base
        self.modulus = tuple(modulus)
        self.deg = len(modulus) - 1
        self.p = base.p
        self.order = base.order**self.deg
        self.zero = tuple([base.zero] * self.deg)
        self.one = tuple([base.one] + [base.zero] * (self.deg - 1))
        # reduction vectors for x^(deg+k), k = 0..deg-2
        red = [tuple(base.neg(c) for c in modulus[:-1])]
        for _ in range(self.deg - 2 + 1):
            prev = red[-1]
            shifted = [base.zero] + list(prev[:-1])
            top = prev[-1]
            red.append(
                tuple(
                    base.add(shifted[i], base.mul(top, red[0][i]))
                    for i in range(self.deg)
                )
            )
        self._red = red

    def gen(self) -> tuple:
        if self.deg == 1:
            return tuple(self.base.neg(c) for c in self.modulus[:-1])
        return tuple(
            [self.base.zero, self.base.one] + [self.base.zero] * (self.deg - 2)
        )

    def embed(self, a) -> tuple:
        return tuple([a] + [self.base.zero] * (self.deg - 1))

    def add(self, a: tuple, b: tuple) -> tuple:
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a: tuple, b: tuple) -> tuple:
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a: tuple) -> tuple:
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a: tuple, b: tuple) -> tuple:
        F = self.base
        n = self.deg
        prod = [F.zero] * (2 * n - 1)
        for i, x in enumerate(a):
            if x == F.zero:
                continue
            for j, y in enumerate(b):
                prod[i + j] = F.add(prod[i + j], F.mul(x, y))
        vec = prod[:n]
        for k in range(n - 1):
            c = prod[n + k]
            if c != F.zero:
                rk = self._red[k]
                vec = [F.add(vec[i], F.mul(c, rk[i])) for i in range(n)]
        return tuple(vec)

    def inv(self, a: tuple) -> tuple:
        if a == self.zero:
            raise ZeroDivisionError("inverse of 0")
        return self.pow(a, self.order - 2)

    def pow(self, a: tuple, e: int) -> tuple:
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc, base = self.one, a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def multiplicative_order(self, a: tuple) -> int:
        if a == self.zero:
            raise ValueError("0 has no multiplicative order")
        n = self.order - 1
        for prime, mult in _factorize(n).items():
            for _ in range(mult):
                if self.pow(a, n // prime) == self.one:
                    n //= prime
                else:
                    break
        return n

    def element_of_order(self, n: int, seed: int = 0) -> tuple:
        """Element of exact multiplicative order n (n must divide order-1)."""
        if (self.order - 1) % n != 0:
            raise ValueError(f"no element of order {n} in field of order {self.order}")
        rng = np.random.default_rng(seed)
        fac = _factorize(n)
        for _ in range(4096):
            a = self._random(rng)
            if a == self.zero:
                continue
            h = self.pow(a, (self.order - 1) // n)
            if all(self.pow(h, n // ell) != self.one for ell in fac):
                return h
        raise AssertionError("element-of-order search exhausted")  # pragma: no cover

    def _random(self, rng) -> tuple:
        if isinstance(self.base, FqField):
            return tuple(int(x) for x in rng.integers(0, self.base.order, self.deg))
        return tuple(self.base._random(rng) for _ in range(self.deg))

    def frobenius(self, a: tuple, power: int = 1) -> tuple:
        """a^(p^power)."""
        return self.pow(a, self.p**power)

    def __repr__(self):
        return f"ExtField(deg={self.deg} over {self.base!r})"

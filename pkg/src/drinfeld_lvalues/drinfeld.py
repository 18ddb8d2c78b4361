"""Drinfeld modules over A = F_q[t]: tau-polynomial actions, exponential and
logarithm coefficients as exact fractions, and the exponential's isometry
radius with a certified valuation tail bound.

A-polynomials are little-endian tuples of F_q codes.  Coefficients of the
exponential live in F_q(t) and are stored as reduced fractions together
with their infinity-adic valuations (v(num/den) = deg den - deg num); the
valuations drive the isometry-radius certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import backend
from .errors import TailNotCertified
from .fields import FqField

__all__ = ["DrinfeldModule", "TauPolynomial", "FracA", "phi_eval",
           "exp_coefficients", "log_coefficients", "isometry_radius"]

_GMUL1 = np.zeros((1, 1), dtype=np.uint16)


def _trim(a: tuple) -> tuple:
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def apoly_mul(F: FqField, a: tuple, b: tuple) -> tuple:
    """Product of A-polynomials (code tuples) via the array kernel."""
    if not a or not b:
        return ()
    arr = backend.zpoly_mul(
        np.ascontiguousarray(np.asarray(a, dtype=np.uint8)[:, None]),
        np.ascontiguousarray(np.asarray(b, dtype=np.uint8)[:, None]),
        len(a) + len(b) - 1,
        _GMUL1,
        F.MUL,
        F.ADD,
    )[:, 0]
    return _trim(tuple(int(x) for x in arr))


def apoly_add(F: FqField, a: tuple, b: tuple) -> tuple:
    n = max(len(a), len(b))
    av = np.zeros(n, dtype=np.uint8)
    bv = np.zeros(n, dtype=np.uint8)
    av[: len(a)] = a
    bv[: len(b)] = b
    return _trim(tuple(int(x) for x in F.ADD[av, bv]))


def apoly_neg(F: FqField, a: tuple) -> tuple:
    return tuple(int(F.NEG[c]) for c in a)


def apoly_divmod(F: FqField, a: tuple, b: tuple) -> tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError
    binv = F.inv(b[-1])
    r = np.zeros(max(len(a), 1), dtype=np.uint8)
    r[: len(a)] = a
    bv = np.asarray(b, dtype=np.uint8)
    n, m = len(a) - 1, len(b) - 1
    if n < m:
        return (), _trim(tuple(int(x) for x in r))
    q = np.zeros(n - m + 1, dtype=np.uint8)
    for k in range(n, m - 1, -1):
        c = int(r[k])
        if c:
            f = F.mul(binv, c)
            q[k - m] = f
            r[k - m : k + 1] = F.ADD[r[k - m : k + 1], F.NEG[F.MUL[f, bv]]]
    return (
        _trim(tuple(int(x) for x in q)),
        _trim(tuple(int(x) for x in r[:m])) if m > 0 else (),
    )


def apoly_gcd(F: FqField, a: tuple, b: tuple) -> tuple:
    while b:
        a, b = b, apoly_divmod(F, a, b)[1]
    if a and a[-1] != F.one:
        inv = F.inv(a[-1])
        a = tuple(F.mul(inv, c) for c in a)
    return a


def poly_qspread(F: FqField, a: tuple, qpow: int) -> tuple:
    """a(t)^(q^i) for a over F_q: coefficients are Frobenius-fixed, so the
    power just spreads exponents by q^i."""
    if not a:
        return ()
    out = [F.zero] * ((len(a) - 1) * qpow + 1)
    for k, c in enumerate(a):
        out[k * qpow] = c
    return tuple(out)


@dataclass(frozen=True)
class FracA:
    """Reduced fraction of F_q[t] polynomials, denominator monic."""

    F: FqField
    num: tuple
    den: tuple

    def __post_init__(self):
        if not self.den:
            raise ZeroDivisionError("zero denominator")
        num, den = self.num, self.den
        if not num:
            object.__setattr__(self, "den", (self.F.one,))
            return
        g = apoly_gcd(self.F, num, den)
        if len(g) > 1:
            num = apoly_divmod(self.F, num, g)[0]
            den = apoly_divmod(self.F, den, g)[0]
        lead = den[-1]
        if lead != self.F.one:
            inv = self.F.inv(lead)
            num = tuple(self.F.mul(inv, c) for c in num)
            den = tuple(self.F.mul(inv, c) for c in den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def of_poly(cls, F: FqField, a: tuple) -> "FracA":
        return cls(F, tuple(a), (F.one,))

    @classmethod
    def one(cls, F: FqField) -> "FracA":
        return cls(F, (F.one,), (F.one,))

    @classmethod
    def zero(cls, F: FqField) -> "FracA":
        return cls(F, (), (F.one,))

    def is_zero(self) -> bool:
        return not self.num

    def __add__(self, other: "FracA") -> "FracA":
        F = self.F
        num = apoly_add(
            F,
            apoly_mul(F, self.num, other.den),
            apoly_mul(F, other.num, self.den),
        )
        return FracA(F, num, apoly_mul(F, self.den, other.den))

    def __mul__(self, other: "FracA") -> "FracA":
        F = self.F
        return FracA(
            F, apoly_mul(F, self.num, other.num), apoly_mul(F, self.den, other.den)
        )

    def __neg__(self) -> "FracA":
        return FracA(self.F, apoly_neg(self.F, self.num), self.den)

    def divide_by(self, a: tuple) -> "FracA":
        return FracA(self.F, self.num, apoly_mul(self.F, self.den, a))

    def qpow(self, qexp: int) -> "FracA":
        """Raise to the power q^i (exponent spreading)."""
        return FracA(
            self.F,
            poly_qspread(self.F, self.num, qexp),
            poly_qspread(self.F, self.den, qexp),
        )

    def valuation(self) -> int | None:
        """Infinity-adic valuation (None for 0): deg den - deg num."""
        if self.is_zero():
            return None
        return (len(self.den) - 1) - (len(self.num) - 1)


@dataclass(frozen=True)
class TauPolynomial:
    """sum c_i tau^i with coefficients in F_q[t]; tau x = x^q tau."""

    F: FqField
    coeffs: tuple[tuple, ...]  # c_0, ..., c_d as A-polynomials

    def __post_init__(self):
        cs = list(self.coeffs)
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def tau_degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "TauPolynomial") -> "TauPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else ()
            b = other.coeffs[i] if i < len(other.coeffs) else ()
            out.append(apoly_add(self.F, a, b))
        return TauPolynomial(self.F, tuple(out))

    def compose(self, other: "TauPolynomial") -> "TauPolynomial":
        """Twisted product: (a tau^i)(b tau^j) = a b^(q^i) tau^(i+j)."""
        F = self.F
        q = F.q
        out = [() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)] or [()]
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                term = apoly_mul(F, a, poly_qspread(F, b, q**i))
                out[i + j] = apoly_add(F, out[i + j], term)
        return TauPolynomial(F, tuple(out))

    def __eq__(self, other) -> bool:
        return isinstance(other, TauPolynomial) and self.coeffs == other.coeffs


@dataclass(frozen=True)
class DrinfeldModule:
    """phi(t) = t + a_1 tau + ... + a_r tau^r with a_i in A, a_r != 0."""

    F: FqField
    a: tuple[tuple, ...]  # a_1, ..., a_r

    def __post_init__(self):
        a = tuple(tuple(c) for c in self.a)
        if not a or not a[-1]:
            raise ValueError("rank must be >= 1 with a_r != 0")
        object.__setattr__(self, "a", a)

    @classmethod
    def carlitz(cls, F: FqField) -> "DrinfeldModule":
        return cls(F, ((F.one,),))

    @property
    def rank(self) -> int:
        return len(self.a)

    def phi_t(self) -> TauPolynomial:
        t_poly = (self.F.zero, self.F.one)
        return TauPolynomial(self.F, (t_poly,) + self.a)

    def max_coeff_degree(self) -> int:
        return max(len(c) - 1 for c in self.a)

    def is_carlitz(self) -> bool:
        return self.a == ((self.F.one,),)


def phi_eval(E: DrinfeldModule, a: tuple) -> TauPolynomial:
    """The ring morphism phi on an arbitrary A-element, by Horner in phi(t)."""
    F = E.F
    phit = E.phi_t()
    acc = TauPolynomial(F, ((),))
    for k in range(len(a) - 1, -1, -1):
        acc = acc.compose(phit)
        const = (a[k],) if a[k] != F.zero else ()
        acc = acc + TauPolynomial(F, (const,))
    return acc


@lru_cache(maxsize=None)
def _exp_coeff_cache(E: DrinfeldModule, k: int) -> FracA:
    F = E.F
    q = F.q
    if k == 0:
        return FracA.one(F)
    # e_k (t^(q^k) - t) = sum_{i=1}^{min(r,k)} a_i e_{k-i}^(q^i)
    total = FracA.zero(F)
    for i in range(1, min(E.rank, k) + 1):
        term = _exp_coeff_cache(E, k - i).qpow(q**i)
        term = term * FracA.of_poly(F, E.a[i - 1])
        total = total + term
    denom_extra = _tqk_minus_t(F, k)
    return total.divide_by(denom_extra)


def _tqk_minus_t(F: FqField, k: int) -> tuple:
    out = [F.zero] * (F.q**k + 1)
    out[1] = F.neg(F.one)
    out[F.q**k] = F.add(out[F.q**k], F.one)
    return tuple(out)


@dataclass(frozen=True)
class ExpSeries:
    """Exponential coefficients e_0..e_kmax with their valuations."""

    E: DrinfeldModule
    coeffs: tuple[FracA, ...]

    @property
    def kmax(self) -> int:
        return len(self.coeffs) - 1

    def valuations(self) -> list[int | None]:
        return [c.valuation() for c in self.coeffs]


def exp_coefficients(E: DrinfeldModule, k_max: int) -> ExpSeries:
    """e_0 = 1 and the recursion from exp(t z) = phi(t)(exp z)."""
    return ExpSeries(E, tuple(_exp_coeff_cache(E, k) for k in range(k_max + 1)))


def log_coefficients(E: DrinfeldModule, k_max: int) -> tuple[FracA, ...]:
    """Compositional inverse: l_k = -sum_{i<k} l_i e_{k-i}^(q^i)."""
    F = E.F
    q = F.q
    es = exp_coefficients(E, k_max).coeffs
    ls: list[FracA] = [FracA.one(F)]
    for k in range(1, k_max + 1):
        total = FracA.zero(F)
        for i in range(k):
            total = total + ls[i] * es[k - i].qpow(q**i)
        ls.append(-total)
    return tuple(ls)


def compose_qseries(F: FqField, outer: tuple[FracA, ...], inner: tuple[FracA, ...], k_max: int) -> list[FracA]:
    """Coefficients of outer(inner(z)) through z^(q^k_max) for q-power series."""
    q = F.q
    out = []
    for k in range(k_max + 1):
        total = FracA.zero(F)
        for i in range(min(k, len(outer) - 1) + 1):
            j = k - i
            if j < len(inner):
                total = total + outer[i] * inner[j].qpow(q**i)
        out.append(total)
    return out


def isometry_radius(E: DrinfeldModule, ell: int, k_max: int | None = None) -> int:
    """Least i0 >= max(ell, 1) such that exp is a bijective isometry on every
    ball t^-i O (i >= i0): requires v(e_k) > -i (q^k - 1) for all k >= 1.

    Explicit coefficients are used through k* (the first index with
    q^(k*+1) >= max coefficient degree); beyond k* the recursion's
    valuation bound v(e_k) >= B q^k propagates a window bound B to the
    whole tail.  Raises TailNotCertified when k_max caps the window.
    """
    q = E.F.q
    D = E.max_coeff_degree()
    r = E.rank

    kstar = 0
    while q ** (kstar + 1) < max(D, 1):
        kstar += 1
    kstar = max(kstar, r)
    if k_max is not None and k_max < kstar:
        raise TailNotCertified(f"k_max={k_max} below certification window {kstar}")
    vals = exp_coefficients(E, kstar).valuations()

    B = None
    for k in range(max(1, kstar - r + 1), kstar + 1):
        if vals[k] is None:
            continue  # zero coefficient: no constraint from this slot
        b = Fraction(vals[k], q**k)
        B = b if B is None else min(B, b)
    if B is None:
        B = Fraction(0)

    need = 1
    for k in range(1, kstar + 1):
        if vals[k] is None:
            continue
        # v(e_k) > -i (q^k - 1)  <=>  i > -v / (q^k - 1)
        bound = Fraction(-vals[k], q**k - 1)
        while need <= bound:
            need += 1
    if B < 0:
        bound = -B * Fraction(q ** (kstar + 1), q ** (kstar + 1) - 1)
        while need <= bound:
            need += 1
    return max(need, ell, 1)

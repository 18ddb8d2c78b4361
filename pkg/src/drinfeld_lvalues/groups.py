"""Finite abelian groups as mixed-radix integer codes.

A group is a tuple of cyclic factor orders; the element with exponent
vector (e_1, .., e_k) has code sum(e_j * radix_j).  Multiplication tables
are dense uint16 arrays so group-ring kernels can index them directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np

__all__ = ["AbelianGroup", "split_sylow", "abelian_structure"]


@lru_cache(maxsize=None)
def _tables(orders: tuple[int, ...]):
    n = 1
    for m in orders:
        n *= m
    radix = []
    r = 1
    for m in orders:
        radix.append(r)
        r *= m
    exps = np.zeros((n, len(orders)), dtype=np.int64)
    for c in range(n):
        v = c
        for j, m in enumerate(orders):
            exps[c, j] = v % m
            v //= m
    gmul = np.zeros((n, n), dtype=np.uint16)
    ginv = np.zeros(n, dtype=np.uint16)
    for a in range(n):
        ea = exps[a]
        ginv[a] = sum(((-ea[j]) % orders[j]) * radix[j] for j in range(len(orders)))
        for b in range(n):
            eb = exps[b]
            gmul[a, b] = sum(
                ((ea[j] + eb[j]) % orders[j]) * radix[j] for j in range(len(orders))
            )
    for t in (exps, gmul, ginv):
        t.setflags(write=False)
    return n, tuple(radix), exps, gmul, ginv


@dataclass(frozen=True)
class AbelianGroup:
    """Direct product of cyclic groups Z/m_1 x ... x Z/m_k."""

    orders: tuple[int, ...] = ()

    def __post_init__(self):
        orders = tuple(int(m) for m in self.orders if int(m) > 1)
        object.__setattr__(self, "orders", orders)
        n, radix, exps, gmul, ginv = _tables(orders)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "_radix", radix)
        object.__setattr__(self, "_exps", exps)
        object.__setattr__(self, "gmul", gmul)
        object.__setattr__(self, "ginv", ginv)

    def __hash__(self):
        return hash(self.orders)

    # --- element coding ---------------------------------------------------
    def exps(self, code: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self._exps[code])

    def code(self, exps) -> int:
        return sum(
            (int(e) % m) * r for e, m, r in zip(exps, self.orders, self._radix)
        )

    def mul(self, a: int, b: int) -> int:
        return int(self.gmul[a, b])

    def inv(self, a: int) -> int:
        return int(self.ginv[a])

    def pow(self, a: int, e: int) -> int:
        e = e % self.exponent() if self.n > 1 else 0
        acc = 0
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def order_of(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def exponent(self) -> int:
        e = 1
        for m in self.orders:
            e = e * m // np.gcd(e, m)
        return int(e)

    def elements(self) -> range:
        return range(self.n)

    def subgroup(self, gens) -> tuple[int, ...]:
        """Sorted codes of the subgroup generated by the given elements."""
        seen = {0}
        frontier = [0]
        gens = list(gens)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return tuple(sorted(seen))

    def generators(self) -> tuple[int, ...]:
        return tuple(self._radix[j] * 1 for j in range(len(self.orders)))

    def __repr__(self):
        if not self.orders:
            return "AbelianGroup(trivial)"
        return "AbelianGroup(" + " x ".join(f"Z/{m}" for m in self.orders) + ")"


@dataclass(frozen=True)
class SylowSplit:
    """G = P x Delta with translation tables between the codings."""

    G: AbelianGroup
    P: AbelianGroup
    D: AbelianGroup
    to_pd: np.ndarray = field(repr=False)  # (nG, 2) -> (P code, D code)
    from_pd: np.ndarray = field(repr=False)  # (nP, nD) -> G code


def split_sylow(G: AbelianGroup, p: int) -> SylowSplit:
    """Split G into its p-Sylow subgroup P and prime-to-p complement Delta."""
    p_orders, d_orders = [], []
    factor_split = []  # per cyclic factor: (p-part m_p, coprime part m_d)
    for m in G.orders:
        mp = 1
        while m % p == 0:
            mp *= p
            m //= p
        factor_split.append((mp, m))
        if mp > 1:
            p_orders.append(mp)
        if m > 1:
            d_orders.append(m)
    P = AbelianGroup(tuple(p_orders))
    D = AbelianGroup(tuple(d_orders))
    to_pd = np.zeros((G.n, 2), dtype=np.int64)
    from_pd = np.zeros((P.n, D.n), dtype=np.int64)
    for c in G.elements():
        es = G.exps(c)
        pe, de = [], []
        for e, (mp, md) in zip(es, factor_split):
            if mp > 1:
                pe.append(e % mp)
            if md > 1:
                de.append(e % md)
        pc, dc = P.code(pe), D.code(de)
        to_pd[c] = (pc, dc)
        from_pd[pc, dc] = c
    to_pd.setflags(write=False)
    from_pd.setflags(write=False)
    return SylowSplit(G, P, D, to_pd, from_pd)


def abelian_structure(elements, mul, identity):
    """Cyclic decomposition of a finite abelian group given by a mult table.

    Returns (group, iso) where group is an AbelianGroup and iso maps each
    input element to its code.  Backtracking basis search; intended for the
    small unit groups (A/f)^* that arise as Galois groups.
    """
    elems = list(elements)
    n = len(elems)
    idx = {e: i for i, e in enumerate(elems)}
    table = [[idx[mul(a, b)] for b in elems] for a in elems]
    e0 = idx[identity]

    def ord_of(i):
        k, x = 1, i
        while x != e0:
            x = table[x][i]
            k += 1
        return k

    orders = [ord_of(i) for i in range(n)]

    def span(basis):
        """Map element -> exponent vector, or None if not a direct product."""
        got = {}
        for ev in product(*[range(orders[b]) for b in basis]):
            x = e0
            for b, e in zip(basis, ev):
                for _ in range(e):
                    x = table[x][b]
            if x in got:
                return None
            got[x] = ev
        return got

    def extend(basis, covered):
        if len(covered) == n:
            return basis
        candidates = sorted(
            (i for i in range(n) if i not in covered), key=lambda i: -orders[i]
        )
        for cand in candidates:
            trial = basis + [cand]
            got = span(trial)
            if got is not None and len(got) == len(covered) * orders[cand]:
                res = extend(trial, set(got))
                if res is not None:
                    return res
        return None

    basis = extend([], {e0})
    if basis is None:
        raise AssertionError("abelian basis search failed")
    group = AbelianGroup(tuple(orders[b] for b in basis))
    decomp = span(basis)
    iso = {elems[x]: group.code(ev) for x, ev in decomp.items()}
    return group, iso

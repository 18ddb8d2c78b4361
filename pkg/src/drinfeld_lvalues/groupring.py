"""The group ring R = F_q[G] for finite abelian G.

Elements are (nG,) uint8 arrays of field codes indexed by group-element
code.  The :class:`GroupRing` object carries the field and group tables,
the Sylow split G = P x Delta, the primitive idempotents of R (computed in
a splitting field and descended to F_q), and the nilpotency index of the
radical; all cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import backend
from .errors import NotAUnit, WildInertia
from .fields import ExtField, FqField
from .groups import AbelianGroup, SylowSplit, split_sylow

__all__ = ["GroupRing", "GRElement", "CharacterIdempotent"]


@dataclass(frozen=True)
class CharacterIdempotent:
    """Orbit-sum idempotent e for a class of Delta-characters.

    ``orbit`` holds the exponent tuples of the characters in the Frobenius
    orbit (lexicographically least first); ``e`` is the idempotent as a raw
    coefficient array in F_q[G], supported on Delta.
    """

    orbit: tuple[tuple[int, ...], ...]
    e: np.ndarray

    @property
    def representative(self) -> tuple[int, ...]:
        return self.orbit[0]


class GroupRing:
    """R = F_q[G] with cached structure."""

    def __init__(self, field: FqField, group: AbelianGroup):
        self.F = field
        self.G = group
        self.nG = group.n

    def __repr__(self):
        return f"GroupRing({self.F!r}, {self.G!r})"

    def __eq__(self, other):
        return (
            isinstance(other, GroupRing)
            and self.F == other.F
            and self.G == other.G
        )

    def __hash__(self):
        return hash((self.F, self.G))

    # --- raw array helpers --------------------------------------------------
    def zero(self) -> np.ndarray:
        return np.zeros(self.nG, dtype=np.uint8)

    def one(self) -> np.ndarray:
        c = self.zero()
        c[0] = 1
        return c

    def from_group(self, g: int) -> np.ndarray:
        c = self.zero()
        c[g] = 1
        return c

    def from_scalar(self, a: int) -> np.ndarray:
        c = self.zero()
        c[0] = a
        return c

    def add(self, a, b) -> np.ndarray:
        return self.F.ADD[a, b]

    def sub(self, a, b) -> np.ndarray:
        return self.F.ADD[a, self.F.NEG[b]]

    def neg(self, a) -> np.ndarray:
        return self.F.NEG[a]

    def smul(self, c: int, a) -> np.ndarray:
        return self.F.MUL[c, a]

    def mul(self, a, b) -> np.ndarray:
        return backend.gr_mul(
            np.ascontiguousarray(a),
            np.ascontiguousarray(b),
            self.G.gmul,
            self.F.MUL,
            self.F.ADD,
        )

    def gact(self, g: int, a) -> np.ndarray:
        """Multiplication by the group element g (a coordinate permutation)."""
        out = self.zero()
        out[self.G.gmul[g]] = a
        return out

    def pow(self, a, e: int) -> np.ndarray:
        acc, base = self.one(), np.asarray(a)
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def aug(self, a) -> int:
        """Ring augmentation s_G: sum of all coefficients."""
        acc = 0
        for g in range(self.nG):
            acc = self.F.add(acc, int(a[g]))
        return acc

    def random(self, rng) -> np.ndarray:
        return rng.integers(0, self.F.q, self.nG).astype(np.uint8)

    # --- Sylow split and semisimple quotient ---------------------------------
    @cached_property
    def sylow(self) -> SylowSplit:
        return split_sylow(self.G, self.F.p)

    @cached_property
    def delta_ring(self) -> "GroupRing":
        return GroupRing(self.F, self.sylow.D)

    def aug_p(self, a) -> np.ndarray:
        """Image under the P-augmentation R -> F_q[Delta] (sum over P)."""
        sp = self.sylow
        out = np.zeros(sp.D.n, dtype=np.uint8)
        for g in range(self.nG):
            if a[g]:
                d = sp.to_pd[g, 1]
                out[d] = self.F.add(int(out[d]), int(a[g]))
        return out

    def lift_delta(self, ad) -> np.ndarray:
        """Embed an F_q[Delta] element into R (P-component = identity)."""
        sp = self.sylow
        out = self.zero()
        for d in range(sp.D.n):
            out[sp.from_pd[0, d]] = ad[d]
        return out

    # --- units ---------------------------------------------------------------
    def _delta_mult_matrix(self, ad) -> np.ndarray:
        """F_q matrix of multiplication by ad on F_q[Delta]."""
        D = self.sylow.D
        m = np.zeros((D.n, D.n), dtype=np.uint8)
        cols = np.arange(D.n)
        for d1 in range(D.n):
            if ad[d1]:
                # row gmul[d1, d2], column d2; rows distinct per fixed d2
                m[D.gmul[d1], cols] = ad[d1]
        return m

    def is_unit(self, a) -> bool:
        """a is a unit iff its image in the semisimple quotient F_q[Delta] is."""
        ad = self.aug_p(a)
        m = self._delta_mult_matrix(ad)
        piv = backend.echelon(m, self.F.MUL, self.F.ADD, self.F.NEG, self.F.INV)
        rank = int((piv >= 0).sum())
        return rank == self.sylow.D.n

    def _delta_inv(self, ad) -> np.ndarray:
        """Inverse in the semisimple ring F_q[Delta] by linear solve."""
        D = self.sylow.D
        m = np.concatenate(
            [self._delta_mult_matrix(ad), np.eye(D.n, dtype=np.uint8)], axis=1
        )
        piv = backend.echelon(m, self.F.MUL, self.F.ADD, self.F.NEG, self.F.INV)
        ok = int((piv >= 0).sum()) == D.n and all(
            piv[i] == i for i in range(D.n)
        )
        if not ok:
            raise NotAUnit("element has a vanishing character component")
        # reduced echelon of [M | I] is [I | M^-1]; inverse element = M^-1 e_1
        return m[:, D.n].copy()

    def inv(self, a) -> np.ndarray:
        """Inverse of a unit: semisimple inverse lifted, then a finite
        geometric series on the nilpotent part (I_P is nilpotent)."""
        ad = self.aug_p(a)
        u = self.lift_delta(self._delta_inv(ad))
        # a*u = 1 - nu with nu in the radical; invert by geometric series
        nu = self.sub(self.one(), self.mul(np.asarray(a), u))
        acc = self.one()
        term = nu
        for _ in range(self.nilpotency_index + 1):
            if not term.any():
                break
            acc = self.add(acc, term)
            term = self.mul(term, nu)
        else:
            raise NotAUnit("nilpotent part did not terminate")
        out = self.mul(u, acc)
        assert (self.mul(np.asarray(a), out) == self.one()).all()
        return out

    @cached_property
    def nilpotency_index(self) -> int:
        """Exact least k with I_P^k = 0, by iterated subspace products."""
        P = self.sylow.P
        if P.n == 1:
            return 1
        gens = []
        for g in P.generators():
            gg = self.sylow.from_pd[g, 0]
            gens.append(self.sub(self.from_group(int(gg)), self.one()))
        basis = _echelon_basis(self, gens)
        k = 1
        current = basis
        while current:
            nxt = []
            for v in current:
                for w in gens:
                    nxt.append(self.mul(v, w))
            current = _echelon_basis(self, nxt)
            k += 1
            if k > self.nG + 1:
                raise AssertionError("nilpotency index exceeded group order")
        return k

    # --- idempotents ----------------------------------------------------------
    @cached_property
    def idempotents(self) -> tuple[CharacterIdempotent, ...]:
        """Primitive idempotents of R, indexed by Frobenius orbits of
        Delta-characters, computed in the splitting field and descended."""
        return tuple(primitive_idempotents(self.delta_ring, lift_to=self))

    def component_unit_inv(self, e: np.ndarray, x) -> np.ndarray:
        """Inverse of x inside the component ring eR (x = e*x assumed)."""
        full = self.add(x, self.sub(self.one(), e))
        return self.mul(e, self.inv(full))

    def is_component_unit(self, e: np.ndarray, x) -> bool:
        return self.is_unit(self.add(x, self.sub(self.one(), e)))

    def is_nilpotent(self, x) -> bool:
        y = np.asarray(x)
        for _ in range(self.nG.bit_length() + 2):
            if not y.any():
                return True
            y = self.mul(y, y)
        return not y.any()

    def inertia_idempotent(self, inertia_codes) -> np.ndarray:
        """e_v = (1/|I|) sum_{s in I} s; undefined when p divides |I|."""
        codes = tuple(inertia_codes)
        if len(codes) % self.F.p == 0:
            raise WildInertia(f"p = {self.F.p} divides |I| = {len(codes)}")
        scale = self.F.inv(len(codes) % self.F.p)
        out = self.zero()
        for g in codes:
            out[g] = scale
        return out


def _echelon_basis(R: GroupRing, vecs) -> list[np.ndarray]:
    if not vecs:
        return []
    rows = np.array([np.asarray(v, dtype=np.uint8) for v in vecs])
    piv = backend.echelon(rows, R.F.MUL, R.F.ADD, R.F.NEG, R.F.INV)
    return [rows[i].copy() for i in range(len(rows)) if piv[i] >= 0]


def primitive_idempotents(RD: GroupRing, lift_to: GroupRing | None = None):
    """Primitive idempotents of F_q[Delta], p coprime to |Delta|.

    Characters take values in the splitting field F_{q^m}, m the order of q
    mod exponent(Delta); orbit sums are verified to have coefficients in F_q
    and descended.  Characters in an orbit are ordered with the
    lexicographically least exponent tuple as representative.
    """
    F, D = RD.F, RD.G
    if D.n % F.p == 0:
        raise WildInertia("p divides |Delta|; semisimple decomposition undefined")
    target = lift_to if lift_to is not None else RD
    if D.n == 1:
        one = target.one()
        return [CharacterIdempotent(orbit=((),), e=one)]

    expo = D.exponent()
    m = 1
    while pow(F.q, m, expo) != 1:
        m += 1
    # splitting field L = F_q[y]/(h), h irreducible of degree m
    L = ExtField(F, _irreducible_over(F, m))
    zeta = L.element_of_order(expo) if expo > 1 else L.one
    # roots of unity per cyclic factor
    zs = [L.pow(zeta, expo // mj) for mj in D.orders]

    # character chi_a(delta) = prod zs_j^(a_j * e_j)
    def chi_val(a, g):
        es = D.exps(g)
        out = L.one
        for zj, aj, ej in zip(zs, a, es):
            out = L.mul(out, L.pow(zj, aj * ej))
        return out

    # Frobenius orbits on character exponent tuples: a -> q*a
    all_chars = sorted(
        {tuple(x) for x in np.ndindex(*D.orders)} if D.orders else {()}
    )
    seen = set()
    orbits = []
    for a in all_chars:
        if a in seen:
            continue
        orb = []
        b = a
        while b not in seen:
            seen.add(b)
            orb.append(b)
            b = tuple((F.q * x) % mj for x, mj in zip(b, D.orders))
        orbits.append(tuple(sorted(orb)))

    inv_count = F.inv(D.n % F.p)
    out = []
    for orb in orbits:
        coeffs = np.zeros(D.n, dtype=np.uint8)
        for g in range(D.n):
            ginv = D.inv(g)
            total = L.zero
            for a in orb:
                total = L.add(total, chi_val(a, ginv))
            # descend: value must lie in F_q = first coordinate of L
            assert all(
                c == F.zero for c in total[1:]
            ), "character orbit sum failed to descend to F_q"
            coeffs[g] = F.mul(inv_count, total[0])
        if lift_to is not None:
            e = lift_to.lift_delta(coeffs)
        else:
            e = coeffs
        out.append(CharacterIdempotent(orbit=orb, e=e))
    return out


def _irreducible_over(F: FqField, deg: int) -> tuple:
    """Least monic irreducible of the given degree over F_q (code order)."""
    from .fields import is_irreducible

    for code in range(F.q**deg):
        coeffs = [(code // F.q**i) % F.q for i in range(deg)] + [1]
        f = tuple(coeffs)
        if is_irreducible(F, f):
            return f
    raise AssertionError("no irreducible polynomial found")


@dataclass(frozen=True)
class GRElement:
    """Immutable wrapper for an element of F_q[G]."""

    ring: GroupRing
    c: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.c, dtype=np.uint8).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "c", arr)

    def __add__(self, other):
        return GRElement(self.ring, self.ring.add(self.c, other.c))

    def __sub__(self, other):
        return GRElement(self.ring, self.ring.sub(self.c, other.c))

    def __mul__(self, other):
        return GRElement(self.ring, self.ring.mul(self.c, other.c))

    def __neg__(self):
        return GRElement(self.ring, self.ring.neg(self.c))

    def __eq__(self, other):
        return isinstance(other, GRElement) and (self.c == other.c).all()

    def inverse(self):
        return GRElement(self.ring, self.ring.inv(self.c))

    def is_unit(self) -> bool:
        return self.ring.is_unit(self.c)

    def augmentation(self) -> int:
        return self.ring.aug(self.c)

    def canonical(self):
        """Canonical textual form: sorted (group exponents, field coords)."""
        G, F = self.ring.G, self.ring.F
        pairs = []
        for g in range(G.n):
            if self.c[g]:
                pairs.append([list(G.exps(g)), list(F.coords(int(self.c[g])))])
        return pairs

    def __repr__(self):
        return f"GR({self.canonical()})"

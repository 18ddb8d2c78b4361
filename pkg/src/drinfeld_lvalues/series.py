"""Polynomials over R = F_q[G] and truncated Laurent series in 1/t.

A Laurent element stores its top exponent ``vtop`` and a precision ``prec``:
coefficients are exact for all exponents >= -prec and unknown below.  The
coefficient array runs from t^vtop down to t^-prec.  Binary operations
propagate the correct output precision (products lose precision through the
partner's top exponent, as usual for truncated series).

Monicity is componentwise over the character-class idempotents of R:
an element is monic when every component lies in t^n(1 + t^-1 O[[t^-1]]).
``monic_decompose`` realizes the unit-group splitting into monic times
polynomial unit by Weierstrass preparation over the local component rings,
iterating division on the nilpotent filtration of the augmentation ideal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import DegreeMismatch, NotAUnit, PrecisionLoss
from .groupring import GroupRing

__all__ = ["RPoly", "RLaurent", "monic_test", "monic_decompose"]


@dataclass(frozen=True)
class RPoly:
    """Element of R[t]; c[k] is the t^k coefficient, trailing zeros trimmed."""

    ring: GroupRing
    c: np.ndarray  # (deg+1, nG) uint8

    def __post_init__(self):
        arr = np.asarray(self.c, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[1] != self.ring.nG:
            raise ValueError("bad coefficient shape")
        if arr.shape[0] == 0:
            arr = np.zeros((1, self.ring.nG), dtype=np.uint8)
        last = arr.shape[0]
        while last > 1 and not arr[last - 1].any():
            last -= 1
        arr = arr[:last].copy()
        arr.setflags(write=False)
        object.__setattr__(self, "c", arr)

    # --- construction -------------------------------------------------------
    @classmethod
    def zero(cls, ring: GroupRing) -> "RPoly":
        return cls(ring, np.zeros((1, ring.nG), dtype=np.uint8))

    @classmethod
    def one(cls, ring: GroupRing) -> "RPoly":
        c = np.zeros((1, ring.nG), dtype=np.uint8)
        c[0, 0] = 1
        return cls(ring, c)

    @classmethod
    def t_power(cls, ring: GroupRing, k: int) -> "RPoly":
        c = np.zeros((k + 1, ring.nG), dtype=np.uint8)
        c[k, 0] = 1
        return cls(ring, c)

    @classmethod
    def from_scalar_poly(cls, ring: GroupRing, a) -> "RPoly":
        """Lift an F_q[t] polynomial (sequence of field codes) into R[t]."""
        a = list(a) or [0]
        c = np.zeros((len(a), ring.nG), dtype=np.uint8)
        c[:, 0] = a
        return cls(ring, c)

    @classmethod
    def from_gr(cls, ring: GroupRing, x) -> "RPoly":
        return cls(ring, np.asarray(x, dtype=np.uint8)[None, :])

    # --- basic ops ------------------------------------------------------------
    @property
    def deg(self) -> int:
        """Degree in t; the zero polynomial reports -1."""
        if self.c.shape[0] == 1 and not self.c[0].any():
            return -1
        return self.c.shape[0] - 1

    def is_zero(self) -> bool:
        return self.deg == -1

    def __add__(self, other: "RPoly") -> "RPoly":
        n = max(self.c.shape[0], other.c.shape[0])
        out = np.zeros((n, self.ring.nG), dtype=np.uint8)
        out[: self.c.shape[0]] = self.c
        out[: other.c.shape[0]] = self.ring.add(
            out[: other.c.shape[0]], other.c
        )
        return RPoly(self.ring, out)

    def __neg__(self) -> "RPoly":
        return RPoly(self.ring, self.ring.neg(self.c))

    def __sub__(self, other: "RPoly") -> "RPoly":
        return self + (-other)

    def __mul__(self, other: "RPoly") -> "RPoly":
        R = self.ring
        nz = self.c.shape[0] + other.c.shape[0] - 1
        out = backend.zpoly_mul(
            np.ascontiguousarray(self.c),
            np.ascontiguousarray(other.c),
            nz,
            R.G.gmul,
            R.F.MUL,
            R.F.ADD,
        )
        return RPoly(R, out)

    def scale(self, x) -> "RPoly":
        """Multiply by a group-ring element."""
        return self * RPoly.from_gr(self.ring, x)

    def shift(self, k: int) -> "RPoly":
        """Multiply by t^k, k >= 0."""
        out = np.zeros((self.c.shape[0] + k, self.ring.nG), dtype=np.uint8)
        out[k:] = self.c
        return RPoly(self.ring, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RPoly)
            and self.c.shape == other.c.shape
            and (self.c == other.c).all()
        )

    def coeff(self, k: int) -> np.ndarray:
        if 0 <= k < self.c.shape[0]:
            return self.c[k]
        return self.ring.zero()

    def leading(self) -> np.ndarray:
        return self.c[-1]

    def is_monic_poly(self) -> bool:
        """Leading coefficient is 1 in R (sufficient for monic sizes)."""
        return self.deg >= 0 and (self.leading() == self.ring.one()).all()

    def eval_gr(self, x) -> np.ndarray:
        """Evaluate at a group-ring element (Horner)."""
        R = self.ring
        acc = R.zero()
        for k in range(self.c.shape[0] - 1, -1, -1):
            acc = R.add(R.mul(acc, np.asarray(x)), self.c[k])
        return acc

    def to_laurent(self, prec: int) -> "RLaurent":
        if self.is_zero():
            return RLaurent.zero(self.ring, prec)
        arr = np.zeros((self.deg + prec + 1, self.ring.nG), dtype=np.uint8)
        for k in range(self.deg + 1):
            arr[self.deg - k] = self.c[k]
        return RLaurent(self.ring, self.deg, prec, arr)

    def divmod_monic(self, d: "RPoly") -> tuple["RPoly", "RPoly"]:
        """Division with remainder by a polynomial with unit leading
        coefficient."""
        R = self.ring
        if d.is_zero():
            raise ZeroDivisionError
        lead_inv = R.inv(d.leading())
        rem = self.c.copy()
        n, m = rem.shape[0] - 1, d.deg
        if n < m:
            return RPoly.zero(R), self
        qc = np.zeros((n - m + 1, R.nG), dtype=np.uint8)
        for k in range(n, m - 1, -1):
            f = R.mul(lead_inv, rem[k])
            if f.any():
                qc[k - m] = f
                for i in range(m + 1):
                    rem[k - m + i] = R.sub(rem[k - m + i], R.mul(f, d.c[i]))
        return RPoly(R, qc), RPoly(R, rem[:m] if m > 0 else rem[:1] * 0)

    def canonical(self):
        from .groupring import GRElement

        return [GRElement(self.ring, self.c[k]).canonical() for k in range(self.c.shape[0])]


@dataclass(frozen=True)
class RLaurent:
    """Truncated Laurent element of F_q((1/t))[G].

    Exact for exponents >= -prec; c[k] is the coefficient of t^(vtop-k).
    The zero-to-precision element has vtop = -prec - 1 and an empty array.
    """

    ring: GroupRing
    vtop: int
    prec: int
    c: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.c, dtype=np.uint8)
        vtop = self.vtop
        # trim exact leading zeros
        while arr.shape[0] > 0 and vtop >= -self.prec and not arr[0].any():
            arr = arr[1:]
            vtop -= 1
        if vtop < -self.prec:
            vtop = -self.prec - 1
            arr = arr[:0]
        expected = vtop + self.prec + 1
        if arr.shape[0] != expected:
            raise ValueError(
                f"coefficient array length {arr.shape[0]} != vtop+prec+1 = {expected}"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "c", arr)
        object.__setattr__(self, "vtop", vtop)

    # --- construction ---------------------------------------------------------
    @classmethod
    def zero(cls, ring: GroupRing, prec: int) -> "RLaurent":
        return cls(ring, -prec - 1, prec, np.zeros((0, ring.nG), dtype=np.uint8))

    @classmethod
    def one(cls, ring: GroupRing, prec: int) -> "RLaurent":
        c = np.zeros((prec + 1, ring.nG), dtype=np.uint8)
        c[0, 0] = 1
        return cls(ring, 0, prec, c)

    @classmethod
    def t_power(cls, ring: GroupRing, k: int, prec: int) -> "RLaurent":
        c = np.zeros((k + prec + 1, ring.nG), dtype=np.uint8)
        c[0, 0] = 1
        return cls(ring, k, prec, c)

    @classmethod
    def from_coeff_map(cls, ring: GroupRing, coeffs: dict[int, np.ndarray], prec: int):
        """Build from a map exponent -> group-ring coefficient."""
        live = {e: v for e, v in coeffs.items() if e >= -prec and np.asarray(v).any()}
        if not live:
            return cls.zero(ring, prec)
        vtop = max(live)
        arr = np.zeros((vtop + prec + 1, ring.nG), dtype=np.uint8)
        for e, v in live.items():
            arr[vtop - e] = v
        return cls(ring, vtop, prec, arr)

    def is_zero(self) -> bool:
        return self.c.shape[0] == 0

    def coeff(self, e: int) -> np.ndarray:
        """Coefficient of t^e (must be within the exact range)."""
        if e < -self.prec:
            raise PrecisionLoss(f"coefficient of t^{e} below precision {self.prec}")
        if e > self.vtop:
            return self.ring.zero()
        return self.c[self.vtop - e]

    # --- arithmetic -------------------------------------------------------------
    def truncate(self, prec: int) -> "RLaurent":
        if prec > self.prec:
            raise PrecisionLoss(f"cannot refine precision {self.prec} to {prec}")
        if prec == self.prec:
            return self
        if self.is_zero() or self.vtop < -prec:
            return RLaurent.zero(self.ring, prec)
        return RLaurent(self.ring, self.vtop, prec, self.c[: self.vtop + prec + 1])

    def __add__(self, other: "RLaurent") -> "RLaurent":
        R = self.ring
        prec = min(self.prec, other.prec)
        vtop = max(self.vtop, other.vtop, -prec - 1 + 1)
        n = vtop + prec + 1
        out = np.zeros((n, R.nG), dtype=np.uint8)
        for src in (self, other):
            if src.is_zero():
                continue
            off = vtop - src.vtop
            seg = src.c[: n - off if n - off < src.c.shape[0] else src.c.shape[0]]
            out[off : off + seg.shape[0]] = R.add(out[off : off + seg.shape[0]], seg)
        return RLaurent(R, vtop, prec, out)

    def __neg__(self) -> "RLaurent":
        if self.is_zero():
            return self
        return RLaurent(self.ring, self.vtop, self.prec, self.ring.neg(self.c))

    def __sub__(self, other: "RLaurent") -> "RLaurent":
        return self + (-other)

    def __mul__(self, other: "RLaurent") -> "RLaurent":
        R = self.ring
        if self.is_zero() or other.is_zero():
            return RLaurent.zero(
                R, min(self.prec - other.vtop, other.prec - self.vtop)
            )
        prec = min(self.prec - other.vtop, other.prec - self.vtop)
        vtop = self.vtop + other.vtop
        n = vtop + prec + 1
        if n <= 0:
            return RLaurent.zero(R, prec)
        out = backend.zpoly_mul(
            np.ascontiguousarray(self.c),
            np.ascontiguousarray(other.c),
            n,
            R.G.gmul,
            R.F.MUL,
            R.F.ADD,
        )
        return RLaurent(R, vtop, prec, out)

    def scale_gr(self, x) -> "RLaurent":
        if self.is_zero():
            return self
        R = self.ring
        xr = np.asarray(x, dtype=np.uint8)[None, :]
        out = backend.zpoly_mul(
            np.ascontiguousarray(self.c), xr, self.c.shape[0], R.G.gmul, R.F.MUL, R.F.ADD
        )
        return RLaurent(R, self.vtop, self.prec, out)

    def shift(self, k: int) -> "RLaurent":
        """Multiply by t^k (exact; precision shifts accordingly)."""
        if self.is_zero():
            return RLaurent.zero(self.ring, self.prec - k)
        return RLaurent(self.ring, self.vtop + k, self.prec - k, self.c)

    def __eq__(self, other) -> bool:
        """Equality at the common precision."""
        if not isinstance(other, RLaurent):
            return NotImplemented
        prec = min(self.prec, other.prec)
        a, b = self.truncate(prec), other.truncate(prec)
        return a.vtop == b.vtop and a.c.shape == b.c.shape and (a.c == b.c).all()

    def inv(self) -> "RLaurent":
        """Inverse of a unit, via the monic/unit-polynomial splitting."""
        mon, upoly = monic_decompose(self)
        mon_inv = _invert_monic(mon)
        up_inv = _invert_poly_unit(upoly)
        big = mon_inv.prec + max(up_inv.deg, 0) + abs(mon_inv.vtop) + 1
        return mon_inv * up_inv.to_laurent(big)

    def canonical(self):
        from .groupring import GRElement

        return {
            "v_top": int(self.vtop) if not self.is_zero() else None,
            "precision": int(self.prec),
            "coeffs": [
                GRElement(self.ring, self.c[k]).canonical()
                for k in range(self.c.shape[0])
            ],
        }

    def __repr__(self):
        if self.is_zero():
            return f"RLaurent(0; prec={self.prec})"
        terms = []
        for k in range(min(self.c.shape[0], 6)):
            if self.c[k].any():
                terms.append(f"t^{self.vtop - k}*{list(self.c[k])}")
        more = "..." if self.c.shape[0] > 6 else ""
        return f"RLaurent({' + '.join(terms)}{more}; prec={self.prec})"


def _laurent_from_xseries(ring, vtop, xcoeffs, prec) -> RLaurent:
    """Laurent element t^vtop * sum_k xcoeffs[k] t^-k, exact to -prec."""
    n = vtop + prec + 1
    arr = np.zeros((n, ring.nG), dtype=np.uint8)
    m = min(n, len(xcoeffs))
    for k in range(m):
        arr[k] = xcoeffs[k]
    return RLaurent(ring, vtop, prec, arr)


def _invert_monic(g: RLaurent) -> RLaurent:
    """Invert a monic element (leading coefficient 1) by back-substitution."""
    R = g.ring
    n = g.c.shape[0]
    b = g.c
    inv = np.zeros((n, R.nG), dtype=np.uint8)
    inv[0] = R.one()
    for k in range(1, n):
        acc = R.zero()
        for i in range(1, k + 1):
            if b[i].any() and inv[k - i].any():
                acc = R.add(acc, R.mul(b[i], inv[k - i]))
        inv[k] = R.neg(acc)
    return RLaurent(R, -g.vtop, g.prec + 2 * g.vtop, inv)


def _invert_poly_unit(u: RPoly) -> RPoly:
    """Invert a unit of R[t]: constant term unit, higher coefficients
    nilpotent; finite geometric series."""
    R = u.ring
    c0_inv = R.inv(u.c[0])
    nil = RPoly(u.ring, u.c.copy()).scale(c0_inv)
    nil = RPoly.one(R) - nil  # nilpotent-coefficient polynomial
    acc = RPoly.one(R)
    term = nil
    for _ in range(R.nilpotency_index + 2):
        if term.is_zero():
            break
        acc = acc + term
        term = term * nil
    else:
        raise NotAUnit("polynomial is not a unit of R[t]")
    return acc.scale(c0_inv)


def monic_test(g: RLaurent) -> bool:
    """True iff every character component of g lies in t^n(1 + t^-1 O[[1/t]]).

    Requires the leading structure to be visible at the stored precision.
    """
    R = g.ring
    if g.prec < 1:
        raise PrecisionLoss("monic test needs at least precision 1")
    for idem in R.idempotents:
        comp_top = None
        for k in range(g.c.shape[0]):
            ce = R.mul(idem.e, g.c[k])
            if ce.any():
                comp_top = ce
                break
        if comp_top is None:
            raise NotAUnit("component of g is zero to precision; not a unit")
        if not (comp_top == idem.e).all():
            return False
    return True


def monic_decompose(g: RLaurent) -> tuple[RLaurent, RPoly]:
    """Weierstrass splitting g = g_plus * u with g_plus monic and u in R[t]^x.

    Componentwise over the idempotents: locate the least index whose
    coefficient is a unit of the local component ring, Weierstrass-divide on
    the nilpotent filtration of I_P, and reassemble.
    """
    R = g.ring
    if g.is_zero():
        raise NotAUnit("zero element")
    plus_total = RLaurent.zero(R, g.prec)
    upoly_total = RPoly.zero(R)
    for idem in R.idempotents:
        e = idem.e
        comp = g.scale_gr(e)
        if comp.is_zero():
            raise NotAUnit("component of g is zero to precision; not a unit")
        # X-series of the component: comp = t^v * sum a_i X^i, X = 1/t
        v = comp.vtop
        a = comp.c  # a[i] is the coefficient of t^(v-i)
        L = a.shape[0]
        m = None
        for i in range(L):
            if R.is_component_unit(e, a[i]):
                m = i
                break
        if m is None:
            raise PrecisionLoss(
                "distinguished degree not certified within precision"
            )
        if m == 0:
            u_ser = [a[i] for i in range(L)]
            rem = []
        else:
            # X^m = q*f + rem with f = P*u and u = q^-1, P = X^m - rem
            q_ser, rem = _weierstrass_divide(R, e, a, m, L)
            u_ser = _xseries_inverse(R, e, q_ser, L)
        u0 = u_ser[0]
        u0_inv = R.component_unit_inv(e, u0)
        tilde = [R.mul(u0_inv, u_ser[i]) for i in range(L)]
        x_chi = _laurent_from_xseries(R, v - m, tilde, comp.prec)
        # y(t) = u0 * t^m * P(1/t) = u0 * (e - sum_{i<m} rem_i t^(m-i))
        y_full = np.zeros((m + 1, R.nG), dtype=np.uint8)
        y_full[0] = e
        for i in range(m):
            y_full[m - i] = R.neg(rem[i])
        y_chi = RPoly(R, y_full).scale(u0)
        plus_total = plus_total + x_chi
        upoly_total = upoly_total + y_chi
    return plus_total, upoly_total


def _xseries_inverse(R: GroupRing, e, q, L):
    """Inverse of a power series over the component ring eR with unit
    constant term; returns list of coefficients of length L."""
    q0_inv = R.component_unit_inv(e, q[0])
    out = [R.mul(e, R.zero()) for _ in range(L)]
    out[0] = q0_inv
    for k in range(1, L):
        acc = R.zero()
        for i in range(1, k + 1):
            qi = q[i] if i < len(q) else None
            if qi is None or not np.asarray(qi).any():
                continue
            if not out[k - i].any():
                continue
            acc = R.add(acc, R.mul(qi, out[k - i]))
        out[k] = R.neg(R.mul(q0_inv, acc))
    return out


def _weierstrass_divide(R: GroupRing, e, a, m, L):
    """Solve X^m = q*f + r over eR[[X]] with f = sum a_i X^i, a_m a
    component unit and a_i (i<m) in the radical; deg r < m.

    Iterates q <- f_high^-1 * ((X^m - q*f_low - r) >> m) on the nilpotent
    filtration; terminates exactly after the nilpotency index of I_P.
    Returns (q coefficients, r coefficients), q of length L, r of length m.
    """
    f_low = [a[i] for i in range(m)]
    f_high = [a[i] for i in range(m, L)]
    fh_inv = _xseries_inverse(R, e, f_high, L)

    def series_mul(u, v, out_len):
        out = [R.zero() for _ in range(out_len)]
        for i, ui in enumerate(u):
            if not np.asarray(ui).any():
                continue
            for j, vj in enumerate(v):
                if i + j >= out_len:
                    break
                if not np.asarray(vj).any():
                    continue
                out[i + j] = R.add(out[i + j], R.mul(ui, vj))
        return out

    q = [R.zero() for _ in range(L)]
    r = [R.zero() for _ in range(m)]
    for _ in range(R.nilpotency_index + 2):
        # w = X^m - q*f_low  (series of length m + L)
        w = [R.zero() for _ in range(m + L)]
        w[m] = e
        qf = series_mul(q, f_low, m + L)
        for i in range(m + L):
            w[i] = R.sub(w[i], qf[i])
        r_new = w[:m]
        q_new = series_mul(fh_inv, w[m : m + L], L)
        if all(
            (q_new[i] == q[i]).all() for i in range(L)
        ) and all((r_new[i] == r[i]).all() for i in range(m)):
            q, r = q_new, r_new
            break
        q, r = q_new, r_new
    # exact check: X^m - q*f - r == 0 to available length
    f_all = [a[i] for i in range(L)]
    qf = series_mul(q, f_all, L)
    for i in range(L):
        val = qf[i]
        if i < m:
            val = R.add(val, r[i])
        target = e if i == m else R.zero()
        assert (
            val == (target if isinstance(target, np.ndarray) else target)
        ).all(), "Weierstrass division failed to converge"
    return q, r

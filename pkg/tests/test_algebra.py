"""Tests for fields, groups, the group ring, and Laurent/monic machinery."""

import numpy as np
import pytest

from drinfeld_lvalues.errors import NotAUnit, PrecisionLoss, WildInertia
from drinfeld_lvalues.fields import ExtField, FqField
from drinfeld_lvalues.groups import AbelianGroup, abelian_structure, split_sylow
from drinfeld_lvalues.groupring import GroupRing
from drinfeld_lvalues.series import RLaurent, RPoly, monic_decompose, monic_test


def gr(q_or_field, orders, p=None):
    F = q_or_field if isinstance(q_or_field, FqField) else _field(q_or_field)
    return GroupRing(F, AbelianGroup(tuple(orders)))


def _field(q):
    for p in (2, 3, 5, 7):
        s = 0
        n = q
        while n % p == 0 and n > 1:
            n //= p
            s += 1
        if n == 1 and s > 0:
            return FqField(p, s)
    raise ValueError(q)


class TestFqField:
    @pytest.mark.parametrize("q", [2, 3, 4, 8, 9, 25])
    def test_axioms(self, q):
        _field(q).check_axioms(trials=150)

    def test_default_modulus_f4(self):
        F = FqField(2, 2)
        # least irreducible of degree 2 over F_2 is x^2 + x + 1
        assert F.modulus == (1, 1, 1)

    def test_coords_roundtrip(self):
        F = FqField(3, 2)
        for a in range(9):
            assert F.from_coords(F.coords(a)) == a


class TestExtField:
    def test_tower_and_orders(self):
        F = FqField(2)
        L = ExtField(F, (1, 1, 1))  # F_4 over F_2
        g = L.gen()
        assert L.multiplicative_order(g) in (3,)
        z = L.element_of_order(3)
        assert L.pow(z, 3) == L.one and z != L.one

    def test_nested_extension(self):
        F = FqField(2)
        k1 = ExtField(F, (1, 1, 1))  # F_4
        # find an irreducible quadratic over F_4 by scanning
        from drinfeld_lvalues.fields import is_irreducible

        found = None
        for c0 in range(4):
            for c1 in range(4):
                f = (k1.embed(0) if False else _tup(k1, c0), _tup(k1, c1), k1.one)
                if is_irreducible(k1, f):
                    found = f
                    break
            if found:
                break
        k2 = ExtField(k1, found)
        assert k2.order == 16
        a = k2.gen()
        assert k2.pow(a, 16) == a  # x^(q^2) = x... x^16 = x in F_16


def _tup(L, code):
    # decode an integer into an F_4 element tuple over F_2
    return (code % 2, code // 2)


class TestSylow:
    def test_trivial(self):
        G = AbelianGroup(())
        sp = split_sylow(G, 2)
        assert sp.P.n == 1 and sp.D.n == 1

    def test_coprime(self):
        sp = split_sylow(AbelianGroup((2, 3)), 2)
        assert sp.P.orders == (2,) and sp.D.orders == (3,)

    def test_mixed_order_counting(self):
        # p = 2, G = Z/4 x Z/6 -> P = Z/4 x Z/2, D = Z/3
        G = AbelianGroup((4, 6))
        sp = split_sylow(G, 2)
        assert sorted(sp.P.orders) == [2, 4] and sp.D.orders == (3,)
        # brute-force oracle: count elements of 2-power order
        twopow = sum(
            1 for g in G.elements() if _is_ppower(G.order_of(g), 2)
        )
        assert twopow == sp.P.n
        # the split reassembles G
        assert sp.P.n * sp.D.n == G.n
        seen = set()
        for pc in sp.P.elements():
            for dc in sp.D.elements():
                seen.add(int(sp.from_pd[pc, dc]))
        assert len(seen) == G.n

    def test_split_is_homomorphism(self):
        G = AbelianGroup((4, 6))
        sp = split_sylow(G, 2)
        rng = np.random.default_rng(0)
        for _ in range(50):
            a, b = rng.integers(0, G.n, 2)
            c = G.mul(int(a), int(b))
            pa, da = sp.to_pd[a]
            pb, db = sp.to_pd[b]
            assert sp.to_pd[c, 0] == sp.P.mul(int(pa), int(pb))
            assert sp.to_pd[c, 1] == sp.D.mul(int(da), int(db))


class TestAbelianStructure:
    def test_unit_group_mod_8(self):
        # (Z/8)^* = Z/2 x Z/2
        elems = [1, 3, 5, 7]
        group, iso = abelian_structure(elems, lambda a, b: a * b % 8, 1)
        assert sorted(group.orders) == [2, 2]
        assert iso[1] == 0

    def test_cyclic(self):
        elems = list(range(1, 7))
        group, iso = abelian_structure(elems, lambda a, b: a * b % 7, 1)
        assert group.orders == (6,)


class TestIdempotents:
    def test_trivial_group(self):
        R = gr(2, ())
        assert len(R.idempotents) == 1
        assert (R.idempotents[0].e == R.one()).all()

    def test_f3_z2(self):
        R = gr(3, (2,))
        es = sorted([tuple(i.e) for i in R.idempotents])
        # (1+s)/2 = 2+2s and (1-s)/2 = 2+s in F_3[Z/2]
        assert es == sorted([(2, 2), (2, 1)])

    def test_f2_z3_ranks(self):
        R = gr(2, (3,))
        ranks = []
        for idem in R.idempotents:
            # F_q-rank of e*R = number of independent columns of mult-by-e
            cols = [R.mul(idem.e, R.from_group(g)) for g in range(3)]
            rows = np.array(cols, dtype=np.uint8)
            from drinfeld_lvalues import backend

            piv = backend.echelon(rows, R.F.MUL, R.F.ADD, R.F.NEG, R.F.INV)
            ranks.append(int((piv >= 0).sum()))
        assert sorted(ranks) == [1, 2]

    @pytest.mark.parametrize(
        "q,orders",
        [(2, (3,)), (2, (7,)), (3, (4,)), (3, (2, 2)), (4, (3, 3)), (2, (21,)), (3, (8,)), (4, (5,))],
    )
    def test_completeness_orthogonality(self, q, orders):
        R = gr(q, orders)
        idems = R.idempotents
        total = R.zero()
        for i, a in enumerate(idems):
            total = R.add(total, a.e)
            assert (R.mul(a.e, a.e) == a.e).all()
            for b in idems[i + 1 :]:
                assert not R.mul(a.e, b.e).any()
        assert (total == R.one()).all()

    def test_wild_delta_rejected(self):
        R = gr(2, (2,))
        from drinfeld_lvalues.groupring import primitive_idempotents

        with pytest.raises(WildInertia):
            primitive_idempotents(R)


class TestInversion:
    def test_one(self):
        R = gr(2, (2,))
        assert (R.inv(R.one()) == R.one()).all()

    def test_group_element(self):
        R = gr(2, (2,))
        sigma = R.from_group(1)
        assert (R.inv(sigma) == sigma).all()

    @pytest.mark.parametrize("q,orders", [(2, (2,)), (2, (2, 2)), (3, (3,))])
    def test_exhaustive_unit_table(self, q, orders):
        """invert succeeds exactly on elements with an inverse (full enumeration)."""
        R = gr(q, orders)
        elements = [np.array(v, dtype=np.uint8) for v in np.ndindex(*([q] * R.nG))]
        units = set()
        for a in elements:
            for b in elements:
                if (R.mul(a, b) == R.one()).all():
                    units.add(tuple(a))
                    break
        for a in elements:
            if tuple(a) in units:
                inv = R.inv(a)
                assert (R.mul(a, inv) == R.one()).all()
                assert R.is_unit(a)
            else:
                assert not R.is_unit(a)
                with pytest.raises(NotAUnit):
                    R.inv(a)

    def test_nilpotency_index(self):
        assert gr(2, (2,)).nilpotency_index == 2
        assert gr(2, ()).nilpotency_index == 1
        assert gr(3, (3,)).nilpotency_index == 3
        assert gr(2, (4,)).nilpotency_index == 4


class TestInertiaIdempotent:
    def test_trivial(self):
        R = gr(3, (2,))
        e = R.inertia_idempotent((0,))
        assert (e == R.one()).all()

    def test_f3_z2(self):
        R = gr(3, (2,))
        e = R.inertia_idempotent((0, 1))
        assert list(e) == [2, 2]
        assert (R.mul(e, e) == e).all()
        assert (R.mul(R.from_group(1), e) == e).all()

    def test_wild(self):
        R = gr(2, (2,))
        with pytest.raises(WildInertia):
            R.inertia_idempotent((0, 1))


class TestLaurent:
    def test_add_mul_precision(self):
        R = gr(2, (2,))
        t = RLaurent.t_power(R, 1, 8)
        one = RLaurent.one(R, 8)
        x = t + one
        assert x.vtop == 1 and x.prec == 8
        y = x * x
        # (t+1)^2 = t^2+1 over F_2; product precision 8-1 = 7
        assert y.prec == 7
        assert (y.coeff(2) == R.one()).all()
        assert not y.coeff(1).any()
        assert (y.coeff(0) == R.one()).all()

    def test_zero_handling(self):
        R = gr(2, ())
        z = RLaurent.zero(R, 5)
        one = RLaurent.one(R, 5)
        assert (z + one) == one
        assert (z * one).is_zero()

    def test_inv_roundtrip(self):
        R = gr(2, ())
        # 1/(t+1) * (t+1) == 1
        x = RLaurent.t_power(R, 1, 10) + RLaurent.one(R, 10)
        xi = x.inv()
        prod = x * xi
        assert prod == RLaurent.one(R, prod.prec)

    def test_inv_with_nilpotent_leading(self):
        # (1+s) + t^-1 is a unit of F_2((1/t))[Z/2] with nilpotent top coeff
        R = gr(2, (2,))
        x = RLaurent.from_coeff_map(
            R, {0: R.add(R.one(), R.from_group(1)), -1: R.one()}, 10
        )
        xi = x.inv()
        assert (x * xi) == RLaurent.one(R, 5)


class TestMonic:
    def test_t_is_monic(self):
        R = gr(2, (2,))
        assert monic_test(RLaurent.t_power(R, 1, 4))

    def test_sigma_t_not_monic(self):
        R = gr(2, (2,))
        g = RLaurent.t_power(R, 1, 4).scale_gr(R.from_group(1))
        assert not monic_test(g)

    def test_one_plus_tinv(self):
        R = gr(2, (2,))
        g = RLaurent.one(R, 4) + RLaurent.t_power(R, -1, 4)
        assert monic_test(g)

    def test_decompose_t2(self):
        R = gr(3, (2,))
        g = RLaurent.t_power(R, 2, 8)
        plus, u = monic_decompose(g)
        assert plus == g
        assert u == RPoly.one(R)

    def test_decompose_sigma_t(self):
        R = gr(2, (2,))
        g = RLaurent.t_power(R, 1, 8).scale_gr(R.from_group(1))
        plus, u = monic_decompose(g)
        assert plus == RLaurent.t_power(R, 1, plus.prec)
        assert u.deg == 0 and (u.c[0] == R.from_group(1)).all()

    def test_decompose_wild_example(self):
        # (1+s)t^-1 + 1 over F_2[Z/2] at N = 12: recomposition must hold
        R = gr(2, (2,))
        g = RLaurent.from_coeff_map(
            R, {-1: R.add(R.one(), R.from_group(1)), 0: R.one()}, 12
        )
        plus, u = monic_decompose(g)
        assert monic_test(plus)
        recomposed = plus * u.to_laurent(20)
        assert recomposed == g.truncate(min(recomposed.prec, g.prec))

    @pytest.mark.parametrize("q,orders,seed", [(2, (2,), 1), (3, (3,), 2), (2, (2, 2), 3), (3, (6,), 4), (2, (6,), 5)])
    def test_roundtrip_random(self, q, orders, seed):
        R = gr(q, orders)
        rng = np.random.default_rng(seed)
        done = 0
        attempts = 0
        while done < 25 and attempts < 500:
            attempts += 1
            vtop = int(rng.integers(-3, 4))
            coeffs = {
                vtop - k: R.random(rng) for k in range(vtop + 12 + 1)
            }
            g = RLaurent.from_coeff_map(R, coeffs, 12)
            if g.is_zero():
                continue
            try:
                plus, u = monic_decompose(g)
            except (NotAUnit, PrecisionLoss):
                continue
            assert monic_test(plus)
            # u is a unit polynomial
            from drinfeld_lvalues.series import _invert_poly_unit

            ui = _invert_poly_unit(u)
            assert (u * ui) == RPoly.one(R)
            rec = plus * u.to_laurent(24)
            assert rec == g.truncate(min(rec.prec, g.prec))
            done += 1


def _is_ppower(n, p):
    while n % p == 0:
        n //= p
    return n == 1

"""Drinfeld module actions, exponential/logarithm series, isometry radius."""

import numpy as np
import pytest

from drinfeld_lvalues.drinfeld import (
    DrinfeldModule,
    FracA,
    TauPolynomial,
    compose_qseries,
    exp_coefficients,
    isometry_radius,
    log_coefficients,
    phi_eval,
    poly_qspread,
)
from drinfeld_lvalues.fields import FqField, poly_mul


@pytest.fixture
def F2():
    return FqField(2)


@pytest.fixture
def F3():
    return FqField(3)


class TestPhiEval:
    def test_identity(self, F2):
        C = DrinfeldModule.carlitz(F2)
        assert phi_eval(C, (1,)) == TauPolynomial(F2, ((1,),))

    def test_carlitz_t(self, F2):
        C = DrinfeldModule.carlitz(F2)
        # phi(t) = t + tau
        assert phi_eval(C, (0, 1)) == TauPolynomial(F2, ((0, 1), (1,)))

    def test_carlitz_t_squared(self, F2):
        C = DrinfeldModule.carlitz(F2)
        # (t + tau)(t + tau) = t^2 + (t^q + t) tau + tau^2
        got = phi_eval(C, (0, 0, 1))
        want = TauPolynomial(F2, ((0, 0, 1), (0, 1, 1), (1,)))
        assert got == want

    @pytest.mark.parametrize("q,rank,deg,seed", [(2, 1, 4, 0), (3, 1, 4, 1), (2, 2, 2, 2)])
    def test_multiplicative(self, q, rank, deg, seed):
        # rank 2 kept at degree 2: tau-composition degree grows like q^(r k)
        F = FqField(q)
        rng = np.random.default_rng(seed)
        E = DrinfeldModule(
            F, tuple(tuple(rng.integers(0, q, 2)) if i < rank - 1 else (0, 1) for i in range(rank))
        )
        for _ in range(50):
            a = tuple(int(x) for x in rng.integers(0, q, deg + 1))
            b = tuple(int(x) for x in rng.integers(0, q, deg + 1))
            ab = poly_mul(F, a, b)
            assert phi_eval(E, ab) == phi_eval(E, a).compose(phi_eval(E, b))


class TestExpSeries:
    def test_e0(self, F3):
        C = DrinfeldModule.carlitz(F3)
        assert exp_coefficients(C, 0).coeffs[0] == FracA.one(F3)

    def test_carlitz_q2_e1(self, F2):
        C = DrinfeldModule.carlitz(F2)
        e1 = exp_coefficients(C, 1).coeffs[1]
        # e1 = 1/(t^2 + t)
        assert e1.num == (1,)
        assert e1.den == (0, 1, 1)

    def test_carlitz_q2_e2(self, F2):
        C = DrinfeldModule.carlitz(F2)
        e2 = exp_coefficients(C, 2).coeffs[2]
        # e2 = 1/((t^4+t)(t^2+t)^2)
        d1 = (0, 1, 1)
        want_den = poly_mul(F2, (0, 1, 0, 0, 1), poly_mul(F2, d1, d1))
        assert e2.num == (1,)
        assert e2.den == want_den

    @pytest.mark.parametrize("q,a", [(2, ((1,),)), (3, ((1,),)), (2, ((0, 1), (1,))), (3, ((1, 1), (0, 0, 1)))])
    def test_functional_equation(self, q, a):
        """Coefficientwise residual of exp(tz) = phi(t)(exp z) vanishes."""
        F = FqField(q)
        E = DrinfeldModule(F, a)
        kmax = 4
        es = exp_coefficients(E, kmax).coeffs
        for k in range(kmax + 1):
            lhs = es[k] * FracA.of_poly(F, poly_qspread(F, (0, 1), q**k))
            rhs = es[k] * FracA.of_poly(F, (0, 1))
            for i in range(1, min(E.rank, k) + 1):
                rhs = rhs + es[k - i].qpow(q**i) * FracA.of_poly(F, E.a[i - 1])
            assert (lhs + (-rhs)).is_zero()

    def test_log_l1_char2(self, F2):
        C = DrinfeldModule.carlitz(F2)
        ls = log_coefficients(C, 1)
        es = exp_coefficients(C, 1).coeffs
        assert ls[1] == es[1]  # l1 = -e1 = e1 in char 2

    @pytest.mark.parametrize("q", [2, 3])
    def test_exp_log_inverse(self, q):
        F = FqField(q)
        C = DrinfeldModule.carlitz(F)
        kmax = 3
        es = exp_coefficients(C, kmax).coeffs
        ls = log_coefficients(C, kmax)
        comp = compose_qseries(F, es, ls, kmax)
        assert comp[0] == FracA.one(F)
        for k in range(1, kmax + 1):
            assert comp[k].is_zero()
        comp2 = compose_qseries(F, ls, es, kmax)
        for k in range(1, kmax + 1):
            assert comp2[k].is_zero()

    def test_rank2_exp(self):
        F = FqField(2)
        E = DrinfeldModule(F, ((1,), (1,)))  # a1 = a2 = 1
        es = exp_coefficients(E, 3).coeffs
        # recursion holds by construction; sanity: e1 = 1/(t^2+t)
        assert es[1].den == (0, 1, 1)
        # e2 (t^4 - t) = a1 e1^q + a2 e0^(q^2)
        lhs = es[2] * FracA.of_poly(F, (0, 1, 0, 0, 1))
        rhs = es[1].qpow(2) + FracA.one(F)
        assert (lhs + (-rhs)).is_zero()


class TestIsometryRadius:
    def test_carlitz_q2(self, F2):
        C = DrinfeldModule.carlitz(F2)
        assert isometry_radius(C, ell=1) == 1

    def test_carlitz_valuations_positive(self, F2):
        C = DrinfeldModule.carlitz(F2)
        vals = exp_coefficients(C, 6).valuations()
        q = 2
        # v(e_k) = k*q^k for the Carlitz module
        for k in range(1, 7):
            assert vals[k] == k * q**k

    def test_big_coefficient_pushes_radius(self, F2):
        E = DrinfeldModule(F2, ((0, 0, 0, 1),))  # a1 = t^3
        # v(e_1) = -1 forces i0 = 2
        assert isometry_radius(E, ell=1) == 2

    def test_a1_t(self, F2):
        E = DrinfeldModule(F2, ((0, 1),))
        assert isometry_radius(E, ell=1) == 1

    def test_radius_respects_ell(self, F2):
        C = DrinfeldModule.carlitz(F2)
        assert isometry_radius(C, ell=3) == 3

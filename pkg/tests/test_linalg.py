"""Determinants, Fitting generators, ratio series, and module bases."""

import numpy as np
import pytest

from drinfeld_lvalues.errors import DegreeMismatch
from drinfeld_lvalues.fields import FqField
from drinfeld_lvalues.groups import AbelianGroup
from drinfeld_lvalues.groupring import GroupRing
from drinfeld_lvalues.linalg import (
    charpoly,
    det_division_free,
    fitting_monic,
    fq_inv,
    fq_nullspace,
    fq_solve,
    leibniz_det,
    nuclear_fitting_identity_check,
    size_ratio_series,
)
from drinfeld_lvalues.modules import GModule
from drinfeld_lvalues.series import RLaurent, RPoly


def ring(q, orders):
    p = 2 if q % 2 == 0 else 3 if q % 3 == 0 else 5
    s = 1
    while p**s < q:
        s += 1
    return GroupRing(FqField(p, s), AbelianGroup(orders))


def rand_rmat(R, n, rng):
    return rng.integers(0, R.F.q, (n, n, R.nG)).astype(np.uint8)


class TestDeterminant:
    def test_identity(self):
        R = ring(2, (2,))
        eye = np.zeros((3, 3, 2, R.nG), dtype=np.uint8)
        for i in range(3):
            eye[i, i, 0, 0] = 1
        det = det_division_free(R, eye, zcap=4)
        assert det[0, 0] == 1 and not det[1:].any() and not det[0, 1:].any()

    def test_diag_t_tplus1(self):
        # diag(t, t+1) over F_2 -> t^2 + t
        R = ring(2, ())
        M = np.zeros((2, 2, 2, 1), dtype=np.uint8)
        M[0, 0, 1, 0] = 1  # t
        M[1, 1, 0, 0] = 1  # 1
        M[1, 1, 1, 0] = 1  # + t
        det = det_division_free(R, M)
        assert list(det[:, 0]) == [0, 1, 1]

    @pytest.mark.parametrize("q,orders,n,seed", [(2, (2,), 4, 0), (3, (3,), 3, 1), (2, (2, 2), 3, 2), (4, (3,), 3, 3)])
    def test_vs_leibniz(self, q, orders, n, seed):
        R = ring(q, orders)
        rng = np.random.default_rng(seed)
        M = rng.integers(0, R.F.q, (n, n, 2, R.nG)).astype(np.uint8)
        zc = 2 * n + 1
        assert (det_division_free(R, M, zcap=zc) == leibniz_det(R, M, zcap=zc)).all()

    @pytest.mark.parametrize("seed", range(4))
    def test_multiplicative(self, seed):
        # det(AB) = det(A)det(B) over R[t], entries truncated at degree 6
        from drinfeld_lvalues import backend

        R = ring(2, (2,))
        rng = np.random.default_rng(seed)
        n, d = 3, 3
        zc = 2 * n * d + 1
        A = rng.integers(0, 2, (n, n, d, R.nG)).astype(np.uint8)
        B = rng.integers(0, 2, (n, n, d, R.nG)).astype(np.uint8)
        AB = backend.zmat_mul(A, B, zc, R.G.gmul, R.F.MUL, R.F.ADD)
        dA = det_division_free(R, A, zcap=zc)
        dB = det_division_free(R, B, zcap=zc)
        dAB = det_division_free(R, AB, zcap=zc)
        prod = backend.zpoly_mul(dA, dB, zc, R.G.gmul, R.F.MUL, R.F.ADD)
        assert (dAB == prod).all()


class TestFitting:
    def test_scalar(self):
        # n=1, A_t = (c) -> t - c
        R = ring(3, ())
        A = np.array([[[2]]], dtype=np.uint8)
        f = fitting_monic(R, A)
        assert f.deg == 1 and f.c[0, 0] == 1 and f.c[1, 0] == 1  # t - 2 = t + 1

    def test_companion(self):
        # companion matrix of monic f -> f  (f = t^3 + t + 1 over F_2)
        R = ring(2, ())
        A = np.zeros((3, 3, 1), dtype=np.uint8)
        A[0, 2, 0] = 1  # -c0
        A[1, 0, 0] = 1
        A[1, 2, 0] = 1  # -c1
        A[2, 1, 0] = 1
        f = fitting_monic(R, A)
        assert list(f.c[:, 0]) == [1, 1, 0, 1]

    def test_sigma_action(self):
        # q=2, G=Z/2, n=1, A_t = (sigma) -> t + sigma
        R = ring(2, (2,))
        A = np.zeros((1, 1, 2), dtype=np.uint8)
        A[0, 0, 1] = 1
        f = fitting_monic(R, A)
        assert f.deg == 1
        assert list(f.c[0]) == [0, 1] and list(f.c[1]) == [1, 0]

    def test_fitting_vs_presentation_minors(self):
        # the presentation t*I - A_t is square: its Leibniz det generates Fitt^0
        R = ring(2, (2,))
        rng = np.random.default_rng(5)
        for n in (1, 2, 3):
            A = rand_rmat(R, n, rng)
            from drinfeld_lvalues.linalg import t_identity_minus

            M = t_identity_minus(R, A)
            lb = leibniz_det(R, M, zcap=n + 1)
            f = fitting_monic(R, A)
            got = np.zeros((n + 1, R.nG), dtype=np.uint8)
            got[: lb.shape[0]] = lb[: n + 1]
            assert (RPoly(R, got) == f)

    @pytest.mark.parametrize("q,orders,seed", [(2, (2,), 0), (3, (3,), 1)])
    def test_block_multiplicativity(self, q, orders, seed):
        R = ring(q, orders)
        rng = np.random.default_rng(seed)
        for _ in range(20):
            na, nc = rng.integers(1, 4, 2)
            A = rand_rmat(R, int(na), rng)
            C = rand_rmat(R, int(nc), rng)
            B = rng.integers(0, R.F.q, (int(na), int(nc), R.nG)).astype(np.uint8)
            full = np.zeros((na + nc, na + nc, R.nG), dtype=np.uint8)
            full[:na, :na] = A
            full[:na, na:] = B
            full[na:, na:] = C
            assert fitting_monic(R, full) == fitting_monic(R, A) * fitting_monic(R, C)

    def test_basis_invariance(self):
        R = ring(3, (2,))
        rng = np.random.default_rng(7)
        from drinfeld_lvalues import backend

        n = 3
        for _ in range(10):
            A = rand_rmat(R, n, rng)
            # random invertible P over R: I + strictly-upper + unit diagonal
            P = np.zeros((n, n, R.nG), dtype=np.uint8)
            Pinv_ok = False
            while not Pinv_ok:
                P = rng.integers(0, R.F.q, (n, n, R.nG)).astype(np.uint8)
                try:
                    Pi = _rmat_inv(R, P)
                    Pinv_ok = True
                except ValueError:
                    continue
            PA = _rmat_mul(R, _rmat_mul(R, P, A), Pi)
            assert fitting_monic(R, PA) == fitting_monic(R, A)


def _rmat_mul(R, A, B):
    from drinfeld_lvalues import backend

    return backend.zmat_mul(
        A[:, :, None, :], B[:, :, None, :], 1, R.G.gmul, R.F.MUL, R.F.ADD
    )[:, :, 0, :]


def _rmat_inv(R, P):
    """Inverse of a matrix over R via the regular representation over F_q."""
    n = P.shape[0]
    big = np.zeros((n * R.nG, n * R.nG), dtype=np.uint8)
    for i in range(n):
        for j in range(n):
            block = np.zeros((R.nG, R.nG), dtype=np.uint8)
            cols = np.arange(R.nG)
            for g in range(R.nG):
                if P[i, j, g]:
                    block[R.G.gmul[g], cols] = P[i, j, g]
            big[i * R.nG : (i + 1) * R.nG, j * R.nG : (j + 1) * R.nG] = block
    try:
        biginv = fq_inv(R.F, big)
    except np.linalg.LinAlgError:
        raise ValueError("not invertible")
    out = np.zeros_like(P)
    for i in range(n):
        for j in range(n):
            out[i, j] = biginv[i * R.nG : (i + 1) * R.nG, j * R.nG]
    return out


class TestRatioSeries:
    def test_f_over_f(self):
        R = ring(2, (2,))
        f = RPoly.t_power(R, 3) + RPoly.one(R)
        r = size_ratio_series(f, f, 10)
        assert r == RLaurent.one(R, 10)

    def test_t_over_t_plus_1(self):
        R = ring(2, ())
        t = RPoly.t_power(R, 1)
        r = size_ratio_series(t, t + RPoly.one(R), 8)
        # 1 + 1/t + 1/t^2 + ...
        for e in range(0, -9, -1):
            assert r.coeff(e)[0] == 1

    def test_roundtrip(self):
        R = ring(2, ())
        num = RPoly.t_power(R, 2) + RPoly.t_power(R, 1)
        den = RPoly.t_power(R, 2) + RPoly.one(R)
        r = size_ratio_series(num, den, 16)
        back = r * den.to_laurent(18)
        assert back == num.to_laurent(16 - 2)

    def test_degree_mismatch(self):
        R = ring(2, ())
        with pytest.raises(DegreeMismatch):
            size_ratio_series(RPoly.t_power(R, 2), RPoly.t_power(R, 1), 4)


class TestNuclearFittingIdentity:
    def test_zero_action(self):
        R = ring(2, ())
        assert nuclear_fitting_identity_check(R, np.zeros((1, 1, 1), dtype=np.uint8))

    def test_companion(self):
        R = ring(2, ())
        A = np.zeros((2, 2, 1), dtype=np.uint8)
        A[0, 1, 0] = 1  # companion of t^2 + t + 1
        A[1, 0, 0] = 1
        A[1, 1, 0] = 1
        assert nuclear_fitting_identity_check(R, A)

    @pytest.mark.parametrize("seed", range(5))
    def test_random(self, seed):
        R = ring(3, (2,))
        rng = np.random.default_rng(seed)
        A = rand_rmat(R, 3, rng)
        assert nuclear_fitting_identity_check(R, A)


class TestFqLinalg:
    def test_solve_and_nullspace(self):
        F = FqField(3)
        rng = np.random.default_rng(0)
        m = rng.integers(0, 3, (4, 6)).astype(np.uint8)
        ns = fq_nullspace(F, m)
        for v in ns:
            prod = np.zeros(4, dtype=np.uint8)
            for j in range(6):
                prod = F.ADD[prod, F.MUL[v[j], m[:, j]]]
            assert not prod.any()
        x = fq_solve(F, m, np.zeros(4, dtype=np.uint8))
        assert x is not None


class TestGModule:
    def test_free_rank2(self):
        # R^2 for R = F_2[Z/2] via the regular representation
        R = ring(2, (2,))
        dim = 4
        g1 = np.zeros((dim, dim), dtype=np.uint8)
        # coordinates (i, g): sigma swaps g-slots in each block
        for i in range(2):
            g1[2 * i, 2 * i + 1] = 1
            g1[2 * i + 1, 2 * i] = 1
        mod = GModule.from_generator_actions(R, {1: g1}, dim)
        basis = mod.r_basis()
        assert basis.rank == 2
        co = basis.express(basis.vecs[0])
        assert (co[0] == R.one()).all() and not co[1].any()

    def test_not_free(self):
        # trivial 1-dim module over F_2[Z/2] is not free
        R = ring(2, (2,))
        mod = GModule.from_generator_actions(R, {1: np.eye(1, dtype=np.uint8)}, 1)
        assert not mod.is_free()

"""Carlitz cyclotomic extensions K = F(lambda_f).

O_K = A[lambda] with lambda a root of the f-torsion polynomial Phi_f of the
Carlitz module, and G = (A/f)^* acting by a mod f -> C_a(lambda).  The
constructors here produce, exactly:

* unramified prime data through the Artin rule sigma_v = [pi mod f],
* ramified prime data from the quotient ring A[x]/(Phi_f, pi) with a
  seeded search for an F_q[G]-free fiber basis (tame case) or the taming
  fiber (wild case),
* taming modules M = A[G] omega with the certificate omega^q in A[G] omega
  found by small-candidate search and exact linear algebra over F_q(t),
* infinity models for the two supported shapes: infinity split completely
  (Newton-lifted Laurent roots; q = 2 cyclotomics) and a single tamely
  ramified place (deg f = 1, Eisenstein-type x^(q-1) + f with a constant
  Vandermonde frame).

Everything else raises UnsupportedConductor with the exact obstruction.
"""

from __future__ import annotations

import numpy as np

from .drinfeld import (
    DrinfeldModule,
    FracA,
    apoly_add,
    apoly_divmod,
    apoly_gcd,
    apoly_mul,
    apoly_neg,
    phi_eval,
)
from .errors import (
    DiscretenessViolated,
    SearchExhausted,
    UnsupportedConductor,
)
from .extensions import (
    ExtensionData,
    InfinityModel,
    LocalPrimeData,
    TamingData,
    certify_discreteness,
    unramified_prime_data,
)
from .fields import ExtField, FqField, poly_eval, poly_mod, poly_mul
from .groups import AbelianGroup, abelian_structure
from .groupring import GroupRing
from .linalg import fitting_monic
from .modules import GModule
from .primes import monic_irreducibles_fast
from .series import RLaurent, RPoly

__all__ = ["carlitz_cyclotomic", "taming_module", "carlitz_torsion_poly"]


# --- x-polynomials with F_q[t] coefficients ------------------------------------


class _ARing:
    """F_q[t] posing as a coefficient ring for x-polynomial helpers; only
    constants are invertible (enough: torsion polynomials are monic in x)."""

    def __init__(self, F: FqField):
        self.F = F
        self.zero = ()
        self.one = (F.one,)

    def add(self, a, b):
        return apoly_add(self.F, a, b)

    def sub(self, a, b):
        return apoly_add(self.F, a, apoly_neg(self.F, b))

    def mul(self, a, b):
        return apoly_mul(self.F, a, b)

    def neg(self, a):
        return apoly_neg(self.F, a)

    def inv(self, a):
        if len(a) != 1:
            raise ZeroDivisionError("only constants are units in F_q[t]")
        return (self.F.inv(a[0]),)


def carlitz_action_xpoly(F: FqField, a: tuple) -> tuple:
    """C_a(x) as an x-polynomial over A (sparse in q-power degrees)."""
    C = DrinfeldModule.carlitz(F)
    coeffs = phi_eval(C, a).coeffs
    deg = F.q ** (len(coeffs) - 1)
    out = [() for _ in range(deg + 1)]
    for i, c in enumerate(coeffs):
        out[F.q**i] = c
    return tuple(out)


def carlitz_torsion_poly(F: FqField, f: tuple) -> tuple:
    """The cyclotomic polynomial Phi_f(x) = prod_{e | rad f} C_{f/e}^mu(e)."""
    A = _ARing(F)
    fac = _factor_conductor(F, f)
    rad = (F.one,)
    for pi in fac:
        rad = apoly_mul(F, rad, pi)
    # squarefree divisors e of rad with mu(e) = (-1)^(number of primes)
    primes = list(fac.keys())
    num = (A.one,)
    den = (A.one,)
    for mask in range(1 << len(primes)):
        e = (F.one,)
        bits = 0
        for b, pi in enumerate(primes):
            if mask >> b & 1:
                e = apoly_mul(F, e, pi)
                bits += 1
        quot = apoly_divmod(F, f, e)[0]
        ca = carlitz_action_xpoly(F, quot)
        if bits % 2 == 0:
            num = poly_mul(A, num, ca)
        else:
            den = poly_mul(A, den, ca)
    phi, rem = _xpoly_divmod(A, num, den)
    assert not rem, "torsion polynomial division not exact"
    return phi


def _xpoly_divmod(A: _ARing, a: tuple, b: tuple):
    """Division of x-polynomials over A by a divisor monic in x."""
    assert b and b[-1] == A.one
    r = list(a)
    if len(r) < len(b):
        return (), tuple(r)
    q = [A.zero] * (len(r) - len(b) + 1)
    for k in range(len(r) - 1, len(b) - 2, -1):
        c = r[k]
        if c == A.zero:
            continue
        shift = k - (len(b) - 1)
        q[shift] = c
        for i, bc in enumerate(b):
            r[shift + i] = A.sub(r[shift + i], A.mul(c, bc))
    while r and r[-1] == A.zero:
        r.pop()
    return tuple(q), tuple(r)


def _factor_conductor(F: FqField, f: tuple) -> dict:
    """Prime factorization of a monic conductor by trial division."""
    fac: dict[tuple, int] = {}
    rest = f
    d = 1
    while len(rest) - 1 > 0:
        if d > len(rest) - 1:
            raise AssertionError("factorization failed")
        found = False
        for pi in monic_irreducibles_fast(F, d):
            while True:
                qd, rem = apoly_divmod(F, rest, pi)
                if rem:
                    break
                fac[pi] = fac.get(pi, 0) + 1
                rest = qd
                found = True
            if len(rest) - 1 < d:
                break
        d += 1
    return fac


def _unit_group(F: FqField, f: tuple):
    """(A/f)^* with its cyclic decomposition; returns (group, iso, residues)."""
    degf = len(f) - 1
    residues = []
    for code in range(F.q**degf):
        r = tuple((code // F.q**i) % F.q for i in range(degf))
        r = tuple(r[: _last_nonzero(r)])
        if apoly_gcd(F, r, f) == (F.one,):
            residues.append(r)
    group, iso = abelian_structure(
        residues, lambda a, b: poly_mod(F, apoly_mul(F, a, b), f), (F.one,)
    )
    return group, iso


def _last_nonzero(r):
    n = len(r)
    while n and r[n - 1] == 0:
        n -= 1
    return n


def _apoly_xgcd(F: FqField, a: tuple, b: tuple):
    """Extended gcd over F_q[t]: returns (g, u, v) with u a + v b = g."""
    r0, r1 = a, b
    s0, s1 = (F.one,), ()
    t0, t1 = (), (F.one,)
    while r1:
        q, r = apoly_divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, apoly_add(F, s0, apoly_neg(F, apoly_mul(F, q, s1)))
        t0, t1 = t1, apoly_add(F, t0, apoly_neg(F, apoly_mul(F, q, t1)))
    if r0 and r0[-1] != F.one:
        c = F.inv(r0[-1])
        r0 = tuple(F.mul(c, x) for x in r0)
        s0 = tuple(F.mul(c, x) for x in s0)
        t0 = tuple(F.mul(c, x) for x in t0)
    return r0, s0, t0


# --- ramified prime data --------------------------------------------------------


def _ramified_prime_data(
    ring: GroupRing,
    F: FqField,
    f: tuple,
    phi_x: tuple,
    group_iso,
    pi: tuple,
    k_mult: int,
    taming: dict,
    seed: int,
) -> LocalPrimeData:
    group, iso = group_iso
    d = len(pi) - 1
    # inertia = {a : a = 1 mod f/pi^k}; sigma_v solves the CRT condition
    pik = (F.one,)
    for _ in range(k_mult):
        pik = apoly_mul(F, pik, pi)
    f0 = apoly_divmod(F, f, pik)[0]
    inertia = []
    for res, code in iso.items():
        if len(f0) == 1 or poly_mod(F, apoly_add(F, res, apoly_neg(F, (F.one,))), f0) == ():
            inertia.append(code)
    inertia = tuple(sorted(inertia))
    e_v = len(inertia)
    # sigma_v: a = pi mod f0 and a = 1 mod pi^k
    if len(f0) == 1:
        sigma_v = 0
    else:
        g, u, v = _apoly_xgcd(F, f0, pik)
        assert g == (F.one,)
        # a = pi * (v pik) + 1 * (u f0) mod f
        term1 = apoly_mul(F, poly_mod(F, pi, f0), apoly_mul(F, v, pik))
        term2 = apoly_mul(F, u, f0)
        a = poly_mod(F, apoly_add(F, term1, term2), f)
        sigma_v = iso[a]
    decomposition = group.subgroup(list(inertia) + [sigma_v])
    wild = e_v % F.p == 0
    if wild:
        if pi not in taming:
            raise UnsupportedConductor(
                f"wild prime {pi}: no taming data available"
            )
        return _taming_fiber_data(
            ring, F, pi, taming[pi], decomposition, inertia, sigma_v
        )
    # tame: fiber = k_v[x]/(phi_f mod pi), free over F_q[G] by seeded search
    kv = ExtField(F, pi)
    phibar = tuple(
        _reduce_apoly(F, kv, c) for c in phi_x
    )
    # strip leading zeros in the k_v[x] polynomial
    pb = list(phibar)
    while pb and pb[-1] == kv.zero:
        pb.pop()
    phibar = tuple(pb)
    nx = len(phibar) - 1
    dim = nx * d

    def flat_idx(i, j):  # x^i * t-bar^j
        return i * d + j

    def to_vec(poly_in_x) -> np.ndarray:
        out = np.zeros(dim, dtype=np.uint8)
        for i, c in enumerate(poly_in_x):
            for j in range(d):
                out[flat_idx(i, j)] = c[j]
        return out

    def from_vec(vec):
        return tuple(
            tuple(int(vec[flat_idx(i, j)]) for j in range(d)) for i in range(nx)
        )

    # matrices: G generators, tau, t-bar
    gen_mats = {}
    residue_of = {code: res for res, code in iso.items()}
    for gen in ring.G.generators():
        res = residue_of[gen]
        ca = carlitz_action_xpoly(F, res)
        ca_bar = poly_mod(kv, tuple(_embed_a(F, kv, c) for c in ca), phibar)
        mat = np.zeros((dim, dim), dtype=np.uint8)
        for i in range(nx):
            img = _kvpoly_pow_mod(kv, ca_bar, i, phibar)
            for j in range(d):
                full = tuple(kv.mul(c, _tbar_pow(kv, j)) for c in img)
                mat[:, flat_idx(i, j)] = to_vec(_pad(kv, full, nx))
        gen_mats[gen] = mat
    module = GModule.from_generator_actions(ring, gen_mats, dim)
    tau_mat = np.zeros((dim, dim), dtype=np.uint8)
    t_mat = np.zeros((dim, dim), dtype=np.uint8)
    for i in range(nx):
        for j in range(d):
            base = _basis_elt(kv, i, j, nx, phibar)
            # tau: q-power in the quotient ring
            tau_img = _kvpoly_powq_mod(kv, base, F.q, phibar)
            tau_mat[:, flat_idx(i, j)] = to_vec(_pad(kv, tau_img, nx))
            t_img = tuple(kv.mul(kv.gen(), c) for c in base)
            t_mat[:, flat_idx(i, j)] = to_vec(_pad(kv, t_img, nx))
    rb = module.r_basis(seed=seed)
    if rb.rank != d:
        raise UnsupportedConductor(
            f"tame fiber at {pi} has F_q[G]-rank {rb.rank} != {d}"
        )
    mat_t = rb.matrix_of(t_mat)
    mat_tau = rb.matrix_of(tau_mat)
    data = LocalPrimeData(
        ring=ring,
        pi=pi,
        decomposition=decomposition,
        inertia=inertia,
        frobenius=sigma_v,
        ramification="tame",
        mat_t=mat_t,
        mat_tau=mat_tau,
    )
    assert data.check_semilinearity()
    assert fitting_monic(ring, mat_t) == data.norm_monic()
    return data


def _basis_elt(kv, i, j, nx, phibar):
    out = [kv.zero] * nx
    out[i] = _tbar_pow(kv, j)
    return tuple(out)


def _pad(kv, poly, nx):
    out = list(poly) + [kv.zero] * (nx - len(poly))
    return tuple(out[:nx])


def _tbar_pow(kv, j):
    out = kv.one
    for _ in range(j):
        out = kv.mul(out, kv.gen())
    return out


def _reduce_apoly(F, kv, a: tuple):
    """a(t) mod pi as an element of k_v."""
    out = kv.zero
    tb = kv.gen()
    for c in reversed(a):
        out = kv.add(kv.mul(out, tb), _kv_scalar(kv, c))
    return out


def _kv_scalar(kv, c):
    out = list(kv.zero)
    out[0] = c
    return tuple(out)


def _embed_a(F, kv, a: tuple):
    return _reduce_apoly(F, kv, a)


def _kvpoly_pow_mod(kv, base: tuple, e: int, mod: tuple) -> tuple:
    out = (kv.one,)
    b = poly_mod(kv, base, mod)
    while e:
        if e & 1:
            out = poly_mod(kv, poly_mul(kv, out, b), mod)
        b = poly_mod(kv, poly_mul(kv, b, b), mod)
        e >>= 1
    return out


def _kvpoly_powq_mod(kv, base: tuple, q: int, mod: tuple) -> tuple:
    """base^q mod (mod, Frobenius on coefficients included)."""
    # q-power of a polynomial with k_v coefficients: coefficients go to
    # their q-th powers and exponents multiply by q
    out = ()
    spread = [kv.zero] * ((len(base) - 1) * q + 1) if base else []
    for i, c in enumerate(base):
        if c != kv.zero:
            spread[i * q] = kv.pow(c, q)
    return poly_mod(kv, tuple(spread), mod)


def _taming_fiber_data(
    ring: GroupRing, F, pi, tam: TamingData, decomposition, inertia, sigma_v
) -> LocalPrimeData:
    """Fiber M/pi for M = A[G] omega: basis {t-bar^j omega}, tau acts by
    x omega -> x^(1) alpha_tau omega."""
    d = len(pi) - 1
    kv = ExtField(F, pi)
    nG = ring.nG
    # alpha_tau reduced mod pi: k_v[G] element
    alpha = [
        _reduce_apoly(F, kv, _apoly_from_rpoly(ring, tam.alpha_tau, g))
        for g in range(nG)
    ]
    mat_t = np.zeros((d, d, nG), dtype=np.uint8)
    comp = _companion(F, pi)
    for i in range(d):
        for j in range(d):
            mat_t[i, j, 0] = comp[i, j]
    mat_tau = np.zeros((d, d, nG), dtype=np.uint8)
    for j in range(d):
        bq = kv.pow(_tbar_pow(kv, j), F.q)
        for g in range(nG):
            prod = kv.mul(bq, alpha[g])
            for i in range(d):
                mat_tau[i, j, g] = prod[i]
    data = LocalPrimeData(
        ring=ring,
        pi=pi,
        decomposition=decomposition,
        inertia=inertia,
        frobenius=sigma_v,
        ramification="wild",
        mat_t=mat_t,
        mat_tau=mat_tau,
    )
    assert data.check_semilinearity()
    assert fitting_monic(ring, mat_t) == data.norm_monic()
    return data


def _apoly_from_rpoly(ring, rp: RPoly, g: int) -> tuple:
    return tuple(int(rp.c[k, g]) for k in range(rp.c.shape[0]))


def _companion(F, pi) -> np.ndarray:
    d = len(pi) - 1
    m = np.zeros((d, d), dtype=np.uint8)
    for i in range(d - 1):
        m[i + 1, i] = 1
    for i in range(d):
        m[i, d - 1] = F.neg(pi[i])
    return m


# --- taming modules --------------------------------------------------------------


def taming_module(
    ring: GroupRing,
    F: FqField,
    f: tuple,
    phi_x: tuple,
    group_iso,
    wild_pis: list[tuple],
    seed: int = 0,
    max_candidates: int = 64,
):
    """Search for omega in O_K = A[lambda] with M = A[G] omega free, tau-stable
    (omega^q = alpha_tau omega, alpha_tau in A[G]) and O_K/M supported at the
    wild primes.  Returns (taming dict, omega as x-poly, alpha_tau RPoly)."""
    group, iso = group_iso
    A = _ARing(F)
    nx = len(phi_x) - 1
    residue_of = {code: res for res, code in iso.items()}
    # candidate omegas: lambda, lambda + c, c lambda, lambda + t, ...
    candidates = []
    xbar = _xmono(A, 1, nx)
    for c in range(F.q):
        cand = list(xbar)
        cand[0] = apoly_add(F, cand[0], (c,) if c else ())
        candidates.append(tuple(cand))
    for c in range(1, F.q):
        candidates.append(tuple(apoly_mul(F, (c,), e) for e in xbar))
    cand2 = list(xbar)
    cand2[0] = (0, 1)
    candidates.append(tuple(cand2))
    rng = np.random.default_rng(seed)
    while len(candidates) < max_candidates:
        candidates.append(
            tuple(
                tuple(int(x) for x in rng.integers(0, F.q, 2))
                for _ in range(nx)
            )
        )
    for omega in candidates:
        result = _try_taming(ring, F, f, phi_x, group, iso, residue_of, wild_pis, omega)
        if result is not None:
            return result
    raise SearchExhausted(
        "no taming generator found; supply TamingData in a fixture"
    )


def _xmono(A, i, nx):
    out = [A.zero] * nx
    out[i] = A.one
    return tuple(out)


def _try_taming(ring, F, f, phi_x, group, iso, residue_of, wild_pis, omega):
    A = _ARing(F)
    nx = len(phi_x) - 1
    nG = ring.nG
    # sigma(omega) for every group element, as x-polys over A
    sigmas = []
    for g in range(nG):
        res = residue_of[g]
        ca = carlitz_action_xpoly(F, res)
        img = _subst_xpoly(A, omega, ca, phi_x)
        sigmas.append(img)
    # omega^q in the quotient
    om_q = _xpoly_powq(A, F, omega, phi_x)
    # solve om_q = sum_g r_g sigma_g(omega) with r_g in A (F_q(t)-Gaussian)
    S = [[FracA.of_poly(F, sigmas[g][i] if i < len(sigmas[g]) else ()) for g in range(nG)] for i in range(nx)]
    rhs = [FracA.of_poly(F, om_q[i] if i < len(om_q) else ()) for i in range(nx)]
    sol = _frac_solve(F, S, rhs)
    if sol is None:
        return None
    alpha = np.zeros((max(len(s.num) for s in sol) if sol else 1, nG), dtype=np.uint8)
    for g, r in enumerate(sol):
        if r.den != (F.one,):
            return None  # not integral
        for k, c in enumerate(r.num):
            alpha[k, g] = c
    alpha_tau = RPoly(ring, alpha)
    # determinant of the transition (sigma_g(omega) in x-basis): A-polynomial
    det = _apoly_det(F, [[sigmas[g][i] if i < len(sigmas[g]) else () for g in range(nG)] for i in range(nx)])
    if not det:
        return None
    # support check: det = unit * prod of wild primes
    rest = det
    for pi in wild_pis:
        while True:
            qd, rem = apoly_divmod(F, rest, pi)
            if rem:
                break
            rest = qd
    if len(rest) != 1:
        return None  # a tame prime divides the index
    taming = {
        tuple(pi): TamingData(pi=tuple(pi), alpha_tau=alpha_tau, omega_label=_omega_label(omega))
        for pi in wild_pis
    }
    return taming, omega, alpha_tau


def _omega_label(omega) -> str:
    terms = []
    for i, c in enumerate(omega):
        if c:
            terms.append(f"({','.join(str(x) for x in c)})*x^{i}")
    return " + ".join(terms) if terms else "0"


def _subst_xpoly(A: _ARing, poly, target, mod):
    """poly(target) mod `mod` for x-polynomials over A."""
    out = ()
    for c in reversed(poly):
        out = _xpoly_divmod(A, _xpoly_mul(A, out, target), mod)[1]
        if c != A.zero:
            out = _xpoly_add(A, out, (c,))
    return out


def _xpoly_mul(A, a, b):
    if not a or not b:
        return ()
    out = [A.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == A.zero:
            continue
        for j, y in enumerate(b):
            if y == A.zero:
                continue
            out[i + j] = A.add(out[i + j], A.mul(x, y))
    while out and out[-1] == A.zero:
        out.pop()
    return tuple(out)


def _xpoly_add(A, a, b):
    n = max(len(a), len(b))
    out = [A.zero] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = A.add(out[i], y)
    while out and out[-1] == A.zero:
        out.pop()
    return tuple(out)


def _xpoly_powq(A: _ARing, F: FqField, poly, mod):
    """poly^q mod `mod`: exponents spread by q, coefficients a(t) -> a(t)^q."""
    from .drinfeld import poly_qspread

    if not poly:
        return ()
    spread = [A.zero] * ((len(poly) - 1) * F.q + 1)
    for i, c in enumerate(poly):
        if c != A.zero:
            spread[i * F.q] = poly_qspread(F, c, F.q)
    return _xpoly_divmod(A, tuple(spread), mod)[1]


def _frac_solve(F, S, rhs):
    """Solve the square system S x = rhs over F_q(t); None if singular."""
    n = len(S)
    m = [row[:] + [rhs[i]] for i, row in enumerate(S)]
    piv_used = [False] * n
    order = []
    for col in range(n):
        sel = None
        for row in range(n):
            if not piv_used[row] and not m[row][col].is_zero():
                sel = row
                break
        if sel is None:
            return None
        piv_used[sel] = True
        order.append((sel, col))
        inv = _frac_inv(F, m[sel][col])
        m[sel] = [x * inv for x in m[sel]]
        for row in range(n):
            if row != sel and not m[row][col].is_zero():
                factor = m[row][col]
                m[row] = [
                    a + (-(factor * b)) for a, b in zip(m[row], m[sel])
                ]
    sol = [FracA.zero(F)] * n
    for row, col in order:
        sol[col] = m[row][n]
    return sol


def _frac_inv(F, x: FracA) -> FracA:
    return FracA(F, x.den, x.num)


def _apoly_det(F, mat) -> tuple:
    """Determinant of a small matrix over F_q[t] (Leibniz)."""
    from itertools import permutations

    n = len(mat)
    out = ()
    for perm in permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if seen[i]:
                continue
            j, ln = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                ln += 1
            if ln % 2 == 0:
                sign = -sign
        term = (F.one,)
        for i in range(n):
            term = apoly_mul(F, term, mat[i][perm[i]])
        if sign < 0:
            term = apoly_neg(F, term)
        out = apoly_add(F, out, term)
    return out


# --- infinity models -------------------------------------------------------------


def _scalar_ring(F: FqField) -> GroupRing:
    return GroupRing(F, AbelianGroup(()))


def _eval_xpoly_at(F, xpoly, point: RLaurent, ring_sc: GroupRing) -> RLaurent:
    """Evaluate an x-polynomial over A at a scalar Laurent point (Horner)."""
    out = RLaurent.zero(ring_sc, point.prec)
    for c in reversed(xpoly):
        out = out * point
        if c:
            out = out + RPoly.from_scalar_poly(ring_sc, c).to_laurent(out.prec)
    return out


def _newton_roots(F: FqField, xpoly, prec: int) -> list[RLaurent]:
    """All F_infty-roots of an x-polynomial over A.

    Newton-polygon slope splitting with recursive refinement at repeated
    residual roots (shift x -> base + x' and re-analyze the polygon below
    the current slope); simple residual roots finish by Newton iteration on
    the original polynomial.  Raises UnsupportedConductor at fractional
    slopes or when the count of Laurent roots falls short (both mean the
    place is not split)."""
    ring_sc = _scalar_ring(F)
    n = len(xpoly) - 1
    work = prec + 4
    phi_lau = [
        RPoly.from_scalar_poly(ring_sc, c).to_laurent(work) if c else RLaurent.zero(ring_sc, work)
        for c in xpoly
    ]
    deriv = _xpoly_derivative(F, xpoly)
    roots: list[RLaurent] = []
    _roots_rec(
        F, ring_sc, xpoly, deriv, phi_lau, RLaurent.zero(ring_sc, work),
        None, prec, 0, roots
    )
    if len(roots) != n:
        raise UnsupportedConductor(
            f"infinity model: found {len(roots)} Laurent roots of {n} "
            "(not split completely)"
        )
    return roots


def _roots_rec(F, ring_sc, xpoly, deriv, phi_lau, base, bound, prec, depth, out):
    """Collect roots x = base + y with deg y < bound (bound None = no cap)."""
    if depth > prec + 8:
        raise UnsupportedConductor(
            "infinity model: root cluster did not separate (depth cap)"
        )
    psi = _shift_xpoly(ring_sc, phi_lau, base)
    pts = [(i, c.vtop) for i, c in enumerate(psi) if not c.is_zero()]
    hull = _upper_hull(pts)
    for (i1, d1), (i2, d2) in zip(hull, hull[1:]):
        if i1 == 0 and psi[0].is_zero():
            continue
        num, den = d1 - d2, i2 - i1
        if num % den != 0:
            raise UnsupportedConductor(
                f"infinity model: fractional slope {num}/{den} (ramified place)"
            )
        s = num // den
        if bound is not None and s >= bound:
            continue
        M = d1 + s * i1
        rcoeffs = [F.zero] * (i2 - i1 + 1)
        for i, d in pts:
            if i1 <= i <= i2 and d + s * i == M:
                rcoeffs[i - i1] = int(psi[i].coeff(psi[i].vtop)[0])
        rpoly = tuple(rcoeffs)
        for c in range(1, F.q):
            mult = _root_multiplicity(F, rpoly, c)
            if mult == 0:
                continue
            mono = RLaurent.from_coeff_map(
                ring_sc, {s: ring_sc.from_scalar(c)}, base.prec
            )
            cand = base + mono
            if mult == 1:
                out.append(_newton_iterate(F, xpoly, deriv, cand, prec, ring_sc))
            else:
                _roots_rec(
                    F, ring_sc, xpoly, deriv, phi_lau, cand, s, prec,
                    depth + 1, out
                )


def _root_multiplicity(F, rpoly, c) -> int:
    """Multiplicity of c as a root of rpoly over F_q (by division)."""
    mult = 0
    cur = list(rpoly)
    while len(cur) > 1:
        # synthetic division by (y - c)
        rem = F.zero
        quot = [F.zero] * (len(cur) - 1)
        for k in range(len(cur) - 1, -1, -1):
            val = F.add(cur[k], F.mul(c, rem))
            if k > 0:
                quot[k - 1] = val if False else rem_next(F)
            rem = val
        # simpler: evaluate and divide functionally
        if poly_eval(F, tuple(cur), c) != F.zero:
            break
        mult += 1
        # divide by (y - c): Horner quotient
        q = [F.zero] * (len(cur) - 1)
        acc = F.zero
        for k in range(len(cur) - 1, 0, -1):
            acc = F.add(cur[k], F.mul(c, acc))
            q[k - 1] = acc
        cur = q
        if not cur:
            break
    return mult


def rem_next(F):  # pragma: no cover - dead branch guard
    raise AssertionError


def _shift_xpoly(ring_sc, phi_lau, base: RLaurent) -> list[RLaurent]:
    """Coefficients of Phi(base + x) from coefficients of Phi(x)."""
    n = len(phi_lau) - 1
    if base.is_zero():
        return list(phi_lau)
    out = [RLaurent.zero(ring_sc, base.prec) for _ in range(n + 1)]
    # binomial expansion: (base + x)^i = sum_j C(i, j) base^(i-j) x^j
    p = ring_sc.F.p
    base_pows = [RLaurent.one(ring_sc, base.prec)]
    for _ in range(n):
        base_pows.append(base_pows[-1] * base)
    for i, coeff in enumerate(phi_lau):
        if coeff.is_zero():
            continue
        for j in range(i + 1):
            b = _binom_mod_p(i, j, p)
            if b == 0:
                continue
            term = coeff * base_pows[i - j]
            if b != 1:
                term = term.scale_gr(ring_sc.from_scalar(b % p))
            out[j] = out[j] + term
    return out


def _binom_mod_p(n, k, p):
    # Lucas
    out = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        num = den = 1
        for i in range(ki):
            num = num * (ni - i) % p
            den = den * (i + 1) % p
        out = out * num * pow(den, p - 2, p) % p
        n //= p
        k //= p
    return out


def _upper_hull(pts):
    hull = []
    for p in pts:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) >= 0:
            hull.pop()
        hull.append(p)
    return hull


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _xpoly_derivative(F, xpoly):
    out = []
    for i in range(1, len(xpoly)):
        c = xpoly[i]
        mult = i % F.p
        if mult == 0 or not c:
            out.append(())
        else:
            out.append(tuple(F.mul(mult % F.p, x) for x in c))
    return tuple(out)


def _fq_poly_derivative(F, poly):
    out = []
    for i in range(1, len(poly)):
        mult = i % F.p
        out.append(F.mul(mult, poly[i]) if mult else F.zero)
    return tuple(out)


def _newton_iterate(F, xpoly, deriv, x0, prec, ring_sc) -> RLaurent:
    x = x0
    for _ in range(prec.bit_length() + 8):
        fx = _eval_xpoly_at(F, xpoly, x, ring_sc)
        if fx.is_zero():
            return x
        dfx = _eval_xpoly_at(F, deriv, x, ring_sc)
        corr = fx * dfx.inv()
        if corr.is_zero():
            return x
        x = x - corr
        if -corr.vtop > prec:
            # converged beyond the working precision
            fx = _eval_xpoly_at(F, xpoly, x, ring_sc)
            assert fx.is_zero(), "Newton iteration failed to certify the root"
            return x
    raise AssertionError("Newton iteration did not converge")  # pragma: no cover


def infinity_split_complete(
    ring: GroupRing, F: FqField, phi_x, group_iso, lattice_xpolys, prec: int
) -> InfinityModel:
    """Infinity model when infinity splits completely: frame = indicator of a
    base place, coordinates = permuted root evaluations."""
    group, iso = group_iso
    ring_sc = _scalar_ring(F)
    guard = 8
    roots = _newton_roots(F, phi_x, prec + guard)
    n = len(roots)
    # separation certificate and permutation matching
    sep = 0
    for i in range(n):
        for j in range(i + 1, n):
            diff = roots[i] - roots[j]
            assert not diff.is_zero(), "roots not separated at this precision"
            sep = max(sep, -diff.vtop)
    match_prec = sep + 2
    residue_of = {code: res for res, code in iso.items()}
    perm = {}
    for g in range(ring.nG):
        ca = carlitz_action_xpoly(F, residue_of[g])
        images = [_eval_xpoly_at(F, ca, r, ring_sc) for r in roots]
        p = []
        for img in images:
            hits = [
                j
                for j, r in enumerate(roots)
                if (img - r).is_zero() or (img - r).vtop < -match_prec
            ]
            assert len(hits) == 1, "ambiguous root permutation"
            p.append(hits[0])
        perm[g] = p
    # j(a) = perm[a]^(-1)(0); the map a -> j(a) must be a bijection
    j_of = {}
    for g in range(ring.nG):
        pre = [j for j in range(n) if perm[g][j] == 0]
        assert len(pre) == 1
        j_of[g] = pre[0]
    assert len(set(j_of.values())) == n, "G is not simply transitive on places"

    def coords_of_xpoly(xp) -> RLaurent:
        vals = [_eval_xpoly_at(F, xp, roots[j_of[g]], ring_sc) for g in range(ring.nG)]
        cmap = {}
        for g, v in enumerate(vals):
            if v.is_zero():
                continue
            for k in range(v.c.shape[0]):
                e = v.vtop - k
                if e < -prec:
                    break
                if e not in cmap:
                    cmap[e] = ring.zero()
                arr = cmap[e].copy()
                arr[g] = v.c[k, 0]
                cmap[e] = arr
        return RLaurent.from_coeff_map(ring, cmap, prec)

    theta_tau = RLaurent.one(ring, prec)
    gens = tuple(coords_of_xpoly(xp) for xp in lattice_xpolys)
    ell = 1
    for attempt in range(4):
        model = InfinityModel(
            ring=ring, theta_tau=theta_tau, lattice_gens=gens, prec=prec, ell=ell
        )
        try:
            certify_discreteness(model)
            return model
        except DiscretenessViolated:
            ell += 1
    raise UnsupportedConductor("discreteness radius certification failed")


def infinity_single_tame(
    ring: GroupRing, F: FqField, f: tuple, group_iso, lattice_xpolys, prec: int
) -> InfinityModel:
    """Infinity model for deg f = 1: Phi_f = x^(q-1) + f(t), one totally
    (tamely) ramified place, frame theta = sum_i w^i with w = 1/x."""
    group, iso = group_iso
    ring_sc = _scalar_ring(F)
    e = F.q - 1
    nG = ring.nG
    assert nG == e
    # w-basis algebra: w^a w^b = w^((a+b) mod e) * scale^((a+b)//e),
    # scale = w^e = (-f(t))^{-1}
    neg_f = apoly_neg(F, f)
    scale = RPoly.from_scalar_poly(ring_sc, neg_f).to_laurent(prec + 8).inv()

    def wmul(a_vec, b_vec):
        out = [RLaurent.zero(ring_sc, prec + 8) for _ in range(e)]
        for a in range(e):
            if a_vec[a].is_zero():
                continue
            for b in range(e):
                if b_vec[b].is_zero():
                    continue
                idx = (a + b) % e
                term = a_vec[a] * b_vec[b]
                if a + b >= e:
                    term = term * scale
                out[idx] = out[idx] + term
        return out

    def wconst(c: int):
        out = [RLaurent.zero(ring_sc, prec + 8) for _ in range(e)]
        out[0] = RLaurent.one(ring_sc, prec + 8).scale_gr(ring_sc.from_scalar(c))
        return out

    # x = w^{-1} = -f(t) w^(e-1)
    x_vec = [RLaurent.zero(ring_sc, prec + 8) for _ in range(e)]
    x_vec[(e - 1) % e] = RPoly.from_scalar_poly(ring_sc, neg_f).to_laurent(prec + 8)
    if e == 1:
        # q = 2: single place, unramified; the split model handles it
        raise UnsupportedConductor("use the split model for q = 2")

    def xpoly_to_w(xp):
        out = wconst(0)
        for c in reversed(xp):
            out = wmul(out, x_vec)
            if c:
                add = RPoly.from_scalar_poly(ring_sc, c).to_laurent(prec + 8)
                out[0] = out[0] + add
        return out

    # theta = sum_i w^i; sigma_c theta = sum_i c^{-i} w^i; Vandermonde solve
    residue_of = {code: res for res, code in iso.items()}
    consts = []
    for g in range(nG):
        res = residue_of[g]
        assert len(res) == 1, "unit group of a degree-1 conductor is F_q^*"
        consts.append(res[0])
    V = np.zeros((e, e), dtype=np.uint8)
    for i in range(e):
        for gidx, c in enumerate(consts):
            V[i, gidx] = F.pow(F.inv(c), i)
    from .linalg import fq_inv

    Vinv = fq_inv(F, V)

    def frame_coords(w_vec) -> RLaurent:
        # column gidx of the Vandermonde corresponds to group code gidx
        cmap = {}
        for gidx in range(e):
            acc = RLaurent.zero(ring_sc, prec)
            for i in range(e):
                co = int(Vinv[gidx, i])
                if co and not w_vec[i].is_zero():
                    acc = acc + w_vec[i].scale_gr(ring_sc.from_scalar(co))
            if acc.is_zero():
                continue
            for k in range(acc.c.shape[0]):
                exp = acc.vtop - k
                if exp < -prec:
                    break
                if exp not in cmap:
                    cmap[exp] = ring.zero()
                arr = cmap[exp].copy()
                arr[gidx] = acc.c[k, 0]
                cmap[exp] = arr
        return RLaurent.from_coeff_map(ring, cmap, prec)

    # tau(theta) = theta^q = sum_i w^(i q)
    th_q = wconst(0)
    for i in range(e):
        a, b = (i * F.q) % e, (i * F.q) // e
        term = RLaurent.one(ring_sc, prec + 8)
        for _ in range(b):
            term = term * scale
        th_q[a] = th_q[a] + term
    theta_tau = frame_coords(th_q)
    gens = tuple(frame_coords(xpoly_to_w(xp)) for xp in lattice_xpolys)
    ell = 1
    for attempt in range(4):
        model = InfinityModel(
            ring=ring, theta_tau=theta_tau, lattice_gens=gens, prec=prec, ell=ell
        )
        try:
            certify_discreteness(model)
            return model
        except DiscretenessViolated:
            ell += 1
    raise UnsupportedConductor("discreteness radius certification failed")


# --- the main constructor ---------------------------------------------------------


def carlitz_cyclotomic(F: FqField, f: tuple, prec: int = 64, seed: int = 0) -> ExtensionData:
    """Extension data for K = F(lambda_f).

    Guaranteed configurations: deg f = 1 (any supported q), and any f over
    q = 2 whose infinity splits completely (in particular f = t^2 and
    irreducible f of degree <= 3).  Other conductors raise
    UnsupportedConductor with the obstruction."""
    f = tuple(int(c) for c in f)
    if len(f) < 2 or f[-1] != F.one:
        raise UnsupportedConductor("conductor must be monic and nonconstant")
    phi_x = carlitz_torsion_poly(F, f)
    group, iso = _unit_group(F, f)
    ring = GroupRing(F, group)
    if group.n == 1:
        from .extensions import trivial_extension

        return trivial_extension(F, prec=prec)
    fac = _factor_conductor(F, f)
    # wild primes: p divides |(A/pi^k)^*| = (q^d - 1) q^(d(k-1)) iff k >= 2
    wild = [pi for pi, k in fac.items() if k >= 2]
    taming: dict = {}
    nx = len(phi_x) - 1
    A = _ARing(F)
    if wild:
        taming, omega, _alpha = taming_module(
            ring, F, f, phi_x, (group, iso), wild, seed=seed
        )
        lattice_xpolys = [omega]
    else:
        lattice_xpolys = [_xmono(A, i, nx) for i in range(nx)]
    if F.q == 2:
        infinity = infinity_split_complete(
            ring, F, phi_x, (group, iso), lattice_xpolys, prec
        )
    elif len(f) - 1 == 1:
        infinity = infinity_single_tame(
            ring, F, f, (group, iso), lattice_xpolys, prec
        )
    else:
        raise UnsupportedConductor(
            "infinity model supported only for q = 2 (split) or deg f = 1 "
            f"(single tame place); got q = {F.q}, deg f = {len(f) - 1}"
        )

    def rule(pi):
        pi = tuple(pi)
        _, rem = apoly_divmod(F, f, pi)
        if rem:
            sigma = iso[poly_mod(F, pi, f)]
            return unramified_prime_data(ring, sigma, pi, seed=seed)
        return _ramified_prime_data(
            ring, F, f, phi_x, (group, iso), pi, fac[pi], taming, seed
        )

    label = "cyclotomic:" + ",".join(str(c) for c in f)
    return ExtensionData(
        ring=ring,
        label=label,
        infinity=infinity,
        wild_pis=tuple(sorted(taming.keys())),
        taming=taming,
        provenance="built-in",
        _prime_rule=rule,
    )

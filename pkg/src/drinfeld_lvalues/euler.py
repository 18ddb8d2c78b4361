"""Euler factors at primes of F: the monic sizes |M/v|_G and |E(M/v)|_G,
their ratio as a truncated Laurent series, the Carlitz closed form
Nv - e_v sigma_v, and the P_v^{*,G} builder for rank-1 cross-checks.

Factors are always computed by the residue-matrix route; the closed forms
are consistency gates."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .drinfeld import DrinfeldModule
from .errors import NotAUnit, WildInertia
from .extensions import LocalPrimeData
from .groupring import GroupRing
from .linalg import fitting_monic, size_ratio_series
from .series import RLaurent, RPoly

__all__ = [
    "EulerFactor",
    "drinfeld_residue_size",
    "euler_factor",
    "carlitz_closed_form",
    "pstar_from_pv",
]


@dataclass(frozen=True)
class EulerFactor:
    """One completed Euler factor |M/v|_G / |E(M/v)|_G at precision N."""

    pi: tuple
    numer: RPoly
    denom: RPoly
    ratio: RLaurent
    m_v: int  # largest m <= N with ratio = 1 mod t^-m


def drinfeld_residue_size(E: DrinfeldModule, data: LocalPrimeData) -> RPoly:
    """|E(M/v)|_G: Fitting generator of the fiber with the twisted t-action."""
    return fitting_monic(data.ring, data.drinfeld_t_matrix(E))


def residue_size(data: LocalPrimeData) -> RPoly:
    """|M/v|_G (equals Nv; computed, not assumed)."""
    return fitting_monic(data.ring, data.mat_t)


def _leading_agreement(ratio: RLaurent) -> int:
    """Largest m <= prec with ratio = 1 mod t^-m."""
    one = RLaurent.one(ratio.ring, ratio.prec)
    diff = ratio - one
    if diff.is_zero():
        return ratio.prec
    return min(-diff.vtop, ratio.prec)


def euler_factor(E: DrinfeldModule, data: LocalPrimeData, N: int) -> EulerFactor:
    numer = residue_size(data)
    denom = drinfeld_residue_size(E, data)
    ratio = size_ratio_series(numer, denom, N)
    m_v = _leading_agreement(ratio)
    assert m_v >= 1, "Euler factor not congruent to 1 mod 1/t"
    if E.rank == 1:
        assert m_v >= min(data.d, N), (
            "rank-1 factor must agree with 1 to order deg(v)"
        )
    return EulerFactor(pi=data.pi, numer=numer, denom=denom, ratio=ratio, m_v=m_v)


def carlitz_closed_form(data: LocalPrimeData) -> RPoly:
    """Nv - e_v sigma_v for the Carlitz module at a non-wild prime."""
    R = data.ring
    if data.ramification == "wild":
        raise WildInertia("closed form undefined at wildly ramified primes")
    e_v = R.inertia_idempotent(data.inertia)
    term = R.gact(data.frobenius, e_v)
    out = RPoly.from_scalar_poly(R, data.pi) - RPoly.from_gr(R, term)
    return out


def pstar_from_pv(
    ring: GroupRing,
    P_v: list[tuple],
    sigma_v: int,
    inertia,
    r: int,
    N: int,
) -> RLaurent:
    """Evaluate P_v^{*,G}(X) = X^r P_v(sigma_v e_v X^-1) / P_v(0) at X = 1.

    P_v is given by its coefficient list in X (A-polynomials); the value is
    sum_j P_j(t) (sigma_v e_v)^j / P_0(t) as a Laurent element."""
    R = ring
    if len(P_v) - 1 != r:
        raise ValueError("P_v must have degree r")
    e_v = R.inertia_idempotent(inertia)
    s = R.gact(sigma_v, e_v)
    numer = RPoly.zero(R)
    spow = R.one()
    for j, coeff in enumerate(P_v):
        if j > 0:
            spow = R.mul(spow, s)
        if coeff:
            numer = numer + RPoly.from_scalar_poly(R, coeff).scale(spow)
    p0 = P_v[0]
    if not p0:
        raise NotAUnit("P_v(0) = 0")
    d0 = len(p0) - 1
    den = RPoly.from_scalar_poly(R, p0)
    num_l = numer.to_laurent(N + d0)
    den_l = den.to_laurent(N + d0)
    return (num_l * den_l.inv()).truncate(N)

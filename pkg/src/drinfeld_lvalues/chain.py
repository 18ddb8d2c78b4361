"""Finite F_q[G]-free quotients V/U_i of V = K_infty/M.

In the frame coordinate, U_i = t^-i O[[1/t]][G] theta and the lattice M is
the A[G]-span of the stored generator coordinates.  The reducer keeps a
lazy row echelon of the lattice image, keyed by pivot (exponent, group
index); reducing a coordinate vector against it yields the canonical
representative supported on the non-pivot positions, and truncating below
t^-i realizes V/U_i as explicit F_q-linear algebra.

Correctness of the window enumeration is certified operationally: the
echelon is saturated a few exponents beyond the working window and any
later row insertion that would create a pivot inside the frozen window
raises (the chain is then rebuilt deeper); level dimensions must grow by
exactly |G| per step, which pins the discreteness radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .drinfeld import DrinfeldModule
from .errors import DiscretenessViolated, PrecisionLoss
from .extensions import ExtensionData, InfinityModel
from .modules import GModule, RBasis
from .series import RLaurent, RPoly

__all__ = ["LatticeReducer", "FiniteQuotientChain", "build_quotient_chain",
           "locality_level"]


class LatticeReducer:
    """Echelon reduction of frame coordinates modulo the lattice image."""

    def __init__(self, model: InfinityModel):
        self.model = model
        self.R = model.ring
        gens = [g for g in model.lattice_gens if not g.is_zero()]
        if not gens:
            raise ValueError("lattice has no nonzero generators")
        self.gens = gens
        self.vtops = [g.vtop for g in gens]
        self.rows: dict[tuple[int, int], RLaurent] = {}
        self._done_exponents: set[int] = set()
        self.frozen_below: int | None = None  # no new pivots allowed <= this

    # --- row machinery ------------------------------------------------------
    def _top_position(self, vec: RLaurent, floor: int):
        if vec.is_zero():
            return None
        for k in range(vec.c.shape[0]):
            e = vec.vtop - k
            if e <= floor:
                return None
            row = vec.c[k]
            for g in range(self.R.nG):
                if row[g]:
                    return (e, g)
        return None

    def manufacture(self, e: int) -> None:
        """Insert all lattice rows with top exponent exactly e."""
        if e in self._done_exponents:
            return
        self._done_exponents.add(e)
        for k, g in enumerate(self.gens):
            m = e - self.vtops[k]
            if m < 0:
                continue
            base = g.shift(m)
            for sg in range(self.R.nG):
                row = base.scale_gr(self.R.from_group(sg)) if sg else base
                self._insert(row)

    def _insert(self, row: RLaurent) -> None:
        R = self.R
        floor = -row.prec
        while True:
            pos = self._top_position(row, floor)
            if pos is None:
                return  # relation among generators (or zero to precision)
            if pos in self.rows:
                coeff = row.coeff(pos[0])[pos[1]]
                row = row - self.rows[pos].scale_gr(R.from_scalar(int(coeff)))
                continue
            if self.frozen_below is not None and pos[0] <= self.frozen_below:
                raise DiscretenessViolated(
                    f"late lattice row created a pivot at {pos} inside the "
                    "frozen window; rebuild the chain deeper"
                )
            inv = R.F.inv(int(row.coeff(pos[0])[pos[1]]))
            if inv != 1:
                row = row.scale_gr(R.from_scalar(inv))
            self.rows[pos] = row
            # re-reduce previously stored rows is unnecessary: reduction is
            # always performed against the live dict at use time
            return

    def saturate(self, lo: int, hi: int) -> None:
        for e in range(hi, lo - 1, -1):
            self.manufacture(e)

    def reduce(self, vec: RLaurent, floor: int, ensure: bool = True) -> dict:
        """Canonical residual of vec modulo lattice rows, above the floor.

        Returns {(exponent, group index): field code} on free positions.
        """
        R = self.R
        if not vec.is_zero() and vec.prec < -floor:
            raise PrecisionLoss(
                f"vector precision {vec.prec} cannot reach floor {floor}"
            )
        residual: dict[tuple[int, int], int] = {}
        guard = 0
        while True:
            guard += 1
            if guard > 100000:  # pragma: no cover
                raise AssertionError("reduction did not terminate")
            pos = self._top_position(vec, floor)
            if pos is None:
                return residual
            e, g = pos
            if ensure and e not in self._done_exponents:
                self.manufacture(e)
            if pos in self.rows:
                coeff = vec.coeff(e)[g]
                vec = vec - self.rows[pos].scale_gr(R.from_scalar(int(coeff)))
                continue
            coeff = int(vec.coeff(e)[g])
            residual[pos] = coeff
            mono = RLaurent.t_power(R, e, vec.prec).scale_gr(
                R.smul(coeff, R.from_group(g))
            )
            vec = vec - mono


@dataclass
class ChainLevel:
    """V/U_i with canonical basis positions (exponent desc, group asc)."""

    i: int
    positions: list[tuple[int, int]]
    index: dict = field(repr=False, default_factory=dict)
    module: GModule | None = field(repr=False, default=None)
    rbasis: RBasis | None = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return len(self.positions)


class FiniteQuotientChain:
    """The chain of quotients V/U_i for ell <= i <= i_max."""

    def __init__(self, ext: ExtensionData, i_max: int, buffer: int = 6):
        self.ext = ext
        self.model = ext.infinity
        self.R = ext.ring
        if i_max <= self.model.ell:
            raise ValueError("i_max must exceed the discreteness radius")
        self.i_max = i_max
        self.reducer = LatticeReducer(self.model)
        nG = self.R.nG
        hi = self.vtop_bound() + 1
        for _ in range(32):
            top = hi + buffer
            self.reducer.saturate(-i_max + 1, top)
            # highest exponent still carrying a free position
            e1 = -i_max
            for e in range(top, -i_max, -1):
                if any((e, g) not in self.reducer.rows for g in range(nG)):
                    e1 = e
                    break
            if top - e1 >= buffer:
                self.window_top = e1
                break
            hi = e1
        else:  # pragma: no cover
            raise AssertionError("window saturation did not stabilize")
        self.reducer.frozen_below = self.window_top
        self.levels: dict[int, ChainLevel] = {}
        prev_dim = None
        for i in range(self.model.ell, i_max + 1):
            lvl = self._build_level(i)
            self.levels[i] = lvl
            if prev_dim is not None and lvl.dim != prev_dim + self.R.nG:
                raise DiscretenessViolated(
                    f"dim V/U_{i} = {lvl.dim} != {prev_dim} + |G|; the stored "
                    "discreteness radius is wrong or the window is too small"
                )
            prev_dim = lvl.dim

    def vtop_bound(self) -> int:
        return max(g.vtop for g in self.model.lattice_gens if not g.is_zero())

    def _build_level(self, i: int) -> ChainLevel:
        positions = []
        for e in range(self.window_top, -i, -1):
            for g in range(self.R.nG):
                if (e, g) not in self.reducer.rows:
                    positions.append((e, g))
        lvl = ChainLevel(i=i, positions=positions)
        lvl.index = {p: k for k, p in enumerate(positions)}
        return lvl

    def level(self, i: int) -> ChainLevel:
        return self.levels[i]

    # --- coordinates ---------------------------------------------------------
    def rep_laurent(self, lvl: ChainLevel, coords: np.ndarray) -> RLaurent:
        """Lift level coordinates to a frame coordinate vector."""
        R = self.R
        cmap: dict[int, np.ndarray] = {}
        for k, (e, g) in enumerate(lvl.positions):
            if coords[k]:
                if e not in cmap:
                    cmap[e] = R.zero()
                cmap[e] = cmap[e].copy()
                cmap[e][g] = R.F.add(int(cmap[e][g]), int(coords[k]))
        return RLaurent.from_coeff_map(R, cmap, self.model.prec)

    def coords_of(self, lvl: ChainLevel, vec: RLaurent) -> np.ndarray:
        resid = self.reducer.reduce(vec, floor=-lvl.i)
        out = np.zeros(lvl.dim, dtype=np.uint8)
        for pos, c in resid.items():
            if pos not in lvl.index:
                raise AssertionError(f"residual position {pos} outside level basis")
            out[lvl.index[pos]] = c
        return out

    # --- module structure ----------------------------------------------------
    def gmodule(self, i: int) -> GModule:
        lvl = self.level(i)
        if lvl.module is None:
            gen_mats = {}
            for gen in self.R.G.generators():
                mat = np.zeros((lvl.dim, lvl.dim), dtype=np.uint8)
                for k, (e, g) in enumerate(lvl.positions):
                    img = (e, self.R.G.mul(gen, g))
                    if img in lvl.index:
                        mat[lvl.index[img], k] = 1
                    else:
                        # group translate hit a pivot position: reduce
                        vec = RLaurent.t_power(self.R, e, self.model.prec).scale_gr(
                            self.R.from_group(img[1])
                        )
                        mat[:, k] = self.coords_of(lvl, vec)
                gen_mats[gen] = mat
            lvl.module = GModule.from_generator_actions(self.R, gen_mats, lvl.dim)
        return lvl.module

    def rbasis(self, i: int, seed: int = 0) -> RBasis:
        lvl = self.level(i)
        if lvl.rbasis is None:
            lvl.rbasis = self.gmodule(i).r_basis(seed=seed)
        return lvl.rbasis

    def operator_matrix_r(self, op, i: int, seed: int = 0) -> np.ndarray:
        """R-matrix of a coordinate operator on V/U_i in the R-basis."""
        lvl = self.level(i)
        rb = self.rbasis(i, seed=seed)
        k = rb.rank
        A = np.zeros((k, k, self.R.nG), dtype=np.uint8)
        for j, bvec in enumerate(rb.vecs):
            img = op(self.rep_laurent(lvl, bvec))
            co = rb.express(self.coords_of(lvl, img))
            for ii in range(k):
                A[ii, j] = co[ii]
        return A


def build_quotient_chain(ext: ExtensionData, i_max: int) -> FiniteQuotientChain:
    """Exact finite linear-algebra model of the neighborhood chain."""
    return FiniteQuotientChain(ext, i_max)


# --- operators on frame coordinates ------------------------------------------


def scalar_poly_laurent(ring, a: tuple, prec: int) -> RLaurent:
    return RPoly.from_scalar_poly(ring, a).to_laurent(prec)


def phi_t_coordinate_op(E: DrinfeldModule, model: InfinityModel):
    """x -> coordinate of phi_E(t) applied to x theta."""
    R = model.ring

    def op(x: RLaurent) -> RLaurent:
        out = x.shift(1)
        y = x
        for a in E.a:
            y = model.tau_coord(y)
            if a:
                out = out + y * scalar_poly_laurent(R, a, y.prec + len(a))
        return out

    return op


def phi_n_op(E: DrinfeldModule, model: InfinityModel, n: int):
    """x -> coordinate of (t - phi_E(t)) t^(n-1) x theta = -sum a_i tau^i(t^(n-1) x)."""
    R = model.ring

    def op(x: RLaurent) -> RLaurent:
        y = x.shift(n - 1)
        out = RLaurent.zero(R, y.prec)
        z = y
        for a in E.a:
            z = model.tau_coord(z)
            if a:
                out = out + z * scalar_poly_laurent(R, a, z.prec + len(a))
        return -out

    return op


def locality_level(E: DrinfeldModule, model: InfinityModel, n: int) -> int:
    """Certified I_n with phi_n(U_j) inside U_(j+1) for all j >= I_n.

    Uses tau(U_j) in U_(q j) (the frame tau-coordinate has nonpositive top
    exponent) and deg a_i bookkeeping; exact integer arithmetic."""
    assert model.theta_tau.vtop <= 0, "tau(theta) must be integral"
    q = model.ring.F.q
    out = model.ell
    for i, a in enumerate(E.a, start=1):
        if not a:
            continue
        d = len(a) - 1
        num = d + 1 + (n - 1) * q**i
        den = q**i - 1
        out = max(out, -(-num // den))
    return out


def verify_locality(E: DrinfeldModule, model, chain: FiniteQuotientChain, n: int, level: int) -> bool:
    """Spot-check phi_n(U_j) in U_(j+1) on the generators of U_j/U_(j+1)."""
    R = model.ring
    op = phi_n_op(E, model, n)
    for j in (level, level + 1):
        for g in range(R.nG):
            x = RLaurent.t_power(R, -j, model.prec).scale_gr(R.from_group(g))
            img = op(x)
            if not img.is_zero() and img.vtop > -(j + 1):
                return False
    return True

"""Finite F_q[G]-modules presented as F_q coordinate spaces with a G-action.

Used for residue fibers, chain quotients, lattice quotients, and class
modules.  A module knows its F_q-dimension and one permutation-action
matrix per group element; optional extra endomorphism matrices (the
t-action, the tau-action) ride along in ``ops``.

Freeness over R = F_q[G] is decided by searching for dim/|G| elements
whose G-orbits span; for a finite module that span condition is exactly
R-generation, and equality of cardinalities upgrades generation to
freeness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .groupring import GroupRing
from .linalg import fq_inv, fq_rank, fq_solve
from .series import RPoly

__all__ = ["GModule", "RBasis"]


@dataclass
class GModule:
    """F_q^dim with a G-action; gmats[g] is the matrix of the element g."""

    ring: GroupRing
    gmats: np.ndarray  # (nG, dim, dim) uint8
    ops: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.gmats.shape[1]

    @classmethod
    def from_generator_actions(cls, ring: GroupRing, gen_mats: dict[int, np.ndarray], dim: int, ops=None):
        """Build the full action table from matrices of the group generators."""
        F = ring.F
        nG = ring.nG
        gmats = np.zeros((nG, dim, dim), dtype=np.uint8)
        gmats[0] = np.eye(dim, dtype=np.uint8)
        done = {0}
        frontier = [0]
        while frontier:
            g = frontier.pop()
            for gen, mat in gen_mats.items():
                h = ring.G.mul(gen, g)
                if h not in done:
                    gmats[h] = _fq_matmul(F, mat, gmats[g])
                    done.add(h)
                    frontier.append(h)
        assert len(done) == nG, "generator set does not generate G"
        return cls(ring, gmats, ops or {})

    def act_gr(self, x, vec) -> np.ndarray:
        """Action of a group-ring element on a coordinate vector."""
        F = self.ring.F
        out = np.zeros(self.dim, dtype=np.uint8)
        for g in range(self.ring.nG):
            if x[g]:
                out = F.ADD[out, F.MUL[x[g], _fq_matvec(F, self.gmats[g], vec)]]
        return out

    def orbit_matrix(self, vecs) -> np.ndarray:
        """Columns g*m_i for i outer, g inner: shape (dim, k*nG)."""
        cols = []
        for v in vecs:
            for g in range(self.ring.nG):
                cols.append(_fq_matvec(self.ring.F, self.gmats[g], v))
        return np.array(cols, dtype=np.uint8).T.copy()

    def r_basis(self, seed: int = 0, attempts: int = 200) -> "RBasis":
        """Find an R-basis (raises ValueError when the module is not free)."""
        R = self.ring
        nG = R.nG
        if self.dim % nG != 0:
            raise ValueError(
                f"dim {self.dim} not a multiple of |G| = {nG}: not R-free"
            )
        k = self.dim // nG
        if k == 0:
            return RBasis(self, [], np.zeros((0, 0), dtype=np.uint8))
        rng = np.random.default_rng(seed)
        # greedy from coordinate vectors first, then seeded random retries
        candidates = [_unit_vec(self.dim, i) for i in range(self.dim)]
        for attempt in range(attempts):
            chosen: list[np.ndarray] = []
            span_rows = np.zeros((0, self.dim), dtype=np.uint8)
            pool = candidates if attempt == 0 else [
                rng.integers(0, R.F.q, self.dim).astype(np.uint8)
                for _ in range(4 * k)
            ]
            for cand in pool:
                if len(chosen) == k:
                    break
                trial = self.orbit_matrix(chosen + [cand]).T
                if fq_rank(R.F, trial) == (len(chosen) + 1) * nG:
                    chosen.append(np.asarray(cand, dtype=np.uint8))
            if len(chosen) == k:
                mat = self.orbit_matrix(chosen)
                inv = fq_inv(R.F, mat)
                return RBasis(self, chosen, inv)
        raise ValueError("R-basis search exhausted; module may not be free")

    def is_free(self, seed: int = 0) -> bool:
        try:
            self.r_basis(seed=seed)
            return True
        except ValueError:
            return False


def _unit_vec(n, i):
    v = np.zeros(n, dtype=np.uint8)
    v[i] = 1
    return v


def _fq_matvec(F, m, v) -> np.ndarray:
    prod = F.MUL[m, np.asarray(v, dtype=np.uint8)[None, :]]
    out = np.zeros(m.shape[0], dtype=np.uint8)
    for j in range(m.shape[1]):
        out = F.ADD[out, prod[:, j]]
    return out


def _fq_matmul(F, a, b) -> np.ndarray:
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    for j in range(b.shape[1]):
        out[:, j] = _fq_matvec(F, a, b[:, j])
    return out


@dataclass
class RBasis:
    """An R-basis of a free GModule with the precomputed coordinate solve."""

    module: GModule
    vecs: list[np.ndarray]
    inv: np.ndarray  # inverse of the orbit matrix (columns (i, g))

    @property
    def rank(self) -> int:
        return len(self.vecs)

    def express(self, vec) -> np.ndarray:
        """R-coefficients (rank, nG) with vec = sum_i coeff_i * basis_i."""
        R = self.module.ring
        x = _fq_matvec(R.F, self.inv, vec)
        return x.reshape(self.rank, R.nG)

    def matrix_of(self, op: np.ndarray) -> np.ndarray:
        """R-matrix of an R-linear endomorphism given by an F_q matrix.

        Returns A with op(basis_j) = sum_i A[i, j] * basis_i.
        """
        R = self.module.ring
        k = self.rank
        A = np.zeros((k, k, R.nG), dtype=np.uint8)
        for j, v in enumerate(self.vecs):
            img = _fq_matvec(R.F, op, v)
            co = self.express(img)
            for i in range(k):
                A[i, j] = co[i]
        return A

    def size_monic(self, t_op: np.ndarray) -> RPoly:
        """|M|_G from the t-action matrix (must be R-linear)."""
        from .linalg import fitting_monic

        return fitting_monic(self.module.ring, self.matrix_of(t_op))

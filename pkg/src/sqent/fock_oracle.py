"""Brute-force truncated Fock-space simulator.

Used only as an independent check of the closed forms in
:mod:`sqent.mode_transform`. Ladder operators are stored as sparse matrices;
eigensolves are dense up to ``DENSE_LIMIT`` rows and shift-invert Lanczos
beyond.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import AmbiguityError, ResourceError, TruncationError, ValidationError
from .measures import PureBipartiteState, entropy_of_spectrum
from .mode_transform import BogoliubovMap, require_canonical

MAX_DIM = 20_000
DENSE_LIMIT = 3_000


def single_mode_annihilator(cutoff: int) -> sp.csr_matrix:
    """``a`` on span{|0>, ..., |cutoff>} with ``<n-1|a|n> = sqrt(n)``."""
    return sp.diags(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1, format="csr")


@dataclass(frozen=True)
class LadderOperatorSet:
    modes: int
    cutoff: int
    annihilators: tuple

    @property
    def dim(self) -> int:
        return (self.cutoff + 1) ** self.modes

    def a(self, i: int) -> sp.csr_matrix:
        return self.annihilators[i]

    def adag(self, i: int) -> sp.csr_matrix:
        return self.annihilators[i].conj().T.tocsr()

    def number(self, i: int) -> sp.csr_matrix:
        return (self.adag(i) @ self.a(i)).tocsr()

    def identity(self) -> sp.csr_matrix:
        return sp.identity(self.dim, dtype=float, format="csr")

    def transformed(self, bmap: BogoliubovMap) -> list[sp.csr_matrix]:
        """New-mode annihilators ``b_m = sum_n alpha_mn a_n + beta_mn a_n^+``."""
        if bmap.modes != self.modes:
            raise ValidationError(f"map has {bmap.modes} modes, operator set has {self.modes}")
        out = []
        for m in range(self.modes):
            b = sp.csr_matrix((self.dim, self.dim), dtype=complex)
            for n in range(self.modes):
                if bmap.alpha[m, n] != 0:
                    b = b + bmap.alpha[m, n] * self.a(n)
                if bmap.beta[m, n] != 0:
                    b = b + bmap.beta[m, n] * self.adag(n)
            out.append(b.tocsr())
        return out


def build_ladder(modes: int, cutoff: int, max_dim: int = MAX_DIM) -> LadderOperatorSet:
    if modes < 1 or cutoff < 1:
        raise ValidationError(f"need modes >= 1 and cutoff >= 1, got {modes}, {cutoff}")
    dim = (cutoff + 1) ** modes
    if dim > max_dim:
        raise ResourceError(f"(cutoff+1)^modes = {dim} exceeds the limit {max_dim}")
    a = single_mode_annihilator(cutoff)
    eye = sp.identity(cutoff + 1, format="csr")
    ops = []
    for i in range(modes):
        factors = [a if j == i else eye for j in range(modes)]
        ops.append(reduce(lambda x, y: sp.kron(x, y, format="csr"), factors))
    return LadderOperatorSet(modes, cutoff, tuple(ops))


@dataclass(frozen=True)
class TruncatedFockState:
    """Amplitudes indexed by occupation tuples ``(n_1, ..., n_M)``, each ``<= cutoff``.

    ``residual`` is ``sum_m ||b_m psi||^2`` measured with ladder operators one
    level above the cutoff, so it includes the error made by truncating.
    """

    modes: int
    cutoff: int
    amplitudes: np.ndarray
    residual: float | None = None

    def __post_init__(self):
        shape = (self.cutoff + 1,) * self.modes
        amps = np.array(self.amplitudes, dtype=complex).reshape(shape)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.ravel()

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def tail_mass(self) -> float:
        """Probability of any mode being occupied above ``cutoff - 2``."""
        occ = np.indices(self.amplitudes.shape)
        mask = np.any(occ > self.cutoff - 2, axis=0)
        return float(np.sum(np.abs(self.amplitudes[mask]) ** 2) / self.norm_squared)

    @property
    def truncation_error(self) -> float:
        return self.tail_mass()

    @classmethod
    def from_bipartite(cls, psi: PureBipartiteState) -> "TruncatedFockState":
        """Two-mode state whose amplitude matrix is ``psi`` (square, normalized)."""
        d1, d2 = psi.dims
        if d1 != d2:
            raise ValidationError(f"two-mode Fock state needs a square amplitude matrix, got {psi.dims}")
        return cls(2, d1 - 1, psi.normalized().amplitudes)

    @classmethod
    def basis(cls, modes: int, cutoff: int, occupations: Sequence[int]) -> "TruncatedFockState":
        amps = np.zeros((cutoff + 1,) * modes, dtype=complex)
        amps[tuple(occupations)] = 1.0
        return cls(modes, cutoff, amps)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def _lowest_two(h: sp.csr_matrix) -> tuple[np.ndarray, np.ndarray]:
    dim = h.shape[0]
    if dim <= DENSE_LIMIT:
        m = h.toarray()
        if not np.any(m.imag):
            m = m.real
        w, v = sla.eigh(m, subset_by_index=[0, min(1, dim - 1)])
        return w, v
    # h is PSD; shift below zero so shift-invert targets the bottom of the spectrum
    v0 = np.ones(dim, dtype=h.dtype)
    w, v = spla.eigsh(h, k=2, sigma=-0.1, which="LM", v0=v0)
    order = np.argsort(w)
    return w[order], v[:, order]


def numeric_vacuum(
    ops: LadderOperatorSet,
    bmap: BogoliubovMap,
    max_tail_mass: float = 1e-6,
    ambiguity_gap: float = 1e-6,
) -> TruncatedFockState:
    """Unit vector minimizing ``sum_m ||b_m psi||^2`` in the truncated space."""
    require_canonical(bmap)
    bs = ops.transformed(bmap)
    h = reduce(lambda x, y: x + y, [(b.conj().T @ b) for b in bs]).tocsr()
    h = 0.5 * (h + h.conj().T)
    w, v = _lowest_two(h)
    if ops.dim > 1 and w[1] - w[0] < ambiguity_gap:
        raise AmbiguityError(
            f"lowest eigenvalues {w[0]:.3e}, {w[1]:.3e} are degenerate within {ambiguity_gap:g}"
        )
    psi = _fix_phase(v[:, 0])
    state = TruncatedFockState(ops.modes, ops.cutoff, psi)
    tail = state.tail_mass()
    if tail > max_tail_mass:
        raise TruncationError(
            f"tail mass {tail:.3e} above occupation {ops.cutoff - 2} exceeds {max_tail_mass:g}; "
            "raise the cutoff"
        )
    return TruncatedFockState(ops.modes, ops.cutoff, psi, residual=_embedded_residual(state, bmap))


def _embedded_residual(state: TruncatedFockState, bmap: BogoliubovMap) -> float:
    big = build_ladder(state.modes, state.cutoff + 1, max_dim=max(MAX_DIM, (state.cutoff + 2) ** state.modes))
    pad = [(0, 1)] * state.modes
    vec = np.pad(state.amplitudes, pad).ravel()
    return float(sum(np.linalg.norm(b @ vec) ** 2 for b in big.transformed(bmap)))


def expectation(ops: LadderOperatorSet, state: TruncatedFockState, observable) -> complex:
    vec = state.vector
    if observable.shape != (vec.size, vec.size) or ops.dim != vec.size:
        raise ValidationError(
            f"observable shape {observable.shape} does not match state dimension {vec.size}"
        )
    return complex(np.vdot(vec, observable @ vec) / np.vdot(vec, vec))


def bipartition_entropy(state: TruncatedFockState, left: Sequence[int]) -> float:
    left = sorted(set(int(i) for i in left))
    if not left or len(left) >= state.modes or any(i < 0 or i >= state.modes for i in left):
        raise ValidationError(f"{left} is not a nonempty proper subset of {state.modes} modes")
    right = [i for i in range(state.modes) if i not in left]
    d = state.cutoff + 1
    mat = state.amplitudes.transpose(left + right).reshape(d ** len(left), -1)
    s = np.linalg.svd(mat, compute_uv=False) ** 2
    return entropy_of_spectrum(s / np.sum(s))

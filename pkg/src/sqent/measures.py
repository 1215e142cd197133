"""Density matrices and the standard entanglement/correlation measures.

All entropies are in nats. Eigenvalues are always taken from the explicitly
Hermitized matrix ``(M + M^H) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .errors import NotAStateError, ValidationError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
# eigenvalues in (-CLAMP_TOL, 0) are treated as round-off and set to zero
CLAMP_TOL = 1e-8
# relative floor below which eigenvalues of rho count as exact zeros when
# forming matrix square roots (keeps sqrt(eps) noise out of the concurrence)
SQRT_FLOOR = 1e-14
# concurrence of a unit-trace state is accurate to a few eps; below this it is noise
CONCURRENCE_FLOOR = 4 * np.finfo(float).eps

# sigma_y (x) sigma_y in the computational basis
SPIN_FLIP = np.array(
    [[0, 0, 0, -1],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [-1, 0, 0, 0]],
    dtype=complex,
)


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


@dataclass(frozen=True)
class DensityMatrix:
    """Complex Hermitian matrix carrying a (possibly unnormalized) spin state.

    ``raw`` matrices skip the positivity check; they are used to reproduce
    unnormalized or unphysical matrices verbatim.
    """

    entries: np.ndarray
    raw: bool = False
    _trace: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise ValidationError(f"density matrix must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValidationError("density matrix has non-finite entries")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValidationError("density matrix is not Hermitian")
        m = _hermitize(m)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "_trace", float(np.trace(m).real))
        if not self.raw:
            scale = max(1.0, abs(self._trace))
            if np.linalg.eigvalsh(_hermitize(m))[0] < -PSD_TOL * scale:
                raise NotAStateError("density matrix is not positive semidefinite")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return self._trace

    @property
    def normalized(self) -> bool:
        return abs(self._trace - 1.0) <= TRACE_TOL

    def normalize(self) -> "DensityMatrix":
        if abs(self._trace) < 1e-300:
            raise ValidationError("cannot normalize a matrix with zero trace")
        return DensityMatrix(self.entries / self._trace, raw=self.raw)

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(_hermitize(self.entries))

    def purity(self) -> float:
        m = self.entries
        return float(np.real(np.trace(m @ m)))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


DensityLike = Union[DensityMatrix, np.ndarray, Sequence]


def as_density(rho: DensityLike, raw: bool = True) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    return DensityMatrix(np.asarray(rho), raw=raw)


def projector(psi) -> DensityMatrix:
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValidationError("zero vector has no projector")
    psi = psi / norm
    return DensityMatrix(np.outer(psi, psi.conj()))


def maximally_mixed(dim: int) -> DensityMatrix:
    return DensityMatrix(np.eye(dim) / dim)


def singlet() -> DensityMatrix:
    return projector([0, 1, -1, 0])


@dataclass(frozen=True)
class PureBipartiteState:
    """Pure state on C^d1 (x) C^d2 stored as its d1 x d2 amplitude matrix."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.ndim != 2 or 0 in a.shape:
            raise ValidationError(f"amplitudes must be a nonempty matrix, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def dims(self) -> tuple[int, int]:
        return self.amplitudes.shape

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def normalized(self) -> "PureBipartiteState":
        n2 = self.norm_squared
        if n2 == 0:
            raise ValidationError("zero vector cannot be normalized")
        return PureBipartiteState(self.amplitudes / np.sqrt(n2))

    def vector(self) -> np.ndarray:
        return self.amplitudes.ravel()

    def density(self) -> DensityMatrix:
        return projector(self.vector())

    def reduced(self, which: int = 0) -> DensityMatrix:
        a = self.normalized().amplitudes
        if which == 0:
            return DensityMatrix(a @ a.conj().T)
        return DensityMatrix(a.T @ a.conj())


def entropy_of_spectrum(p: np.ndarray) -> float:
    """``-sum p ln p`` with 0 ln 0 = 0; ``p`` must already be clean."""
    p = np.asarray(p, dtype=float)
    p = p[p > 0.0]
    return float(-np.sum(p * np.log(p)))


def _checked_matrix(rho: DensityLike, require_normalized: bool = True) -> np.ndarray:
    dm = as_density(rho)
    if require_normalized and not dm.normalized:
        raise ValidationError(f"state must be normalized (trace = {dm.trace!r})")
    return _hermitize(np.asarray(dm.entries))


def _clean_spectrum(m: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(m)
    if w[0] < -CLAMP_TOL:
        raise NotAStateError(f"eigenvalue {w[0]:.3e} is below -{CLAMP_TOL:g}")
    return np.clip(w, 0.0, None)


def von_neumann_entropy(rho: DensityLike) -> float:
    return entropy_of_spectrum(_clean_spectrum(_checked_matrix(rho)))


def schmidt_coefficients(psi: PureBipartiteState) -> np.ndarray:
    """Squared singular values of the normalized amplitude matrix, descending."""
    psi = psi.normalized()
    s = np.linalg.svd(psi.amplitudes, compute_uv=False)
    return s ** 2


def schmidt_entropy(psi: PureBipartiteState) -> float:
    return entropy_of_spectrum(schmidt_coefficients(psi))


def _check_dims(dim: int, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if not dims or any(d <= 0 for d in dims):
        raise ValidationError(f"invalid factor dimensions {dims}")
    if int(np.prod(dims)) != dim:
        raise ValidationError(f"factor dimensions {dims} do not multiply to {dim}")
    return dims


def partial_transpose(rho: DensityLike, dims: Sequence[int] = (2, 2), which: int = 1) -> DensityMatrix:
    """Transpose the indices of factor ``which`` (0-based) of a bipartite matrix."""
    dm = as_density(rho)
    if len(dims) != 2:
        raise ValidationError("partial_transpose needs exactly two factors")
    d1, d2 = _check_dims(dm.dim, dims)
    if which not in (0, 1):
        raise ValidationError(f"subsystem index must be 0 or 1, got {which}")
    t = np.asarray(dm.entries).reshape(d1, d2, d1, d2)
    if which == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return DensityMatrix(t.reshape(d1 * d2, d1 * d2), raw=True)


def min_ppt_eigenvalue(rho: DensityLike, dims: Sequence[int] = (2, 2), which: int = 1) -> float:
    return float(partial_transpose(rho, dims, which).eigvalsh()[0])


def negativity(rho: DensityLike, dims: Sequence[int] = (2, 2), which: int = 1) -> float:
    _checked_matrix(rho)
    w = partial_transpose(rho, dims, which).eigvalsh()
    return float(-np.sum(w[w < 0.0]))


def partial_trace(rho: DensityLike, dims: Sequence[int], keep: Sequence[int]) -> DensityMatrix:
    """Reduced matrix on the factors listed in ``keep`` (kept in ascending order)."""
    dm = as_density(rho)
    dims = _check_dims(dm.dim, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if not keep or any(k < 0 or k >= n for k in keep):
        raise ValidationError(f"bad index set {keep} for {n} factors")
    drop = [i for i in range(n) if i not in keep]
    t = np.asarray(dm.entries).reshape(dims + dims)
    # bring kept row/col indices to the front, dropped ones to the back
    order = keep + drop + [n + i for i in keep] + [n + i for i in drop]
    t = t.transpose(order)
    dk = int(np.prod([dims[i] for i in keep]))
    dd = int(np.prod([dims[i] for i in drop])) if drop else 1
    t = t.reshape(dk, dd, dk, dd)
    return DensityMatrix(np.einsum("ajbj->ab", t), raw=dm.raw)


def _sqrt_psd(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    w = np.where(w > SQRT_FLOOR * max(w[-1], 0.0), w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def _two_qubit(rho: DensityLike) -> np.ndarray:
    m = _checked_matrix(rho)
    if m.shape != (4, 4):
        raise ValidationError(f"two-qubit state required, got shape {m.shape}")
    _clean_spectrum(m)
    return m


def concurrence(rho: DensityLike) -> float:
    """Wootters concurrence of a two-qubit state.

    The decreasing square roots of the eigenvalues of ``rho (Y rho* Y)``, with
    ``Y = sigma_y (x) sigma_y``, are obtained as the singular values of
    ``sqrt(rho) Y sqrt(rho)*``; this avoids taking square roots of
    round-off-level eigenvalues.
    """
    m = _two_qubit(rho)
    root = _sqrt_psd(m)
    lam = np.linalg.svd(root @ SPIN_FLIP @ root.conj(), compute_uv=False)
    c = float(lam[0] - lam[1] - lam[2] - lam[3])
    return c if c > CONCURRENCE_FLOOR else 0.0


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log(x) - (1.0 - x) * np.log1p(-x))


def entanglement_of_formation(rho: DensityLike) -> float:
    c = concurrence(rho)
    return binary_entropy(0.5 * (1.0 + np.sqrt(max(0.0, 1.0 - c * c))))


def mutual_information(rho: DensityLike, dims: Sequence[int] = (2, 2)) -> float:
    """``S(rho_1) + S(rho_2) - S(rho_12)`` for a bipartition with ``dims = (d1, d2)``."""
    dm = as_density(rho)
    _checked_matrix(dm)
    if len(dims) != 2:
        raise ValidationError("mutual_information needs exactly two factors")
    _check_dims(dm.dim, dims)
    s1 = von_neumann_entropy(partial_trace(dm, dims, [0]))
    s2 = von_neumann_entropy(partial_trace(dm, dims, [1]))
    return s1 + s2 - von_neumann_entropy(dm)

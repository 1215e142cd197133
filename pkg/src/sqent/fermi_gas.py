"""Spin correlations of electrons in an ideal zero-temperature Fermi gas.

Spin density matrices are built unnormalized (the electron-density prefactor
cancels in every normalized quantity). Basis order for ``n`` spins is the
binary order of ``|s_1 ... s_n>`` with up = 0 and the first electron as the
most significant bit, so two spins are ordered uu, ud, du, dd.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .errors import DomainError, PreconditionError, ResourceError, ValidationError
from .measures import (
    DensityLike,
    DensityMatrix,
    as_density,
    concurrence,
    entanglement_of_formation,
    min_ppt_eigenvalue,
    mutual_information,
    negativity,
    partial_trace,
    partial_transpose,
)

SERIES_SWITCH = 0.5
MAX_ELECTRONS = 10
# permutation sums are explicit up to this size; larger n use the
# equivalent spin-block determinant expansion
MAX_EXPLICIT_PERMUTATIONS = 8

# coefficients of 3 j1(x) / x = sum_k c_k x^(2k), c_k = 3 (-1)^k 2(k+1) / (2k+3)!
_SERIES = [3.0 * (-1) ** k * 2 * (k + 1) / math.factorial(2 * k + 3) for k in range(9)]


def _bisect(func: Callable[[float], float], lo: float, hi: float, maxiter: int = 400) -> float:
    """Bisect a sign change of ``func`` on ``[lo, hi]`` down to adjacent floats."""
    flo, fhi = func(lo), func(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValidationError(f"no sign change on [{lo}, {hi}]")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = func(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo if abs(flo) <= abs(func(hi)) else hi


def exchange_f(x):
    """Exchange kernel ``3 j1(x) / x = 3 (sin x - x cos x) / x^3``.

    Below ``x = 0.5`` a Taylor series ``1 - x^2/10 + x^4/280 - ...`` replaces
    the closed form, which loses digits to cancellation there. Accepts scalars
    or arrays of dimensionless separations ``k_F |r - r'|``.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("separation must be non-negative")
    out = np.empty_like(arr)
    small = arr <= SERIES_SWITCH
    xs = arr[small]
    x2 = xs * xs
    acc = np.zeros_like(xs)
    for c in reversed(_SERIES):
        acc = acc * x2 + c
    out[small] = acc
    xl = arr[~small]
    out[~small] = 3.0 * (np.sin(xl) - xl * np.cos(xl)) / xl ** 3
    return float(out) if out.ndim == 0 else out


def first_exchange_zero() -> float:
    """First positive root of ``tan x = x``, where the kernel first vanishes."""
    return _bisect(lambda x: math.sin(x) - x * math.cos(x), math.pi, 1.5 * math.pi)


def _check_f(*fs: float) -> None:
    for f in fs:
        if not abs(f) <= 1.0:
            raise DomainError(f"exchange value must satisfy |f| <= 1, got {f!r}")


@dataclass(frozen=True)
class ExchangeGeometry:
    """Detector positions, in length units of ``1/k_fermi``.

    With ``k_fermi=None`` the coordinates are already dimensionless ``k_F r``.
    """

    positions: np.ndarray
    k_fermi: float | None = None

    def __post_init__(self):
        pos = np.array(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 3 or pos.shape[0] == 0:
            raise ValidationError(f"positions must be an (n, 3) array, got shape {pos.shape}")
        if not np.all(np.isfinite(pos)):
            raise ValidationError("positions must be finite")
        if self.k_fermi is not None and not self.k_fermi > 0:
            raise ValidationError(f"k_fermi must be positive, got {self.k_fermi!r}")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def scaled(self) -> np.ndarray:
        return self.positions if self.k_fermi is None else self.positions * self.k_fermi

    def exchange_matrix(self) -> np.ndarray:
        """``F[i, j] = f(k_F |r_i - r_j|)``; the diagonal is exactly 1."""
        p = self.scaled()
        d = np.sqrt(np.sum((p[:, None, :] - p[None, :, :]) ** 2, axis=-1))
        return exchange_f(d)

    def pair_f(self, i: int, j: int) -> float:
        return float(self.exchange_matrix()[i, j])


def two_electron_rho(f: float) -> DensityMatrix:
    """Unnormalized two-spin matrix: corners ``1 - f^2``, centre ``[[1, -f^2], [-f^2, 1]]``."""
    _check_f(f)
    f2 = f * f
    m = np.array(
        [[1 - f2, 0, 0, 0],
         [0, 1, -f2, 0],
         [0, -f2, 1, 0],
         [0, 0, 0, 1 - f2]],
        dtype=float,
    )
    return DensityMatrix(m, raw=True)


class PptSpectrum(NamedTuple):
    """Partial-transpose eigenvalues of the unnormalized two-spin matrix, ascending.

    ``quoted`` is the list ``{1-f^2, 1-f^2, 1, 1-2f^2}`` as commonly quoted;
    ``closed_form`` is ``{1-2f^2, 1, 1, 1}``, which is what the partial
    transpose actually has (its trace is ``4 - 2f^2``, same as the matrix).
    ``numeric`` comes from diagonalizing the partial transpose.
    """

    quoted: np.ndarray
    closed_form: np.ndarray
    numeric: np.ndarray

    def max_deviation(self, which: str = "closed_form") -> float:
        return float(np.max(np.abs(getattr(self, which) - self.numeric)))


def ppt_spectrum_two_electron(f: float) -> PptSpectrum:
    _check_f(f)
    f2 = f * f
    quoted = np.sort([1 - f2, 1 - f2, 1.0, 1 - 2 * f2])
    closed = np.sort([1 - 2 * f2, 1.0, 1.0, 1.0])
    numeric = partial_transpose(two_electron_rho(f)).eigvalsh()
    return PptSpectrum(quoted, closed, numeric)


class RadiusResult(NamedTuple):
    x_star: float
    radius: float
    residual: float
    first_zero: float
    quoted_estimate: float


def entanglement_radius(k_fermi: float = 1.0) -> RadiusResult:
    """Separation where ``f(k_F r)^2 = 1/2``, the edge of the PPT-entangled region.

    ``quoted_estimate`` is ``pi / (8 k_F)``, the rough figure often given for
    this radius; it does not satisfy the threshold condition.
    """
    if not k_fermi > 0:
        raise DomainError(f"k_fermi must be positive, got {k_fermi!r}")
    zero = first_exchange_zero()
    x = _bisect(lambda s: exchange_f(s) ** 2 - 0.5, 1e-3, zero)
    residual = abs(exchange_f(x) ** 2 - 0.5)
    return RadiusResult(x, x / k_fermi, residual, zero, math.pi / (8.0 * k_fermi))


def three_electron_rho(f1: float, f2: float, f3: float) -> DensityMatrix:
    """Unnormalized three-spin matrix from pair kernels ``f1 = f12``, ``f2 = f13``, ``f3 = f23``.

    Raw constructor: arbitrary triples need not be geometrically realizable,
    so positivity is not enforced.
    """
    _check_f(f1, f2, f3)
    F = np.array([[1.0, f1, f2], [f1, 1.0, f3], [f2, f3, 1.0]])
    return DensityMatrix(_permutation_sum(F), raw=True)


def permutation_parity(perm: Sequence[int]) -> int:
    """``+1`` or ``-1`` from the cycle decomposition: ``(-1)^(n - #cycles)``."""
    n = len(perm)
    seen = [False] * n
    cycles = 0
    for i in range(n):
        if not seen[i]:
            cycles += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    return -1 if (n - cycles) % 2 else 1


def _spin_bits(n: int) -> np.ndarray:
    idx = np.arange(2 ** n)
    return (idx[:, None] >> np.arange(n - 1, -1, -1)) & 1


def _permutation_sum(F: np.ndarray) -> np.ndarray:
    """``rho[s, t] = sum_sigma sgn(sigma) prod_{i: sigma(i) != i} F[i, sigma(i)] prod_i [s_i = t_sigma(i)]``."""
    n = F.shape[0]
    bits = _spin_bits(n)
    weights = 1 << np.arange(n - 1, -1, -1)
    rows = np.arange(2 ** n)
    # object dtype lets callers pass Fractions for exact arithmetic
    rho = np.zeros((2 ** n, 2 ** n), dtype=object if F.dtype == object else float)
    for perm in itertools.permutations(range(n)):
        w = 1
        for i, j in enumerate(perm):
            if i != j:
                w *= F[i, j]
        if w == 0:
            continue
        # t_sigma(i) = s_i  <=>  t = s composed with sigma^-1
        t_bits = np.empty_like(bits)
        t_bits[:, list(perm)] = bits
        rho[rows, t_bits @ weights] += permutation_parity(perm) * w
    return rho


def _block_determinant_sum(F: np.ndarray) -> np.ndarray:
    """Same matrix as :func:`_permutation_sum`, via ``det(F * [s_i = t_j])``.

    Only spin-conserving pairs (equal number of up spins) can be nonzero.
    """
    n = F.shape[0]
    bits = _spin_bits(n)
    ups = bits.sum(axis=1)
    rho = np.zeros((2 ** n, 2 ** n))
    for k in range(n + 1):
        idx = np.flatnonzero(ups == k)
        s = bits[idx]
        mask = s[:, None, :, None] == s[None, :, None, :]
        mats = F[None, None] * mask
        rho[np.ix_(idx, idx)] = np.linalg.det(mats)
    return rho


def n_electron_rho(geom: ExchangeGeometry, method: str = "auto", max_electrons: int = MAX_ELECTRONS) -> DensityMatrix:
    """Unnormalized ``2^n x 2^n`` spin matrix of ``n`` electrons at the given positions.

    Each permutation ``sigma`` of the electrons contributes its sign times the
    product of kernels ``f(r_i, r_sigma(i))`` over moved electrons; the spins
    route that weight to the element with ``s_i = t_sigma(i)``. ``method`` is
    ``"permutations"``, ``"determinant"`` or ``"auto"``.
    """
    n = geom.n
    if n > max_electrons:
        raise ResourceError(f"{n} electrons exceed the limit of {max_electrons} (2^n matrix)")
    F = geom.exchange_matrix()
    if method == "auto":
        method = "permutations" if n <= MAX_EXPLICIT_PERMUTATIONS else "determinant"
    if method == "permutations":
        m = _permutation_sum(F)
    elif method == "determinant":
        m = _block_determinant_sum(F)
    else:
        raise ValidationError(f"unknown method {method!r}")
    return DensityMatrix(0.5 * (m + m.T), raw=True)


def reduced_pair_from_three(f1: float, f2: float, f3: float) -> DensityMatrix:
    """Normalized spin state of electrons 1 and 2 after tracing out the third spin."""
    rho = three_electron_rho(f1, f2, f3).normalize()
    return partial_trace(rho, [2, 2, 2], [0, 1]).normalize()


def far_trace_consistency(geom: ExchangeGeometry, far_tol: float = 1e-8) -> DensityMatrix:
    """Reduced two-spin state of electrons 1 and 2 with electron 3 far away.

    The spatial trace over the third electron is taken as the far-separation
    limit, where its kernels with the other two vanish.
    """
    if geom.n != 3:
        raise PreconditionError(f"need exactly three electrons, got {geom.n}")
    F = geom.exchange_matrix()
    f1, f2, f3 = F[0, 1], F[0, 2], F[1, 2]
    if abs(f2) > far_tol or abs(f3) > far_tol:
        raise PreconditionError(
            f"third electron is not far: |f13| = {abs(f2):.3e}, |f23| = {abs(f3):.3e} > {far_tol:g}"
        )
    return reduced_pair_from_three(f1, f2, f3)


def overlap_model_rho(epsilon: float) -> DensityMatrix:
    """Spin state of two electrons with spatial overlap ``epsilon`` after tracing out space."""
    if not 0.0 <= epsilon <= 1.0:
        raise DomainError(f"epsilon must lie in [0, 1], got {epsilon!r}")
    e2 = epsilon * epsilon
    m = np.zeros((4, 4))
    m[1, 1] = m[2, 2] = 1.0
    m[1, 2] = m[2, 1] = -e2
    return DensityMatrix(m, raw=True)


def boson_polarization_rho() -> DensityMatrix:
    """Uniform 4 x 4 matrix: the product state ``(|H> + |V>)(|H> + |V>) / 2``."""
    return DensityMatrix(np.full((4, 4), 0.25))


SCAN_COLUMNS = ("r", "f", "min_ppt_eig", "concurrence", "eof_nats", "mutual_info_nats", "negativity")


def pair_correlations(f: float) -> dict[str, float]:
    rho = two_electron_rho(f).normalize()
    return {
        "f": float(f),
        "min_ppt_eig": min_ppt_eigenvalue(rho),
        "concurrence": concurrence(rho),
        "eof_nats": entanglement_of_formation(rho),
        "mutual_info_nats": mutual_information(rho),
        "negativity": negativity(rho),
    }


def scan_values(r_min: float, r_max: float, steps: int) -> np.ndarray:
    if not (math.isfinite(r_min) and math.isfinite(r_max)) or r_min < 0 or r_max <= r_min:
        raise ValidationError(f"invalid range [{r_min}, {r_max}]")
    if steps < 2:
        raise ValidationError(f"steps must be >= 2, got {steps}")
    return np.linspace(r_min, r_max, steps)


def correlation_scan(
    separations: Iterable[float],
    k_fermi: float | None = None,
    quantities: Sequence[str] | None = None,
) -> list[dict[str, float]]:
    """One row of two-spin correlation measures per separation, in input order."""
    cols = SCAN_COLUMNS[1:] if quantities is None else tuple(quantities)
    bad = [q for q in cols if q not in SCAN_COLUMNS[1:]]
    if bad:
        raise ValidationError(f"unknown quantities {bad}")
    if k_fermi is not None and not k_fermi > 0:
        raise ValidationError(f"k_fermi must be positive, got {k_fermi!r}")
    scale = 1.0 if k_fermi is None else float(k_fermi)
    rows = []
    for r in separations:
        r = float(r)
        if not r >= 0:
            raise ValidationError(f"separation must be non-negative, got {r!r}")
        full = pair_correlations(exchange_f(scale * r))
        row = {"r": r}
        row.update({q: full[q] for q in cols})
        rows.append(row)
    return rows


def pairwise_table(rho: DensityLike) -> list[dict[str, float]]:
    """EoF and mutual information of every two-spin reduced state of an ``n``-spin matrix."""
    rho = as_density(rho)
    n = int(round(math.log2(rho.dim)))
    if 2 ** n != rho.dim:
        raise ValidationError(f"dimension {rho.dim} is not a power of two")
    rho = rho.normalize()
    rows = []
    for i, j in itertools.combinations(range(n), 2):
        red = partial_trace(rho, [2] * n, [i, j]).normalize()
        rows.append({
            "i": i,
            "j": j,
            "min_ppt_eig": min_ppt_eigenvalue(red),
            "eof_nats": entanglement_of_formation(red),
            "mutual_info_nats": mutual_information(red),
        })
    return rows

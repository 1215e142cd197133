"""Bogoliubov mode transformations and the entropies they generate.

A map is stored as the pair ``(alpha, beta)`` in

    b_m = sum_n alpha[m, n] a_n + beta[m, n] a_n^dagger

so ``b`` are the new modes and ``a`` the old ones. Everything here is closed
form; :mod:`sqent.fock_oracle` provides the brute-force cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import constants

from .errors import DomainError, ValidationError
from .measures import PureBipartiteState, entropy_of_spectrum

CANONICAL_TOL = 1e-10


@dataclass(frozen=True)
class BogoliubovMap:
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        a = np.array(self.alpha, dtype=complex)
        b = np.array(self.beta, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ValidationError(f"alpha must be a square matrix, got shape {a.shape}")
        if b.shape != a.shape:
            raise ValidationError(f"beta shape {b.shape} does not match alpha shape {a.shape}")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def modes(self) -> int:
        return self.alpha.shape[0]


class CanonicalReport(NamedTuple):
    commutator_residual: float
    cross_residual: float
    canonical: bool


def check_canonical(bmap: BogoliubovMap, tol: float = CANONICAL_TOL) -> CanonicalReport:
    """Max-norm residuals of the two unitarity conditions on ``(alpha, beta)``.

    ``alpha alpha^H - beta beta^H = 1`` and ``alpha beta^T - beta alpha^T = 0``.
    """
    a, b = bmap.alpha, bmap.beta
    r1 = np.max(np.abs(a @ a.conj().T - b @ b.conj().T - np.eye(bmap.modes)))
    r2 = np.max(np.abs(a @ b.T - b @ a.T))
    return CanonicalReport(float(r1), float(r2), bool(r1 <= tol and r2 <= tol))


def require_canonical(bmap: BogoliubovMap, tol: float = CANONICAL_TOL) -> None:
    rep = check_canonical(bmap, tol)
    if not rep.canonical:
        raise ValidationError(
            "map is not canonical: residuals "
            f"{rep.commutator_residual:.3e}, {rep.cross_residual:.3e} exceed {tol:g}"
        )


def identity_map(modes: int) -> BogoliubovMap:
    return BogoliubovMap(np.eye(modes), np.zeros((modes, modes)))


def squeeze_map(rs: Sequence[float], modes: int | None = None) -> BogoliubovMap:
    """Independent two-mode squeezes on the mode pairs (0,1), (2,3), ...

    ``b_{2k} = cosh r_k a_{2k} + sinh r_k a_{2k+1}^dagger`` and symmetrically
    for ``b_{2k+1}``. Extra modes beyond the pairs are left untouched.
    """
    rs = [float(r) for r in rs]
    m = 2 * len(rs) if modes is None else int(modes)
    if m < 2 * len(rs):
        raise ValidationError(f"{len(rs)} pairs need at least {2 * len(rs)} modes")
    alpha = np.eye(m)
    beta = np.zeros((m, m))
    for k, r in enumerate(rs):
        i, j = 2 * k, 2 * k + 1
        alpha[i, i] = alpha[j, j] = math.cosh(r)
        beta[i, j] = beta[j, i] = math.sinh(r)
    return BogoliubovMap(alpha, beta)


def two_mode_squeeze_map(r: float) -> BogoliubovMap:
    return squeeze_map([r])


def half_mixing_map() -> BogoliubovMap:
    """Equal-weight mixing ``a_1 = (b_1 + b_2^+)/sqrt2``, ``a_2 = (b_1^+ - b_2)/sqrt2``.

    Every coefficient has magnitude ``1/sqrt2``, so ``|alpha|^2 - |beta|^2 = 0``
    and the map is *not* canonical; it exists as a validation vector for
    :func:`check_canonical`.
    """
    h = 1.0 / math.sqrt(2.0)
    return BogoliubovMap([[h, 0.0], [0.0, -h]], [[0.0, h], [h, 0.0]])


def _row(bmap: BogoliubovMap, i: int) -> np.ndarray:
    if not 0 <= i < bmap.modes:
        raise ValidationError(f"mode index {i} out of range for {bmap.modes} modes")
    return bmap.beta[i]


def vacuum_occupation(bmap: BogoliubovMap, i: int) -> float:
    """Particle content ``sum_j |beta_ij|^2`` of the new vacuum, summed along row ``i``.

    This is the occupation of old mode ``i`` when ``beta`` has equal row and
    column norms; :func:`column_occupation` is the general expression.
    """
    require_canonical(bmap)
    return float(np.sum(np.abs(_row(bmap, i)) ** 2))


def column_occupation(bmap: BogoliubovMap, i: int) -> float:
    """``<a_i^+ a_i>`` in the new vacuum for any canonical map: ``sum_k |beta_ki|^2``.

    Agrees with :func:`vacuum_occupation` whenever row and column norms of
    ``beta`` coincide, e.g. for every two-mode squeeze.
    """
    require_canonical(bmap)
    if not 0 <= i < bmap.modes:
        raise ValidationError(f"mode index {i} out of range for {bmap.modes} modes")
    return float(np.sum(np.abs(bmap.beta[:, i]) ** 2))


def beta_row_entropy(bmap: BogoliubovMap, i: int) -> float:
    """``-sum_j |beta_ij|^2 ln |beta_ij|^2`` over row ``i``, zero entries skipped.

    This is the mode entanglement formula in its literal form. For squeezed
    vacua it does *not* equal the entropy of the reduced state of mode ``i``;
    see :func:`reduced_mode_entropy` for that quantity.
    """
    require_canonical(bmap)
    return entropy_of_spectrum(np.abs(_row(bmap, i)) ** 2)


def reduced_mode_entropy(bmap: BogoliubovMap, i: int) -> float:
    """Von Neumann entropy of old mode ``i`` in the new vacuum.

    The new vacuum is Gaussian, so the reduced state of a single mode is fixed
    by ``n = <a_i^+ a_i>`` and ``m = <a_i a_i>``. Inverting the map gives
    ``a = alpha^H b - beta^T b^+``, hence ``n = sum_k |beta_ki|^2`` and
    ``m = -sum_k conj(alpha_ki) beta_ki``. The symplectic eigenvalue is
    ``nu = sqrt((n + 1/2)^2 - |m|^2)`` and the entropy that of a thermal mode
    with occupation ``nu - 1/2``.
    """
    require_canonical(bmap)
    if not 0 <= i < bmap.modes:
        raise ValidationError(f"mode index {i} out of range for {bmap.modes} modes")
    a_col = bmap.alpha[:, i]
    b_col = bmap.beta[:, i]
    n = float(np.sum(np.abs(b_col) ** 2))
    m = complex(-np.sum(a_col.conj() * b_col))
    nu = math.sqrt(max((n + 0.5) ** 2 - abs(m) ** 2, 0.25))
    occ = nu - 0.5
    if occ <= 0.0:
        return 0.0
    return geometric_entropy(occ / (occ + 1.0))


def geometric_entropy(t: float) -> float:
    """Entropy of the geometric spectrum ``p_n = (1 - t) t^n``.

    ``S(t) = -t ln t / (1 - t) - ln(1 - t)``, with ``S(0) = 0``.
    """
    t = float(t)
    if not 0.0 <= t < 1.0:
        raise DomainError(f"t must lie in [0, 1), got {t!r}")
    if t == 0.0:
        return 0.0
    return -t * math.log(t) / (1.0 - t) - math.log1p(-t)


def planck_entropy(x: float) -> float:
    """Thermal oscillator entropy at ``x = hbar omega / k T``."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"x must be positive, got {x!r}")
    if math.isinf(x):
        return 0.0
    q = math.exp(-x)
    # x / (e^x - 1) written in e^{-x} so large x cannot overflow
    return x * q / -math.expm1(-x) - math.log1p(-q)


@dataclass(frozen=True)
class OscillatorPair:
    omega: float
    coupling: float

    def __post_init__(self):
        if not self.omega > 0.0:
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        if not self.coupling >= 0.0:
            raise DomainError(f"coupling must be non-negative, got {self.coupling!r}")
        if not self.schmidt_ratio() < 1.0:
            raise DomainError("tanh^2(4 lambda / omega) rounds to 1; coupling too strong")

    def squeeze_amplitude(self) -> float:
        return math.tanh(4.0 * self.coupling / self.omega)

    def schmidt_ratio(self) -> float:
        return self.squeeze_amplitude() ** 2


def coupled_oscillator_entanglement(pair: OscillatorPair) -> float:
    return geometric_entropy(pair.schmidt_ratio())


def effective_temperature(pair: OscillatorPair, hbar_omega_over_k: float = 1.0) -> float:
    """Temperature ``T`` with ``tanh^2(4 lambda / omega) = exp(-hbar omega / k T)``.

    Returned in the units of ``hbar_omega_over_k``; zero coupling gives ``T = 0``.
    """
    t = pair.schmidt_ratio()
    if t == 0.0:
        return 0.0
    return hbar_omega_over_k / -math.log(t)


@dataclass(frozen=True)
class CondensatePair:
    u: float
    v: float

    def __post_init__(self):
        if not self.u > 0.0:
            raise DomainError(f"u must be positive, got {self.u!r}")
        if not self.v >= 0.0:
            raise DomainError(f"v must be non-negative, got {self.v!r}")

    @classmethod
    def from_ratio(cls, t: float) -> "CondensatePair":
        """Canonical pair with ``(v/u)^2 = t``."""
        if not 0.0 <= t < 1.0:
            raise DomainError(f"(v/u)^2 must lie in [0, 1), got {t!r}")
        u = 1.0 / math.sqrt(1.0 - t)
        return cls(u, u * math.sqrt(t))

    def canonical_residual(self) -> float:
        return abs(self.u * self.u - self.v * self.v - 1.0)

    def ratio(self) -> float:
        return (self.v / self.u) ** 2


def _require_canonical_pair(pair: CondensatePair, tol: float = 1e-12) -> None:
    if pair.canonical_residual() > tol:
        raise ValidationError(
            f"pair (u={pair.u!r}, v={pair.v!r}) violates u^2 - v^2 = 1 "
            f"(residual {pair.canonical_residual():.3e})"
        )


def condensate_map(pair: CondensatePair) -> BogoliubovMap:
    """Map of ``b_p = u a_p - v a_{-p}^+`` on the modes ``(p, -p)``."""
    return BogoliubovMap(np.eye(2) * pair.u, [[0.0, -pair.v], [-pair.v, 0.0]])


def condensate_pair_state(pair: CondensatePair, cutoff: int) -> PureBipartiteState:
    """Truncated ground state ``(1/u) sum_i (-v/u)^i |i, i>`` of one pair of modes.

    The amplitudes are left exactly as given; the squared norm approaches 1
    only as ``cutoff`` grows.
    """
    _require_canonical_pair(pair)
    if cutoff < 1:
        raise ValidationError(f"cutoff must be >= 1, got {cutoff}")
    n = np.arange(cutoff + 1)
    amps = (1.0 / pair.u) * (-pair.v / pair.u) ** n
    return PureBipartiteState(np.diag(amps))


def condensate_pair_entropy_closed_form(pair: CondensatePair) -> float:
    """``ln (u/v)^2 / ((u/v)^2 - 1) - ln(1 - (v/u)^2)`` written in u and v."""
    if pair.v == 0.0:
        return 0.0
    if pair.v >= pair.u:
        raise DomainError("v >= u gives (v/u)^2 >= 1")
    q = (pair.u / pair.v) ** 2
    return math.log(q) / (q - 1.0) - math.log1p(-1.0 / q)


def condensate_entanglement(pairs: Iterable[CondensatePair]) -> float:
    total = 0.0
    for pair in pairs:
        _require_canonical_pair(pair)
        if pair.v >= pair.u:
            raise DomainError(f"pair (u={pair.u!r}, v={pair.v!r}) has (v/u)^2 >= 1")
        total += geometric_entropy(pair.ratio())
    return total


def two_mode_squeezed_state(tau: float, cutoff: int = 400) -> PureBipartiteState:
    """Normalized ``sum_n (-i tau)^n |n, n>`` truncated at ``n = cutoff``."""
    tau = float(tau)
    if not 0.0 <= tau < 1.0:
        raise DomainError(f"tau must lie in [0, 1), got {tau!r}")
    if cutoff < 0:
        raise ValidationError(f"cutoff must be >= 0, got {cutoff}")
    n = np.arange(cutoff + 1)
    amps = (-1j * tau) ** n
    return PureBipartiteState(np.diag(amps)).normalized()


def _thermal_scale(rate: float, units: str, name: str) -> float:
    if not rate >= 0.0:
        raise DomainError(f"{name} must be non-negative, got {rate!r}")
    if units == "natural":
        return rate / (2.0 * math.pi)
    if units == "si":
        return constants.hbar * rate / (2.0 * math.pi * constants.c * constants.k)
    raise ValidationError(f"units must be 'natural' or 'si', got {units!r}")


def unruh_temperature(acceleration: float, units: str = "natural") -> float:
    """``T = a / 2 pi`` (natural units) or ``hbar a / (2 pi c k_B)`` in kelvin."""
    return _thermal_scale(acceleration, units, "acceleration")


def hawking_temperature(kappa: float, units: str = "natural") -> float:
    return _thermal_scale(kappa, units, "surface gravity")

import math

import mpmath as mp
import numpy as np
import pytest

from sqent import mode_transform as mt
from sqent.errors import DomainError, ValidationError
from sqent.measures import schmidt_entropy

# SI defining constants, written out to stay independent of scipy
HBAR = 6.62607015e-34 / (2 * math.pi)
C_LIGHT = 299792458.0
K_B = 1.380649e-23


def geometric_spectrum_entropy(t, terms=4000):
    """Brute force: sum -p ln p over p_n = (1 - t) t^n at 40 digits."""
    mp.mp.dps = 40
    t = mp.mpf(t)
    total = mp.mpf(0)
    for n in range(terms):
        p = (1 - t) * t ** n
        if p == 0:
            break
        total -= p * mp.log(p)
    return float(total)


def printed_oscillator_entropy(x):
    """``2 ln(coth x) / (1/tanh^2 x - 1) - ln(1 - tanh^2 x)`` with x = 4 lambda / omega."""
    th = math.tanh(x)
    return 2 * math.log(1 / th) / (1 / th ** 2 - 1) - math.log(1 - th ** 2)


# ------------------------------------------------------------ check_canonical

def test_identity_is_canonical_exactly():
    for m in range(1, 9):
        rep = mt.check_canonical(mt.identity_map(m))
        assert rep == (0.0, 0.0, True)


def test_squeezes_are_canonical():
    rng = np.random.default_rng(0)
    for m in range(2, 9):
        rs = rng.uniform(0, 2, size=m // 2)
        rep = mt.check_canonical(mt.squeeze_map(rs, modes=m))
        assert rep.commutator_residual <= 1e-13 and rep.cross_residual <= 1e-13
        assert rep.canonical
    rep = mt.check_canonical(mt.two_mode_squeeze_map(0.7))
    assert rep.commutator_residual <= 1e-14 and rep.cross_residual <= 1e-14


def test_half_mixing_map_is_flagged():
    rep = mt.check_canonical(mt.half_mixing_map())
    assert rep.commutator_residual == pytest.approx(1.0, abs=1e-12)
    assert not rep.canonical
    with pytest.raises(ValidationError):
        mt.vacuum_occupation(mt.half_mixing_map(), 0)


def test_map_shape_validation():
    with pytest.raises(ValidationError):
        mt.BogoliubovMap(np.eye(2), np.zeros((3, 3)))


# --------------------------------------------------- occupation and entropies

def test_vacuum_occupation_examples():
    assert mt.vacuum_occupation(mt.identity_map(3), 1) == 0.0
    assert mt.vacuum_occupation(mt.two_mode_squeeze_map(1.0), 0) == pytest.approx(1.38109, abs=1e-5)
    assert mt.vacuum_occupation(mt.two_mode_squeeze_map(1.0), 0) == pytest.approx(math.sinh(1) ** 2, abs=1e-14)
    # single unit beta entry per row, completed canonically by alpha = sqrt(2)
    unit = mt.BogoliubovMap([[math.sqrt(2), 0], [0, math.sqrt(2)]], [[0, 1], [1, 0]])
    assert mt.check_canonical(unit).canonical
    assert mt.vacuum_occupation(unit, 0) == pytest.approx(1.0, abs=1e-15)


def test_beta_row_entropy_examples():
    unit = mt.BogoliubovMap([[math.sqrt(2), 0], [0, math.sqrt(2)]], [[0, 1], [1, 0]])
    assert mt.beta_row_entropy(unit, 0) == 0.0
    assert mt.beta_row_entropy(mt.identity_map(2), 0) == 0.0
    # beta row (0, 0, 1/sqrt2, 1/sqrt2): mode 0 squeezed against a mix of modes 2 and 3
    h = 1 / math.sqrt(2)
    m = canonical_completion_row([0.0, 0.0, h, h])
    assert mt.check_canonical(m).canonical
    np.testing.assert_allclose(m.beta[0], [0, 0, h, h], atol=1e-15)
    assert mt.beta_row_entropy(m, 0) == pytest.approx(math.log(2), abs=1e-12)


def canonical_completion_row(beta_row):
    """A canonical map whose row 0 of beta is ``beta_row`` (real, norm 1).

    Mode 0 is squeezed against the normalized combination ``c`` of the other
    modes with ``sinh r = 1``; the rest of the modes are completed by an
    orthonormal basis.
    """
    m = len(beta_row)
    c = np.asarray(beta_row, dtype=float)
    s = np.linalg.norm(c)
    c = c / s
    r = math.asinh(s)
    # orthonormal basis whose first vector is e_0 and second is c
    basis = np.eye(m)
    basis[:, 1] = c
    q, _ = np.linalg.qr(basis)
    q = q * np.sign(np.diag(q.T @ basis))
    two = mt.two_mode_squeeze_map(r)
    alpha = np.eye(m)
    beta = np.zeros((m, m))
    alpha[:2, :2] = two.alpha.real
    beta[:2, :2] = two.beta.real
    # new mode k = sum_j q[j, k] a_j in the rotated frame
    return mt.BogoliubovMap(alpha @ q.T, beta @ q.T)


def test_beta_row_entropy_differs_from_reduced_entropy_for_squeezes():
    for r in (0.25, 0.5, 1.0):
        m = mt.two_mode_squeeze_map(r)
        literal = mt.beta_row_entropy(m, 0)
        assert literal == pytest.approx(-math.sinh(r) ** 2 * math.log(math.sinh(r) ** 2), abs=1e-14)
        assert mt.reduced_mode_entropy(m, 0) == pytest.approx(mt.geometric_entropy(math.tanh(r) ** 2), abs=1e-13)
        assert abs(literal - mt.reduced_mode_entropy(m, 0)) > 1e-3


def test_column_occupation_agrees_on_squeezes():
    m = mt.squeeze_map([0.3, 0.9])
    for i in range(4):
        assert mt.column_occupation(m, i) == pytest.approx(mt.vacuum_occupation(m, i), abs=1e-15)


# -------------------------------------------------------- geometric entropy

def test_geometric_entropy_examples():
    assert mt.geometric_entropy(0.0) == 0.0
    assert mt.geometric_entropy(0.5) == pytest.approx(2 * math.log(2), abs=1e-15)
    e1 = 1 / (math.e - 1) - math.log(1 - math.exp(-1))
    assert e1 == pytest.approx(1.04066, abs=1e-5)
    assert mt.geometric_entropy(math.exp(-1)) == pytest.approx(e1, abs=1e-15)


@pytest.mark.parametrize("t", [0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.97])
def test_geometric_entropy_against_spectrum_sum(t):
    assert mt.geometric_entropy(t) == pytest.approx(geometric_spectrum_entropy(t), abs=1e-13)


def test_geometric_entropy_against_truncated_state():
    psi = mt.two_mode_squeezed_state(math.sqrt(0.5), cutoff=200)
    assert schmidt_entropy(psi) == pytest.approx(mt.geometric_entropy(0.5), abs=1e-12)


def test_geometric_entropy_domain():
    for bad in (-0.1, 1.0, 1.5, float("nan")):
        with pytest.raises(DomainError):
            mt.geometric_entropy(bad)


def test_geometric_entropy_strictly_increasing():
    eps = 1e-3
    ts = np.linspace(0, 1 - eps, 1000)
    h = 1e-7
    slopes = [(mt.geometric_entropy(t + h) - mt.geometric_entropy(t)) / h for t in ts[:-1]]
    assert min(slopes) > 0
    vals = [mt.geometric_entropy(t) for t in ts]
    assert np.all(np.diff(vals) > 0)


def test_planck_entropy_identity():
    xs = np.geomspace(1e-3, 50, 2000)
    dev = max(abs(mt.planck_entropy(x) - mt.geometric_entropy(math.exp(-x))) for x in xs)
    assert dev < 1e-13


def test_planck_entropy_examples():
    assert mt.planck_entropy(float("inf")) == 0.0
    assert mt.planck_entropy(800.0) == pytest.approx(0.0, abs=1e-300)
    assert mt.planck_entropy(1.0) == pytest.approx(1.0406518522564083, abs=1e-15)
    assert mt.planck_entropy(math.log(2)) == pytest.approx(2 * math.log(2), abs=1e-14)
    with pytest.raises(DomainError):
        mt.planck_entropy(0.0)


# ------------------------------------------------------- coupled oscillators

def test_oscillator_examples():
    assert mt.coupled_oscillator_entanglement(mt.OscillatorPair(1.0, 0.0)) == 0.0
    x = math.atanh(math.sqrt(0.5))
    pair = mt.OscillatorPair(omega=4.0, coupling=x)
    assert mt.coupled_oscillator_entanglement(pair) == pytest.approx(2 * math.log(2), abs=1e-14)


def test_oscillator_quarter_coupling_value():
    pair = mt.OscillatorPair(1.0, 0.25)
    closed = mt.coupled_oscillator_entanglement(pair)
    assert closed == pytest.approx(printed_oscillator_entropy(1.0), abs=1e-14)
    assert closed == pytest.approx(geometric_spectrum_entropy(math.tanh(1) ** 2), abs=1e-13)
    assert pair.schmidt_ratio() == pytest.approx(0.58002, abs=1e-5)
    assert closed == pytest.approx(1.6198220929, abs=1e-10)


def test_oscillator_matches_truncated_schmidt():
    for x in np.linspace(0.05, 2.0, 12):
        pair = mt.OscillatorPair(omega=1.0, coupling=x / 4)
        psi = mt.two_mode_squeezed_state(pair.squeeze_amplitude(), cutoff=400)
        assert abs(mt.coupled_oscillator_entanglement(pair) - schmidt_entropy(psi)) < 1e-10


def test_oscillator_validation():
    with pytest.raises(DomainError):
        mt.OscillatorPair(0.0, 1.0)
    with pytest.raises(DomainError):
        mt.OscillatorPair(1.0, -0.1)


def test_effective_temperature():
    assert mt.effective_temperature(mt.OscillatorPair(1.0, 0.0)) == 0.0
    for target, temp in ((math.exp(-1), 1.0), (math.exp(-2), 0.5)):
        x = math.atanh(math.sqrt(target))
        pair = mt.OscillatorPair(omega=1.0, coupling=x / 4)
        assert mt.effective_temperature(pair, 1.0) == pytest.approx(temp, rel=1e-13)
    pair = mt.OscillatorPair(1.0, 0.2)
    temp = mt.effective_temperature(pair, 1.0)
    assert mt.planck_entropy(1.0 / temp) == pytest.approx(mt.coupled_oscillator_entanglement(pair), abs=1e-13)


# --------------------------------------------------------------- condensate

def test_condensate_pair_state():
    vac = mt.condensate_pair_state(mt.CondensatePair(1.0, 0.0), cutoff=5)
    expected = np.zeros((6, 6))
    expected[0, 0] = 1
    np.testing.assert_array_equal(vac.amplitudes, expected)
    pair = mt.CondensatePair.from_ratio(0.5)
    psi = mt.condensate_pair_state(pair, cutoff=400)
    assert psi.norm_squared == pytest.approx(1.0, abs=1e-14)
    assert schmidt_entropy(psi) == pytest.approx(2 * math.log(2), abs=1e-12)
    with pytest.raises(ValidationError):
        mt.condensate_pair_state(mt.CondensatePair(1.0, 0.5), cutoff=10)


def test_condensate_norm_converges_by_geometric_series():
    pair = mt.CondensatePair.from_ratio(0.3)
    norms = [mt.condensate_pair_state(pair, n).norm_squared for n in (5, 10, 20, 40)]
    exact = [1 - 0.3 ** (n + 1) for n in (5, 10, 20, 40)]
    np.testing.assert_allclose(norms, exact, atol=1e-14)


def test_condensate_entanglement():
    assert mt.condensate_entanglement([mt.CondensatePair(1.0, 0.0)] * 3) == 0.0
    one = mt.CondensatePair.from_ratio(math.exp(-1))
    assert mt.condensate_entanglement([one]) == pytest.approx(1.04066, abs=1e-5)
    assert mt.condensate_entanglement([one, one]) == 2 * mt.condensate_entanglement([one])
    with pytest.raises(ValidationError):
        mt.condensate_entanglement([mt.CondensatePair(1.0, 1.0)])


def test_condensate_closed_form_matches_kernel():
    for t in np.arange(0.01, 1.0, 0.01):
        pair = mt.CondensatePair.from_ratio(t)
        assert abs(mt.condensate_pair_entropy_closed_form(pair) - mt.geometric_entropy(pair.ratio())) < 1e-12


def test_two_mode_squeezed_state():
    vac = mt.two_mode_squeezed_state(0.0, cutoff=3)
    assert vac.amplitudes[0, 0] == 1 and vac.norm_squared == 1
    psi = mt.two_mode_squeezed_state(math.sqrt(0.5), cutoff=200)
    assert abs(schmidt_entropy(psi) - 2 * math.log(2)) < 1e-10
    real = np.abs(psi.amplitudes)
    assert schmidt_entropy(type(psi)(real)) == pytest.approx(schmidt_entropy(psi), abs=1e-15)
    with pytest.raises(DomainError):
        mt.two_mode_squeezed_state(1.0)


# -------------------------------------------------------- Unruh and Hawking

def test_thermal_temperatures():
    assert mt.unruh_temperature(0.0) == 0.0
    assert mt.unruh_temperature(2 * math.pi) == pytest.approx(1.0, abs=1e-15)
    assert mt.hawking_temperature(0.0) == 0.0
    assert mt.hawking_temperature(2 * math.pi) == pytest.approx(1.0, abs=1e-15)
    for a in (0.3, 17.0, 1e20):
        for units in ("natural", "si"):
            assert mt.hawking_temperature(a, units) == mt.unruh_temperature(a, units)
    expected = HBAR * 1e20 / (2 * math.pi * C_LIGHT * K_B)
    assert mt.unruh_temperature(1e20, "si") == pytest.approx(expected, rel=1e-12)
    with pytest.raises(DomainError):
        mt.unruh_temperature(-1.0)
    with pytest.raises(ValidationError):
        mt.unruh_temperature(1.0, "planck")

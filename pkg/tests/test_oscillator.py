import cmath
import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import solve_ivp

from app.core.errors import DomainError, RangeOverflow, UnsupportedKind
from app.schemas.ladder import LadderFamily, LadderState
from app.schemas.oscillator import Combo, OscillatorKind, SolutionSpec
from app.services import oscillator
from app.services.ladder import LadderWave
from app.services.waves import sse_residual

mpmath.mp.dps = 40

REFERENCE_ENERGIES = (-2.0, -1.0, 0.0, 1.0)


def mp_even(E, x):
    return complex(mpmath.exp(-0.5j * x * x) * mpmath.hyp1f1(0.25 + 0.5j * E, 0.5, 1j * x * x))


def mp_odd(E, x):
    return complex(x * mpmath.exp(-0.5j * x * x) * mpmath.hyp1f1(0.75 + 0.5j * E, 1.5, 1j * x * x))


@pytest.mark.parametrize("E", [-2.0, 0.0, 1.5])
@pytest.mark.parametrize("x", [0.5, 2.5, 4.0, 8.0, 12.0, -3.0])
def test_parity_solutions_match_oracle(E, x):
    e, o = oscillator.psi_even(E, x), oscillator.psi_odd(E, x)
    ref_e, ref_o = mp_even(E, x), mp_odd(E, x)
    assert abs(e.value - ref_e) <= 1e-8 * (1 + abs(ref_e))
    assert abs(o.value - ref_o) <= 1e-8 * (1 + abs(ref_o))
    ref_de = complex(mpmath.diff(lambda t: mpmath.exp(-0.5j * t * t) * mpmath.hyp1f1(0.25 + 0.5j * E, 0.5, 1j * t * t), x))
    assert abs(e.deriv - ref_de) <= 1e-8 * (1 + abs(ref_de))


def test_even_solution_against_ode_integration():
    E = 1.0
    sol = solve_ivp(
        lambda x, y: [y[1], -(x * x + 2 * E) * y[0]],
        (0.0, 9.0), [1.0, 0.0], method="DOP853", rtol=1e-12, atol=1e-14, dense_output=True,
    )
    for x in (1.0, 3.0, 4.5, 9.0):
        y, dy = sol.sol(x)
        ev = oscillator.psi_even(E, x)
        assert abs(ev.value - y) < 1e-7
        assert abs(ev.deriv - dy) < 1e-6


@pytest.mark.parametrize("E", [-1.5, 0.0, 2.0])
def test_wronskian_of_parity_pair_is_one(E):
    for x in (0.3, 2.0, 4.5, 9.0, 15.0):
        e, o = oscillator.psi_even(E, x), oscillator.psi_odd(E, x)
        assert abs(e.value * o.deriv - e.deriv * o.value - 1) < 1e-9


def test_parity():
    for x in (0.7, 3.3, 10.0):
        assert oscillator.psi_even(0.5, -x).value == oscillator.psi_even(0.5, x).value
        assert oscillator.psi_odd(0.5, -x).value == -oscillator.psi_odd(0.5, x).value


@pytest.mark.parametrize("E", REFERENCE_ENERGIES)
def test_left_movers_solve_the_sse(E, interior_grid):
    wave = oscillator.scattering_wave(Combo.LEFT, E)
    for x in interior_grid:
        res, scale = sse_residual(wave, E, OscillatorKind.INVERTED.potential, x)
        assert res / scale < 1e-7


@pytest.mark.parametrize("E", REFERENCE_ENERGIES)
def test_left_mover_is_real_and_mirrored_by_right(E, interior_grid):
    left = oscillator.scattering_wave(Combo.LEFT, E)
    right = oscillator.scattering_wave(Combo.RIGHT, E)
    values = [left.value(x) for x in interior_grid]
    scale = max(abs(v) for v in values)
    assert max(abs(v.imag) for v in values) <= 1e-10 * scale
    assert all(right.value(-x) == v for x, v in zip(interior_grid, values))


def test_left_mover_below_the_barrier_is_mostly_reflected():
    left = oscillator.scattering_wave(Combo.LEFT, -2.0)
    incident_side = max(abs(left.value(x)) for x in np.linspace(-6, -3, 200))
    far_side = max(abs(left.value(x)) for x in np.linspace(3, 6, 200))
    assert incident_side / far_side > 5
    # 1 + 4 e^{4 pi}: the far-field intensity ratio is fixed by the barrier transmission
    expected = oscillator.left_mover_asymmetry(-2.0)
    assert expected == pytest.approx(1 + 4 * math.exp(4 * math.pi), rel=1e-10)
    x = 30.0
    ratio = oscillator.envelope(left(-x), -x) ** 2 / oscillator.envelope(left(x), x) ** 2
    assert ratio == pytest.approx(expected, rel=0.02)


@pytest.mark.parametrize("E", REFERENCE_ENERGIES)
def test_left_mover_asymmetry_follows_transmission(E):
    left = oscillator.scattering_wave(Combo.LEFT, E)
    T = oscillator.transmission_probability(E)
    ratio = oscillator.envelope(left(-25.0), -25.0) ** 2 / oscillator.envelope(left(25.0), 25.0) ** 2
    assert ratio == pytest.approx((4 - 3 * T) / T, rel=0.02)


def test_plus_is_purely_outgoing_on_the_right():
    E = 0.5
    plus = oscillator.scattering_wave(Combo.PLUS, E)
    # strip x^{-1/2} x^{iE} e^{ix^2/2}; what remains is constant up to O(x^-2)
    stripped = [
        plus.value(x) * math.sqrt(x) * cmath.exp(-1j * E * math.log(x) - 0.5j * x * x) for x in (20.0, 25.0, 30.0)
    ]
    assert max(abs(s - stripped[-1]) for s in stripped) < 1e-2 * abs(stripped[-1])


def test_plus_and_minus_are_mirror_images_and_independent():
    for E in (-1.0, 0.0, 2.0):
        plus = oscillator.scattering_wave(Combo.PLUS, E)
        minus = oscillator.scattering_wave(Combo.MINUS, E)
        for x in (0.4, 3.0, 9.0):
            assert abs(minus.value(-x) - plus.value(x)) < 1e-12 * (1 + abs(plus.value(x)))
        assert abs(oscillator.wronskian(plus, minus, 0.7)) > 1e-6


def test_plus_carries_the_normalization_constant():
    ne = oscillator.normalization_NE(0.5)
    assert oscillator.scattering_wave(Combo.PLUS, 0.5).alpha == ne.value
    assert ne.E == 0.5


def test_general_solution_for_the_harmonic_oscillator():
    even = SolutionSpec(kind=OscillatorKind.HARMONIC, energy=0.5, combo=Combo.EVEN)
    odd = SolutionSpec(kind=OscillatorKind.HARMONIC, energy=1.5, combo=Combo.ODD)
    for x in (-1.2, 0.4, 2.5):
        assert oscillator.general_solution(even, x).value == pytest.approx(math.exp(-x * x / 2), rel=1e-12)
        assert oscillator.general_solution(odd, x).value == pytest.approx(x * math.exp(-x * x / 2), rel=1e-12)


def test_harmonic_growing_tail_stays_in_range():
    spec = SolutionSpec(kind=OscillatorKind.HARMONIC, energy=0.7, combo=Combo.EVEN)
    got = oscillator.general_solution(spec, 30.0)
    ref = complex(mpmath.exp(-450) * mpmath.hyp1f1(-0.1, 0.5, 900))
    assert abs(got.value - ref) < 1e-8 * abs(ref)
    assert oscillator.general_solution(spec, -30.0).value == got.value
    with pytest.raises(RangeOverflow):
        oscillator.general_solution(spec, 60.0)


@pytest.mark.parametrize("kind", [OscillatorKind.HARMONIC, OscillatorKind.INVERTED])
@pytest.mark.parametrize("E", [-1.5, 0.0, 0.7])
def test_general_solution_is_real_for_real_coefficients(kind, E):
    spec = SolutionSpec(kind=kind, energy=E, C=0.7, D=-1.3)
    values = [oscillator.general_solution(spec, x).value for x in np.linspace(-9, 9, 37)]
    scale = max(abs(v) for v in values)
    assert max(abs(v.imag) for v in values) < 1e-10 * scale


def test_general_solution_rejects_free_and_scattering():
    with pytest.raises(UnsupportedKind):
        oscillator.general_solution(SolutionSpec(kind=OscillatorKind.FREE, energy=1.0), 0.5)
    with pytest.raises(ValueError):
        oscillator.general_solution(SolutionSpec(kind=OscillatorKind.INVERTED, energy=1.0, combo=Combo.LEFT), 0.5)
    with pytest.raises(UnsupportedKind):
        oscillator.psi_combo(SolutionSpec(kind=OscillatorKind.HARMONIC, energy=0.5, combo=Combo.EVEN), 0.5)


def test_scattering_combo_needs_inverted_kind():
    with pytest.raises(ValueError):
        SolutionSpec(kind=OscillatorKind.HARMONIC, energy=0.5, combo=Combo.PLUS)


@pytest.mark.parametrize("E", [-1.0, 0.5, 2.0])
def test_leading_asymptotics(E):
    xs = np.linspace(15, 20, 40)
    even = [oscillator.psi_even(E, x).value for x in xs]
    odd = [oscillator.psi_odd(E, x).value for x in xs]
    assert max(abs(oscillator.asymptotic_even(E, x) - v) for x, v in zip(xs, even)) < 1e-2 * max(map(abs, even))
    assert max(abs(oscillator.asymptotic_odd(E, x) - v) for x, v in zip(xs, odd)) < 1e-2 * max(map(abs, odd))
    assert oscillator.asymptotic_odd(E, -17.0) == pytest.approx(-oscillator.asymptotic_odd(E, 17.0))


def test_asymptotic_form_refuses_small_x():
    with pytest.raises(DomainError):
        oscillator.asymptotic_even(0.0, 3.0)


def test_even_envelope_decays_like_one_over_x():
    xs = np.geomspace(10, 40, 30)
    env2 = [oscillator.envelope(oscillator.psi_even(0.5, x), x) ** 2 for x in xs]
    slope = np.polyfit(np.log(xs), np.log(env2), 1)[0]
    assert slope == pytest.approx(-1.0, abs=0.05)
    with pytest.raises(DomainError):
        oscillator.envelope(oscillator.psi_even(0.5, 0.0), 0.0)


def test_free_particle():
    for x in (-1.0, 0.3, 2.0):
        assert oscillator.free_solution(2.0, x, 1).value == pytest.approx(cmath.exp(2j * x))
        assert oscillator.free_solution(2.0, x, -1).deriv == pytest.approx(-2j * cmath.exp(-2j * x))
        assert oscillator.free_solution(-2.0, x, 1).value == pytest.approx(math.exp(2 * x))
        assert oscillator.free_solution(0.0, x, -1).value == pytest.approx(x)
    wave = oscillator.solution_wave(SolutionSpec(kind=OscillatorKind.FREE, energy=2.0, combo=Combo.ODD))
    assert wave.value(0.7) == pytest.approx(math.sin(1.4) / 2)
    assert wave.jet(0.7, 4).nth(3) == pytest.approx(-4 * math.cos(1.4))


def test_transmission_probability():
    assert oscillator.transmission_probability(0.0) == pytest.approx(0.5)
    for E in (0.3, 1.0, 2.5):
        assert oscillator.transmission_probability(E) + oscillator.transmission_probability(-E) == pytest.approx(1.0)
    assert oscillator.transmission_probability(3.0) > 0.99999


def test_window_inner_product_of_harmonic_states():
    psi0 = LadderWave(LadderState(family=LadderFamily.BOUND_HARMONIC, n=0))
    psi1 = LadderWave(LadderState(family=LadderFamily.BOUND_HARMONIC, n=1))
    assert abs(oscillator.window_inner_product(psi0, psi0, 10.0) - 1) < 1e-8
    assert abs(oscillator.window_inner_product(psi0, psi1, 10.0)) < 1e-8
    with pytest.raises(DomainError):
        oscillator.window_inner_product(psi0, psi0, 0.0)


def test_bound_states_are_orthonormal():
    states = [LadderWave(LadderState(family=LadderFamily.BOUND_HARMONIC, n=n)) for n in range(7)]
    for m in range(7):
        for n in range(m, 7):
            overlap = oscillator.window_inner_product(states[m], states[n], 12.0)
            assert abs(overlap - (m == n)) < 1e-8, (m, n, overlap)


WINDOWS = (20.0, 40.0, 80.0)


@pytest.fixture(scope="module")
def plus_windows():
    """<psi_0^+, psi_0^+>, <psi_0^+, psi_1^+> and <psi_0^+, psi_0^-> on each window"""
    plus0 = oscillator.scattering_wave(Combo.PLUS, 0.0)
    plus1 = oscillator.scattering_wave(Combo.PLUS, 1.0)
    minus0 = oscillator.scattering_wave(Combo.MINUS, 0.0)
    return {
        "diagonal": [oscillator.window_inner_product(plus0, plus0, L).real for L in WINDOWS],
        "off_diagonal": [abs(oscillator.window_inner_product(plus0, plus1, L)) for L in WINDOWS],
        "cross_sigma": [abs(oscillator.window_inner_product(plus0, minus0, L)) for L in WINDOWS],
    }


@pytest.mark.slow
def test_dirac_surrogate_grows_affinely_in_log_window(plus_windows):
    values = np.array(plus_windows["diagonal"])
    first, second = values[1] - values[0], values[2] - values[1]
    assert first > 0
    assert second == pytest.approx(first, rel=0.05)
    slope, intercept = np.polyfit(np.log(WINDOWS), values, 1)
    fitted = slope * np.log(WINDOWS) + intercept
    r2 = 1 - np.sum((values - fitted) ** 2) / np.sum((values - np.mean(values)) ** 2)
    assert r2 > 0.99


@pytest.mark.slow
def test_off_diagonal_window_products_stay_bounded(plus_windows):
    growth = plus_windows["diagonal"][-1] - plus_windows["diagonal"][0]
    for key in ("off_diagonal", "cross_sigma"):
        values = plus_windows[key]
        # oscillates in log L instead of growing; the excursion stays well under the diagonal growth
        assert max(values) < 2 * values[0]
        assert max(values) - min(values) < 0.5 * growth


def test_mellin_basis():
    assert oscillator.mellin_basis(1, 0.3, -2.0) == 0
    assert oscillator.mellin_basis(-1, 0.3, 2.0) == 0
    for x in (0.5, 3.0):
        assert abs(oscillator.mellin_basis(1, 0.7, x)) ** 2 == pytest.approx(1 / (2 * math.pi * x))
    with pytest.raises(DomainError):
        oscillator.mellin_basis(1, 0.0, 0.0)


def test_integral_representation_reproduces_plus():
    got = oscillator.integral_representation_check(1, 0.0, 1.0, 60.0)
    ref = oscillator.scattering_wave(Combo.PLUS, 0.0).value(1.0)
    assert abs(got - ref) < 1e-3


def test_integral_representation_symmetry():
    a = oscillator.integral_representation_check(-1, 0.5, 1.5, 20.0)
    b = oscillator.integral_representation_check(1, 0.5, -1.5, 20.0)
    assert a == pytest.approx(b)
    with pytest.raises(DomainError):
        oscillator.integral_representation_check(1, 0.0, 1.0, 0.0)

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.errors import ExcludedEpsilon, SeedZero
from app.schemas.ladder import LadderFamily, LadderState
from app.schemas.oscillator import Combo, OscillatorKind, SolutionSpec
from app.schemas.susy import (
    EpsilonClass,
    FactorizationEnergy,
    RealCase,
    SusyTransform,
    ZeroKind,
    classify_epsilon,
)
from app.services import susy
from app.services.ladder import LadderWave

REFERENCE_EPS = 1e-5 + 5j
# series/asymptotic seam of the large-|eps| seeds sits near |x| = 5.5
CLEAN_XS = (-9.0, -4.0, -1.5, 0.0, 2.0, 4.5, 8.0)


@pytest.mark.parametrize(
    "eps,expected",
    [
        (3.0, EpsilonClass.EXCLUDED_REAL_AXIS),
        (0.5j, EpsilonClass.EXCLUDED_LATTICE_POINT),
        (-2.5j, EpsilonClass.EXCLUDED_LATTICE_POINT),
        (REFERENCE_EPS, EpsilonClass.QUADRANT_I_II),
        (-1 + 0.2j, EpsilonClass.QUADRANT_I_II),
        (1 - 2j, EpsilonClass.QUADRANT_III_IV),
    ],
)
def test_epsilon_classification(eps, expected):
    energy = susy.validate_epsilon(eps)
    assert energy.classification == expected
    assert energy.usable == expected.usable


def test_seed_label_follows_the_half_plane():
    assert susy.validate_epsilon(1 + 1j).seed_label == "uP"
    assert susy.validate_epsilon(1 - 1j).seed_label == "uN"


def test_factorization_energy_must_agree_with_its_class():
    with pytest.raises(ValidationError):
        FactorizationEnergy(eps=1 + 1j, classification=EpsilonClass.EXCLUDED_REAL_AXIS, lattice_distance=1.0)


def test_excluded_eps_refused_with_exit_code_five():
    with pytest.raises(ExcludedEpsilon) as info:
        susy.seed_wave(susy.validate_epsilon(1.5j))
    assert info.value.exit_code == 5
    assert "excluded-lattice-point" in str(info.value)
    with pytest.raises(ExcludedEpsilon):
        susy.complex_partner(2.0, 0.5)


def test_superpotential_of_gaussian():
    ground = LadderWave(LadderState(family=LadderFamily.BOUND_HARMONIC, n=0))
    for x in (-1.5, 0.2, 2.0):
        assert susy.superpotential(ground, x) == pytest.approx(-x)


def test_odd_seed_vanishes_at_origin():
    odd = susy.solution_wave(SolutionSpec(kind=OscillatorKind.INVERTED, energy=0.0, combo=Combo.ODD))
    with pytest.raises(SeedZero):
        susy.superpotential(odd, 0.0)


def test_riccati_equation_of_the_superpotential():
    eps = 0.3
    u = susy.solution_wave(SolutionSpec(kind=OscillatorKind.INVERTED, energy=eps))
    h = 1e-3
    for x in (0.2, 0.5, 0.8):
        alpha = susy.superpotential(u, x)
        d_alpha = (
            -susy.superpotential(u, x + 2 * h) + 8 * susy.superpotential(u, x + h)
            - 8 * susy.superpotential(u, x - h) + susy.superpotential(u, x - 2 * h)
        ) / (12 * h)
        v0 = -x * x / 2
        terms = (abs(d_alpha), abs(alpha) ** 2, abs(2 * (v0 - eps)))
        assert abs(d_alpha + alpha ** 2 - 2 * (v0 - eps)) < 1e-7 * sum(terms)


def test_first_order_harmonic_partner_is_shifted_oscillator():
    for x in (-2.0, 0.0, 1.3):
        v1 = susy.first_order_partner(0.5, 1.0, 0.0, x, kind=OscillatorKind.HARMONIC)
        assert v1 == pytest.approx(x * x / 2 + 1, rel=1e-10)


def test_first_order_seed_always_has_a_node():
    report = susy.seed_scan(0.0, 1.0, 0.0)
    assert report.is_singular
    assert all(z.kind == ZeroKind.SEED_ZERO for z in report.zeros)


@pytest.mark.slow
@pytest.mark.parametrize("eps", [-1.0, 0.0, 1.0])
@pytest.mark.parametrize("C,D", [(1, 0), (0, 1), (1, 1)])
def test_every_first_order_seed_is_singular(eps, C, D):
    assert susy.seed_scan(eps, C, D).is_singular


def test_first_order_transform_constants():
    t = susy.first_order_transform(0.5)
    assert t.order == 1
    assert t.d == 1.0


def test_real_case_wronskian_has_a_zero():
    real = susy.partner(susy.real_transform(0.0, 1.0))
    report = susy.partner_scan(real, samples=2000)
    assert report.is_singular
    assert report.zeros[0].kind == ZeroKind.WRONSKIAN_ZERO


def test_real_case_needs_distinct_energies():
    with pytest.raises(ValidationError):
        susy.real_transform(1.0, 1.0)
    u = susy.solution_wave(SolutionSpec(kind=OscillatorKind.INVERTED, energy=1.0))
    with pytest.raises(ValueError):
        susy.real_case_partner(1.0, u, 1.0, u, 0.3)


def test_real_case_on_harmonic_nonphysical_seeds():
    phi0 = LadderWave(LadderState(family=LadderFamily.NONPHYS_HARMONIC, n=0))
    phi1 = LadderWave(LadderState(family=LadderFamily.NONPHYS_HARMONIC, n=1))
    for x in (-2.5, -0.4, 0.0, 1.1, 3.0):
        v2 = susy.real_case_partner(-0.5, phi0, -1.5, phi1, x)
        assert v2 == pytest.approx(x * x / 2 - 2, abs=1e-9)


def test_real_case_two_paths_agree():
    t = susy.real_transform(0.0, 1.0)
    jet_path = susy.partner(t)
    u1 = susy.solution_wave(t.case2.seed1)
    u2 = susy.solution_wave(t.case2.seed2)
    W = susy.wronskian_function(u1, u2)
    for x in (0.1, 0.35):
        if abs(W(x)) < 1e-6:
            continue
        assert jet_path.V2(x) == pytest.approx(susy.real_case_partner(0.0, u1, 1.0, u2, x), rel=1e-7)


def test_confluent_w_starts_at_w0_and_is_monotone():
    seed = SolutionSpec(kind=OscillatorKind.INVERTED, energy=0.0)
    assert susy.confluent_w(0.0, seed, 1.5, 0.0, 0.0) == 1.5
    values = [susy.confluent_w(0.0, seed, 0.0, 0.0, x) for x in np.linspace(-3, 3, 13)]
    assert all(b >= a for a, b in zip(values, values[1:]))
    with pytest.raises(ValueError):
        susy.confluent_w(1.0, seed, 0.0, 0.0, 0.5)
    with pytest.raises(ValueError):
        susy.confluent_w(0.0, SolutionSpec(kind=OscillatorKind.INVERTED, energy=0.0, C=0, D=0), 0.0, 0.0, 0.5)


def test_confluent_partner_tracks_w():
    t = susy.confluent_transform(0.0, w0=2.0)
    assert t.c == 0
    confluent = susy.partner(t)
    seed = t.case2.seed
    for x in (-1.0, 0.5):
        assert confluent.f_value(x) == pytest.approx(susy.confluent_w(0.0, seed, 2.0, 0.0, x))


@pytest.mark.slow
def test_confluent_w_always_vanishes_somewhere():
    reports = susy.confluent_w_scan(0.0, range(-5, 6))
    assert len(reports) == 11
    assert all(r.is_singular for r in reports)


@pytest.mark.slow
def test_tail_zeros_are_bisected_within_reach():
    seed = SolutionSpec(kind=OscillatorKind.INVERTED, energy=0.0)
    for w0, report in zip((-5.0, -0.5, 0.5, 5.0), susy.confluent_w_scan(0.0, (-5.0, -0.5, 0.5, 5.0))):
        for zero in report.zeros:
            if zero.extrapolated:
                assert not -10.0 <= zero.location <= 10.0
            else:
                assert abs(zero.location) <= susy.TAIL_REACH
                assert abs(susy.confluent_w(0.0, seed, w0, 0.0, zero.location)) < 1e-6


def test_cumulative_integrals_are_cached_with_a_bound():
    assert susy._cumulative_for.cache_info().maxsize == 32
    seed = SolutionSpec(kind=OscillatorKind.INVERTED, energy=0.0)
    assert susy._cumulative(seed, 0) is susy._cumulative(seed, 0.0)


def test_conjugate_seeds():
    eps = 1.0 + 0.7j
    for x in (-3.0, 0.5, 4.0, 9.0):
        up = susy.seed_uP(eps, x)
        un = susy.seed_uN(eps.conjugate(), x)
        assert abs(up.value.conjugate() - un.value) < 1e-9 * (1 + abs(un.value))
        assert abs(up.deriv.conjugate() - un.deriv) < 1e-9 * (1 + abs(un.deriv))


def test_uP_decays_with_the_predicted_power():
    eps = 5 + 1j
    xs = np.geomspace(10, 30, 25)
    mod2 = [abs(susy.seed_uP(eps, x).value) ** 2 for x in xs]
    slope = np.polyfit(np.log(xs), np.log(mod2), 1)[0]
    assert slope == pytest.approx(-(1 + 2 * eps.imag), abs=0.15)


def test_complex_w_is_real_and_monotone():
    w = susy.seed_w_function(REFERENCE_EPS)
    values = [w(x) for x in np.linspace(-10, 10, 81)]
    assert all(abs(v.imag) <= 1e-12 * (1 + abs(v.real)) for v in values)
    reals = [v.real for v in values]
    assert all(b >= a for a, b in zip(reals, reals[1:]))
    assert susy.complex_w(REFERENCE_EPS, 3.0) == pytest.approx(reals[52])


def test_complex_transform_constants():
    t = susy.complex_transform(1 + 2j)
    assert t.c == pytest.approx(-16.0)
    assert t.d == pytest.approx(2.0)
    assert t.xi == pytest.approx(4j)
    assert susy.real_transform(0.0, 1.0).c > 0
    assert susy.confluent_transform(0.0).c == 0


def test_transform_case_consistency():
    seed = SolutionSpec(kind=OscillatorKind.INVERTED, energy=0.0)
    with pytest.raises(ValidationError):
        SusyTransform(order=1, case2=RealCase(eps1=0.0, eps2=1.0, seed1=seed, seed2=seed), c=1.0)
    with pytest.raises(ValidationError):
        SusyTransform(order=2, case2=RealCase(eps1=0.0, eps2=1.0, seed1=seed, seed2=seed), c=-1.0)


def test_complex_partner_two_paths_and_realness():
    sup = susy.partner(susy.complex_transform(REFERENCE_EPS))
    for x in CLEAN_XS:
        explicit = susy.complex_partner(REFERENCE_EPS, x)
        assert isinstance(explicit, float)
        assert abs(explicit - sup.V2(x)) < 1e-8 * (1 + abs(explicit))
        assert abs(sup.potential(x, 0).value.imag) < 1e-9 * (1 + abs(explicit))


def test_complex_partner_approaches_inverted_oscillator():
    for x in (-25.0, 25.0):
        assert abs(susy.complex_partner(REFERENCE_EPS, x) + x * x / 2) < 0.05


def test_g_master_equation_and_ansatz():
    sup = susy.partner(susy.complex_transform(REFERENCE_EPS))
    xi = REFERENCE_EPS - REFERENCE_EPS.conjugate()
    for x in CLEAN_XS:
        residual, scale = sup.eqg_residual(x)
        assert residual < 1e-6 * scale
        g = sup.g_jet(x, 1)
        gamma = sup.gamma(x)
        res = g.deriv + g.value ** 2 - 2 * gamma * g.value - 2 * xi
        assert abs(res) < 1e-7 * (abs(g.deriv) + abs(g.value) ** 2 + abs(2 * gamma * g.value) + abs(2 * xi))


@pytest.mark.slow
@pytest.mark.parametrize("eps", [1e-5 + 5j, (1 + 1j) / 5, 1e-2 + 1j])
def test_complex_partners_are_nonsingular(eps):
    report = susy.partner_scan(susy.partner(susy.complex_transform(eps)))
    assert not report.is_singular


def test_singularity_scan():
    assert not susy.singularity_scan(lambda x: x * x + 1, (-5, 5), 101).is_singular
    report = susy.singularity_scan(lambda x: x - 0.3, (-1, 1), 10)
    assert report.zeros[0].location == pytest.approx(0.3, abs=1e-10)
    touching = susy.singularity_scan(lambda x: (x - 0.25) ** 2 + 1e-10, (-1, 1), 9)
    assert touching.zeros[0].near_zero
    with pytest.raises(ValueError):
        susy.singularity_scan(lambda x: x, (-1, 1), 1)


def test_classify_is_pure_function_of_eps():
    assert classify_epsilon(complex(0, 1e-12)) == EpsilonClass.EXCLUDED_REAL_AXIS

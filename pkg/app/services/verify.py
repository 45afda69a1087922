"""
Verification suites: every identity the toolkit relies on, evaluated at
desk scale and collected into DiagnosticReports.
"""
import cmath
import logging
import math

import numpy as np

from app.core.config import settings
from app.schemas.algebra import PartnerEigenfunction
from app.schemas.ladder import LadderFamily, LadderState
from app.schemas.oscillator import Combo, OscillatorKind
from app.schemas.report import DiagnosticReport
from app.services import algebra, ladder, oscillator, specfun, susy
from app.services.jets import quadratic_jet
from app.services.waves import DampedPolynomial, hamiltonian_jet, sse_residual

logger = logging.getLogger(__name__)

SUITES = ("specfun", "oscillator", "ladder", "susy", "algebra")
REFERENCE_EPS = 1e-5 + 5j
REFERENCE_ENERGIES = (-2.0, -1.0, 0.0, 1.0)
SHOOTING_ENERGIES = tuple(float(E) for E in np.linspace(-3, 3, 20))
# keeps five-point stencils off the series/asymptotic seam at |x| = sqrt(switch_radius)
TRANSITION_FREE_GRID = np.concatenate([np.linspace(-10, -7, 7), np.linspace(-5, 5, 21), np.linspace(7, 10, 7)])


class VerificationService:
    """Runs the named suites; a set tol replaces every per-check tolerance"""

    def __init__(self, tol: float | None = None, seed: int = 0):
        self.tol = settings.default_tol if tol is None else tol
        self.seed = seed

    def _report(self, suite: str) -> "_Recorder":
        return _Recorder(DiagnosticReport(suite=suite), self.tol)

    def run(self, suite: str) -> DiagnosticReport:
        if suite == "all":
            report = DiagnosticReport(suite="all")
            for name in SUITES:
                report.merge(self.run(name))
            return report
        if suite not in SUITES:
            raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
        logger.info("running verification suite %s", suite)
        return getattr(self, f"_{suite}")()

    # --- specfun ---------------------------------------------------------------

    def _specfun(self) -> DiagnosticReport:
        rec = self._report("specfun")
        rng = np.random.default_rng(self.seed)
        worst_reflection = worst_ode = 0.0
        for _ in range(20):
            a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            b = complex(rng.uniform(0.2, 3), rng.uniform(-1, 1))
            z = cmath.rect(rng.uniform(0, 20), rng.uniform(-math.pi, math.pi))
            lhs = specfun.hyp1f1_series(a, b, z)
            rhs = cmath.exp(z) * specfun.hyp1f1_series(b - a, b, -z)
            worst_reflection = max(worst_reflection, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
            w = lhs
            dw = specfun.hyp1f1_derivative(a, b, z)
            ddw = a / b * specfun.hyp1f1_derivative(a + 1, b + 1, z)
            scale = abs(z * ddw) + abs(b * dw) + abs(z * dw) + abs(a * w)
            worst_ode = max(worst_ode, abs(z * ddw + (b - z) * dw - a * w) / scale)
        rec.check("kummer_reflection", worst_reflection, 1e-9)
        rec.check("kummer_ode_residual", worst_ode, 1e-8)

        worst_band = 0.0
        radius = specfun.DEFAULT_CONTROL.switch_radius
        for E in (-1.0, 0.0, 1.0):
            for r in np.linspace(0.9 * radius, 1.1 * radius, 5):
                a = 0.25 + 0.5j * E
                series = specfun.hyp1f1_series(a, 0.5, 1j * r)
                asym = specfun.hyp1f1_asymptotic(a, 0.5, 1j * r)
                worst_band = max(worst_band, abs(series - asym) / abs(series))
        rec.check("overlap_band", worst_band, 1e-6)

        worst_gamma = 0.0
        for _ in range(100):
            z = complex(rng.uniform(0.1, 5), rng.uniform(-5, 5))
            d = specfun.ln_gamma(z + 1) - specfun.ln_gamma(z) - cmath.log(z)
            worst_gamma = max(worst_gamma, abs(d.real), abs(math.remainder(d.imag, 2 * math.pi)))
        rec.check("ln_gamma_functional_equation", worst_gamma, 1e-10)
        rec.check("hermite_closed_forms", abs(specfun.hermite(3, 2) - 40) + abs(specfun.hermite(4, 1j) - 76), 0.0)
        return rec.report

    # --- oscillator --------------------------------------------------------------

    def _oscillator(self) -> DiagnosticReport:
        rec = self._report("oscillator")
        xs = np.linspace(-5, 5, 50)
        worst_sse = 0.0
        for E in REFERENCE_ENERGIES:
            wave = oscillator.scattering_wave(Combo.LEFT, E)
            for x in xs:
                res, scale = sse_residual(wave, E, OscillatorKind.INVERTED.potential, x)
                worst_sse = max(worst_sse, res / scale)
        rec.check("sse_residual_left_movers", worst_sse, 1e-7)

        worst_w = worst_parity = 0.0
        for E in (-1.5, 0.0, 2.0):
            for x in np.linspace(0.1, 8, 25):
                e, o = oscillator.psi_even(E, x), oscillator.psi_odd(E, x)
                worst_w = max(worst_w, abs(e.value * o.deriv - e.deriv * o.value - 1))
                em, om = oscillator.psi_even(E, -x), oscillator.psi_odd(E, -x)
                worst_parity = max(worst_parity, abs(em.value - e.value), abs(om.value + o.value))
        rec.check("wronskian_even_odd", worst_w, 1e-9)
        rec.check("parity", worst_parity, 0.0)

        worst_real = worst_mirror = 0.0
        for E in REFERENCE_ENERGIES:
            left = oscillator.scattering_wave(Combo.LEFT, E)
            right = oscillator.scattering_wave(Combo.RIGHT, E)
            values = [left.value(x) for x in xs]
            scale = max(abs(v) for v in values)
            worst_real = max(worst_real, max(abs(v.imag) for v in values) / scale)
            worst_mirror = max(worst_mirror, max(abs(right.value(-x) - v) for x, v in zip(xs, values)))
        rec.check("left_right_realness", worst_real, 1e-10)
        rec.check("right_mirrors_left", worst_mirror, 0.0)

        worst_asym = 0.0
        for E in REFERENCE_ENERGIES:
            left = oscillator.scattering_wave(Combo.LEFT, E)
            ratio = oscillator.envelope(left(-30.0), -30.0) ** 2 / oscillator.envelope(left(30.0), 30.0) ** 2
            worst_asym = max(worst_asym, abs(ratio / oscillator.left_mover_asymmetry(E) - 1))
        rec.check("left_mover_transmission", worst_asym, 0.02)

        weakest = 0.0
        for E in np.linspace(-3, 3, 7):
            plus = oscillator.scattering_wave(Combo.PLUS, E)
            minus = oscillator.scattering_wave(Combo.MINUS, E)
            weakest = max(weakest, 1 / abs(oscillator.wronskian(plus, minus, 0.7)))
        rec.check("plus_minus_independent", weakest, 1e6)
        return rec.report

    # --- ladder --------------------------------------------------------------------

    def _ladder(self) -> DiagnosticReport:
        rec = self._report("ladder")
        for kind in (OscillatorKind.HARMONIC, OscillatorKind.INVERTED):
            for check in ladder.algebra_residuals(kind, trials=3, seed=self.seed).checks:
                rec.check(check.name, check.max_residual, check.tol)

        xs = np.linspace(-5, 5, 41)
        ground = ladder.LadderWave(LadderState(family=LadderFamily.BOUND_HARMONIC, n=0))
        inv_ground = ladder.LadderWave(LadderState(family=LadderFamily.INVERTED_MINUS, n=0))
        rec.check(
            "annihilates_ground_states",
            max(
                max(abs(ladder.ladder_apply(OscillatorKind.HARMONIC, -1, ground).value(x)) for x in xs),
                max(abs(ladder.ladder_apply(OscillatorKind.INVERTED, -1, inv_ground).value(x)) for x in xs),
            ),
            1e-10,
        )

        worst_shift = worst_step = 0.0
        for n in range(4):
            psi = ladder.LadderWave(LadderState(family=LadderFamily.BOUND_HARMONIC, n=n))
            nxt = ladder.LadderWave(LadderState(family=LadderFamily.BOUND_HARMONIC, n=n + 1))
            raised = ladder.ladder_apply(OscillatorKind.HARMONIC, 1, psi)
            for x in xs:
                j = raised.jet(x, 2)
                Hj = hamiltonian_jet(quadratic_jet(x, 1, 2), j)
                worst_shift = max(worst_shift, abs(Hj.value - (n + 1.5) * j.value))
                worst_step = max(worst_step, abs(j.value - math.sqrt(n + 1) * nxt.value(x)))
        rec.check("harmonic_shift_law", worst_shift, 1e-8)
        rec.check("creation_step", worst_step, 1e-9)

        rng = np.random.default_rng(self.seed)
        f, g = (DampedPolynomial(rng.uniform(-1, 1, 4) + 1j * rng.uniform(-1, 1, 4), width=2.0) for _ in range(2))
        worst_anti = 0.0
        for sign in (1, -1):
            def op(w, s=sign):
                return ladder.ladder_apply(OscillatorKind.INVERTED, s, w)
            worst_anti = max(worst_anti, oscillator.adjoint_residual(op, oscillator.antihermitian(op), f, g))
        rec.check("inverted_ladder_antihermitian", worst_anti, 1e-8)
        rec.check(
            "harmonic_ladder_adjoint_pair",
            oscillator.adjoint_residual(
                lambda w: ladder.ladder_apply(OscillatorKind.HARMONIC, 1, w),
                lambda w: ladder.ladder_apply(OscillatorKind.HARMONIC, -1, w),
                f, g,
            ),
            1e-8,
        )

        worst_poly = 0.0
        for family in LadderFamily:
            for n in range(4):
                wave = ladder.LadderWave(LadderState(family=family, n=n))
                for x in np.linspace(-3, 3, 25):
                    res, scale = sse_residual(wave, wave.energy, family.kind.potential, x)
                    worst_poly = max(worst_poly, res / scale)
        rec.check("polynomial_solutions_sse", worst_poly, 1e-7)
        return rec.report

    # --- susy --------------------------------------------------------------------------

    def _susy(self) -> DiagnosticReport:
        rec = self._report("susy")
        sup = algebra.complex_partner_for(REFERENCE_EPS)
        xs = np.linspace(-8, 8, 33)

        rec.check("eqg_residual", max(_ratio(*sup.eqg_residual(x)) for x in xs), 1e-6)

        xi = REFERENCE_EPS - REFERENCE_EPS.conjugate()
        worst_ansatz = 0.0
        for x in xs:
            g = sup.g_jet(x, 1)
            gamma = sup.gamma(x)
            terms = (g.deriv, g.value ** 2, 2 * gamma * g.value, 2 * xi)
            res = g.deriv + g.value ** 2 - 2 * gamma * g.value - 2 * xi
            worst_ansatz = max(worst_ansatz, _ratio(abs(res), sum(abs(t) for t in terms)))
        rec.check("ansatz_riccati", worst_ansatz, 1e-7)

        worst_paths = worst_wprime = 0.0
        h = settings.fd_step
        for x in TRANSITION_FREE_GRID:
            explicit = susy.complex_partner(REFERENCE_EPS, x)
            worst_paths = max(worst_paths, _ratio(abs(explicit - sup.V2(x)), 1 + abs(explicit)))
            fd = (-sup.w(x + 2 * h) + 8 * sup.w(x + h) - 8 * sup.w(x - h) + sup.w(x - 2 * h)) / (12 * h)
            mod2 = abs(sup.u.value(x)) ** 2
            worst_wprime = max(worst_wprime, _ratio(abs(fd - mod2), mod2))
        rec.check("partner_two_paths", worst_paths, 1e-8)
        rec.check("w_prime_is_mod_u_squared", worst_wprime, 1e-7)

        worst_twine = 0.0
        v0 = sup.base_potential
        for k in range(5):
            f = DampedPolynomial.monomial(k)
            for x in np.linspace(-4, 4, 17):
                fj = f.jet(x, 6)
                lhs = hamiltonian_jet(sup.potential(x, 2), sup.b_plus(fj))
                rhs = sup.b_plus(hamiltonian_jet(v0(x, 6), fj))
                worst_twine = max(worst_twine, _ratio(abs(lhs.value - rhs.value), abs(lhs.value) + abs(rhs.value) + 1))
        rec.check("intertwining", worst_twine, 1e-6)

        tails = max(abs(susy.complex_partner(REFERENCE_EPS, x) + x * x / 2) for x in (-30.0, -25.0, 25.0, 30.0))
        rec.check("partner_tails_approach_V0", tails, 0.05)

        singular = 0
        for eps in (1e-5 + 5j, (1 + 1j) / 5, 1e-2 + 1j):
            singular += len(susy.partner_scan(algebra.complex_partner_for(eps)).zeros)
        rec.check("complex_partners_nonsingular", singular, 0)

        missing = 0
        for eps in (-1.0, 0.0, 1.0):
            for C, D in ((1, 0), (0, 1), (1, 1)):
                missing += not susy.seed_scan(eps, C, D).is_singular
        real = susy.partner(susy.real_transform(0.0, 1.0))
        missing += not susy.partner_scan(real, samples=2000).is_singular
        rec.check("first_and_real_order_singular", missing, 0)

        trichotomy = (
            susy.real_transform(0.0, 1.0).c > 0,
            susy.confluent_transform(0.0).c == 0,
            susy.complex_transform(REFERENCE_EPS).c < 0,
        )
        rec.check("case_trichotomy", sum(not t for t in trichotomy), 0)
        return rec.report

    # --- algebra --------------------------------------------------------------------------

    def _algebra(self) -> DiagnosticReport:
        rec = self._report("algebra")
        sup = algebra.complex_partner_for(REFERENCE_EPS)
        xs = np.linspace(-5, 5, 50)

        worst_sse = worst_closed = 0.0
        for E in REFERENCE_ENERGIES:
            p = PartnerEigenfunction(eps=REFERENCE_EPS, E=E, base_combo=Combo.LEFT)
            wave = algebra.eigen_wave(p)
            for x in xs:
                res, scale = sse_residual(wave, E, sup.V2, x)
                worst_sse = max(worst_sse, res / scale)
            for x in xs[::5]:
                raw = algebra.closed_form_value(p, x)
                worst_closed = max(worst_closed, _ratio(abs(raw - 2 * abs(E - REFERENCE_EPS) * wave.value(x)), abs(raw)))
        rec.check("partner_eigenfunction_sse", worst_sse, 1e-6)
        rec.check("bplus_closed_form", worst_closed, 1e-8)

        worst_bb = 0.0
        for k in range(5):
            f = DampedPolynomial.monomial(k)
            for x in np.linspace(-4, 4, 17):
                fj = f.jet(x, 8)
                lhs = sup.b_minus(sup.b_plus(fj)).value
                v0 = sup.base_potential(x, 8)
                h1 = hamiltonian_jet(v0, fj) - fj * REFERENCE_EPS
                h2 = hamiltonian_jet(v0.truncate(6), h1) - h1.truncate(4) * REFERENCE_EPS.conjugate()
                worst_bb = max(worst_bb, _ratio(abs(lhs - h2.value), abs(lhs) + abs(h2.value) + 1))
        rec.check("bminus_bplus_product", worst_bb, 1e-5)

        worst_pair = worst_shift = worst_p5 = worst_q4 = 0.0
        for E in (-1.0, 0.5):
            f = algebra.eigen_wave(PartnerEigenfunction(eps=REFERENCE_EPS, E=E, base_combo=Combo.LEFT))
            raised = algebra.apply_L(REFERENCE_EPS, 1, f)
            lowered = algebra.apply_L(REFERENCE_EPS, -1, f)
            for x in np.linspace(-4, 4, 9):
                fv = f.value(x)
                bb = sup.b_plus(sup.b_minus(f.jet(x, 4))).value
                target = (E - REFERENCE_EPS) * (E - REFERENCE_EPS.conjugate()) * fv
                worst_pair = max(worst_pair, _ratio(abs(bb - target), abs(target)))

                j = raised.jet(x, 2)
                Hj = hamiltonian_jet(sup.potential(x, 2), j)
                worst_shift = max(worst_shift, _ratio(abs(Hj.value - (E + 1j) * j.value), abs(Hj.value) + abs(j.value)))

                ll = algebra.apply_L(REFERENCE_EPS, 1, lowered).value(x)
                p5 = algebra.P5_eval(E, REFERENCE_EPS) * fv
                worst_p5 = max(worst_p5, _ratio(abs(ll - p5), abs(p5)))

                comm = algebra.apply_L(REFERENCE_EPS, -1, raised).value(x) - ll
                q4 = algebra.Q4_eval(E, REFERENCE_EPS) * fv
                worst_q4 = max(worst_q4, _ratio(abs(comm - q4), abs(q4)))
        rec.check("bplus_bminus_product", worst_pair, 1e-4)
        rec.check("L_ladder_shift", worst_shift, 1e-5)
        rec.check("L_number_operator_P5", worst_p5, 1e-4)
        rec.check("L_commutator_Q4", worst_q4, 1e-4)

        roots = (REFERENCE_EPS, REFERENCE_EPS.conjugate(), 0.5j)
        rec.check("P5_roots", max(abs(algebra.P5_eval(r, REFERENCE_EPS)) for r in roots), 1e-9)

        rng = np.random.default_rng(self.seed)
        f, g = (DampedPolynomial(rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3), width=2.0) for _ in range(2))
        worst_anti = 0.0
        for sign in (1, -1):
            def op(w, s=sign):
                return algebra.apply_L(REFERENCE_EPS, s, w)
            worst_anti = max(worst_anti, oscillator.adjoint_residual(op, oscillator.antihermitian(op), f, g))
        rec.check("L_antihermitian", worst_anti, 1e-6)

        shots = algebra.shooting_scan(REFERENCE_EPS, SHOOTING_ENERGIES)
        rec.check("shooting_no_normalizable_state", sum(r.normalizable_candidate for r in shots), 0)
        return rec.report


class _Recorder:
    def __init__(self, report: DiagnosticReport, override: float | None):
        self.report = report
        self.override = override

    def check(self, name: str, residual: float, tol: float) -> None:
        self.report.record(name, float(residual), self.override if self.override is not None else tol)


def _ratio(num: float, den: float) -> float:
    return num / den if den > 0 else num


def run_suite(suite: str, tol: float | None = None) -> DiagnosticReport:
    return VerificationService(tol).run(suite)

"""
Factorization operators a_omega^+- = (-+ d/dx + omega x) / sqrt(2) and the
four Hermite ladders they generate:

    psi_n    harmonic bound states,          E = n + 1/2
    phi_n    harmonic polynomial solutions,  E = -n - 1/2
    phi_n^-  inverted polynomial solutions,  E = i(n + 1/2)
    phi_n^+  inverted polynomial solutions,  E = -i(n + 1/2)
"""
import cmath
import logging
import math
from fractions import Fraction

import numpy as np

from app.schemas.ladder import LadderFamily, LadderState
from app.schemas.oscillator import OscillatorKind, WaveEval
from app.schemas.report import DiagnosticReport
from app.services.jets import quadratic_jet
from app.services.specfun import hermite
from app.services.waves import DampedPolynomial, QuadraticPotential, Wave, hamiltonian_jet, ladder_jet, ladder_wave

logger = logging.getLogger(__name__)

# (gaussian exponent kappa in e^{kappa x^2/2}, Hermite argument beta, phase per rung)
_FAMILY_FORMS = {
    LadderFamily.BOUND_HARMONIC: (-1.0, 1.0, 1.0),
    LadderFamily.NONPHYS_HARMONIC: (1.0, 1j, -1j),
    LadderFamily.INVERTED_MINUS: (-1j, cmath.exp(0.25j * math.pi), cmath.exp(0.25j * math.pi)),
    LadderFamily.INVERTED_PLUS: (1j, cmath.exp(0.75j * math.pi), cmath.exp(-0.25j * math.pi)),
}


class LadderWave(Wave):
    """Closed Hermite form of a ladder state, tagged with its eigenvalue"""

    def __init__(self, state: LadderState):
        self.state = state
        self.energy = state.eigenvalue
        self.potential = QuadraticPotential(state.family.kind.omega ** 2)
        kappa, beta, phase = _FAMILY_FORMS[state.family]
        n = state.n
        self.kappa = kappa
        self.beta = beta
        self.norm = phase ** n / math.sqrt(2 ** n * math.factorial(n) * math.sqrt(math.pi))

    def pair(self, x: float) -> tuple[complex, complex]:
        n = self.state.n
        gauss = cmath.exp(self.kappa * x * x / 2)
        h = hermite(n, self.beta * x)
        dh = 2 * n * self.beta * hermite(n - 1, self.beta * x) if n > 0 else 0
        return self.norm * gauss * h, self.norm * gauss * (self.kappa * x * h + dh)


def ladder_apply(omega: OscillatorKind, sign: int, psi: Wave) -> Wave:
    """
    a_omega^+ (sign=+1) or a_omega^- (sign=-1) applied to psi

    Derivatives of the result come from the SSE when psi carries an energy
    tag; otherwise one extra order is taken by finite differences and any
    further composition raises MissingDerivative.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return ladder_wave(omega.omega, sign, psi)


def ladder_state(family: LadderFamily, n: int, x: float) -> WaveEval:
    return LadderWave(LadderState(family=family, n=n))(x)


def eigenvalue_lattice(family: LadderFamily, n_max: int) -> list[tuple[Fraction, Fraction]]:
    """Exact eigenvalues of rungs 0..n_max"""
    return [family.exact_eigenvalue(n) for n in range(n_max + 1)]


def algebra_residuals(
    omega: OscillatorKind,
    trials: int,
    xs=None,
    seed: int = 0,
    tol: float = 1e-8,
) -> DiagnosticReport:
    """
    Sup-norm residuals of the operator identities on random P(x) e^{-x^2/4}, deg P <= 4:

        [H, a^+-] f -+ omega a^+- f,   [a^-, a^+] f - omega f,
        (a^+ a^- + omega/2) f - H f,   (a^- a^+ - omega/2) f - H f
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    w = omega.omega
    xs = np.linspace(-5, 5, 41) if xs is None else xs
    rng = np.random.default_rng(seed)
    worst = dict.fromkeys(("commutator_H_aplus", "commutator_H_aminus", "commutator_a", "factorization_plus_minus", "factorization_minus_plus"), 0.0)

    for _ in range(trials):
        f_wave = DampedPolynomial(rng.uniform(-1, 1, size=5))
        for x in xs:
            f = f_wave.jet(x, 4)
            V = quadratic_jet(x, w * w, 4)
            Hf = hamiltonian_jet(V, f)
            ap, am = ladder_jet(w, 1, f), ladder_jet(w, -1, f)
            worst["commutator_H_aplus"] = max(
                worst["commutator_H_aplus"],
                abs(hamiltonian_jet(V, ap).value - ladder_jet(w, 1, Hf).value - w * ap.value),
            )
            worst["commutator_H_aminus"] = max(
                worst["commutator_H_aminus"],
                abs(hamiltonian_jet(V, am).value - ladder_jet(w, -1, Hf).value + w * am.value),
            )
            am_ap = ladder_jet(w, -1, ap).value
            ap_am = ladder_jet(w, 1, am).value
            worst["commutator_a"] = max(worst["commutator_a"], abs(am_ap - ap_am - w * f.value))
            worst["factorization_plus_minus"] = max(
                worst["factorization_plus_minus"], abs(ap_am + w / 2 * f.value - Hf.value)
            )
            worst["factorization_minus_plus"] = max(
                worst["factorization_minus_plus"], abs(am_ap - w / 2 * f.value - Hf.value)
            )

    report = DiagnosticReport(suite="ladder")
    for name, residual in worst.items():
        report.record(f"{name}[{omega.value}]", residual, tol)
    logger.debug("ladder algebra residuals (%s): %s", omega.value, worst)
    return report

"""
Operators of the complex-case partner H_2: B^+-, the transformed
eigenfunctions psi_E^(2) = B^+ psi_E / |E - eps|, the ladder operators
L^+- = B^+ a_i^+- B^- and the polynomials P_5, Q_4 of the algebra they close.
"""
import logging
import math
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp

from app.schemas.algebra import EigenNormalization, PartnerEigenfunction, ShootingResult
from app.schemas.oscillator import WaveEval
from app.services.oscillator import INVERTED, scattering_wave
from app.services.susy import ComplexPartner, complex_partner, complex_transform, superpotential
from app.services.waves import ScaledWave, Wave, ladder_wave

logger = logging.getLogger(__name__)


@lru_cache(maxsize=64)
def complex_partner_for(eps: complex) -> ComplexPartner:
    return ComplexPartner(complex_transform(eps))


def eigen_wave(p: PartnerEigenfunction) -> Wave:
    """psi_E^(2) as an H_2 eigen-evaluator at E"""
    sup = complex_partner_for(p.eps)
    image = sup.b_plus_wave(scattering_wave(p.base_combo, p.E))
    if p.normalization == EigenNormalization.RAW:
        return ScaledWave(image, 2.0)
    return ScaledWave(image, 1 / abs(p.E - p.eps))


def transformed_eigenfunction(p: PartnerEigenfunction, x: float) -> WaveEval:
    """
    psi_E^(2); RAW is g(-psi_E' + (u'/u) psi_E) + 2(eps - E) psi_E, which is
    exactly 2 B^+ psi_E, BFACTOR is B^+ psi_E / |E - eps|
    """
    return eigen_wave(p)(x)


def closed_form_value(p: PartnerEigenfunction, x: float) -> complex:
    """(w'/w)[-psi_E' + (u'/u) psi_E] + 2(eps - E) psi_E evaluated term by term"""
    sup = complex_partner_for(p.eps)
    v, d = scattering_wave(p.base_combo, p.E).pair(x)
    u_val, _ = sup.u.pair(x)
    g = abs(u_val) ** 2 / sup.w(x)
    return g * (-d + superpotential(sup.u, x) * v) + 2 * (p.eps - p.E) * v


def apply_Bplus(eps: complex, f: Wave, x: float) -> complex:
    """[f'' - g f' + h f] / 2"""
    return complex_partner_for(eps).b_plus(f.jet(x, 2)).value


def apply_Bminus(eps: complex, f: Wave, x: float) -> complex:
    """[f'' + g f' + (h + g') f] / 2"""
    return complex_partner_for(eps).b_minus(f.jet(x, 2)).value


def apply_L(eps: complex, sign: int, f: Wave) -> Wave:
    """
    L^+- f = B^+ a_i^+- B^- f

    An H_2 eigen-evaluator at E goes to one at E +- i; derivatives of every
    stage come from jets.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    sup = complex_partner_for(eps)
    return sup.b_plus_wave(ladder_wave(INVERTED, sign, sup.b_minus_wave(f)))


def P5_eval(E: complex, eps: complex) -> complex:
    """(E - eps)(E - eps-bar)(E - eps - i)(E - eps-bar - i)(E - i/2)"""
    eps = complex(eps)
    epsb = eps.conjugate()
    return (E - eps) * (E - epsb) * (E - eps - 1j) * (E - epsb - 1j) * (E - 0.5j)


def Q4_eval(E: complex, eps: complex) -> complex:
    """P_5(E + i) - P_5(E)"""
    return P5_eval(E + 1j, eps) - P5_eval(E, eps)


def shooting_scan(eps: complex, energies, x_max: float = 12.0, tail_points: int = 200) -> list[ShootingResult]:
    """
    Integrate -y''/2 + V_2 y = E y from the origin with (y, y') = (1, 0) and
    (0, 1) out to +-x_max, and condition the Gram matrix of the pair over
    the outer half of each side
    """
    def rhs(x, y, E):
        k = 2 * (complex_partner(eps, x) - E)
        return [y[1], k * y[0], y[3], k * y[2]]

    results = []
    for E in energies:
        ratios = []
        for side in (-1, 1):
            tail = np.linspace(side * x_max / 2, side * x_max, tail_points)
            sol = solve_ivp(
                rhs, (0.0, side * x_max), [1.0, 0.0, 0.0, 1.0],
                method="DOP853", t_eval=tail, rtol=1e-10, atol=1e-12, args=(E,),
            )
            if not sol.success:
                logger.warning("shooting at E=%g failed on side %d: %s", E, side, sol.message)
                ratios.append(math.nan)
                continue
            Y = np.vstack([sol.y[0], sol.y[2]])
            eigs = np.linalg.eigvalsh(Y @ Y.conj().T)
            ratios.append(float(eigs[0] / eigs[-1]))
        results.append(ShootingResult(E=E, left_ratio=ratios[0], right_ratio=ratios[1]))
        logger.debug("shooting E=%g: tail ratios %s", E, ratios)
    return results

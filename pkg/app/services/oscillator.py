"""
Closed-form solutions of -psi''/2 + omega^2 x^2 psi / 2 = E psi for the
harmonic (omega = 1), free (omega = 0) and inverted (omega = i) oscillators.

Solutions are built for x >= 0 from Kummer's function and carried to x < 0 by
parity. Beyond the series radius each parity solution is kept as its two
asymptotic parts (the x^{-iE} e^{-i x^2/2} part and the x^{iE} e^{i x^2/2}
part) so that combinations which cancel one of them exactly, the scattering
states and the SUSY seeds, drop it instead of subtracting it numerically.
"""
import cmath
import logging
import math
from functools import lru_cache
from typing import Callable

from scipy.special import expit

from app.core.config import settings
from app.core.errors import DomainError, RangeOverflow, UnsupportedKind
from app.schemas.oscillator import (
    Combo,
    NormalizationNE,
    OscillatorKind,
    SolutionSpec,
    WaveEval,
)
from app.schemas.specfun import DEFAULT_CONTROL, SeriesControl
from app.services.jets import Jet
from app.services.quadrature import oscillatory_quad, panel_grid, symmetric_grid
from app.services.specfun import (
    gamma_ratio,
    hyp1f1_asymptotic_parts,
    hyp1f1_derivative,
    hyp1f1_series,
    ln_gamma,
    rgamma,
)
from app.services.waves import FunctionWave, QuadraticPotential, ScaledWave, Wave, checked_eval

logger = logging.getLogger(__name__)

INVERTED = 1j
FIRST, SECOND = 0, 1

Pair = tuple[complex, complex]


@lru_cache(maxsize=1 << 16)
def _parity_parts(omega: complex, energy: complex, s: float, odd: bool, ctl: SeriesControl) -> tuple[Pair, Pair, bool]:
    """
    (value, deriv) of the even or odd solution at s >= 0

    Returns (first, second, split). In the series regime the whole solution
    sits in `first` and split is False.
    """
    b = 1.5 if odd else 0.5
    a = b / 2 - energy / (2 * omega)
    z = omega * s * s

    def assemble(m: complex, dm: complex, gauss: complex) -> Pair:
        if odd:
            return s * gauss * m, gauss * (m - z * m + 2 * z * dm)
        return gauss * m, gauss * s * omega * (2 * dm - m)

    if abs(z) <= ctl.switch_radius:
        m = hyp1f1_series(a, b, z, ctl)
        dm = hyp1f1_derivative(a, b, z, ctl)
        return assemble(m, dm, cmath.exp(-z / 2)), (0j, 0j), False

    # e^{-z/2} rides inside the exponent of each part; e^{z} alone overflows for harmonic z
    m1, m2 = hyp1f1_asymptotic_parts(a, b, z, ctl, log_prefactor=-z / 2)
    if a == 0:
        d1 = d2 = 0j
    else:
        d1, d2 = hyp1f1_asymptotic_parts(a + 1, b + 1, z, ctl, log_prefactor=-z / 2)
        d1, d2 = a / b * d1, a / b * d2
    return assemble(m1, d1, 1.0), assemble(m2, d2, 1.0), True


def _combine(
    omega: complex,
    energy: complex,
    x: float,
    alpha: complex,
    beta: complex,
    drop_pos: int | None = None,
    drop_neg: int | None = None,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> Pair:
    """alpha psi_e + beta psi_o at x, omitting the asymptotic part that cancels on each side"""
    s = abs(float(x))
    sgn = 1.0 if x >= 0 else -1.0
    drop = drop_pos if x >= 0 else drop_neg
    zero = ((0j, 0j), (0j, 0j), False)
    e = _parity_parts(omega, energy, s, False, ctl) if alpha != 0 else zero
    o = _parity_parts(omega, energy, s, True, ctl) if beta != 0 else zero
    split = e[2] or o[2]
    value = deriv = 0j
    for k in (FIRST, SECOND):
        if split and drop == k:
            continue
        ev, ed = e[k]
        ov, od = o[k]
        value += alpha * ev + beta * sgn * ov
        deriv += alpha * sgn * ed + beta * od
    return value, deriv


class OscillatorWave(Wave):
    """
    alpha psi_e + beta psi_o as an eigen-evaluator of -d^2/2 + omega^2 x^2 / 2

    :param drop_pos: asymptotic part that cancels for x > 0 (FIRST, SECOND or None)
    :param drop_neg: same for x < 0
    :param mirror: evaluate at -x (psi_R from psi_L)
    """

    def __init__(
        self,
        omega: complex,
        energy: complex,
        alpha: complex,
        beta: complex,
        drop_pos: int | None = None,
        drop_neg: int | None = None,
        mirror: bool = False,
        ctl: SeriesControl = DEFAULT_CONTROL,
    ):
        self.omega = omega
        self.energy = energy
        self.potential = QuadraticPotential(omega * omega)
        self.alpha = alpha
        self.beta = beta
        self.drop_pos = drop_pos
        self.drop_neg = drop_neg
        self.mirror = mirror
        self.ctl = ctl

    def pair(self, x: float) -> Pair:
        if self.mirror:
            v, d = _combine(self.omega, self.energy, -x, self.alpha, self.beta, self.drop_pos, self.drop_neg, self.ctl)
            return v, -d
        return _combine(self.omega, self.energy, x, self.alpha, self.beta, self.drop_pos, self.drop_neg, self.ctl)

    def __repr__(self) -> str:
        return f"OscillatorWave(omega={self.omega}, E={self.energy}, alpha={self.alpha:.6g}, beta={self.beta:.6g})"


# --- Gamma-ratio coefficients -------------------------------------------------

def outgoing_coefficient(energy: complex) -> complex:
    """k(E) = 2 e^{-i pi/4} Gamma(3/4 - iE/2) / Gamma(1/4 - iE/2); psi_e - k psi_o has no x^{-iE} part for x > 0"""
    return 2 * cmath.exp(-0.25j * math.pi) * gamma_ratio(0.75 - 0.5j * energy, 0.25 - 0.5j * energy)


def incoming_coefficient(energy: complex) -> complex:
    """2 e^{i pi/4} Gamma(3/4 + iE/2) / Gamma(1/4 + iE/2); psi_e - it psi_o has no x^{iE} part for x > 0"""
    return 2 * cmath.exp(0.25j * math.pi) * gamma_ratio(0.75 + 0.5j * energy, 0.25 + 0.5j * energy)


def left_coefficient(energy: float) -> complex:
    return (incoming_coefficient(energy) + outgoing_coefficient(energy)) / 2


def _ne(energy: float) -> complex:
    E = float(energy)
    return cmath.exp(
        1j * math.pi / 8
        + E * math.pi / 4
        + (0.5j * E - 1) * math.log(2)
        + ln_gamma(0.5 - 1j * E)
        - 0.5 * math.log(math.pi)
        - ln_gamma(0.75 - 0.5j * E)
    )


def normalization_NE(energy: float) -> NormalizationNE:
    """N_E = e^{i(1/2 - iE) pi/4} 2^{iE/2 - 1} Gamma(1/2 - iE) / [pi^{1/2} Gamma(3/4 - iE/2)]"""
    return NormalizationNE(E=energy, value=_ne(energy))


# --- wave factories -----------------------------------------------------------

def parity_wave(kind: OscillatorKind, energy: complex, C: complex, D: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> Wave:
    if kind == OscillatorKind.FREE:
        return FunctionWave(lambda x: free_parity(energy, x, C, D), energy, QuadraticPotential(0))
    return OscillatorWave(kind.omega, energy, C, D, ctl=ctl)


def scattering_wave(combo: Combo, energy: float, ctl: SeriesControl = DEFAULT_CONTROL) -> OscillatorWave:
    if combo == Combo.PLUS:
        ne = _ne(energy)
        return OscillatorWave(INVERTED, energy, ne, -ne * outgoing_coefficient(energy), drop_pos=FIRST, ctl=ctl)
    if combo == Combo.MINUS:
        ne = _ne(energy)
        return OscillatorWave(INVERTED, energy, ne, ne * outgoing_coefficient(energy), drop_neg=FIRST, ctl=ctl)
    if combo in (Combo.LEFT, Combo.RIGHT):
        coeff = left_coefficient(energy)
        if abs(coeff.imag) < 1e-14 * max(1.0, abs(coeff)):
            coeff = complex(coeff.real, 0.0)
        return OscillatorWave(INVERTED, energy, 1.0, -coeff, mirror=combo == Combo.RIGHT, ctl=ctl)
    raise ValueError(f"{combo.value} is not a scattering combination")


def solution_wave(spec: SolutionSpec, ctl: SeriesControl = DEFAULT_CONTROL) -> Wave:
    """Evaluator for any SolutionSpec, free particle included"""
    if spec.combo == Combo.EVEN:
        return parity_wave(spec.kind, spec.energy, 1.0, 0.0, ctl)
    if spec.combo == Combo.ODD:
        return parity_wave(spec.kind, spec.energy, 0.0, 1.0, ctl)
    if spec.combo == Combo.GENERAL:
        return parity_wave(spec.kind, spec.energy, spec.C, spec.D, ctl)
    return scattering_wave(spec.combo, spec.energy, ctl)


# --- point evaluators ---------------------------------------------------------

def general_solution(spec: SolutionSpec, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> WaveEval:
    """
    e^{-omega x^2/2} [C 1F1(1/4 - E/2omega, 1/2; omega x^2) + D x 1F1(3/4 - E/2omega, 3/2; omega x^2)]

    :raises UnsupportedKind: the free particle has no 1F1 form, see free_solution
    """
    if spec.kind == OscillatorKind.FREE:
        raise UnsupportedKind("the free particle is not a 1F1 solution; use free_solution")
    if spec.combo in (Combo.PLUS, Combo.MINUS, Combo.LEFT, Combo.RIGHT):
        raise ValueError("general_solution takes Even, Odd or General combinations; use psi_combo")
    return solution_wave(spec, ctl)(x)


def psi_even(energy: complex, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> WaveEval:
    v, d = _combine(INVERTED, energy, x, 1.0, 0.0, ctl=ctl)
    return checked_eval(v, d)


def psi_odd(energy: complex, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> WaveEval:
    v, d = _combine(INVERTED, energy, x, 0.0, 1.0, ctl=ctl)
    return checked_eval(v, d)


def psi_combo(spec: SolutionSpec, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> WaveEval:
    if spec.kind != OscillatorKind.INVERTED:
        raise UnsupportedKind(f"scattering combinations need the inverted oscillator, got {spec.kind.value}")
    return solution_wave(spec, ctl)(x)


def asymptotic_even(energy: complex, x: float) -> complex:
    """
    Leading large-|x| form of psi_e:
    sqrt(pi) e^{-pi E/4} |x|^{-1/2} [e^{i pi/8} |x|^{-iE} e^{-ix^2/2} / Gamma(1/4 - iE/2)
                                   + e^{-i pi/8} |x|^{iE} e^{ix^2/2} / Gamma(1/4 + iE/2)]
    """
    s = _check_asymptotic(x)
    return math.sqrt(math.pi) * _asymptotic_bracket(energy, s, 0.25, math.pi / 8)


def asymptotic_odd(energy: complex, x: float) -> complex:
    """Leading large-|x| form of psi_o: as asymptotic_even with Gamma(3/4 -+ iE/2), phases 3pi/8 and a factor 1/2, odd in x"""
    s = _check_asymptotic(x)
    sgn = 1.0 if x > 0 else -1.0
    return sgn * math.sqrt(math.pi) / 2 * _asymptotic_bracket(energy, s, 0.75, 3 * math.pi / 8)


def _check_asymptotic(x: float) -> float:
    s = abs(x)
    if s < settings.x_min_asymp:
        raise DomainError(f"asymptotic form needs |x| >= {settings.x_min_asymp}, got {x}")
    return s


def _asymptotic_bracket(energy: complex, s: float, shift: float, phase: float) -> complex:
    log_s = math.log(s)
    half = 0.5j * energy
    left = cmath.exp(1j * phase - 0.5 * log_s - 1j * energy * log_s - 0.5j * s * s) * rgamma(shift - half)
    right = cmath.exp(-1j * phase - 0.5 * log_s + 1j * energy * log_s + 0.5j * s * s) * rgamma(shift + half)
    return cmath.exp(-math.pi * energy / 4) * (left + right)


# --- free particle --------------------------------------------------------------

def free_solution(energy: float, x: float, sign: int = 1) -> WaveEval:
    """
    Travelling/exponential pair of the free particle

    E > 0: e^{+-ikx}, k = sqrt(2E); E = 0: 1 (sign=+1) and x (sign=-1);
    E < 0: e^{+-kappa x}, kappa = sqrt(-2E)
    """
    if energy > 0:
        k = math.sqrt(2 * energy)
        v = cmath.exp(sign * 1j * k * x)
        return WaveEval(value=v, deriv=sign * 1j * k * v)
    if energy < 0:
        kappa = math.sqrt(-2 * energy)
        v = math.exp(sign * kappa * x)
        return WaveEval(value=v, deriv=sign * kappa * v)
    if sign > 0:
        return WaveEval(value=1, deriv=0)
    return WaveEval(value=x, deriv=1)


def free_parity(energy: float, x: float, C: complex = 1.0, D: complex = 0.0) -> Pair:
    """C cos(kx) + D sin(kx)/k and its hyperbolic/linear counterparts, same origin data as psi_e, psi_o"""
    if energy > 0:
        k = math.sqrt(2 * energy)
        return C * math.cos(k * x) + D * math.sin(k * x) / k, -C * k * math.sin(k * x) + D * math.cos(k * x)
    if energy < 0:
        kappa = math.sqrt(-2 * energy)
        return (
            C * math.cosh(kappa * x) + D * math.sinh(kappa * x) / kappa,
            C * kappa * math.sinh(kappa * x) + D * math.cosh(kappa * x),
        )
    return C + D * x, D + 0j


# --- helpers for plots and checks -----------------------------------------------

def envelope(ev: WaveEval, x: float) -> float:
    """sqrt(|psi|^2 + |psi'/x|^2): smooth for the x^{-1/2} e^{+-ix^2/2} waves"""
    if x == 0:
        raise DomainError("envelope is undefined at x = 0")
    return math.hypot(abs(ev.value), abs(ev.deriv / x))


def transmission_probability(energy: float) -> float:
    """1 / (1 + e^{-2 pi E}) over the inverted-oscillator barrier"""
    return float(expit(2 * math.pi * energy))


def left_mover_asymmetry(energy: float) -> float:
    """
    Far-field envelope(psi_L)^2 on the incident side over the far side,
    1 + 4 (1 - T) / T with T the barrier transmission
    """
    T = transmission_probability(energy)
    if T == 0:
        raise RangeOverflow(f"transmission underflows at E={energy}")
    return 1 + 4 * (1 - T) / T


def wronskian(f: Wave, g: Wave, x: float) -> complex:
    fv, fd = f.pair(x)
    gv, gd = g.pair(x)
    return fv * gd - fd * gv


# --- Dirac-normalization surrogates ---------------------------------------------

def window_inner_product(f: Wave, g: Wave, L: float, quad_tol: float | None = None) -> complex:
    """
    Integral of conj(f) g over [-L, L]

    Panels keep the phase of e^{i x^2} below quad_panel_phase each, which
    means widths of about pi/(4|x|) near the window edges.
    """
    if L <= 0:
        raise DomainError(f"window half-width must be positive, got {L}")
    points = symmetric_grid(L, lambda t: 2 * abs(t))
    return oscillatory_quad(
        lambda t: f.value(t).conjugate() * g.value(t), -L, L, points, rel_tol=quad_tol,
    )


def adjoint_residual(
    op: Callable[[Wave], Wave],
    adjoint: Callable[[Wave], Wave],
    f: Wave,
    g: Wave,
    L: float = 8.0,
) -> float:
    """
    |<op f, g> - <f, adjoint g>| over the larger of the two, both taken on [-L, L]

    f and g should decay well inside the window; nothing is added for the
    boundary terms of the integration by parts.
    """
    lhs = window_inner_product(op(f), g, L)
    rhs = window_inner_product(f, adjoint(g), L)
    scale = max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) / scale if scale > 0 else 0.0


def antihermitian(op: Callable[[Wave], Wave]) -> Callable[[Wave], Wave]:
    """The adjoint -op of an anti-Hermitian operator, for adjoint_residual"""
    return lambda w: ScaledWave(op(w), -1.0)


def mellin_basis(sigma: int, lam: float, x: float) -> complex:
    """(2 pi)^{-1/2} x_sigma^{i lambda - 1/2}; x_+ = x on x > 0, x_- = -x on x < 0, zero elsewhere"""
    if x == 0:
        raise DomainError("Mellin basis is singular at x = 0")
    if sigma * x < 0:
        return 0j
    xs = abs(x)
    return cmath.exp((1j * lam - 0.5) * math.log(xs)) / math.sqrt(2 * math.pi)


def integral_representation_check(sigma: int, energy: float, x: float, p_cutoff: float) -> complex:
    """
    2^{iE/2} (2 pi)^{-1} int_{|p| <= cutoff} p_sigma^{-iE-1/2} e^{i(p^2/4 + xp + x^2/2)} dp

    p = s^2 turns the integrand into 2 s^{-2iE} e^{i(s^4/4 + x s^2)}; the
    stretch next to s = 0 is done term by term from the Taylor series of the
    exponential, the rest by oscillatory quadrature.
    """
    if p_cutoff <= 0:
        raise DomainError(f"p_cutoff must be positive, got {p_cutoff}")
    y = x if sigma > 0 else -x
    top = math.sqrt(p_cutoff)
    head = min(0.5, 1 / math.sqrt(1 + abs(y)), top)

    order = 60
    s = Jet.variable(0.0, order)
    phase = (s * s * s * s * 0.25 + s * s * y) * 1j
    taylor = phase.exp().coeffs
    power = 1 - 2j * energy
    near = sum(c * cmath.exp((k + power) * math.log(head)) / (k + power) for k, c in enumerate(taylor))

    far = 0j
    if top > head:
        points = panel_grid(top, lambda t: t ** 3 + 2 * y * t, start=head)
        far = oscillatory_quad(
            lambda t: cmath.exp(-2j * energy * math.log(t) + 1j * (t ** 4 / 4 + y * t * t)),
            head, top, points,
        )
    prefactor = cmath.exp(0.5j * energy * math.log(2) + 0.5j * x * x) / (2 * math.pi)
    return prefactor * 2 * (near + far)

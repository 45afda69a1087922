"""
First- and second-order SUSY transformations of the inverted oscillator.

First order and the real and confluent second-order cases are kept to show
that they are always singular here; the complex case with conjugate seeds
u, u-bar at eps, eps-bar yields real partners V_2 = V_0 - (log w)'' free of
singularities whenever u decays on one side (u_P for Im eps > 0, u_N for
Im eps < 0).

All second-order partners share B^+ = [D^2 - g D + h]/2 with g = F'/F, where
F is the Wronskian W(u1, u2) (real case) or w (confluent and complex cases).
"""
import bisect
import logging
import math
import threading
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import optimize

from app.core.errors import (
    ClassificationError,
    ExcludedEpsilon,
    SeedZero,
    WronskianZero,
    WZero,
)
from app.schemas.oscillator import Combo, OscillatorKind, SolutionSpec, WaveEval
from app.schemas.specfun import DEFAULT_CONTROL, SeriesControl
from app.schemas.susy import (
    ComplexCase,
    ConfluentCase,
    EpsilonClass,
    FactorizationEnergy,
    FirstOrderCase,
    RealCase,
    SingularityReport,
    SingularityZero,
    SusyTransform,
    ZeroKind,
    classify_epsilon,
    lattice_distance,
)
from app.services.jets import Jet
from app.services.oscillator import (
    FIRST,
    INVERTED,
    SECOND,
    OscillatorWave,
    envelope,
    incoming_coefficient,
    outgoing_coefficient,
    solution_wave,
)
from app.services.quadrature import oscillatory_quad, symmetric_grid
from app.services.waves import OperatorWave, QuadraticPotential, Wave

logger = logging.getLogger(__name__)

SEED_ZERO_TOL = 1e-14
W_ZERO_TOL = 1e-12
BISECT_TOL = 1e-10
NEAR_ZERO = 1e-8
# |x| out to which confluent tail zeros are bracketed and bisected
TAIL_REACH = 40.0

INVERTED_POTENTIAL = QuadraticPotential(-1)


# --- factorization energies and seeds -----------------------------------------

def validate_epsilon(eps: complex) -> FactorizationEnergy:
    eps = complex(eps)
    return FactorizationEnergy(eps=eps, classification=classify_epsilon(eps), lattice_distance=lattice_distance(eps))


def uP_wave(eps: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> OscillatorWave:
    """psi_e - k(eps) psi_o: decays on x > 0 when Im eps > 0"""
    return OscillatorWave(INVERTED, complex(eps), 1.0, -outgoing_coefficient(eps), drop_pos=FIRST, ctl=ctl)


def uN_wave(eps: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> OscillatorWave:
    """psi_e - 2 e^{i pi/4} Gamma(3/4 + i eps/2)/Gamma(1/4 + i eps/2) psi_o: decays on x > 0 when Im eps < 0"""
    return OscillatorWave(INVERTED, complex(eps), 1.0, -incoming_coefficient(eps), drop_pos=SECOND, ctl=ctl)


def seed_uP(eps: complex, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> WaveEval:
    return uP_wave(eps, ctl)(x)


def seed_uN(eps: complex, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> WaveEval:
    return uN_wave(eps, ctl)(x)


def seed_wave(energy: FactorizationEnergy, ctl: SeriesControl = DEFAULT_CONTROL) -> OscillatorWave:
    if not energy.usable:
        raise ExcludedEpsilon(energy)
    if energy.classification == EpsilonClass.QUADRANT_I_II:
        return uP_wave(energy.eps, ctl)
    return uN_wave(energy.eps, ctl)


# --- first order ----------------------------------------------------------------

def superpotential(u: Wave, x: float) -> complex:
    """alpha_1 = u'/u"""
    v, d = u.pair(x)
    if v == 0 or abs(v) <= SEED_ZERO_TOL * abs(d):
        raise SeedZero(f"transformation function vanishes at x={x}")
    return d / v


def first_order_partner(
    eps: float, C: float, D: float, x: float, kind: OscillatorKind = OscillatorKind.INVERTED
) -> float:
    """V_1 = V_0 - alpha_1', with alpha_1' = 2(V_0 - eps) - alpha_1^2 from the Riccati equation"""
    u = solution_wave(SolutionSpec(kind=kind, energy=eps, C=C, D=D))
    alpha = superpotential(u, x)
    v0 = kind.potential(x)
    return (v0 - 2 * (v0 - eps) + alpha * alpha).real


def first_order_transform(eps: float, C: float = 1.0, D: float = 0.0) -> SusyTransform:
    seed = SolutionSpec(kind=OscillatorKind.INVERTED, energy=eps, C=C, D=D)
    return SusyTransform(order=1, case2=FirstOrderCase(eps=eps, seed=seed), c=0.0, d=2 * eps)


# --- second order: shared machinery ---------------------------------------------

class SecondOrderPartner:
    """
    Partner V_2 = V_0 - g' of the inverted oscillator with g = F'/F

    :param transform: constants c, d and the case data
    :param zero_kind: what a zero of F means for the singularity report
    """
    zero_kind = ZeroKind.W_ZERO
    zero_error = WZero

    def __init__(self, transform: SusyTransform, base_potential=INVERTED_POTENTIAL):
        self.transform = transform
        self.base_potential = base_potential
        self.c = transform.c
        self.d = transform.d

    def f_jet(self, x: float, order: int) -> Jet:
        raise NotImplementedError

    def f_value(self, x: float) -> float:
        return self.f_jet(x, 0).value.real

    def _zero_scale(self, x: float, F: Jet) -> float:
        return W_ZERO_TOL * abs(F.nth(1)) * (1 + abs(x))

    def g_jet(self, x: float, order: int) -> Jet:
        F = self.f_jet(x, order + 1)
        if F.value == 0 or abs(F.value) < self._zero_scale(x, F):
            raise self.zero_error(f"{self.zero_kind.value} at x={x}")
        return F.derivative() / F.truncate(order)

    def potential(self, x: float, order: int) -> Jet:
        """Jet of V_2; doubles as the potential tag of H_2 eigen-evaluators"""
        return self.base_potential(x, order) - self.g_jet(x, order + 1).derivative()

    def V2(self, x: float) -> float:
        return self.potential(x, 0).value.real

    def h_jet(self, x: float, order: int) -> Jet:
        g = self.g_jet(x, order + 1)
        gt = g.truncate(order)
        return g.derivative() * 0.5 + gt * gt * 0.5 - self.base_potential(x, order) * 2 + self.d

    def b_plus(self, f: Jet) -> Jet:
        """(B^+ f) = [f'' - g f' + h f] / 2"""
        n = f.order - 2
        g, h = self.g_jet(f.x0, n), self.h_jet(f.x0, n)
        return (f.derivative(2) - g * f.derivative().truncate(n) + h * f.truncate(n)) * 0.5

    def b_minus(self, f: Jet) -> Jet:
        """(B^- f) = [f'' + g f' + (h + g') f] / 2, the formal adjoint of B^+"""
        n = f.order - 2
        g1 = self.g_jet(f.x0, n + 1)
        g, h = g1.truncate(n), self.h_jet(f.x0, n)
        return (f.derivative(2) + g * f.derivative().truncate(n) + (h + g1.derivative()) * f.truncate(n)) * 0.5

    def b_plus_wave(self, psi: Wave) -> Wave:
        """B^+ psi; an H_0 eigen-evaluator at E becomes an H_2 one at E"""
        return OperatorWave(self.b_plus, psi, 2, psi.energy, self.potential)

    def b_minus_wave(self, psi: Wave) -> Wave:
        return OperatorWave(self.b_minus, psi, 2, psi.energy, self.base_potential)

    def eqg_residual(self, x: float) -> tuple[float, float]:
        """
        Residual of g g''/2 - g'^2/4 + g^2 (g' + g^2/4 - 2V_0 + d) + c and
        the sum of the magnitudes of its terms
        """
        g = self.g_jet(x, 2)
        g0, g1, g2 = g.value, g.nth(1), g.nth(2)
        v0 = self.base_potential(x, 0).value
        terms = (g0 * g2 / 2, g1 * g1 / 4, g0 * g0 * g1, g0 ** 4 / 4, 2 * g0 * g0 * v0, g0 * g0 * self.d, self.c)
        residual = g0 * g2 / 2 - g1 * g1 / 4 + g0 * g0 * (g1 + g0 * g0 / 4 - 2 * v0 + self.d) + self.c
        return abs(residual), sum(abs(t) for t in terms)


# --- real case --------------------------------------------------------------------

class RealPartner(SecondOrderPartner):
    zero_kind = ZeroKind.WRONSKIAN_ZERO
    zero_error = WronskianZero

    def __init__(self, transform: SusyTransform, u1: Wave, u2: Wave, base_potential=INVERTED_POTENTIAL):
        super().__init__(transform, base_potential)
        self.u1 = u1
        self.u2 = u2

    def f_jet(self, x: float, order: int) -> Jet:
        a, b = self.u1.jet(x, order + 1), self.u2.jet(x, order + 1)
        return (a.truncate(order) * b.derivative() - a.derivative() * b.truncate(order))


def real_transform(
    eps1: float, eps2: float, seed1: SolutionSpec | None = None, seed2: SolutionSpec | None = None
) -> SusyTransform:
    """Seeds default to the even solutions at eps1 and eps2"""
    seed1 = seed1 or SolutionSpec(kind=OscillatorKind.INVERTED, energy=eps1, combo=Combo.EVEN)
    seed2 = seed2 or SolutionSpec(kind=OscillatorKind.INVERTED, energy=eps2, combo=Combo.EVEN)
    return SusyTransform(
        order=2,
        case2=RealCase(eps1=eps1, eps2=eps2, seed1=seed1, seed2=seed2),
        c=(eps1 - eps2) ** 2,
        d=eps1 + eps2,
    )


def real_case_partner(eps1: float, u1: Wave, eps2: float, u2: Wave, x: float) -> float:
    """
    V_2 = V_0 - (log W)'' with W = u1 u2' - u1' u2

    W' = 2(eps1 - eps2) u1 u2 and W'' = 2(eps1 - eps2)(u1' u2 + u1 u2') follow
    from the two SSEs, so only values and slopes of the seeds are needed.
    """
    if eps1 == eps2:
        raise ValueError("real case needs eps1 != eps2")
    a, da = u1.pair(x)
    b, db = u2.pair(x)
    W = a * db - da * b
    if abs(W) <= W_ZERO_TOL * (abs(a * db) + abs(da * b)) or W == 0:
        raise WronskianZero(f"W(u1, u2) vanishes at x={x}")
    dW = 2 * (eps1 - eps2) * a * b
    ddW = 2 * (eps1 - eps2) * (da * b + a * db)
    v0 = u1.potential(x, 0).value if u1.potential is not None else INVERTED_POTENTIAL(x, 0).value
    return (v0 - (ddW / W - (dW / W) ** 2)).real


def wronskian_function(u1: Wave, u2: Wave) -> Callable[[float], float]:
    def W(x: float) -> float:
        a, da = u1.pair(x)
        b, db = u2.pair(x)
        return (a * db - da * b).real
    return W


# --- confluent case -----------------------------------------------------------------

class _CumulativeSquare:
    """x -> int_{x0}^x u^2, memoized on the points already integrated to"""

    def __init__(self, u: Wave, x0: float):
        self.u = u
        self.x0 = x0
        self._lock = threading.Lock()
        self._anchors = [x0]
        self._values = {x0: 0.0}

    def _integrand(self, t: float) -> float:
        v = self.u.value(t)
        return (v * v).real

    def __call__(self, x: float) -> float:
        with self._lock:
            if x in self._values:
                return self._values[x]
            i = bisect.bisect_left(self._anchors, x)
            near = [self._anchors[j] for j in (i - 1, i) if 0 <= j < len(self._anchors)]
            a = min(near, key=lambda p: abs(p - x))
            points = symmetric_grid(max(abs(a), abs(x)), lambda t: 2 * abs(t))
            lo, hi = sorted((a, x))
            piece = oscillatory_quad(self._integrand, lo, hi, points).real
            value = self._values[a] + (piece if x > a else -piece)
            bisect.insort(self._anchors, x)
            self._values[x] = value
            return value


@lru_cache(maxsize=32)
def _cumulative_for(seed: SolutionSpec, x0: float) -> _CumulativeSquare:
    return _CumulativeSquare(solution_wave(seed), x0)


def _cumulative(seed: SolutionSpec, x0: float) -> _CumulativeSquare:
    if seed.kind != OscillatorKind.INVERTED:
        raise ValueError("confluent transformations here act on the inverted oscillator")
    if seed.combo in (Combo.PLUS, Combo.MINUS):
        raise ValueError("confluent seed must be real")
    if seed.combo == Combo.GENERAL and seed.C == 0 and seed.D == 0:
        raise ValueError("seed u = 0 is not a transformation function")
    return _cumulative_for(seed, float(x0))


def confluent_w(eps: float, seed: SolutionSpec, w0: float, x0: float, x: float) -> float:
    """w(x) = w0 + int_{x0}^x u^2(z) dz"""
    if seed.energy != eps:
        raise ValueError(f"seed energy {seed.energy} differs from eps={eps}")
    if x == x0:
        return w0
    return w0 + _cumulative(seed, x0)(x)


def confluent_transform(eps: float, w0: float = 0.0, x0: float = 0.0, C: float = 1.0, D: float = 0.0) -> SusyTransform:
    seed = SolutionSpec(kind=OscillatorKind.INVERTED, energy=eps, C=C, D=D)
    return SusyTransform(order=2, case2=ConfluentCase(eps=eps, w0=w0, x0=x0, seed=seed), c=0.0, d=2 * eps)


class ConfluentPartner(SecondOrderPartner):
    def __init__(self, transform: SusyTransform):
        super().__init__(transform)
        case = transform.case2
        self.case = case
        self.u = solution_wave(case.seed)

    def f_jet(self, x: float, order: int) -> Jet:
        w = confluent_w(self.case.eps, self.case.seed, self.case.w0, self.case.x0, x)
        u = self.u.jet(x, max(order - 1, 0))
        return _integrate_jet(w, u * u, order)


def confluent_w_scan(
    eps: float,
    w0_grid,
    x0: float = 0.0,
    C: float = 1.0,
    D: float = 0.0,
    interval: tuple[float, float] = (-10.0, 10.0),
    samples: int = 400,
) -> list[SingularityReport]:
    """
    One SingularityReport per w0. When w keeps its sign on the interval the
    zero is located beyond it from the logarithmic growth of int u^2, whose
    mean density at large |x| is envelope(u)^2 / 2.
    """
    seed = SolutionSpec(kind=OscillatorKind.INVERTED, energy=eps, C=C, D=D)
    u = solution_wave(seed)
    reports = []
    for w0 in w0_grid:
        report = singularity_scan(
            lambda x: confluent_w(eps, seed, w0, x0, x), interval, samples, ZeroKind.W_ZERO
        )
        if not report.is_singular:
            zero = _tail_zero(lambda x: confluent_w(eps, seed, w0, x0, x), u, interval)
            if zero is not None:
                lo, hi = min(interval[0], zero.location), max(interval[1], zero.location)
                report = SingularityReport(zeros=[zero], interval=(lo, hi))
        logger.debug("confluent scan w0=%g: zeros at %s", w0, [z.location for z in report.zeros])
        reports.append(report)
    return reports


def _tail_zero(w: Callable[[float], float], u: Wave, interval: tuple[float, float]) -> SingularityZero | None:
    """
    Zero of w beyond interval, estimated from the mean growth of int u^2 and
    bisected when a sign change turns up within TAIL_REACH
    """
    lo, hi = interval
    w_hi, w_lo = w(hi), w(lo)
    if w_hi < 0 and hi > 0:
        edge, w_edge = hi, w_hi
    elif w_lo > 0 and lo < 0:
        edge, w_edge = lo, w_lo
    else:
        return None
    density = abs(edge) * envelope(u(edge), edge) ** 2 / 2
    # capped below the double range
    estimate = edge * math.exp(min(abs(w_edge) / density, 700.0))

    far = edge + math.copysign(max(1.25 * abs(estimate - edge), 0.5), edge)
    while abs(far) <= TAIL_REACH:
        if (w(far) > 0) != (w_edge > 0):
            a, b = sorted((edge, far))
            root = optimize.brentq(w, a, b, xtol=BISECT_TOL)
            return SingularityZero(location=float(root), kind=ZeroKind.W_ZERO)
        far = edge + 2 * (far - edge)
    logger.debug("confluent w zero near %g is beyond the bisection reach", estimate)
    return SingularityZero(location=estimate, kind=ZeroKind.W_ZERO, extrapolated=True)


# --- complex case -------------------------------------------------------------------

def seed_w_function(eps: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> Callable[[float], complex]:
    """x -> W(u, u-bar)/(2(eps - eps-bar)) in complex arithmetic, before taking the real part"""
    energy = validate_epsilon(eps)
    u = seed_wave(energy, ctl)
    xi = 2j * energy.eps.imag

    def w(x: float) -> complex:
        v, d = u.pair(x)
        return (v * d.conjugate() - d * v.conjugate()) / (2 * xi)

    return w


def complex_w(eps: complex, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """
    w(x) = W(u, u-bar) / (2(eps - eps-bar)), real with w' = |u|^2

    :raises ClassificationError: eps on the real axis or a lattice point
    """
    energy = validate_epsilon(eps)
    if not energy.usable:
        raise ExcludedEpsilon(energy)
    return seed_w_function(eps, ctl)(x).real


def complex_transform(eps: complex) -> SusyTransform:
    energy = validate_epsilon(eps)
    if not energy.usable:
        raise ExcludedEpsilon(energy)
    return SusyTransform(
        order=2, case2=ComplexCase(energy=energy), c=-4 * energy.eps.imag ** 2, d=2 * energy.eps.real
    )


class ComplexPartner(SecondOrderPartner):
    def __init__(self, transform: SusyTransform, ctl: SeriesControl = DEFAULT_CONTROL):
        super().__init__(transform)
        self.energy = transform.case2.energy
        self.eps = self.energy.eps
        self.u = seed_wave(self.energy, ctl)
        self._w = seed_w_function(self.eps, ctl)

    def w(self, x: float) -> float:
        return self._w(x).real

    def f_jet(self, x: float, order: int) -> Jet:
        u = self.u.jet(x, max(order - 1, 0))
        return _integrate_jet(self.w(x), u * u.conj(), order)

    def gamma(self, x: float) -> complex:
        return superpotential(self.u, x)


def partner(transform: SusyTransform, ctl: SeriesControl = DEFAULT_CONTROL) -> SecondOrderPartner:
    case = transform.case2
    if isinstance(case, ComplexCase):
        return ComplexPartner(transform, ctl)
    if isinstance(case, ConfluentCase):
        return ConfluentPartner(transform)
    if isinstance(case, RealCase):
        return RealPartner(transform, solution_wave(case.seed1, ctl), solution_wave(case.seed2, ctl))
    raise ClassificationError("first-order transforms have no second-order partner")


def complex_partner(eps: complex, x: float, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """
    V_2 = -x^2/2 - [(u u-bar' + u' u-bar)/w - (u u-bar)^2 / w^2]

    :raises ClassificationError: excluded eps
    :raises WZero: w vanishes at x relative to the local |u|^2 scale
    """
    energy = validate_epsilon(eps)
    if not energy.usable:
        raise ExcludedEpsilon(energy)
    u = seed_wave(energy, ctl)
    v, d = u.pair(x)
    w = complex_w(eps, x, ctl)
    mod2 = abs(v) ** 2
    if w == 0 or abs(w) < W_ZERO_TOL * mod2 * (1 + abs(x)):
        raise WZero(f"w vanishes at x={x} for eps={eps}")
    cross = 2 * (v * d.conjugate()).real
    g = mod2 / w
    return -x * x / 2 - (cross / w - g * g)


def _integrate_jet(value: float, density: Jet, order: int) -> Jet:
    """Jet of F with F(x0) = value and F' = density"""
    coeffs = np.zeros(order + 1, dtype=complex)
    coeffs[0] = value
    for k in range(1, order + 1):
        coeffs[k] = density.coeffs[k - 1] / k
    return Jet(density.x0, coeffs)


# --- singularity scan -----------------------------------------------------------------

def singularity_scan(
    f: Callable[[float], float],
    interval: tuple[float, float],
    samples: int,
    kind: ZeroKind = ZeroKind.SEED_ZERO,
) -> SingularityReport:
    """
    Sign changes of f on a uniform grid, refined by bisection to 1e-10, plus
    interior minima of |f| below 1e-8
    """
    if samples < 2:
        raise ValueError("singularity scan needs at least 2 samples")
    lo, hi = interval
    xs = np.linspace(lo, hi, samples)
    fs = np.array([float(np.real(f(x))) for x in xs])
    zeros: list[SingularityZero] = []
    for i in range(samples):
        if fs[i] == 0:
            zeros.append(SingularityZero(location=float(xs[i]), kind=kind))
        elif i + 1 < samples and fs[i] * fs[i + 1] < 0:
            root = optimize.brentq(lambda t: float(np.real(f(t))), xs[i], xs[i + 1], xtol=BISECT_TOL)
            zeros.append(SingularityZero(location=float(root), kind=kind))
    mags = np.abs(fs)
    for i in range(1, samples - 1):
        if 0 < mags[i] < NEAR_ZERO and mags[i] <= mags[i - 1] and mags[i] <= mags[i + 1]:
            if fs[i - 1] * fs[i] > 0 and fs[i] * fs[i + 1] > 0:
                zeros.append(SingularityZero(location=float(xs[i]), kind=kind, near_zero=True))
    zeros.sort(key=lambda z: z.location)
    if zeros:
        logger.debug("singularity scan on [%g, %g]: %d zero(s) of kind %s", lo, hi, len(zeros), kind.value)
    return SingularityReport(zeros=zeros, interval=(float(lo), float(hi)))


def seed_scan(eps: float, C: float, D: float, interval=(-10.0, 10.0), samples: int = 2000) -> SingularityReport:
    """Nodes of the first-order transformation function"""
    u = solution_wave(SolutionSpec(kind=OscillatorKind.INVERTED, energy=eps, C=C, D=D))
    return singularity_scan(lambda x: u.value(x).real, interval, samples, ZeroKind.SEED_ZERO)


def partner_scan(partner_: SecondOrderPartner, interval=(-10.0, 10.0), samples: int = 4000) -> SingularityReport:
    """Zeros of F (W or w) of a second-order partner"""
    return singularity_scan(partner_.f_value, interval, samples, partner_.zero_kind)

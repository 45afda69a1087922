"""
Wave evaluators: objects that know a function's value, slope and Taylor jet
at a real coordinate.

A wave tagged with an energy and a potential is an eigenfunction of
-d^2/dx^2 / 2 + V; its higher derivatives come from the SSE. Untagged waves
fall back to finite differences of the slope, good for one extra order only.
Operators (a^+-, H, B^+-) act on jets and hand back new waves.
"""
import cmath
import math
from typing import Callable

from app.core.config import settings
from app.core.errors import MissingDerivative, RangeOverflow
from app.schemas.oscillator import WaveEval
from app.services.jets import Jet, quadratic_jet, sse_jet

PotentialJet = Callable[[float, int], Jet]
JetOperator = Callable[[Jet], Jet]


def checked_eval(value: complex, deriv: complex) -> WaveEval:
    """WaveEval, or RangeOverflow when either number left double range"""
    if not (cmath.isfinite(value) and cmath.isfinite(deriv)):
        raise RangeOverflow(f"wave evaluation is not finite: value={value}, deriv={deriv}")
    return WaveEval(value=value, deriv=deriv)


class QuadraticPotential:
    """V(x) = curvature * x^2 / 2 as a jet source"""

    def __init__(self, curvature: complex):
        self.curvature = curvature

    def __call__(self, x: float, order: int) -> Jet:
        return quadratic_jet(x, self.curvature, order)

    def __repr__(self) -> str:
        return f"QuadraticPotential({self.curvature})"


class Wave:
    """Base evaluator; subclasses implement pair() or jet()"""
    energy: complex | None = None
    potential: PotentialJet | None = None

    def pair(self, x: float) -> tuple[complex, complex]:
        j = self.jet(x, 1)
        return j.value, j.deriv

    def value(self, x: float) -> complex:
        return self.pair(x)[0]

    def __call__(self, x: float) -> WaveEval:
        return checked_eval(*self.pair(x))

    @property
    def tagged(self) -> bool:
        return self.energy is not None and self.potential is not None

    def jet(self, x: float, order: int) -> Jet:
        v, d = self.pair(x)
        if self.tagged:
            return sse_jet(x, v, d, self.energy, self.potential(x, max(order - 2, 0)), order)
        if order <= 1:
            return Jet(x, [v, d][: order + 1])
        if order == 2:
            return Jet(x, [v, d, self._fd_second(x) / 2])
        raise MissingDerivative(f"untagged wave supplies at most 2 derivatives, {order} requested")

    def _fd_second(self, x: float) -> complex:
        h = settings.fd_step
        d = [self.pair(x + k * h)[1] for k in (-2, -1, 1, 2)]
        return (d[0] - 8 * d[1] + 8 * d[2] - d[3]) / (12 * h)


class FunctionWave(Wave):
    """Wraps a plain callable x -> (value, deriv) or x -> WaveEval"""

    def __init__(self, fn: Callable, energy: complex | None = None, potential: PotentialJet | None = None):
        self.fn = fn
        self.energy = energy
        self.potential = potential

    def pair(self, x: float) -> tuple[complex, complex]:
        out = self.fn(x)
        if isinstance(out, WaveEval):
            return out.value, out.deriv
        v, d = out
        return complex(v), complex(d)


class DampedPolynomial(Wave):
    """P(x) exp(-x^2 / width), exact jets of every order"""

    def __init__(self, coeffs, width: float = 4.0):
        self.coeffs = [complex(c) for c in coeffs]
        self.width = width

    def jet(self, x: float, order: int) -> Jet:
        t = Jet.variable(x, order)
        poly = Jet.constant(x, 0, order)
        for c in reversed(self.coeffs):
            poly = poly * t + c
        return poly * quadratic_jet(x, -2 / self.width, order).exp()

    @classmethod
    def monomial(cls, k: int, width: float = 4.0) -> "DampedPolynomial":
        return cls([0] * k + [1], width)


class OperatorWave(Wave):
    """
    Result of an operator applied to a wave

    :param op: jet -> jet map
    :param inner: wave the operator acts on
    :param loss: derivative orders the operator consumes
    """

    def __init__(
        self,
        op: JetOperator,
        inner: Wave,
        loss: int,
        energy: complex | None = None,
        potential: PotentialJet | None = None,
    ):
        self.op = op
        self.inner = inner
        self.loss = loss
        self.energy = energy
        self.potential = potential

    def jet(self, x: float, order: int) -> Jet:
        return self.op(self.inner.jet(x, order + self.loss)).truncate(order)


class ScaledWave(Wave):
    def __init__(self, inner: Wave, factor: complex):
        self.inner = inner
        self.factor = factor
        self.energy = inner.energy
        self.potential = inner.potential

    def pair(self, x: float) -> tuple[complex, complex]:
        v, d = self.inner.pair(x)
        return self.factor * v, self.factor * d

    def jet(self, x: float, order: int) -> Jet:
        return self.inner.jet(x, order) * self.factor


def ladder_jet(omega: complex, sign: int, f: Jet) -> Jet:
    """(1/sqrt 2)(-+ f' + omega x f); sign=+1 creation, -1 annihilation"""
    n = f.order - 1
    xf = Jet.variable(f.x0, n) * f.truncate(n)
    return (f.derivative() * (-sign) + xf * omega) * (1 / math.sqrt(2))


def hamiltonian_jet(potential: Jet, f: Jet) -> Jet:
    """-f''/2 + V f"""
    n = f.order - 2
    return f.derivative(2) * (-0.5) + potential.truncate(n) * f.truncate(n)


def ladder_wave(omega: complex, sign: int, psi: Wave) -> Wave:
    """a^+- psi; an eigenfunction of omega^2 x^2 / 2 at E maps to one at E +- omega"""
    energy = None if psi.energy is None else psi.energy + sign * omega
    return OperatorWave(lambda j: ladder_jet(omega, sign, j), psi, 1, energy, psi.potential)


def sse_residual(psi: Wave, energy: complex, potential: Callable[[float], complex], x: float, h: float | None = None) -> tuple[float, float]:
    """
    |-psi''/2 + V psi - E psi| with psi'' from a 5-point stencil on values,
    and the scale |psi''/2| + |E psi| + 1 it is measured against
    """
    h = settings.fd_step if h is None else h
    v = [psi.value(x + k * h) for k in (-2, -1, 0, 1, 2)]
    second = (-v[0] + 16 * v[1] - 30 * v[2] + 16 * v[3] - v[4]) / (12 * h * h)
    res = -0.5 * second + (potential(x) - energy) * v[2]
    return abs(res), abs(second) / 2 + abs(energy * v[2]) + 1

"""
Complex special functions behind every solution formula.

- ln_gamma: principal-branch log Gamma (Lanczos, reflection for Re z < 1/2)
- hyp1f1: Kummer's confluent hypergeometric function 1F1(a; b; z), summed as a
  power series for |z| <= switch_radius and from the two-term asymptotic
  expansion beyond it
- hermite: Hermite polynomials H_n(z) for complex z

Principal branches everywhere, arg in (-pi, pi].
"""
import cmath
import logging
import math
import warnings
from functools import lru_cache

from app.core.errors import (
    DegenerateParameter,
    NoConvergence,
    ParameterPole,
    PoleError,
    RangeOverflow,
)
from app.schemas.specfun import DEFAULT_CONTROL, SeriesControl

logger = logging.getLogger(__name__)

POLE_TOL = 1e-12

LANCZOS_G = 7.0
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
LOG_PI = math.log(math.pi)


def is_nonpositive_integer(z: complex, tol: float = POLE_TOL) -> bool:
    z = complex(z)
    return abs(z.imag) < tol and z.real < 0.5 and abs(z.real - round(z.real)) < tol


def _log_sin_pi(z: complex) -> complex:
    """log(sin(pi z)) without overflow for large |Im z| (mod 2 pi i)"""
    if z.imag > 20:
        return -1j * math.pi * z + cmath.log((cmath.exp(2j * math.pi * z) - 1) / 2j)
    if z.imag < -20:
        return 1j * math.pi * z + cmath.log((1 - cmath.exp(-2j * math.pi * z)) / 2j)
    return cmath.log(cmath.sin(math.pi * z))


@lru_cache(maxsize=8192)
def ln_gamma(z: complex) -> complex:
    """
    Principal branch of log Gamma(z)

    :param z: complex argument, not a non-positive integer
    :return: log Gamma(z); exp of it reproduces Gamma(z)
    :raises PoleError: z within 1e-12 of 0, -1, -2, ...
    """
    z = complex(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z}")
    if z.real < 0.5:
        return LOG_PI - _log_sin_pi(z) - ln_gamma(1 - z)

    z -= 1
    acc = LANCZOS_COEFFS[0]
    for i, c in enumerate(LANCZOS_COEFFS[1:], start=1):
        acc += c / (z + i)
    t = z + LANCZOS_G + 0.5
    return HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def rgamma(z: complex) -> complex:
    """1/Gamma(z), zero at the poles"""
    if is_nonpositive_integer(z):
        return 0j
    return cmath.exp(-ln_gamma(z))


def gamma_ratio(p: complex, q: complex) -> complex:
    """Gamma(p)/Gamma(q); zero when q is a pole"""
    if is_nonpositive_integer(q):
        return 0j
    return cmath.exp(ln_gamma(p) - ln_gamma(q))


# --- error-free transforms for the double-double Kummer series ---------------

_SPLITTER = 134217729.0  # 2**27 + 1


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    return s, b - (s - a)


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    t = _SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(x, y):
    s, e = _two_sum(x[0], y[0])
    t, f = _two_sum(x[1], y[1])
    s, e = _quick_two_sum(s, e + t)
    return _quick_two_sum(s, e + f)


def _dd_mul(x, y):
    p, e = _two_prod(x[0], y[0])
    return _quick_two_sum(p, e + (x[0] * y[1] + x[1] * y[0]))


def _dd_neg(x):
    return -x[0], -x[1]


def _dd_div(x, y):
    q1 = x[0] / y[0]
    r = _dd_add(x, _dd_neg(_dd_mul((q1, 0.0), y)))
    q2 = r[0] / y[0]
    r = _dd_add(r, _dd_neg(_dd_mul((q2, 0.0), y)))
    q3 = r[0] / y[0]
    return _dd_add(_quick_two_sum(q1, q2), (q3, 0.0))


def _cdd(z: complex):
    return (z.real, 0.0), (z.imag, 0.0)


def _cdd_add(x, y):
    return _dd_add(x[0], y[0]), _dd_add(x[1], y[1])


def _cdd_mul(x, y):
    re = _dd_add(_dd_mul(x[0], y[0]), _dd_neg(_dd_mul(x[1], y[1])))
    im = _dd_add(_dd_mul(x[0], y[1]), _dd_mul(x[1], y[0]))
    return re, im


def _cdd_div(x, y):
    den = _dd_add(_dd_mul(y[0], y[0]), _dd_mul(y[1], y[1]))
    num = _cdd_mul(x, (y[0], _dd_neg(y[1])))
    return _dd_div(num[0], den), _dd_div(num[1], den)


def _cdd_shift(z: complex, n: int):
    """z + n with the real part kept exact"""
    return _two_sum(z.real, float(n)), (z.imag, 0.0)


def _cdd_to_complex(x) -> complex:
    return complex(x[0][0] + x[0][1], x[1][0] + x[1][1])


class _CompensatedSum:
    """Neumaier summation, run separately on real and imaginary parts"""

    def __init__(self):
        self.re = self.im = 0.0
        self.c_re = self.c_im = 0.0

    def add(self, term: complex) -> None:
        self.re, e = _two_sum(self.re, term.real)
        self.c_re += e
        self.im, e = _two_sum(self.im, term.imag)
        self.c_im += e

    @property
    def value(self) -> complex:
        return complex(self.re + self.c_re, self.im + self.c_im)


def _series_double(a: complex, b: complex, z: complex, ctl: SeriesControl) -> complex:
    term = 1 + 0j
    acc = _CompensatedSum()
    acc.add(term)
    small = 0
    for n in range(ctl.max_terms):
        term *= (a + n) * z / ((b + n) * (n + 1))
        acc.add(term)
        if term == 0:
            return acc.value
        small = small + 1 if abs(term) <= ctl.rel_tol * abs(acc.value) else 0
        if small >= 2 and n + 1 > abs(z):
            return acc.value
    raise NoConvergence(f"1F1 series did not converge in {ctl.max_terms} terms at z={z}")


def _series_double_double(a: complex, b: complex, z: complex, ctl: SeriesControl) -> complex:
    zz = _cdd(z)
    term = _cdd(1 + 0j)
    acc = term
    small = 0
    for n in range(ctl.max_terms):
        num = _cdd_mul(_cdd_mul(term, _cdd_shift(a, n)), zz)
        den = _cdd_mul(_cdd_shift(b, n), ((float(n + 1), 0.0), (0.0, 0.0)))
        term = _cdd_div(num, den)
        acc = _cdd_add(acc, term)
        t_hi = abs(complex(term[0][0], term[1][0]))
        if t_hi == 0:
            break
        s_hi = abs(complex(acc[0][0], acc[1][0]))
        small = small + 1 if t_hi <= ctl.rel_tol * s_hi else 0
        if small >= 2 and n + 1 > abs(z):
            break
    else:
        raise NoConvergence(f"1F1 series did not converge in {ctl.max_terms} terms at z={z}")
    return _cdd_to_complex(acc)


def hyp1f1_series(a: complex, b: complex, z: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """
    Kummer series sum (a)_n/(b)_n z^n/n! by term-ratio recurrence

    Above ctl.dd_radius the terms and the running sum are carried in
    double-double arithmetic; the series for imaginary z has terms of size
    e^|z| around a result of size O(1).

    :raises ParameterPole: b is a non-positive integer
    :raises NoConvergence: max_terms exhausted
    """
    a, b, z = complex(a), complex(b), complex(z)
    if is_nonpositive_integer(b):
        raise ParameterPole(f"1F1 undefined for b={b}")
    if z == 0:
        return 1 + 0j
    if abs(z) > ctl.switch_radius:
        logger.debug("1F1 series used outside its radius: |z|=%.3g", abs(z))
    if abs(z) <= ctl.dd_radius:
        return _series_double(a, b, z, ctl)
    return _series_double_double(a, b, z, ctl)


def _asymptotic_sum(p: complex, q: complex, w: complex, ctl: SeriesControl) -> complex:
    """sum_s (p)_s (q)_s / s! w^s, cut at the smallest term or ctl.asymp_terms"""
    term = 1 + 0j
    total = 1 + 0j
    for s in range(ctl.asymp_terms):
        nxt = term * (p + s) * (q + s) / (s + 1) * w
        if nxt == 0:
            break
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) <= 1e-17 * abs(total):
            break
    return total


def _scaled_exp(exponent: complex) -> complex:
    try:
        out = cmath.exp(exponent)
    except OverflowError:
        raise RangeOverflow(f"exp({exponent:.6g}) overflows") from None
    if not cmath.isfinite(out):
        raise RangeOverflow(f"exp({exponent:.6g}) is not finite")
    return out


def hyp1f1_asymptotic_parts(
    a: complex,
    b: complex,
    z: complex,
    ctl: SeriesControl = DEFAULT_CONTROL,
    log_prefactor: complex = 0j,
) -> tuple[complex, complex]:
    """
    The two terms of the large-|z| expansion of 1F1, kept apart

    first  = Gamma(b)/Gamma(b-a) e^{+-i pi a} z^{-a} sum (a)_s (a-b+1)_s/s! (-z)^{-s}
    second = Gamma(b)/Gamma(a)   e^{z} z^{a-b}      sum (b-a)_s (1-a)_s/s! z^{-s}

    Upper sign for Im z >= 0, lower for Im z < 0, the mean of both (cos pi a)
    on the positive real axis. A Gamma pole in a denominator zeroes its term
    and emits DegenerateParameter.

    Both terms come back multiplied by exp(log_prefactor), folded into the
    exponent so a Gaussian factor can cancel e^{z} before anything is
    exponentiated. A term beyond double range raises RangeOverflow.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if is_nonpositive_integer(b):
        raise ParameterPole(f"1F1 undefined for b={b}")
    if abs(z) <= ctl.switch_radius:
        logger.debug("1F1 asymptotic expansion used inside its radius: |z|=%.3g", abs(z))

    log_z = cmath.log(z)
    log_gb = ln_gamma(b)

    if is_nonpositive_integer(b - a):
        warnings.warn(DegenerateParameter(f"b-a={b - a} is a Gamma pole; algebraic term dropped"))
        first = 0j
    else:
        if z.imag == 0 and z.real > 0:
            phase = cmath.cos(math.pi * a)
        elif z.imag >= 0:
            phase = cmath.exp(1j * math.pi * a)
        else:
            phase = cmath.exp(-1j * math.pi * a)
        first = (
            phase
            * _scaled_exp(log_prefactor + log_gb - ln_gamma(b - a) - a * log_z)
            * _asymptotic_sum(a, a - b + 1, -1 / z, ctl)
        )

    if is_nonpositive_integer(a):
        warnings.warn(DegenerateParameter(f"a={a} is a Gamma pole; exponential term dropped"))
        second = 0j
    else:
        second = (
            _scaled_exp(log_prefactor + log_gb - ln_gamma(a) + z + (a - b) * log_z)
            * _asymptotic_sum(b - a, 1 - a, 1 / z, ctl)
        )
    return first, second


def hyp1f1_asymptotic(a: complex, b: complex, z: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    first, second = hyp1f1_asymptotic_parts(a, b, z, ctl)
    return first + second


def hyp1f1(a: complex, b: complex, z: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """1F1(a; b; z): series inside switch_radius, asymptotic expansion outside"""
    if abs(complex(z)) <= ctl.switch_radius:
        return hyp1f1_series(a, b, z, ctl)
    return hyp1f1_asymptotic(a, b, z, ctl)


def hyp1f1_derivative(a: complex, b: complex, z: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """d/dz 1F1(a; b; z) = (a/b) 1F1(a+1; b+1; z)"""
    a, b = complex(a), complex(b)
    if is_nonpositive_integer(b):
        raise ParameterPole(f"1F1 undefined for b={b}")
    if a == 0:
        return 0j
    return a / b * hyp1f1(a + 1, b + 1, z, ctl)


def hermite(n: int, z: complex) -> complex:
    """Physicists' Hermite polynomial by H_{n+1} = 2z H_n - 2n H_{n-1}"""
    if n < 0:
        raise ValueError("Hermite degree must be non-negative")
    prev, cur = 0, 1
    if n == 0:
        return cur
    prev, cur = cur, 2 * z
    for k in range(1, n):
        prev, cur = cur, 2 * z * cur - 2 * k * prev
    return cur

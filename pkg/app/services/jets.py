"""
Truncated Taylor expansions ("jets") of functions about a point.

Operators of the factorization and SUSY constructions (a^+-, B^+-, L^+-, H)
are applied to jets, so derivatives of any order propagate analytically;
for Schrodinger eigenfunctions the higher coefficients come from the SSE
itself, psi'' = 2 (V - E) psi.
"""
from math import factorial

import numpy as np


class Jet:
    """coeffs[k] = f^(k)(x0) / k!"""
    __slots__ = ("x0", "coeffs")

    def __init__(self, x0: float, coeffs):
        self.x0 = float(x0)
        self.coeffs = np.asarray(coeffs, dtype=complex)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, x0: float, value: complex, order: int) -> "Jet":
        coeffs = np.zeros(order + 1, dtype=complex)
        coeffs[0] = value
        return cls(x0, coeffs)

    @classmethod
    def variable(cls, x0: float, order: int) -> "Jet":
        coeffs = np.zeros(order + 1, dtype=complex)
        coeffs[0] = x0
        if order >= 1:
            coeffs[1] = 1
        return cls(x0, coeffs)

    def nth(self, k: int) -> complex:
        """k-th derivative at x0"""
        return complex(self.coeffs[k] * factorial(k))

    @property
    def value(self) -> complex:
        return complex(self.coeffs[0])

    @property
    def deriv(self) -> complex:
        return self.nth(1)

    def truncate(self, order: int) -> "Jet":
        return Jet(self.x0, self.coeffs[: order + 1])

    def derivative(self, times: int = 1) -> "Jet":
        coeffs = self.coeffs
        for _ in range(times):
            if len(coeffs) < 2:
                raise ValueError("jet order exhausted")
            coeffs = coeffs[1:] * np.arange(1, len(coeffs))
        return Jet(self.x0, coeffs)

    def conj(self) -> "Jet":
        return Jet(self.x0, self.coeffs.conj())

    def _pair(self, other):
        if isinstance(other, Jet):
            n = min(len(self.coeffs), len(other.coeffs))
            return self.coeffs[:n], other.coeffs[:n]
        rhs = np.zeros_like(self.coeffs)
        rhs[0] = other
        return self.coeffs, rhs

    def __add__(self, other):
        a, b = self._pair(other)
        return Jet(self.x0, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        return Jet(self.x0, a - b)

    def __rsub__(self, other):
        a, b = self._pair(other)
        return Jet(self.x0, b - a)

    def __neg__(self):
        return Jet(self.x0, -self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.x0, self.coeffs * other)
        a, b = self._pair(other)
        return Jet(self.x0, np.convolve(a, b)[: len(a)])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.x0, self.coeffs / other)
        a, b = self._pair(other)
        return Jet(self.x0, _series_divide(a, b))

    def __rtruediv__(self, other):
        a, b = self._pair(other)
        return Jet(self.x0, _series_divide(b, a))

    def exp(self) -> "Jet":
        c = self.coeffs
        out = np.zeros_like(c)
        out[0] = np.exp(c[0])
        for k in range(1, len(c)):
            j = np.arange(1, k + 1)
            out[k] = np.sum(j * c[j] * out[k - j]) / k
        return Jet(self.x0, out)

    def __repr__(self) -> str:
        return f"Jet(x0={self.x0}, order={self.order})"


def _series_divide(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if b[0] == 0:
        raise ZeroDivisionError("jet division by a function vanishing at x0")
    q = np.zeros(len(a), dtype=complex)
    for k in range(len(a)):
        acc = a[k]
        for j in range(1, k + 1):
            acc -= b[j] * q[k - j]
        q[k] = acc / b[0]
    return q


def quadratic_jet(x0: float, curvature: complex, order: int, shift: complex = 0) -> Jet:
    """Jet of curvature * x^2 / 2 + shift"""
    coeffs = np.zeros(order + 1, dtype=complex)
    coeffs[0] = curvature * x0 * x0 / 2 + shift
    if order >= 1:
        coeffs[1] = curvature * x0
    if order >= 2:
        coeffs[2] = curvature / 2
    return Jet(x0, coeffs)


def sse_jet(x0: float, value: complex, deriv: complex, energy: complex, potential: Jet, order: int) -> Jet:
    """
    Jet of the solution of -psi''/2 + V psi = E psi with the given value and
    slope at x0, coefficients from (k+2)(k+1) c_{k+2} = 2 [(V - E) psi]_k
    """
    if potential.order < order - 2:
        raise ValueError("potential jet too short for the requested order")
    m = potential.coeffs[: max(order - 1, 1)].copy()
    m[0] -= energy
    c = np.zeros(order + 1, dtype=complex)
    c[0] = value
    if order >= 1:
        c[1] = deriv
    for k in range(order - 1):
        conv = np.dot(m[: k + 1], c[k::-1])
        c[k + 2] = 2 * conv / ((k + 2) * (k + 1))
    return Jet(x0, c)

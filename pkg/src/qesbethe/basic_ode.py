"""The shared second-order equation

    t (t - alpha) S'' + (b2 t^2 + b1 t + b0) S' + c1 t S = c0 S

together with exact polynomial arithmetic for certifying polynomial solutions
and the gauge map to the generalized spheroidal wave equation (GSWE)

    t (t - t0) X'' + (B1 + B2 t) X' + [Omega^2 t (t - t0) - 2 k Omega (t - t0) + B3] X = 0,

related by X = exp(i Omega t) S.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from qesbethe.errors import ComplexEquationError, DegenerateScalingError, QesError

QES_INT_TOL = 1e-9


@dataclass(frozen=True)
class BasicEquation:
    alpha: float
    b2: float
    b1: float
    b0: float
    c1: float
    c0: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "b2", "b1", "b0", "c1", "c0"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise QesError(f"coefficient {name} is not finite: {value}")
            object.__setattr__(self, name, value)

    def with_c0(self, c0: float) -> "BasicEquation":
        return BasicEquation(self.alpha, self.b2, self.b1, self.b0, self.c1, c0)

    def is_qes(self, n: int, rtol: float = 1e-12) -> bool:
        """True if c1 = -n*b2 to relative tolerance `rtol`."""
        scale = max(abs(self.c1), abs(n * self.b2), 1.0)
        return abs(self.c1 + n * self.b2) <= rtol * scale

    def as_tuple(self) -> tuple:
        return (self.alpha, self.b2, self.b1, self.b0, self.c1, self.c0)


@dataclass(frozen=True)
class GsweParams:
    t0: float
    B1: float
    B2: float
    B3: float
    k: complex
    Omega: complex


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial with ascending coefficients; trailing zeros are trimmed."""

    coefficients: tuple = field(default=(1.0,))

    def __post_init__(self):
        coeffs = [float(c) for c in self.coefficients] or [0.0]
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable[float]) -> "Polynomial":
        """Monic product of (t - r) over `roots`; the empty product is 1."""
        coeffs = [1.0]
        for root in roots:
            shifted = [0.0] + coeffs
            for i, c in enumerate(coeffs):
                shifted[i] -= root * c
            coeffs = shifted
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def derivative(self) -> "Polynomial":
        c = self.coefficients
        if len(c) == 1:
            return Polynomial((0.0,))
        return Polynomial(tuple(k * c[k] for k in range(1, len(c))))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coefficients, other.coefficients
        out = [0.0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Polynomial(tuple(out))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coefficients, other.coefficients
        size = max(len(a), len(b))
        return Polynomial(
            tuple((a[i] if i < len(a) else 0.0) + (b[i] if i < len(b) else 0.0) for i in range(size))
        )

    def scale(self, factor: float) -> "Polynomial":
        return Polynomial(tuple(factor * c for c in self.coefficients))

    def __call__(self, t):
        # Horner
        result = 0.0
        for c in reversed(self.coefficients):
            result = result * t + c
        return result


def apply_operator(eq: BasicEquation, s: Polynomial) -> Polynomial:
    """Coefficients of t(t-a)S'' + (b2 t^2 + b1 t + b0)S' + c1 t S - c0 S."""
    ds = s.derivative()
    d2s = ds.derivative()
    second = Polynomial((0.0, -eq.alpha, 1.0)) * d2s
    first = Polynomial((eq.b0, eq.b1, eq.b2)) * ds
    zeroth = Polynomial((-eq.c0, eq.c1)) * s
    return second + first + zeroth


def residual(eq: BasicEquation, s: Polynomial, t: float) -> float:
    """Residual of the basic equation for candidate polynomial `s` at the point `t`.

    The operator is applied in coefficient space first, so true polynomial
    solutions give zero residual everywhere, including at t = 0 and t = alpha.
    """
    return apply_operator(eq, s)(t)


def relative_residual(eq: BasicEquation, s: Polynomial, t: float) -> float:
    """|residual| divided by the summed magnitudes of the four operator terms at t.

    The plain residual scales with S, and a monic S with roots of size R is of
    order R^n; this ratio is scale-free and sits at the rounding level for exact
    solutions.
    """
    ds = s.derivative()
    d2s = ds.derivative()
    st = s(t)
    scale = (abs(t * (t - eq.alpha) * d2s(t)) + abs((eq.b2 * t * t + eq.b1 * t + eq.b0) * ds(t))
             + abs(eq.c1 * t * st) + abs(eq.c0 * st))
    res = abs(residual(eq, s, t))
    return res / scale if scale > 0 else res


def to_gswe(eq: BasicEquation) -> GsweParams:
    """Map a basic equation onto GSWE parameters via X = exp(i Omega t) S."""
    if eq.b2 == 0.0:
        raise DegenerateScalingError("b2 = 0: degenerate exponential scaling (k contains 2 c1 / b2)")
    a, b2, b1, b0, c1, c0 = eq.as_tuple()
    return GsweParams(
        t0=a,
        B1=b0,
        B2=b1 + a * b2,
        B3=a * c1 - c0 - 0.5 * b2 * (b0 + a * b1 + a * a * b2),
        k=0.5j * (b1 + a * b2 - 2.0 * c1 / b2),
        Omega=-0.5j * b2,
    )


def from_gswe(g: GsweParams, tol: float = 1e-14) -> BasicEquation:
    """Inverse of :func:`to_gswe` on the real-coefficient branch."""
    omega = complex(g.Omega)
    k = complex(g.k)
    if omega == 0:
        raise DegenerateScalingError("Omega = 0 gives b2 = 0: degenerate exponential scaling")
    if abs(omega.real) > tol * max(1.0, abs(omega)) or abs(k.real) > tol * max(1.0, abs(k)):
        raise ComplexEquationError("complex basic equation unsupported: Omega and k must be imaginary")
    a = float(g.t0)
    b2 = (2j * omega).real
    b1 = float(g.B2) - a * b2
    b0 = float(g.B1)
    c1 = (omega * (1j * g.B2 - 2.0 * k)).real
    c0 = (-(1j * omega * g.B1 + 2.0 * k * omega * a + g.B3)).real
    return BasicEquation(a, b2, b1, b0, c1, c0)


def qes_degree(eq: BasicEquation, tol: float = QES_INT_TOL) -> Optional[int]:
    """Return n if -c1/b2 is a nonnegative integer within `tol`, else None."""
    if eq.b2 == 0.0:
        return None
    ratio = -eq.c1 / eq.b2
    n = round(ratio)
    if n < 0 or abs(ratio - n) > tol:
        return None
    return int(n)


def poly_from_roots(roots: Sequence[float]) -> Polynomial:
    return Polynomial.from_roots(roots)

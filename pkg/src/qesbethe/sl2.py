"""sl(2) structure of the invariant subspace {1, t, ..., t^n}.

The differential operators

    J- = d/dt,   J0 = t d/dt - n/2,   J+ = t^2 d/dt - n t

preserve polynomials of degree <= n and satisfy the sl(2) relations. On the
monomial basis they are integer (J-, J+) or half-integer (J0) matrices. The
basic-equation operator with c1 = -n b2 is a quadratic polynomial in them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qesbethe.basic_ode import BasicEquation
from qesbethe.errors import NotQesError

QES_RTOL = 1e-12


@dataclass(frozen=True)
class GeneratorRep:
    n: int
    jplus: np.ndarray
    jzero: np.ndarray
    jminus: np.ndarray


def generators(n: int) -> GeneratorRep:
    """Matrices of J+, J0, J- acting on {1, t, ..., t^n}; column k is the image of t^k."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    size = n + 1
    jplus = np.zeros((size, size))
    jzero = np.zeros((size, size))
    jminus = np.zeros((size, size))
    for k in range(size):
        # t^2 d/dt t^k - n t^(k+1) = (k - n) t^(k+1); vanishes for k = n
        if k < n:
            jplus[k + 1, k] = k - n
        jzero[k, k] = k - n / 2.0
        if k >= 1:
            jminus[k - 1, k] = k
    return GeneratorRep(n, jplus, jzero, jminus)


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def commutator_report(n: int) -> float:
    """Largest entry of [J0,J+] - J+, [J0,J-] + J-, [J+,J-] + 2 J0."""
    g = generators(n)
    defects = (
        _comm(g.jzero, g.jplus) - g.jplus,
        _comm(g.jzero, g.jminus) + g.jminus,
        _comm(g.jplus, g.jminus) + 2.0 * g.jzero,
    )
    return float(max(np.abs(d).max() for d in defects))


def casimir(n: int) -> np.ndarray:
    """J0 J0 - (J+ J- + J- J+) / 2, equal to (n/2)(n/2 + 1) times the identity.

    With J- = d/dt and J+ = t^2 d/dt - n t, J+ J- contributes with a minus sign:
    these generators obey [J+, J-] = -2 J0.
    """
    g = generators(n)
    return g.jzero @ g.jzero - 0.5 * (g.jplus @ g.jminus + g.jminus @ g.jplus)


def algebraized_h(eq: BasicEquation, n: int) -> np.ndarray:
    """H = J0 J0 - a J0 J- + b2 J+ + (n - 1 + b1) J0 + (b0 - n a / 2) J- + (n/2)(n/2 - 1 + b1)."""
    if not eq.is_qes(n, rtol=QES_RTOL):
        raise NotQesError(f"c1 = {eq.c1!r} differs from -n*b2 = {-n * eq.b2!r}")
    g = generators(n)
    half = n / 2.0
    return (
        g.jzero @ g.jzero
        - eq.alpha * (g.jzero @ g.jminus)
        + eq.b2 * g.jplus
        + (n - 1 + eq.b1) * g.jzero
        + (eq.b0 - n * eq.alpha / 2.0) * g.jminus
        + half * (half - 1 + eq.b1) * np.eye(n + 1)
    )

"""Matrix route to the polynomial solutions.

When c1 = -n*b2, the operator H = t(t-a) d^2 + (b2 t^2 + b1 t + b0) d + c1 t maps
span{1, t, ..., t^n} into itself. Its matrix in the monomial basis is
tridiagonal, so every polynomial solution of degree n is an eigenvector and
every allowed c0 an eigenvalue. No Newton iteration is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from qesbethe.basic_ode import BasicEquation
from qesbethe.errors import DegreeDeflationError, LeakageError

LEAKAGE_TOL = 1e-9
REAL_ROOT_TOL = 1e-8


@dataclass(frozen=True)
class InvariantMatrix:
    n: int
    entries: np.ndarray
    leakage: float = 0.0


@dataclass(frozen=True)
class OracleLevel:
    c0: complex
    poly_coeffs: np.ndarray
    roots: Optional[np.ndarray]
    all_real: bool
    degenerate: bool = False
    simple_roots: bool = True

    @property
    def is_complex(self) -> bool:
        """True for a complex-c0 level (unphysical parameter regime)."""
        return abs(np.imag(self.c0)) > 0.0

    @property
    def real_roots(self) -> np.ndarray:
        return np.sort(np.real(self.roots))


def leakage(eq: BasicEquation, n: int) -> float:
    """Coefficient of t^(n+1) in H t^n."""
    return eq.b2 * n + eq.c1


def invariant_matrix(eq: BasicEquation, n: int) -> InvariantMatrix:
    """Matrix of H on {1, t, ..., t^n}; column k holds the coefficients of H t^k."""
    leak = leakage(eq, n)
    if abs(leak) > LEAKAGE_TOL * max(1.0, abs(eq.c1), abs(n * eq.b2)):
        raise LeakageError(
            f"subspace not invariant: leakage coefficient b2*n + c1 = {leak!r}", leakage=leak
        )
    m = np.zeros((n + 1, n + 1))
    for k in range(n + 1):
        m[k, k] = k * (k - 1) + eq.b1 * k
        if k >= 1:
            m[k - 1, k] = -eq.alpha * k * (k - 1) + eq.b0 * k
        if k < n:
            m[k + 1, k] = eq.b2 * k + eq.c1
    return InvariantMatrix(n=n, entries=m, leakage=leak)


def companion(coeffs: Sequence[complex]) -> np.ndarray:
    """Companion matrix of a polynomial given by ascending coefficients."""
    c = np.asarray(coeffs)
    deg = len(c) - 1
    mat = np.zeros((deg, deg), dtype=np.result_type(c, float))
    if deg > 1:
        mat[1:, :-1] = np.eye(deg - 1)
    mat[:, -1] = -c[:-1] / c[-1]
    return mat


def poly_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """All roots of sum(coeffs[k] t^k) from the eigenvalues of its companion matrix."""
    c = np.asarray(coeffs)
    if c.size == 0 or c[-1] == 0:
        raise DegreeDeflationError("zero leading coefficient: degree deflation required")
    if c.size == 1:
        return np.zeros(0, dtype=complex)
    return np.linalg.eigvals(companion(c)).astype(complex)


def _is_real(values: np.ndarray, tol: float = REAL_ROOT_TOL) -> bool:
    return bool(np.all(np.abs(values.imag) <= tol * (1.0 + np.abs(values.real))))


def oracle_solutions(eq: BasicEquation, n: int) -> List[OracleLevel]:
    """All n+1 polynomial solutions (with multiplicity), sorted by Re(c0).

    A repeated eigenvalue of the unreduced tridiagonal matrix is necessarily
    defective; such levels are flagged degenerate and their roots omitted.
    """
    mat = invariant_matrix(eq, n).entries
    evals, evecs = np.linalg.eig(mat)
    order = np.lexsort((evals.imag, evals.real))
    evals, evecs = evals[order], evecs[:, order]
    scale = 1.0 + np.abs(evals).max()
    levels = []
    for idx, lam in enumerate(evals):
        vec = evecs[:, idx]
        lam = complex(lam)
        others = np.delete(evals, idx)
        degenerate = bool(others.size) and bool(np.min(np.abs(others - lam)) < 1e-8 * scale)
        coeffs = vec / vec[-1]
        if abs(lam.imag) <= 1e-12 * scale and np.all(np.abs(coeffs.imag) <= 1e-10 * (1 + np.abs(coeffs))):
            lam = complex(lam.real, 0.0)
            coeffs = coeffs.real.copy()
        if degenerate:
            levels.append(OracleLevel(lam, coeffs, None, False, degenerate=True, simple_roots=False))
            continue
        roots = poly_roots(coeffs)
        all_real = _is_real(roots)
        if all_real:
            roots = np.sort(roots.real).astype(complex)
        simple = True
        if roots.size > 1:
            gaps = np.abs(roots[:, None] - roots[None, :])
            np.fill_diagonal(gaps, np.inf)
            simple = bool(gaps.min() > 1e-8 * (1.0 + np.abs(roots).max()))
        levels.append(OracleLevel(lam, coeffs, roots, all_real, simple_roots=simple))
    return levels

"""Bethe ansatz equations for the degree-n polynomial solutions of the basic equation.

With S(t) = prod_i (t - t_i), the roots satisfy

    sum_{j != i} 2 / (t_i - t_j) + (b2 t_i^2 + b1 t_i + b0) / (t_i (t_i - alpha)) = 0,

and the eigenvalue-like constant follows as c0 = n(n-1) + b2 sum(t_i) + n b1.

The solver runs many damped Newton iterations side by side (one row per start
in a batched array), then deduplicates the converged root sets. A joint mode
adds one model parameter as an extra unknown, closing the system with the
physical requirement c0(roots, p) = target_c0(p).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from qesbethe.basic_ode import BasicEquation
from qesbethe.errors import InconsistentFamilyError, NotQesError, SingularConfigurationError
from qesbethe.oracle import oracle_solutions

log = logging.getLogger(__name__)

ACCEPT_TOL = 1e-10
SINGULAR_GUARD = 1e-10
DISTINCT_RTOL = 1e-8
DEDUP_RTOL = 1e-7
MAX_HALVINGS = 40
COMPLEX_STEP = 1e-30
STAGNATION_WINDOW = 10
STAGNATION_FACTOR = 0.5
ESCAPE_RADIUS = 1e8


@dataclass(frozen=True)
class SolverConfig:
    max_newton_iters: int = 200
    newton_tol: float = 1e-13
    num_starts: int = 64
    seed: int = 0
    damping: float = 1.0
    warm_start: bool = True

    def __post_init__(self):
        if self.max_newton_iters <= 0 or self.num_starts <= 0:
            raise ValueError("max_newton_iters and num_starts must be positive")
        if not 0.0 < self.newton_tol < 1e-8:
            raise ValueError("newton_tol must lie in (0, 1e-8)")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")


@dataclass(frozen=True)
class BetheSolution:
    n: int
    roots: tuple
    c0: float
    bae_residual_norm: float
    distinct_ok: bool = True

    @property
    def roots_array(self) -> np.ndarray:
        return np.asarray(self.roots, dtype=float)


# -- residual and Jacobian, batched over starts ------------------------------------


def _coef(value, rows):
    arr = np.asarray(value)
    if arr.ndim == 0:
        return arr
    return arr.reshape(rows, 1)


def _bae_batch(x, alpha, b2, b1, b0, jacobian=True):
    """Residuals (S, n) and Jacobians (S, n, n) for root sets x of shape (S, n)."""
    s, n = x.shape
    eye = np.eye(n, dtype=bool)
    diff = x[:, :, None] - x[:, None, :]
    inv = np.where(eye, 0.0, 1.0 / np.where(eye, 1.0, diff))
    den = x * (x - alpha)
    q = (b2 * x + b1) * x + b0
    res = 2.0 * inv.sum(axis=2) + q / den
    if not jacobian:
        return res, None
    inv2 = 2.0 * inv * inv
    jac = inv2.copy()
    dq = 2.0 * b2 * x + b1
    dden = 2.0 * x - alpha
    diag = -inv2.sum(axis=2) + (dq * den - q * dden) / (den * den)
    idx = np.arange(n)
    jac[:, idx, idx] = diag
    return res, jac


def _valid(x, alpha, guard=SINGULAR_GUARD):
    """Rows whose roots are finite, distinct and away from the singular points."""
    ok = np.all(np.isfinite(x), axis=1)
    near = (np.abs(x) < guard) | (np.abs(x - alpha) < guard)
    ok &= ~np.any(near, axis=1)
    if x.shape[1] > 1:
        xs = np.sort(x, axis=1)
        ok &= np.all(np.diff(xs, axis=1) > 1e-13 * (1.0 + np.abs(xs[:, 1:])), axis=1)
    return ok


def bae_residual_vec(eq: BasicEquation, roots: Sequence[float]) -> np.ndarray:
    """Bethe ansatz residual vector; zero iff `roots` solve the equations."""
    x = np.asarray(roots, dtype=float).reshape(1, -1)
    n = x.shape[1]
    if np.any(x == 0.0) or np.any(x == eq.alpha):
        raise SingularConfigurationError("singular configuration: root at a singular point of the equation")
    if n > 1 and np.min(np.diff(np.sort(x[0]))) == 0.0:
        raise SingularConfigurationError("singular configuration: coincident roots")
    res, _ = _bae_batch(x, eq.alpha, eq.b2, eq.b1, eq.b0, jacobian=False)
    return res[0]


def bae_jacobian(eq: BasicEquation, roots: Sequence[float]) -> np.ndarray:
    x = np.asarray(roots, dtype=float).reshape(1, -1)
    _, jac = _bae_batch(x, eq.alpha, eq.b2, eq.b1, eq.b0)
    return jac[0]


def c0_from_roots(eq: BasicEquation, n: int, roots: Sequence[float]) -> float:
    roots = list(roots)
    if len(roots) != n:
        raise ValueError(f"expected {n} roots, got {len(roots)}")
    return n * (n - 1) + eq.b2 * float(sum(roots)) + n * eq.b1


# -- batched damped Newton ---------------------------------------------------------


def _solve_linear(jac, rhs):
    """Batched J^-1 r; singular rows fall back to least squares, non-finite rows give NaN."""
    out = np.full(rhs.shape, np.nan)
    finite = np.all(np.isfinite(jac), axis=(1, 2)) & np.all(np.isfinite(rhs), axis=1)
    if not np.any(finite):
        return out
    idx = np.flatnonzero(finite)
    try:
        out[idx] = np.linalg.solve(jac[idx], rhs[idx, :, None])[..., 0]
    except np.linalg.LinAlgError:
        for i in idx:
            try:
                out[i] = np.linalg.lstsq(jac[i], rhs[i], rcond=None)[0]
            except np.linalg.LinAlgError:
                pass
    return out


def _newton_batch(x0, system, valid, cfg: SolverConfig):
    """Damped Newton on every row of x0.

    `system(x)` returns (residual, jacobian) for a batch; `valid(x)` masks rows
    that are admissible iterates. Returns final iterates and residual norms.
    Diverging rows may overflow; they are masked out, so the warnings are muted.
    """
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return _newton_batch_raw(x0, system, valid, cfg)


def _newton_batch_raw(x0, system, valid, cfg: SolverConfig):
    x = np.array(x0, dtype=float)
    if x.shape[0] == 0:
        return x, np.zeros(0)
    ok = valid(x)
    norms = np.full(x.shape[0], np.inf)
    active = ok.copy()
    if np.any(ok):
        res, _ = system(x[ok])
        norms[ok] = np.linalg.norm(res, axis=1)
    active &= norms > cfg.newton_tol
    checkpoint = norms.copy()
    for it in range(1, cfg.max_newton_iters + 1):
        if not np.any(active):
            break
        ids = np.flatnonzero(active)
        res, jac = system(x[ids])
        with np.errstate(all="ignore"):
            step = -_solve_linear(jac, res)
        bad = ~np.all(np.isfinite(step), axis=1)
        active[ids[bad]] = False
        ids, step = ids[~bad], step[~bad]
        lam = np.full(ids.size, cfg.damping)
        pending = np.ones(ids.size, dtype=bool)
        for _h in range(MAX_HALVINGS + 1):
            if not np.any(pending):
                break
            p = np.flatnonzero(pending)
            trial = x[ids[p]] + lam[p, None] * step[p]
            good = valid(trial)
            trial_norm = np.full(p.size, np.inf)
            if np.any(good):
                with np.errstate(all="ignore"):
                    r, _ = system(trial[good], False)
                trial_norm[good] = np.linalg.norm(r, axis=1)
            accept = trial_norm < norms[ids[p]]
            acc = p[accept]
            x[ids[acc]] = trial[accept]
            norms[ids[acc]] = trial_norm[accept]
            pending[acc] = False
            lam[p[~accept]] *= 0.5
        # no decrease along the Newton direction: the start has stagnated
        active[ids[pending]] = False
        active &= norms > cfg.newton_tol
        if it % STAGNATION_WINDOW == 0:
            # slow linear creep (typically a root escaping to infinity) never converges
            active &= norms < STAGNATION_FACTOR * checkpoint
            active &= np.all(np.abs(x) < ESCAPE_RADIUS, axis=1)
            checkpoint = norms.copy()
    return x, norms


def _dedup(items: List[Tuple[np.ndarray, float]], key) -> list:
    """Greedy merge of sorted candidates within DEDUP_RTOL; deterministic."""
    items = sorted(items, key=key)
    kept: list = []
    for vec, payload in items:
        thresh = DEDUP_RTOL * (1.0 + np.linalg.norm(vec))
        if any(v.shape == vec.shape and np.linalg.norm(v - vec) < thresh for v, _ in kept):
            continue
        kept.append((vec, payload))
    return kept


def _chebyshev_starts(alpha, b1, b2, n, count, rng) -> np.ndarray:
    lo = min(0.0, alpha) - 1.0
    hi = max(0.0, alpha) + n + b1 / abs(b2) + 1.0
    hi = max(hi, max(0.0, alpha) + 1.0)
    pool = 2 * n + 2
    k = np.arange(pool)
    nodes = 0.5 * (lo + hi) + 0.5 * (hi - lo) * np.cos(np.pi * (2 * k + 1) / (2 * pool))
    # nudge nodes off the singular points
    nodes = nodes + 1e-3 * (hi - lo) * (rng.random(pool) - 0.5)
    starts = np.empty((count, n))
    for i in range(count):
        starts[i] = np.sort(rng.choice(nodes, size=n, replace=False))
    return starts


def _warm_starts(eq: BasicEquation, n: int) -> List[np.ndarray]:
    out = []
    for level in oracle_solutions(eq, n):
        if level.all_real and level.roots is not None and level.simple_roots:
            out.append(np.sort(level.roots.real))
    return out


def _make_solution(eq: BasicEquation, n: int, roots: np.ndarray) -> Optional[BetheSolution]:
    roots = np.sort(roots)
    scale = 1.0 + (np.abs(roots).max() if n else 0.0)
    distinct = n < 2 or bool(np.min(np.diff(roots)) > DISTINCT_RTOL * scale)
    off_singular = not np.any((np.abs(roots) < SINGULAR_GUARD) | (np.abs(roots - eq.alpha) < SINGULAR_GUARD))
    if not (distinct and off_singular):
        return None
    norm = float(np.linalg.norm(bae_residual_vec(eq, roots))) if n else 0.0
    if not norm <= ACCEPT_TOL:
        return None
    return BetheSolution(n, tuple(float(r) for r in roots), c0_from_roots(eq, n, roots), norm, distinct)


def _require_qes(eq: BasicEquation, n: int):
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if not eq.is_qes(n, rtol=1e-9):
        raise NotQesError(f"not QES at this degree: c1 = {eq.c1!r} but -n*b2 = {-n * eq.b2!r}")


def solve_bae(eq: BasicEquation, n: int, cfg: SolverConfig = SolverConfig(),
              extra_starts: Sequence[Sequence[float]] = ()) -> List[BetheSolution]:
    """All distinct real-root solutions of the Bethe ansatz equations found by multi-start Newton.

    Solutions are returned sorted by (c0, roots). An empty list means no start
    converged; it is not an error.
    """
    _require_qes(eq, n)
    if n == 0:
        return [BetheSolution(0, (), 0.0, 0.0, True)]
    rng = np.random.default_rng(cfg.seed)
    starts = [_chebyshev_starts(eq.alpha, eq.b1, eq.b2, n, cfg.num_starts, rng)]
    if cfg.warm_start:
        warm = _warm_starts(eq, n)
        if warm:
            starts.insert(0, np.array(warm))
    if len(extra_starts):
        starts.insert(0, np.sort(np.asarray(extra_starts, dtype=float).reshape(-1, n), axis=1))
    x0 = np.vstack(starts)

    def system(x, jacobian=True):
        return _bae_batch(x, eq.alpha, eq.b2, eq.b1, eq.b0, jacobian)

    x, norms = _newton_batch(x0, system, lambda x: _valid(x, eq.alpha), cfg)
    candidates = []
    for row, norm in zip(x, norms):
        if norm <= ACCEPT_TOL:
            sol = _make_solution(eq, n, row)
            if sol is not None:
                candidates.append((np.asarray(sol.roots), sol))
    kept = _dedup(candidates, key=lambda item: (item[1].c0, item[1].roots))
    if len(kept) > n + 1:
        log.warning("found %d solutions at degree %d; expected at most %d", len(kept), n, n + 1)
    return [sol for _, sol in kept]


# -- joint mode ---------------------------------------------------------------------


@dataclass(frozen=True)
class ParamFamily:
    """A one-parameter family of basic equations.

    `coefficients(p)` returns (alpha, b2, b1, b0, c1) and must accept complex
    `p` (complex-step differentiation). `target_c0(p)` is the c0 imposed by
    the physical model. `offset + bounds` is the interval scanned for starting values;
    `domain(p)` rejects parameter values where the family is undefined.
    """

    name: str
    coefficients: Callable
    target_c0: Callable
    bounds: Tuple[float, float]
    log_scale: bool = False
    domain: Callable = lambda p: np.isfinite(p)
    offset: float = 0.0

    def equation(self, p: float) -> BasicEquation:
        a, b2, b1, b0, c1 = (float(np.real(v)) for v in self.coefficients(p))
        return BasicEquation(a, b2, b1, b0, c1, float(np.real(self.target_c0(p))))

    def grid(self, count: int) -> np.ndarray:
        lo, hi = self.bounds
        if self.log_scale:
            return self.offset + np.geomspace(lo, hi, count)
        return self.offset + np.linspace(lo, hi, count)


def _check_family(family: ParamFamily, n: int):
    for p in family.grid(7):
        if not family.domain(p):
            continue
        _, b2, _, _, c1 = (np.real(v) for v in family.coefficients(p))
        if abs(c1 + n * b2) > 1e-9 * max(1.0, abs(c1), abs(n * b2)):
            raise InconsistentFamilyError(
                f"inconsistent QES family: c1 + n*b2 = {c1 + n * b2!r} at {family.name} = {p!r}"
            )


def _joint_system(family: ParamFamily, n: int):
    def parts(p):
        a, b2, b1, b0, _ = family.coefficients(p)
        return a, b2, b1, b0, family.target_c0(p)

    def evaluate(x, p, jacobian):
        a, b2, b1, b0, tgt = parts(p)
        rows = x.shape[0]
        a, b2, b1, b0, tgt = (_coef(v, rows) if np.ndim(v) else v for v in (a, b2, b1, b0, tgt))
        res, jac = _bae_batch(x, a, b2, b1, b0, jacobian=jacobian)
        b2v = np.broadcast_to(np.asarray(b2).reshape(-1), (rows,)) if np.ndim(b2) else np.full(rows, b2)
        b1v = np.broadcast_to(np.asarray(b1).reshape(-1), (rows,)) if np.ndim(b1) else np.full(rows, b1)
        tgtv = np.broadcast_to(np.asarray(tgt).reshape(-1), (rows,)) if np.ndim(tgt) else np.full(rows, tgt)
        g = n * (n - 1) + b2v * x.sum(axis=1) + n * b1v - tgtv
        return res, jac, g, b2v

    def system(z, jacobian=True):
        x, p = z[:, :n], z[:, n]
        res, jac, g, b2v = evaluate(x, p, jacobian)
        if not jacobian:
            return np.concatenate([res, g[:, None]], axis=1).real, None
        # d/dp by complex step: exact to rounding for analytic families
        pc = p + 1j * COMPLEX_STEP
        res_c, _, g_c, _ = evaluate(x.astype(complex), pc, False)
        dres = res_c.imag / COMPLEX_STEP
        dg = g_c.imag / COMPLEX_STEP
        rows = z.shape[0]
        full = np.zeros((rows, n + 1, n + 1))
        full[:, :n, :n] = jac
        full[:, :n, n] = dres
        full[:, n, :n] = b2v[:, None]
        full[:, n, n] = dg
        return np.concatenate([res, g[:, None]], axis=1).real, full

    def valid(z):
        p = z[:, n]
        ok = np.array([bool(family.domain(v)) for v in p])
        if n and np.any(ok):
            alpha = np.array([np.real(family.coefficients(v)[0]) for v in p[ok]])
            ok[ok] = _valid(z[ok, :n], alpha[:, None])
        return ok

    return system, valid


def _joint_starts(family: ParamFamily, n: int, cfg: SolverConfig, rng) -> np.ndarray:
    grid = [p for p in family.grid(max(24, cfg.num_starts // 2)) if family.domain(p)]
    starts = []
    # brackets of the k-th oracle eigenvalue against the target, per level index
    if cfg.warm_start:
        spectra = []
        for p in grid:
            eq = family.equation(p)
            try:
                levels = oracle_solutions(eq, n)
            except Exception:
                spectra.append(None)
                continue
            spectra.append(levels)
        for i, p in enumerate(grid):
            levels = spectra[i]
            if levels is None:
                continue
            for level in levels:
                if level.all_real and level.roots is not None and level.simple_roots:
                    starts.append(np.append(np.sort(level.roots.real), p))
        for k in range(n + 1):
            f = []
            for i, p in enumerate(grid):
                lv = spectra[i]
                if lv is None or lv[k].is_complex:
                    f.append(np.nan)
                else:
                    f.append(lv[k].c0.real - float(np.real(family.target_c0(p))))
            for i in range(len(grid) - 1):
                if np.isfinite(f[i]) and np.isfinite(f[i + 1]) and f[i] * f[i + 1] <= 0:
                    w = f[i] / (f[i] - f[i + 1]) if f[i] != f[i + 1] else 0.5
                    pm = grid[i] + w * (grid[i + 1] - grid[i])
                    if not family.domain(pm):
                        continue
                    try:
                        lv = oracle_solutions(family.equation(pm), n)[k]
                    except Exception:
                        continue
                    if lv.all_real and lv.roots is not None and lv.simple_roots:
                        starts.insert(0, np.append(np.sort(lv.roots.real), pm))
    # cold starts: Chebyshev subsets at random grid parameters
    for _ in range(cfg.num_starts):
        p = grid[rng.integers(len(grid))]
        eq = family.equation(p)
        if n:
            roots = _chebyshev_starts(eq.alpha, eq.b1, eq.b2, n, 1, rng)[0]
        else:
            roots = np.zeros(0)
        starts.append(np.append(roots, p))
    return np.array(starts).reshape(-1, n + 1)


def solve_joint(family: ParamFamily, n: int, cfg: SolverConfig = SolverConfig()
                ) -> List[Tuple[float, BetheSolution]]:
    """Solve the Bethe ansatz equations together with c0(roots, p) = target_c0(p).

    Returns (p, solution) pairs sorted by p, each satisfying both sets of
    equations to ACCEPT_TOL.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    _check_family(family, n)
    rng = np.random.default_rng(cfg.seed)
    z0 = _joint_starts(family, n, cfg, rng)
    system, valid = _joint_system(family, n)
    z, norms = _newton_batch(z0, system, valid, cfg)
    candidates = []
    for row, norm in zip(z, norms):
        if not norm <= ACCEPT_TOL:
            continue
        p = float(row[n])
        eq = family.equation(p)
        if not eq.is_qes(n, rtol=1e-9):
            continue
        sol = _make_solution(eq, n, row[:n])
        if sol is None:
            continue
        if abs(sol.c0 - eq.c0) > ACCEPT_TOL * max(1.0, abs(eq.c0)):
            continue
        candidates.append((np.append(sol.roots, p), (p, sol)))
    kept = _dedup(candidates, key=lambda item: (item[1][0], item[1][1].roots))
    return [payload for _, payload in kept]

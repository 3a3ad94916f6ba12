"""Finite-difference check of QES levels against the original radial equation.

The radial equation -u''/2 + V_eff u = E u is discretized with the three-point
Laplacian on a uniform grid, with Dirichlet walls at r_min and r_max. The
discrete Hamiltonian is symmetric tridiagonal.

Accuracy is O(h^2) in the spacing. With the default grids, matches are good to
about 1e-4, which is why 1e-4 is the default matching tolerance. A mismatch at
that level is a discretization limit, not a solver failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from qesbethe.errors import DomainError, EigenSolverError
from qesbethe.models import ModelKind, ModelSpec, QesLevel, in_range_roots

DEFAULT_POINTS = 4000
MATCH_ABS = 1e-4
MATCH_REL = 1e-4
# Dirichlet wall near the origin for the non-singular potentials; u ~ r^(l+1)
# there, so a wall at r_min shifts s-wave energies by ~ u'(0)^2 r_min / 2
ORIGIN_WALL = 1e-6
DECAY_EXPONENT = 40.0
PHASE_PER_STEP = 0.015
MAX_POINTS = 400_000


@dataclass(frozen=True)
class RadialGrid:
    r_min: float
    r_max: float
    num_points: int = DEFAULT_POINTS

    def __post_init__(self):
        if not 0 < self.r_min < self.r_max:
            raise ValueError(f"need 0 < r_min < r_max, got {self.r_min}, {self.r_max}")
        if self.num_points < 200:
            raise ValueError("num_points must be at least 200")

    @property
    def spacing(self) -> float:
        return (self.r_max - self.r_min) / (self.num_points + 1)

    @property
    def r(self) -> np.ndarray:
        """Interior nodes; u vanishes at r_min and r_max."""
        return self.r_min + self.spacing * np.arange(1, self.num_points + 1)

    def refined(self) -> "RadialGrid":
        """Same walls, half the spacing."""
        return RadialGrid(self.r_min, self.r_max, 2 * self.num_points + 1)


@dataclass(frozen=True)
class FdSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, normalized so that h * sum(u^2) = 1
    grid: RadialGrid


def effective_potential(model: ModelSpec) -> Callable[[np.ndarray], np.ndarray]:
    """V_eff(r) = bracket / 2, so that -u''/2 + V_eff u = E u."""
    model.validate()
    p, ell = model.params, model.ell
    centrifugal = ell * (ell + 1) / 2.0
    kind = model.kind

    def v(r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise DomainError("effective potential is defined for r > 0 only")
        out = centrifugal / (r * r)
        if kind is ModelKind.ANHARMONIC:
            r2 = r * r
            out = out + 0.5 * p["omega"] ** 2 * r2 + p["e"] / (r2 * r2) + p["d"] / (r2 * r2 * r2)
        elif kind is ModelKind.ISOTONIC:
            r2, a2 = r * r, p["a"] ** 2
            out = out + 0.5 * p["omega"] ** 2 * r2 + p["g"] * (r2 - a2) / (r2 + a2) ** 2
        elif kind is ModelKind.SOFT_CORE:
            out = out + p["G"] / r - p["Z"] / (r + p["beta"])
        else:
            r2 = r * r
            out = out + 0.5 * p["omega"] ** 2 * r2 + p["lambda"] * r2 / (1 + p["delta"] * r2)
        return out

    return v


def _anharmonic_wall(model: ModelSpec, energy: float) -> float:
    """r_min where the r^-6 wall exceeds E + 1e3 and exp(-sqrt(2d)/(2r^2)) < 1e-14."""
    d = model.params["d"]
    r_wall = (d / (abs(energy) + 1e3)) ** (1.0 / 6.0)
    r_pref = math.sqrt(math.sqrt(2.0 * d) / (2.0 * math.log(1e14)))
    return min(r_wall, r_pref)


def default_grid(model: ModelSpec, energy: float, n: int = 0, num_points: Optional[int] = None) -> RadialGrid:
    """A grid adapted to the bound state near `energy`.

    r_max: the outermost classical turning point, pushed outward until the WKB
    decay integral of sqrt(2 (V_eff - E)) reaches DECAY_EXPONENT.
    Spacing: PHASE_PER_STEP / k_max, with k_max = sqrt(2 (E - min V_eff)) the
    largest local wavenumber, which keeps the O(h^2) error near 1e-5 relative.
    This is never coarser than the 1 / (20 max(omega, |E|)^(1/2)) rule of thumb.
    Anharmonic r_min sits inside the r^-6 wall, see _anharmonic_wall.
    """
    v = effective_potential(model)
    r_min = _anharmonic_wall(model, energy) if model.kind is ModelKind.ANHARMONIC else ORIGIN_WALL
    probe = np.geomspace(r_min, 1e4, 20001)
    vals = v(probe)
    allowed = np.nonzero(vals < energy)[0]
    i_turn = int(allowed[-1]) if allowed.size else int(np.argmin(vals))
    kappa = np.sqrt(np.maximum(2.0 * (vals[i_turn:] - energy), 0.0))
    decay = np.concatenate(([0.0], np.cumsum(0.5 * (kappa[1:] + kappa[:-1]) * np.diff(probe[i_turn:]))))
    beyond = np.nonzero(decay >= DECAY_EXPONENT)[0]
    r_max = float(probe[i_turn + beyond[0]]) if beyond.size else float(probe[-1])
    inside = probe <= r_max
    k_max = math.sqrt(max(2.0 * (energy - float(vals[inside].min())), 1e-12))
    # rule-of-thumb scale 1/sqrt(max(omega, |E|))
    omega = model.params.get("omega", 0.0)
    k_max = max(k_max, math.sqrt(max(omega, abs(energy))))
    if num_points is None:
        wanted = int(math.ceil((r_max - r_min) * k_max / PHASE_PER_STEP))
        num_points = min(MAX_POINTS, max(DEFAULT_POINTS, wanted))
    return RadialGrid(r_min, r_max, num_points)


def fd_spectrum(model: ModelSpec, grid: RadialGrid, m: int) -> FdSpectrum:
    """Lowest m eigenpairs of the three-point discretization."""
    h = grid.spacing
    r = grid.r
    diag = 1.0 / (h * h) + effective_potential(model)(r)
    off = np.full(grid.num_points - 1, -0.5 / (h * h))
    m = min(m, grid.num_points)
    try:
        vals, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(0, m - 1))
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenSolverError(f"tridiagonal eigensolver failed on {grid}: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise EigenSolverError(f"non-finite eigenvalues on {grid}")
    vecs = vecs / math.sqrt(h)
    # fix the sign so each eigenvector starts positive
    first = np.argmax(np.abs(vecs) > 1e-8 * np.abs(vecs).max(axis=0), axis=0)
    signs = np.sign(vecs[first, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return FdSpectrum(vals, vecs * signs, grid)


def count_nodes(u, floor: float = 1e-10) -> int:
    """Strict sign changes of u, ignoring samples below floor * max|u|."""
    u = np.asarray(u, dtype=float)
    if u.size == 0:
        return 0
    big = u[np.abs(u) > floor * np.abs(u).max()]
    if big.size < 2:
        return 0
    return int(np.count_nonzero(np.signbit(big[1:]) != np.signbit(big[:-1])))


@dataclass(frozen=True)
class FdCheck:
    energy: float
    fd_energy: float
    deviation: float
    richardson_energy: float
    richardson_deviation: float
    index: int
    nodes: int
    expected_nodes: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tolerance

    @property
    def index_consistent(self) -> bool:
        return self.index == self.nodes == self.expected_nodes


def match_energy(model: ModelSpec, energy: float, n: int = 0, expected_nodes: int = 0,
                 grid: Optional[RadialGrid] = None, richardson: bool = True) -> FdCheck:
    """Nearest FD eigenvalue to `energy`, plus one Richardson-extrapolated value."""
    grid = grid or default_grid(model, energy, n)
    m = max(n, expected_nodes) + 4
    spec = fd_spectrum(model, grid, m)
    idx = int(np.argmin(np.abs(spec.eigenvalues - energy)))
    fd_e = float(spec.eigenvalues[idx])
    rich = fd_e
    if richardson:
        fine = fd_spectrum(model, grid.refined(), m)
        rich = float((4.0 * fine.eigenvalues[idx] - fd_e) / 3.0)
    return FdCheck(
        energy=energy, fd_energy=fd_e, deviation=abs(fd_e - energy),
        richardson_energy=rich, richardson_deviation=abs(rich - energy),
        index=idx, nodes=count_nodes(spec.eigenvectors[:, idx]), expected_nodes=expected_nodes,
        tolerance=max(MATCH_ABS, MATCH_REL * abs(energy)),
    )


def fd_check(level: QesLevel, grid: Optional[RadialGrid] = None, richardson: bool = True) -> FdCheck:
    return match_energy(level.model, level.energy, level.n,
                        in_range_roots(level.model, level.bethe.roots), grid, richardson)

"""The four radial potentials and their reduction to the basic equation.

Each radial equation u'' - [bracket] u + 2 E u = 0 is gauge-transformed and
rewritten in a variable t:

    anharmonic      V = w^2 r^2/2 + e/r^4 + d/r^6          t = r^2
    isotonic        V = w^2 r^2/2 + g (r^2-a^2)/(r^2+a^2)^2 t = w r^2 + w a^2
    soft-core       V = G/r - Z/(r+beta)                    t = r
    non-polynomial  V = w^2 r^2/2 + lam r^2/(1+delta r^2)   t = w r^2 + w/delta

The coefficients below were re-derived symbolically from the gauge
substitutions; see docs/coefficient_arbitration.md for the two places where
the derived form differs from the commonly printed one.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from qesbethe.basic_ode import BasicEquation
from qesbethe.bethe import BetheSolution, ParamFamily, SolverConfig, solve_joint
from qesbethe.errors import ModelError
from qesbethe.oracle import oracle_solutions

log = logging.getLogger(__name__)


class ModelKind(str, Enum):
    ANHARMONIC = "anharmonic"
    ISOTONIC = "isotonic"
    SOFT_CORE = "softcore"
    NON_POLYNOMIAL = "nonpolynomial"

    @classmethod
    def parse(cls, text: str) -> "ModelKind":
        key = text.strip().lower().replace("-", "").replace("_", "")
        aliases = {
            "anharmonic": cls.ANHARMONIC,
            "isotonic": cls.ISOTONIC,
            "softcore": cls.SOFT_CORE,
            "softcorecoulomb": cls.SOFT_CORE,
            "nonpolynomial": cls.NON_POLYNOMIAL,
            "nonpoly": cls.NON_POLYNOMIAL,
        }
        if key not in aliases:
            raise ModelError(f"unknown model {text!r}; expected one of {sorted(aliases)}")
        return aliases[key]


PARAM_NAMES: Dict[ModelKind, Tuple[str, ...]] = {
    ModelKind.ANHARMONIC: ("omega", "e", "d"),
    ModelKind.ISOTONIC: ("omega", "g", "a"),
    ModelKind.SOFT_CORE: ("G", "Z", "beta"),
    ModelKind.NON_POLYNOMIAL: ("omega", "delta", "lambda"),
}

DEFAULT_FREE = {
    ModelKind.ANHARMONIC: "omega",
    ModelKind.ISOTONIC: "g",
    ModelKind.SOFT_CORE: "Z",
    ModelKind.NON_POLYNOMIAL: "lambda",
}

# solved isotonic couplings below this are the trivial g = 0 branch
TRIVIAL_G = 1e-9

# parameters that must be strictly positive
_POSITIVE = {
    ModelKind.ANHARMONIC: ("omega", "e", "d"),
    ModelKind.ISOTONIC: ("omega",),
    ModelKind.SOFT_CORE: ("beta",),
    ModelKind.NON_POLYNOMIAL: ("omega", "delta"),
}


@dataclass(frozen=True)
class ModelSpec:
    kind: ModelKind
    params: Dict[str, float] = field(default_factory=dict)
    ell: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind.parse(self.kind) if isinstance(self.kind, str) else self.kind)
        object.__setattr__(self, "params", {k: float(v) for k, v in self.params.items()})

    def with_param(self, name: str, value: float) -> "ModelSpec":
        return replace(self, params={**self.params, name: float(value)})

    def validate(self, allow_missing: Tuple[str, ...] = ()) -> None:
        names = PARAM_NAMES[self.kind]
        unknown = set(self.params) - set(names)
        if unknown:
            raise ModelError(f"{self.kind.value}: unknown parameters {sorted(unknown)}")
        for name in names:
            if name not in self.params and name not in allow_missing:
                raise ModelError(f"{self.kind.value}: missing parameter {name!r}")
            if name in self.params and not math.isfinite(self.params[name]):
                raise ModelError(f"{self.kind.value}: parameter {name} is not finite")
        if int(self.ell) != self.ell or self.ell < -1:
            raise ModelError(f"ell must be an integer >= -1, got {self.ell}")
        for name in _POSITIVE[self.kind]:
            if name in self.params and not self.params[name] > 0:
                raise ModelError(f"{self.kind.value}: {name} must be positive, got {self.params[name]}")
        p = self.params
        if self.kind is ModelKind.ISOTONIC and "g" in p and p["g"] < 0:
            raise ModelError(f"isotonic: g must be nonnegative, got {p['g']}")
        if self.kind is ModelKind.SOFT_CORE and "Z" in p and "G" in p and p["Z"] == p["G"]:
            raise ModelError("soft-core: Z must differ from G")

    @property
    def flags(self) -> List[str]:
        return ["ell=-1: r^(ell+1) prefactor is constant; normalizability checked numerically"] if self.ell == -1 else []


# -- coefficient identifications -----------------------------------------------------


def _energy(kind: ModelKind, p: dict, ell: int, n: int):
    if kind is ModelKind.ANHARMONIC:
        return p["omega"] * (2 * n + 2 + p["e"] / np.sqrt(2 * p["d"]))
    if kind is ModelKind.ISOTONIC:
        return p["omega"] * (2 * n + ell + 2.5 - np.sqrt(4 * p["g"] + 1))
    if kind is ModelKind.SOFT_CORE:
        return -0.5 * ((p["Z"] - p["G"]) / (n + ell + 2)) ** 2
    return p["lambda"] / p["delta"] + p["omega"] * (2 * n + ell + 3.5)


def coefficients(kind: ModelKind, p: dict, ell: int, n: int):
    """(alpha, b2, b1, b0, c1, c0) of the reduced equation at the degree-n energy.

    Works elementwise on numpy (possibly complex) parameter values. c1 is the
    physical expression evaluated at the closed-form energy, so c1 = -n*b2 is
    a consequence, not an assumption.
    """
    energy = _energy(kind, p, ell, n)
    if kind is ModelKind.ANHARMONIC:
        w, e, d = p["omega"], p["e"], p["d"]
        s = np.sqrt(2 * d)
        q = e / s
        return (
            0.0, -w, 2 + q, s,
            0.5 * (energy - w * (2 + q)),
            0.25 * (2 * w * s + (ell + 0.5) ** 2 - (q + 1) ** 2),
        )
    if kind is ModelKind.ISOTONIC:
        w, g, a = p["omega"], p["g"], p["a"]
        s = np.sqrt(4 * g + 1)
        wa2 = w * a * a
        return (
            wa2, -1.0, 2.5 - s + ell + wa2, wa2 * (s - 1),
            0.5 * (energy / w + s - ell - 2.5),
            -0.5 * g + 0.5 * (s - 1) * (ell + wa2 + 1.5),
        )
    if kind is ModelKind.SOFT_CORE:
        G, Z, beta = p["G"], p["Z"], p["beta"]
        c = (Z - G) / (n + ell + 2)
        return (
            -beta, -2 * c, 2 * (-beta * c + ell + 2), 2 * (ell + 1) * beta,
            2 * (Z - G - (ell + 2) * c),
            2 * (beta * (ell + 1) * c + beta * G - ell - 1),
        )
    w, dl, lam = p["omega"], p["delta"], p["lambda"]
    ratio = w / dl
    return (
        ratio, -1.0, ratio + ell + 3.5, -2 * ratio,
        0.5 * (energy / w - lam / (w * dl) - ell - 3.5),
        -(lam / (2 * dl * dl) + ratio + ell + 1.5),
    )


def basic_equation(model: ModelSpec, n: int) -> BasicEquation:
    """The reduced equation for a fully parametrized model at degree n."""
    model.validate()
    return BasicEquation(*(float(np.real(v)) for v in coefficients(model.kind, model.params, model.ell, n)))


def _search_region(model: ModelSpec, n: int, free: str):
    """(bounds, log_scale, offset) of the start grid for the free parameter."""
    p, ell = model.params, model.ell
    if free == "Z":
        return (1e-3, 1e3), True, p["G"]
    if free == "G":
        return (-1e3, 1e3), False, 0.0
    if free == "lambda":
        ratio = p["omega"] / p["delta"]
        span = 8 * p["delta"] ** 2 * (n + 1) * (n + 2 + ratio + abs(ell) + 4) + 10
        return (-span, span), False, 0.0
    if free == "d":
        return (1e-4, 1e3), True, 0.0
    if free == "g":
        return (1e-3, 1e4), True, 0.0
    if free == "a":
        return (1e-3, 1e2), True, 0.0
    return (1e-3, 1e3), True, 0.0


def reduce(model: ModelSpec, n: int, free: Optional[str] = None) -> ParamFamily:
    """One-parameter family p -> basic equation, with p the released parameter."""
    free = free or DEFAULT_FREE[model.kind]
    if free not in PARAM_NAMES[model.kind]:
        raise ModelError(f"{model.kind.value}: free parameter {free!r} not in {PARAM_NAMES[model.kind]}")
    if n < 0:
        raise ModelError("degree n must be nonnegative")
    fixed = {k: v for k, v in model.params.items() if k != free}
    ModelSpec(model.kind, fixed, model.ell).validate(allow_missing=(free,))
    kind, ell = model.kind, model.ell
    (lo, hi), log_scale, offset = _search_region(ModelSpec(kind, fixed, ell), n, free)

    def coeffs(p):
        return coefficients(kind, {**fixed, free: p}, ell, n)[:5]

    def target(p):
        return coefficients(kind, {**fixed, free: p}, ell, n)[5]

    positive = free in _POSITIVE[kind]

    def domain(p):
        p = np.real(p)
        if not np.isfinite(p):
            return False
        if positive and p <= 0:
            return False
        if kind is ModelKind.ISOTONIC and free == "g" and p <= -0.25:
            return False
        if kind is ModelKind.SOFT_CORE and free in ("Z", "G") and (fixed.get("Z", p) == fixed.get("G", p)):
            return False
        return True

    return ParamFamily(
        name=free, coefficients=coeffs, target_c0=target,
        bounds=(lo, hi), log_scale=log_scale, domain=domain, offset=offset,
    )


def energy_of(model: ModelSpec, n: int) -> float:
    model.validate()
    return float(_energy(model.kind, model.params, model.ell, n))


def constraint_residual(model: ModelSpec, n: int, roots) -> float:
    """Residual of the model's parameter constraint at degree n, written per model.

    Zero exactly when the parameters admit a degree-n polynomial level with
    these roots.
    """
    p, ell = model.params, model.ell
    roots = np.asarray(roots, dtype=float)
    total = float(roots.sum())
    if model.kind is ModelKind.ANHARMONIC:
        w, s = p["omega"], math.sqrt(2 * p["d"])
        q = p["e"] / s
        return 2 * w * (s + 2 * total) + (ell + 0.5) ** 2 - 4 * n * (n + 1 + q) - (q + 1) ** 2
    if model.kind is ModelKind.ISOTONIC:
        g, wa2 = p["g"], p["omega"] * p["a"] ** 2
        s = math.sqrt(4 * g + 1)
        return n * (n + 1.5 - s + ell + wa2) - total - (-g / 2 + 0.5 * (s - 1) * (ell + wa2 + 1.5))
    if model.kind is ModelKind.SOFT_CORE:
        beta, G = p["beta"], p["G"]
        c = (p["Z"] - G) / (n + ell + 2)
        return n * ((n + 3) / 2 + ell - beta * c) - c * total - (beta * (ell + 1) * c + beta * G - ell - 1)
    ratio = p["omega"] / p["delta"]
    return p["lambda"] / (2 * p["delta"] ** 2) + (n + 1) * (n + ratio + ell + 1.5) - total


def in_range_roots(model: ModelSpec, roots) -> int:
    """Number of roots whose preimage under the variable map is a real r > 0."""
    roots = np.asarray(roots, dtype=float)
    p = model.params
    if model.kind is ModelKind.ISOTONIC:
        edge = p["omega"] * p["a"] ** 2
    elif model.kind is ModelKind.NON_POLYNOMIAL:
        edge = p["omega"] / p["delta"]
    else:
        edge = 0.0
    return int(np.sum(roots > edge))


# -- solved levels --------------------------------------------------------------------


@dataclass(frozen=True)
class QesLevel:
    model: ModelSpec
    n: int
    energy: float
    bethe: BetheSolution
    free_param_name: str
    free_param_value: float
    checks: Dict[str, float] = field(default_factory=dict, compare=False)

    @property
    def roots(self) -> Tuple[float, ...]:
        return self.bethe.roots

    @property
    def node_count(self) -> int:
        return in_range_roots(self.model, self.bethe.roots)

    @property
    def polynomial_coefficients(self) -> Tuple[float, ...]:
        from qesbethe.basic_ode import Polynomial

        return Polynomial.from_roots(self.bethe.roots).coefficients


def physical_problem(model: ModelSpec, n: int) -> Optional[str]:
    """Reason a solved parameter set is unphysical, or None."""
    try:
        model.validate()
    except ModelError as exc:
        return str(exc)
    if model.kind is ModelKind.ISOTONIC and model.params["g"] <= TRIVIAL_G:
        return "isotonic: g = 0 is the pure oscillator, not an isotonic level"
    if model.kind is ModelKind.SOFT_CORE:
        c = (model.params["Z"] - model.params["G"]) / (n + model.ell + 2)
        if not c > 0:
            return f"soft-core: c = {c:.6g} <= 0, exp(-c(r+beta)) does not decay"
    return None


def oracle_c0_deviation(eq: BasicEquation, n: int, c0: float) -> float:
    levels = oracle_solutions(eq, n)
    return float(min(abs(level.c0 - c0) for level in levels))


def solve_level(model: ModelSpec, n: int, free: Optional[str] = None, cfg: SolverConfig = SolverConfig(),
                verify: bool = True) -> List[QesLevel]:
    """All QES levels of degree n, solving jointly for the free parameter.

    With `verify`, each level must also match a matrix-oracle eigenvalue and a
    finite-difference eigenvalue of the radial equation; levels that fail are
    dropped with a warning.
    """
    free = free or DEFAULT_FREE[model.kind]
    family = reduce(model, n, free)
    levels = []
    for value, sol in solve_joint(family, n, cfg):
        filled = model.with_param(free, value)
        problem = physical_problem(filled, n)
        if problem:
            log.info("rejected %s = %.12g: %s", free, value, problem)
            continue
        level = QesLevel(filled, n, energy_of(filled, n), sol, free, value)
        resid = constraint_residual(filled, n, sol.roots)
        checks = {"constraint_residual": abs(resid)}
        if verify:
            from qesbethe.verifier import fd_check

            eq = family.equation(value)
            checks["oracle_c0_deviation"] = oracle_c0_deviation(eq, n, sol.c0)
            fd = fd_check(level)
            checks["fd_energy_deviation"] = fd.deviation
            checks["fd_nodes"] = fd.nodes
            if checks["oracle_c0_deviation"] > 1e-8 or not fd.passed:
                log.warning("dropping level %s=%.12g E=%.12g: %s", free, value, level.energy, checks)
                continue
        levels.append(replace(level, checks=checks))
    return levels


# -- closed-form n = 0 and n = 1 references ----------------------------------------


@dataclass(frozen=True)
class ReferenceLevel:
    free_param_name: str
    free_param_value: float
    energy: float
    root: Optional[float] = None


def _quadratic_branches(a: float, b: float, c: float):
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    r = math.sqrt(disc)
    return [(-b + r) / (2 * a), (-b - r) / (2 * a)]


def closed_form(kind: ModelKind, n: int, ell: int, **params) -> List[ReferenceLevel]:
    """Explicit n = 0 / n = 1 formulas, independent of the Newton solver.

    Returns every real solution (possibly none). The released parameter is the
    default one for each model; all others are given in `params`.
    """
    kind = ModelKind.parse(kind) if isinstance(kind, str) else kind
    if n not in (0, 1):
        raise ValueError("closed forms exist for n = 0 and n = 1 only")
    fn = {
        ModelKind.ANHARMONIC: _closed_anharmonic,
        ModelKind.ISOTONIC: _closed_isotonic,
        ModelKind.SOFT_CORE: _closed_softcore,
        ModelKind.NON_POLYNOMIAL: _closed_nonpoly,
    }[kind]
    return fn(n, ell, **params)


def _closed_anharmonic(n, ell, e, d):
    s = math.sqrt(2 * d)
    q = e / s
    if n == 0:
        w = ((q + 1) ** 2 - (ell + 0.5) ** 2) / (2 * s)
        return [ReferenceLevel("omega", w, w * (2 + q))] if w > 0 else []
    # squared n = 1 constraint is quadratic in u = 2 w sqrt(2d)
    k = q * q + 5 + 4 * q - (ell + 0.5) ** 2
    out = []
    for u in _quadratic_branches(1.0, -(2 * k + 8), k * k - 4 * (2 + q) ** 2):
        w = u / (2 * s)
        if not w > 0:
            continue
        b1 = 2 + q
        root = math.sqrt(b1 * b1 + 4 * w * s)
        for t1 in ((b1 + root) / (2 * w), (b1 - root) / (2 * w)):
            # keep the branch satisfying the unsquared constraint
            lhs = 2 * w * (s + 2 * t1) + (ell + 0.5) ** 2
            rhs = 4 * (2 + q) + (q + 1) ** 2
            if abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs)):
                out.append(ReferenceLevel("omega", w, w * (4 + q), t1))
    return sorted(out, key=lambda r: r.free_param_value)


def _closed_isotonic(n, ell, omega, a):
    wa2 = omega * a * a
    if n == 0:
        g = 2 * (ell + 1 + wa2) * (2 * ell + 3 + 2 * wa2)
        return [ReferenceLevel("g", g, -omega * (2.5 + 3 * ell + 4 * wa2))] if g > TRIVIAL_G else []
    out = []
    for s in isotonic_n1_s_candidates(ell, wa2):
        g = (s * s - 1) / 4
        if g <= TRIVIAL_G:
            continue
        s1, s2 = 0.5 * (1 - s), ell + 1.5
        base = 2 * s1 + s2
        disc = base ** 2 + wa2 * (2 * s2 - 4 * s1 + wa2)
        if disc < 0:
            continue
        for t1 in (0.5 * (base + wa2 + math.sqrt(disc)), 0.5 * (base + wa2 - math.sqrt(disc))):
            lhs = g + 6.5 + 3 * (ell + wa2)
            rhs = 2 * t1 + (ell + wa2 + 3.5) * s
            if abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs)):
                out.append(ReferenceLevel("g", g, omega * (ell + 4.5 - s), t1))
    return sorted(out, key=lambda r: r.free_param_value)


def isotonic_n1_s_candidates(ell: float, wa2: float) -> List[float]:
    """Roots s = sqrt(4g+1) >= 1 of the squared n = 1 isotonic constraint.

    With g = (s^2-1)/4 the constraint
        g + 2(l + A + 2) - (5/2 + l + A) s = +-sqrt((5/2 + l - s)^2 + A(2l + A + 1 + 2s))
    becomes a quartic in s after squaring.
    """
    from numpy.polynomial import polynomial as P

    lhs = np.array([-0.25 + 2 * (ell + wa2 + 2), -(2.5 + ell + wa2), 0.25])
    rhs = np.array([(2.5 + ell) ** 2 + wa2 * (2 * ell + wa2 + 1), -2 * (2.5 + ell) + 2 * wa2, 1.0])
    quartic = P.polysub(P.polymul(lhs, lhs), rhs)
    from qesbethe.oracle import poly_roots

    out = []
    for root in poly_roots(quartic):
        if abs(root.imag) <= 1e-9 * (1 + abs(root.real)) and root.real >= 1.0:
            s = float(root.real)
            # polish on the quartic
            for _ in range(3):
                f = P.polyval(s, quartic)
                df = P.polyval(s, P.polyder(quartic))
                if df:
                    s -= f / df
            out.append(s)
    return sorted(out)


def isotonic_radical_g(ell: float, wa2: float) -> complex:
    """The explicit radical expression for the n = 1 isotonic g (reference datum only)."""
    l, w = ell, wa2
    inner = (
        -1380 * l - 108 * w - 1443 * l ** 2 - 3246 * l * w - 507 * w ** 2
        - 2556 * l ** 2 * w - 3276 * l * w ** 2 - 624 * l ** 3 * w - 1224 * (l * w) ** 2
        - 1008 * l * w ** 2 - 612 * l ** 3 - 1332 * w ** 3 - 108 * l ** 4 - 300 * w ** 4 - 450
    )
    A = (
        -15 * l + 93 * w - 30 * l ** 2 - 60 * l * w - 30 * w ** 2
        - 24 * l ** 2 * w - 24 * l * w ** 2 - 8 * l ** 3 - 8 * w ** 3 + 53
        + 3 * np.sqrt(complex(inner))
    )
    B = 38 + 8 * l ** 2 + 16 * l * w + 20 * l + 8 * w ** 2 + 20 * w
    C = 8 * w + 8 * l + 19
    cube = complex(A) ** (1.0 / 3.0)
    x = 2 * cube + B / cube + C
    return -0.25 + x * x / 36


def _closed_softcore(n, ell, G, beta):
    if n == 0:
        if ell + 1 == 0:
            return []
        Z = (ell + 2) / beta - G / (ell + 1)
        c = (Z - G) / (ell + 2)
        return [ReferenceLevel("Z", Z, -0.5 * c * c)] if c > 0 else []
    # eliminate t1 between the linear constraint and the n = 1 quadratic
    P_ = 2 * ell + 3 - beta * G
    qa = beta * beta * (ell + 2) * (ell + 1)
    qb = -beta * ((ell + 2) * (P_ - ell - 2) + (ell + 1) * P_ + (ell + 1))
    qc = P_ * (P_ - ell - 2)
    roots = _quadratic_branches(qa, qb, qc) if qa else ([-qc / qb] if qb else [])
    out = []
    for c in roots:
        if not c > 0:
            continue
        Z = G + (ell + 3) * c
        disc = beta * beta * c * c + 2 * ell * beta * c + (ell + 2) ** 2
        if disc < 0:
            continue
        for sign in (1, -1):
            t1 = (-beta * c + ell + 2 + sign * math.sqrt(disc)) / (2 * c)
            if abs(c * t1 + beta * (ell + 2) * c - P_) <= 1e-9 * max(1.0, abs(P_)):
                out.append(ReferenceLevel("Z", Z, -0.5 * c * c, t1))
    return sorted(out, key=lambda r: r.free_param_value)


def _closed_nonpoly(n, ell, omega, delta):
    ratio = omega / delta
    if n == 0:
        lam = 2 * delta ** 2 * (-ratio - ell - 1.5)
        return [ReferenceLevel("lambda", lam, lam / delta + omega * (ell + 3.5))]
    out = []
    disc = ratio ** 2 + ratio * (2 * ell - 1) + (ell + 3.5) ** 2
    if disc < 0:
        return []
    for sign in (1, -1):
        t1 = 0.5 * (ratio + ell + 3.5 + sign * math.sqrt(disc))
        lam = 2 * delta ** 2 * (t1 - 2 * (ratio + ell + 2.5))
        out.append(ReferenceLevel("lambda", lam, lam / delta + omega * (ell + 5.5), t1))
    return sorted(out, key=lambda r: r.free_param_value)


# -- wavefunctions -------------------------------------------------------------------


@dataclass(frozen=True)
class RadialWavefunction:
    """prefactor(r) * prod_i (t(r) - t_i), unnormalized.

    `prefactor` maps descriptor keys to exponents:
        power       r**power
        exp_r2      exp(exp_r2 * r^2)
        exp_inv_r2  exp(exp_inv_r2 / r^2)
        exp_r       exp(exp_r * r)
        exp_const   exp(exp_const)
        factor      (label, exponent): the rational factor raised to exponent
    """

    model: ModelSpec
    prefactor: Dict[str, object]
    polynomial_roots: Tuple[float, ...]
    variable_map: str

    def t_of_r(self, r):
        p = self.model.params
        kind = self.model.kind
        if kind is ModelKind.ANHARMONIC:
            return r * r
        if kind is ModelKind.ISOTONIC:
            return p["omega"] * (r * r + p["a"] ** 2)
        if kind is ModelKind.SOFT_CORE:
            return r
        return p["omega"] * r * r + p["omega"] / p["delta"]

    def _factor(self, r):
        p = self.model.params
        kind = self.model.kind
        if kind is ModelKind.ISOTONIC:
            return r * r + p["a"] ** 2
        if kind is ModelKind.SOFT_CORE:
            return r + p["beta"]
        if kind is ModelKind.NON_POLYNOMIAL:
            return 1 + p["delta"] * r * r
        return np.ones_like(r)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise ValueError("wavefunction is defined for r > 0")
        pf = self.prefactor
        log_mag = pf.get("power", 0.0) * np.log(r)
        log_mag = log_mag + pf.get("exp_r2", 0.0) * r * r + pf.get("exp_r", 0.0) * r + pf.get("exp_const", 0.0)
        if pf.get("exp_inv_r2", 0.0):
            log_mag = log_mag + pf["exp_inv_r2"] / (r * r)
        if "factor" in pf:
            log_mag = log_mag + pf["factor"][1] * np.log(self._factor(r))
        t = self.t_of_r(r)
        poly = np.ones_like(r)
        for root in self.polynomial_roots:
            poly = poly * (t - root)
        return np.exp(log_mag) * poly


def wavefunction(level: QesLevel) -> RadialWavefunction:
    m = level.model
    p, ell = m.params, m.ell
    roots = tuple(level.bethe.roots)
    if m.kind is ModelKind.ANHARMONIC:
        s = math.sqrt(2 * p["d"])
        pref = {"power": 1.5 + p["e"] / s, "exp_r2": -p["omega"] / 2, "exp_inv_r2": -s / 2}
        vmap = "t = r^2"
    elif m.kind is ModelKind.ISOTONIC:
        b = -0.5 - 0.5 * math.sqrt(4 * p["g"] + 1)
        pref = {"power": ell + 1.0, "exp_r2": -p["omega"] / 2, "factor": ("r^2 + a^2", b + 1)}
        vmap = "t = omega r^2 + omega a^2"
    elif m.kind is ModelKind.SOFT_CORE:
        c = (p["Z"] - p["G"]) / (level.n + ell + 2)
        pref = {"power": ell + 1.0, "exp_r": -c, "exp_const": -c * p["beta"], "factor": ("r + beta", 1.0)}
        vmap = "t = r"
    else:
        pref = {"power": ell + 1.0, "exp_r2": -p["omega"] / 2, "factor": ("1 + delta r^2", 1.0)}
        vmap = "t = omega r^2 + omega/delta"
    return RadialWavefunction(m, pref, roots, vmap)

"""Finite-difference arbitration between competing coefficient variants.

Two reduced-equation coefficients are commonly printed in forms that differ
from the ones re-derived here:

* soft-core b0: derived 2(l+1)beta, against 2(l+2)beta and (l+1)beta;
* non-polynomial c0: derived lambda/(2 delta^2), against lambda/(4 delta^2).

For every variant this module solves the joint system for the free parameter
and checks whether the resulting energy is an eigenvalue of the radial
equation. Only a correct variant produces energies the FD spectrum confirms.

Run ``python -m qesbethe.arbitration [path]`` to regenerate the report.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from qesbethe.bethe import ParamFamily, SolverConfig, solve_joint
from qesbethe.models import ModelKind, ModelSpec, coefficients, energy_of, in_range_roots, reduce
from qesbethe.verifier import match_energy


@dataclass(frozen=True)
class VariantResult:
    label: str
    derived: bool
    n: int
    free_value: Optional[float]
    energy: Optional[float]
    roots: tuple
    fd_deviation: Optional[float]
    fd_tolerance: Optional[float]

    @property
    def confirmed(self) -> bool:
        return self.fd_deviation is not None and self.fd_deviation <= self.fd_tolerance


def _family_with(model: ModelSpec, n: int, patch: Callable) -> ParamFamily:
    """reduce() with one coefficient overridden by patch(p, coeff6) -> coeff6."""
    base = reduce(model, n)
    fixed = {k: v for k, v in model.params.items() if k != base.name}

    def full(p):
        return patch(p, list(coefficients(model.kind, {**fixed, base.name: p}, model.ell, n)))

    return ParamFamily(
        name=base.name,
        coefficients=lambda p: tuple(full(p)[:5]),
        target_c0=lambda p: full(p)[5],
        bounds=base.bounds, log_scale=base.log_scale, domain=base.domain, offset=base.offset,
    )


def _run(label: str, derived: bool, model: ModelSpec, n: int, patch: Callable) -> List[VariantResult]:
    family = _family_with(model, n, patch)
    out = []
    for value, sol in solve_joint(family, n, SolverConfig()):
        filled = model.with_param(family.name, value)
        if model.kind is ModelKind.SOFT_CORE and (value - model.params["G"]) <= 0:
            continue
        energy = energy_of(filled, n)
        fd = match_energy(filled, energy, n, in_range_roots(filled, sol.roots), richardson=False)
        out.append(VariantResult(label, derived, n, value, energy, sol.roots, fd.deviation, fd.tolerance))
    if not out:
        out.append(VariantResult(label, derived, n, None, None, (), None, None))
    return out


def softcore_b0_variants(ell: int = 0, beta: float = 1.0, G: float = 0.5) -> List[VariantResult]:
    model = ModelSpec(ModelKind.SOFT_CORE, {"G": G, "beta": beta}, ell)
    variants = [
        ("b0 = 2(l+1) beta", True, 2 * (ell + 1) * beta),
        ("b0 = 2(l+2) beta", False, 2 * (ell + 2) * beta),
        ("b0 = (l+1) beta", False, (ell + 1) * beta),
    ]
    rows = []
    for label, derived, b0 in variants:
        def patch(p, c, b0=b0):
            c[3] = b0
            return c

        for n in (0, 1):
            rows.extend(_run(label, derived, model, n, patch))
    return rows


def nonpoly_lambda_variants(ell: int = 0, omega: float = 1.0, delta: float = 1.0) -> List[VariantResult]:
    model = ModelSpec(ModelKind.NON_POLYNOMIAL, {"omega": omega, "delta": delta}, ell)
    ratio = omega / delta
    rows = []
    for label, derived, denom in (("c0 with lambda/(2 delta^2)", True, 2.0), ("c0 with lambda/(4 delta^2)", False, 4.0)):
        def patch(p, c, denom=denom):
            c[5] = -(p / (denom * delta * delta) + ratio + ell + 1.5)
            return c

        for n in (0, 1):
            rows.extend(_run(label, derived, model, n, patch))
    return rows


def _fmt(x: Optional[float], spec: str = ".10g") -> str:
    return "—" if x is None else format(x, spec)


def _table(rows: List[VariantResult], free: str) -> List[str]:
    lines = [
        f"| variant | n | {free} | E | roots | FD deviation | confirmed |",
        "|---|---|---|---|---|---|---|",
    ]
    for r in rows:
        roots = ", ".join(format(t, ".8g") for t in r.roots) or "—"
        lines.append(
            f"| {r.label}{' (derived)' if r.derived else ''} | {r.n} | {_fmt(r.free_value)} | {_fmt(r.energy)} "
            f"| {roots} | {_fmt(r.fd_deviation, '.2e')} | {'yes' if r.confirmed else 'no'} |"
        )
    return lines


def report() -> str:
    soft = softcore_b0_variants()
    nonpoly = nonpoly_lambda_variants()
    lines = [
        "# Coefficient arbitration",
        "",
        "Generated by `python -m qesbethe.arbitration`. Each coefficient variant is fed to the",
        "joint Bethe-ansatz solve. The resulting energy is then compared against a three-point",
        "finite-difference spectrum of the radial equation (tolerance max(1e-4, 1e-4|E|)).",
        "",
        "## Soft-core Coulomb: the constant term b0",
        "",
        "Substituting u = (r+beta) r^(l+1) exp(-c(r+beta)) phi(r) into the radial equation and",
        "multiplying by 2 r (r+beta) gives",
        "",
        "    r(r+beta) phi'' + [-2c r^2 + 2(l+2-beta c) r + 2(l+1) beta] phi' + ... = 0,",
        "",
        "so b0 = 2(l+1) beta, together with b2 = -2c and b1 = 2(l+2-beta c). The printed",
        "variants differ from this in two ways. One has (l+2) beta in the constant term of the",
        "phi' coefficient. The other has b0 = (l+1) beta, which drops the factor 2 carried by",
        "the other coefficients. Parameters: l = 0, beta = 1, G = 0.5, free parameter Z.",
        "",
        *_table(soft, "Z"),
        "",
        "b0 does not enter at n = 0, so every variant reproduces Z = 1.5, E = -0.125 there.",
        "At n = 1 only the derived b0 = 2(l+1) beta gives energies the FD spectrum confirms.",
        "Dividing its n = 1 Bethe equation by 2 gives c t^2 - (l+2-beta c) t - (l+1) beta = 0,",
        "the commonly printed n = 1 root equation. The (l+1) beta form is therefore the",
        "halved normalization, not a different coefficient. The (l+2) beta form is a misprint.",
        "",
        "## Non-polynomial oscillator: the lambda term in c0",
        "",
        "The gauge u = (1 + delta r^2) r^(l+1) exp(-omega r^2/2) xi(t), with",
        "t = omega r^2 + omega/delta, gives c0 = -(lambda/(2 delta^2) + omega/delta + l + 3/2).",
        "A printed form has lambda/(4 delta^2). Parameters: l = 0, omega = delta = 1, free parameter lambda.",
        "",
        *_table(nonpoly, "lambda"),
        "",
        "Only lambda/(2 delta^2) is confirmed. The lambda/(4 delta^2) form predicts lambda = -10,",
        "E0 = -6.5 for omega = delta = 1, l = 0. The FD spectrum of that potential has no",
        "eigenvalue near -6.5; its lowest eigenvalues are about -5.145 and -3.409.",
        "",
    ]
    return "\n".join(lines)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    text = report()
    if argv:
        with open(argv[0], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())

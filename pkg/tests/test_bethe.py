import math

import numpy as np
import pytest

from qesbethe.basic_ode import BasicEquation, Polynomial, residual
from qesbethe.bethe import (
    ParamFamily,
    SolverConfig,
    bae_jacobian,
    bae_residual_vec,
    c0_from_roots,
    solve_bae,
    solve_joint,
)
from qesbethe.errors import InconsistentFamilyError, NotQesError, SingularConfigurationError
from qesbethe.models import ModelKind, ModelSpec, reduce
from qesbethe.oracle import oracle_solutions

SQRT13 = math.sqrt(13.0)
# anharmonic form with omega = 1, e/sqrt(2d) = 1, sqrt(2d) = 1
ANH = BasicEquation(0.0, -1.0, 3.0, 1.0, 1.0)


def test_n1_residual_vanishes_at_printed_root():
    t1 = (3 + SQRT13) / 2
    assert abs(bae_residual_vec(ANH, [t1])[0]) < 1e-13


def test_n1_residual_sign_follows_quadratic_slope():
    t1 = (3 + SQRT13) / 2
    slope = -2 * t1 + 3  # derivative of -t^2 + 3t + 1 at t1
    assert np.sign(bae_residual_vec(ANH, [t1 + 0.1])[0]) == np.sign(slope)


def test_coincident_roots_rejected():
    eq = BasicEquation(0.5, -1.0, 3.0, 1.0, 2.0)
    with pytest.raises(SingularConfigurationError):
        bae_residual_vec(eq, [1.0, 1.0])
    with pytest.raises(SingularConfigurationError):
        bae_residual_vec(eq, [0.5, 2.0])


def test_jacobian_matches_finite_differences():
    eq = BasicEquation(0.7, -1.2, 2.5, -0.3, 3.6)
    x = np.array([-1.3, 1.9, 3.4])
    jac = bae_jacobian(eq, x)
    h = 1e-6
    for j in range(3):
        dx = np.zeros(3)
        dx[j] = h
        col = (bae_residual_vec(eq, x + dx) - bae_residual_vec(eq, x - dx)) / (2 * h)
        assert np.allclose(jac[:, j], col, rtol=1e-6, atol=1e-6)


def test_c0_from_roots_examples():
    eq = BasicEquation(0.0, -1.0, 3.0, 1.0, 1.0)
    assert c0_from_roots(eq, 0, []) == 0.0
    t1 = (3 + SQRT13) / 2
    assert c0_from_roots(eq, 1, [t1]) == pytest.approx(3 - t1)
    assert c0_from_roots(BasicEquation(0.0, -1.0, 0.0, 0.0, 2.0), 2, [1.0, 2.0]) == -1.0


def test_solve_bae_n0():
    (sol,) = solve_bae(BasicEquation(1.0, -1.0, 2.0, 1.0, 0.0), 0)
    assert sol.roots == () and sol.c0 == 0.0


def test_solve_bae_n1_example():
    sols = solve_bae(ANH, 1)
    assert len(sols) == 2
    roots = sorted(s.roots[0] for s in sols)
    assert roots == pytest.approx([(3 - SQRT13) / 2, (3 + SQRT13) / 2], rel=1e-13)
    for s in sols:
        assert s.c0 == pytest.approx(3 - s.roots[0], abs=1e-13)
        assert s.bae_residual_norm <= 1e-10


def test_solve_bae_n2_isotonic_form_against_oracle():
    model = ModelSpec(ModelKind.ISOTONIC, {"omega": 1.0, "a": 1.0}, 0)
    family = reduce(model, 2)
    pairs = solve_joint(family, 2)
    assert pairs
    for g, _ in pairs:
        eq = family.equation(g)
        sols = solve_bae(eq, 2)
        # g = 0 puts oracle roots on the singular point t = 0; those are not BAE solutions
        oracle = [
            lv for lv in oracle_solutions(eq, 2)
            if lv.all_real and lv.simple_roots and np.all(np.abs(lv.real_roots) > 1e-8)
            and np.all(np.abs(lv.real_roots - eq.alpha) > 1e-8)
        ]
        assert len(sols) == len(oracle)
        for sol, lv in zip(sols, oracle):
            assert np.allclose(sol.roots, lv.real_roots, rtol=1e-9, atol=1e-9)


def test_not_qes_rejected():
    with pytest.raises(NotQesError):
        solve_bae(BasicEquation(0.0, -1.0, 3.0, 1.0, 0.5), 1)


def test_solutions_certified_by_residual():
    rng = np.random.default_rng(11)
    eq = BasicEquation(1.5, -0.8, 2.5, -1.0, 0.8 * 4)
    for sol in solve_bae(eq, 4):
        s = Polynomial.from_roots(sol.roots)
        for t in rng.uniform(-5, 5, 32):
            assert abs(residual(eq.with_c0(sol.c0), s, t)) <= 1e-9 * (1 + abs(t) ** 6)


def test_determinism_and_start_permutation():
    eq = BasicEquation(-1.2, -1.0, 4.0, 0.5, 5.0)
    cfg = SolverConfig(seed=7, warm_start=False)
    a, b = solve_bae(eq, 5, cfg), solve_bae(eq, 5, cfg)
    assert a == b
    warm = [lv.real_roots for lv in oracle_solutions(eq, 5) if lv.all_real and lv.simple_roots]
    rng = np.random.default_rng(0)
    shuffled = [rng.permutation(w) for w in warm[::-1]]
    with_starts = solve_bae(eq, 5, cfg, extra_starts=shuffled)
    plain = solve_bae(eq, 5, SolverConfig(seed=7))
    assert [s.roots for s in with_starts] == pytest.approx([s.roots for s in plain], rel=1e-10)


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(newton_tol=1e-6)
    with pytest.raises(ValueError):
        SolverConfig(damping=0.0)
    with pytest.raises(ValueError):
        SolverConfig(num_starts=0)


def test_joint_isotonic_g():
    family = reduce(ModelSpec(ModelKind.ISOTONIC, {"omega": 1.0, "a": 1.0}, 0), 0)
    # g = 0 (pure oscillator) also solves the joint system; solve_level rejects it
    values = [g for g, _ in solve_joint(family, 0)]
    assert len(values) == 2
    assert abs(values[0]) < 1e-12
    assert values[1] == pytest.approx(20.0, rel=1e-12)


def test_joint_softcore_z():
    family = reduce(ModelSpec(ModelKind.SOFT_CORE, {"G": 0.5, "beta": 1.0}, 0), 0)
    values = [z for z, _ in solve_joint(family, 0)]
    assert values == pytest.approx([1.5], rel=1e-12)


def test_joint_nonpoly_lambda_derived_value():
    family = reduce(ModelSpec(ModelKind.NON_POLYNOMIAL, {"omega": 1.0, "delta": 1.0}, 0), 0)
    ((lam, _),) = solve_joint(family, 0)
    assert lam == pytest.approx(-5.0, rel=1e-12)


def test_inconsistent_family():
    family = ParamFamily("p", lambda p: (0.0, -1.0, 2.0, 1.0, 0.5 * p), lambda p: 0.0, (0.1, 10.0))
    with pytest.raises(InconsistentFamilyError):
        solve_joint(family, 1)

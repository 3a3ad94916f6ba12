import math

import numpy as np
import pytest

from qesbethe.errors import DomainError
from qesbethe.models import ModelKind, ModelSpec, solve_level, wavefunction
from qesbethe.verifier import (
    RadialGrid,
    count_nodes,
    default_grid,
    effective_potential,
    fd_check,
    fd_spectrum,
    match_energy,
)

HARMONIC = ModelSpec(ModelKind.ISOTONIC, {"omega": 1.0, "g": 0.0, "a": 1.0}, 0)


def test_anharmonic_bracket_at_one():
    m = ModelSpec(ModelKind.ANHARMONIC, {"omega": 1.3, "e": 0.7, "d": 0.2}, 0)
    assert effective_potential(m)(1.0) == pytest.approx(0.5 * (1.3 ** 2 + 2 * 0.7 + 2 * 0.2))


def test_isotonic_term_vanishes_at_a():
    m = ModelSpec(ModelKind.ISOTONIC, {"omega": 1.0, "g": 20.0, "a": 1.5}, 2)
    r = 1.5
    assert effective_potential(m)(r) == pytest.approx(3.0 / r ** 2 + 0.5 * r ** 2)


def test_softcore_without_g():
    m = ModelSpec(ModelKind.SOFT_CORE, {"G": 0.0, "Z": 1.0, "beta": 0.5}, 1)
    assert effective_potential(m)(2.0) == pytest.approx(1.0 / 4.0 - 1.0 / 2.5)


def test_nonpositive_r_rejected():
    with pytest.raises(DomainError):
        effective_potential(HARMONIC)(np.array([0.0, 1.0]))


def test_grid_invariants():
    with pytest.raises(ValueError):
        RadialGrid(1.0, 0.5)
    with pytest.raises(ValueError):
        RadialGrid(0.1, 1.0, 100)
    g = RadialGrid(0.0 + 1e-3, 12.0, 4000)
    assert g.r.size == 4000
    assert g.r[0] - g.r_min == pytest.approx(g.spacing)
    assert g.refined().spacing == pytest.approx(g.spacing / 2)


def test_harmonic_limit():
    spec = fd_spectrum(HARMONIC, RadialGrid(1e-6, 12.0, 4000), 3)
    assert spec.eigenvalues == pytest.approx([1.5, 3.5, 5.5], abs=2e-5)
    assert abs(spec.eigenvalues[0] - 1.5) < 1e-5


def test_hydrogen_limit():
    m = ModelSpec(ModelKind.SOFT_CORE, {"G": 0.0, "Z": 1.0, "beta": 1e-4}, 0)
    check = match_energy(m, -0.5)
    # O(beta) shift: the soft core weakens the attraction
    assert 0 < check.fd_energy + 0.5 < 1e-3


def test_isotonic_golden_oracle_run():
    m = ModelSpec(ModelKind.ISOTONIC, {"omega": 1.0, "g": 20.0, "a": 1.0}, 0)
    check = match_energy(m, -6.5)
    assert check.deviation < 1e-4 and check.index == 0 and check.nodes == 0


def test_eigenvectors_orthonormal_trapezoid():
    spec = fd_spectrum(HARMONIC, RadialGrid(1e-6, 12.0, 2000), 4)
    h = spec.grid.spacing
    gram = h * spec.eigenvectors.T @ spec.eigenvectors
    assert np.abs(gram - np.eye(4)).max() < 1e-8


def test_ground_state_nodes():
    spec = fd_spectrum(HARMONIC, RadialGrid(1e-6, 12.0, 2000), 3)
    assert [count_nodes(spec.eigenvectors[:, k]) for k in range(3)] == [0, 1, 2]


def test_count_nodes_synthetic():
    x = np.linspace(0, 1, 2001)[1:-1]
    assert count_nodes(np.sin(4 * math.pi * x)) == 3
    assert count_nodes(np.zeros(5)) == 0
    # sub-floor wiggles are ignored
    assert count_nodes(np.array([1.0, 1e-12, -1e-12, 1.0])) == 0


def test_softcore_n1_wavefunction_one_node():
    model = ModelSpec(ModelKind.SOFT_CORE, {"G": 0.5, "beta": 1.0}, 0)
    excited = [lv for lv in solve_level(model, 1, verify=False) if lv.roots[0] > 0]
    assert len(excited) == 1
    r = np.linspace(1e-3, 80, 20000)
    assert count_nodes(wavefunction(excited[0])(r)) == 1


def test_anharmonic_adaptive_wall():
    m = ModelSpec(ModelKind.ANHARMONIC, {"omega": 4.375, "e": 2.0, "d": 0.5}, 0)
    g = default_grid(m, 17.5)
    s = math.sqrt(2 * 0.5)
    assert math.exp(-s / (2 * g.r_min ** 2)) < 1e-14
    assert effective_potential(m)(g.r_min) > 17.5 + 1e3


def test_fd_check_on_solved_levels():
    model = ModelSpec(ModelKind.NON_POLYNOMIAL, {"omega": 1.0, "delta": 1.0}, 1)
    for level in solve_level(model, 1, verify=False):
        check = fd_check(level)
        assert check.passed and check.index_consistent
        assert check.richardson_deviation < 1e-5

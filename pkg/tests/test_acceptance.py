"""Acceptance criteria, one test per criterion.

Each criterion prints a single line ``CRITERION k: PASS|FAIL - ...``; the lines
are repeated in the pytest terminal summary. Run as a script for the lines
alone: ``python3 tests/test_acceptance.py``.
"""

import functools
import json
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from qesbethe.arbitration import nonpoly_lambda_variants, report, softcore_b0_variants
from qesbethe.basic_ode import BasicEquation, Polynomial, relative_residual, residual
from qesbethe.bethe import solve_bae
from qesbethe.driver import main as driver_main
from qesbethe.models import (
    ModelKind,
    ModelSpec,
    constraint_residual,
    isotonic_radical_g,
    solve_level,
    wavefunction,
)
from qesbethe.oracle import invariant_matrix, oracle_solutions
from qesbethe.sl2 import algebraized_h, casimir, commutator_report
from qesbethe.verifier import RadialGrid, fd_check, fd_spectrum, match_energy

ROOT = Path(__file__).resolve().parents[1]
FD_TOL = 1e-4


def _golden_n0(kind, params, free_value, energy, ell=0):
    """Solve the n = 0 level and compare against the expected values and the FD spectrum."""
    (level,) = solve_level(ModelSpec(kind, params, ell), 0)
    fd = fd_check(level)
    ok = (
        math.isclose(level.free_param_value, free_value, rel_tol=1e-10)
        and math.isclose(level.energy, energy, rel_tol=1e-10)
        and abs(fd.fd_energy - energy) <= FD_TOL
        and fd.nodes == 0
    )
    detail = (f"{level.free_param_name}={level.free_param_value:.12g} (want {free_value:g}), "
              f"E0={level.energy:.12g} (want {energy:g}), FD E={fd.fd_energy:.8f} "
              f"|dE|={abs(fd.fd_energy - energy):.1e}, nodes={fd.nodes}")
    return ok, level, detail


def criterion_1():
    start = time.perf_counter()
    ok, _, detail = _golden_n0(ModelKind.ANHARMONIC, {"e": 2.0, "d": 0.5}, 4.375, 17.5)
    elapsed = time.perf_counter() - start
    return ok and elapsed < 5.0, f"{detail}, {elapsed:.2f} s"


def criterion_2():
    start = time.perf_counter()
    ok, level, detail = _golden_n0(ModelKind.ISOTONIC, {"omega": 1.0, "a": 1.0}, 20.0, -6.5)
    exponent = wavefunction(level).prefactor["factor"][1]
    elapsed = time.perf_counter() - start
    ok = ok and abs(exponent - (-4.0)) < 1e-12 and elapsed < 5.0
    return ok, f"{detail}, exponent={exponent:.12g} (want -4), {elapsed:.2f} s"


def criterion_3():
    return _golden_n0(ModelKind.SOFT_CORE, {"G": 0.5, "beta": 1.0}, 1.5, -0.125)[::2]


def criterion_4():
    target_lambda, target_e = -10.0, -6.5
    params = {"omega": 1.0, "delta": 1.0}
    (level,) = solve_level(ModelSpec(ModelKind.NON_POLYNOMIAL, params, 0), 0, verify=False)
    # independent of the solver: is -6.5 an eigenvalue of the lambda = -10 potential?
    fd = match_energy(ModelSpec(ModelKind.NON_POLYNOMIAL, {**params, "lambda": target_lambda}, 0),
                      target_e, richardson=False)
    ok = (
        math.isclose(level.free_param_value, target_lambda, rel_tol=1e-10)
        and math.isclose(level.energy, target_e, rel_tol=1e-10)
        and fd.deviation <= FD_TOL
    )
    return ok, (f"solved lambda={level.free_param_value:.12g} (want {target_lambda:g}), "
                f"E0={level.energy:.12g} (want {target_e:g}); FD at lambda={target_lambda:g}: "
                f"nearest eigenvalue {fd.fd_energy:.6f}, |dE|={fd.deviation:.3g}")


def _anharmonic_t1(m):
    s = math.sqrt(2 * m.params["d"])
    w, b = m.params["omega"], 2 + m.params["e"] / s
    root = math.sqrt(b * b + 4 * w * s)
    return [(b + root) / (2 * w), (b - root) / (2 * w)]


def _isotonic_t1(m):
    p, ell = m.params, m.ell
    s1 = (1 - math.sqrt(4 * p["g"] + 1)) / 2
    s2 = ell + 1.5
    A = p["omega"] * p["a"] ** 2
    root = math.sqrt((2 * s1 + s2) ** 2 + A * (2 * s2 - 4 * s1 + A))
    return [0.5 * (2 * s1 + s2 + A + root), 0.5 * (2 * s1 + s2 + A - root)]


def _softcore_t1(m):
    p, ell = m.params, m.ell
    beta = p["beta"]
    c = (p["Z"] - p["G"]) / (ell + 3)
    b = -beta * c + ell + 2
    root = math.sqrt(b * b + 4 * c * (ell + 1) * beta)
    return [(b + root) / (2 * c), (b - root) / (2 * c)]


def _nonpoly_t1(m):
    p, ell = m.params, m.ell
    r = p["omega"] / p["delta"]
    b = r + ell + 3.5
    root = math.sqrt(b * b - 8 * r)
    return [(b + root) / 2, (b - root) / 2]


QUADRATIC_CASES = {
    ModelKind.ANHARMONIC: (_anharmonic_t1, [{"e": 2.0, "d": 0.5}, {"e": 1.0, "d": 0.2}, {"e": 3.0, "d": 1.0}]),
    ModelKind.ISOTONIC: (_isotonic_t1, [{"omega": 1.0, "a": 1.0}, {"omega": 0.5, "a": 1.5}, {"omega": 2.0, "a": 0.5}]),
    ModelKind.SOFT_CORE: (_softcore_t1, [{"G": 0.5, "beta": 1.0}, {"G": 0.3, "beta": 0.5}, {"G": 0.1, "beta": 2.0}]),
    ModelKind.NON_POLYNOMIAL: (_nonpoly_t1, [{"omega": 1.0, "delta": 1.0}, {"omega": 0.5, "delta": 2.0},
                                             {"omega": 2.0, "delta": 0.5}]),
}


def criterion_5():
    worst, count, failures = 0.0, 0, []
    for kind, (formula, grid) in QUADRATIC_CASES.items():
        for params in grid:
            levels = solve_level(ModelSpec(kind, params, 0), 1, verify=False)
            if not levels:
                failures.append(f"{kind.value} {params}: no level")
            for lv in levels:
                (t1,) = lv.roots
                err = min(abs(t1 - ref) / max(abs(ref), 1e-300) for ref in formula(lv.model))
                worst = max(worst, err)
                count += 1
                if err > 1e-10:
                    failures.append(f"{kind.value} {params}: t1={t1!r}, rel err {err:.2e}")
    ok = not failures
    return ok, f"{count} n=1 levels over 4 models x 3 points, worst rel err {worst:.2e}" + (
        "; " + "; ".join(failures) if failures else "")


def criterion_6():
    model = ModelSpec(ModelKind.ISOTONIC, {"omega": 1.0, "a": 1.0}, 0)
    levels = solve_level(model, 1)
    radical = isotonic_radical_g(0, 1)
    g_ref = radical.real
    best = min(levels, key=lambda lv: abs(lv.free_param_value - g_ref))
    rel = abs(best.free_param_value - g_ref) / abs(g_ref)
    resid = abs(constraint_residual(best.model, 1, best.roots))
    fd = fd_check(best)
    ok = rel <= 1e-6 or (resid <= 1e-10 and fd.deviation <= FD_TOL)
    return ok, (f"numeric g={best.free_param_value:.14g}, radical g={g_ref:.14g} (imag {radical.imag:.1e}), "
                f"rel diff {rel:.1e}; constraint residual {resid:.1e}; E1={best.energy:.10g}, FD |dE|={fd.deviation:.1e}")


def _random_qes(rng, n):
    alpha, b2 = rng.uniform(0.5, 3) * rng.choice([-1, 1]), -rng.uniform(0.5, 2)
    return BasicEquation(alpha, b2, rng.uniform(-3, 6), rng.uniform(-3, 3), -n * b2)


def _same(level, sol):
    return (abs(level.c0 - sol.c0) < 1e-8
            and float(np.max(np.abs(level.real_roots - np.asarray(sol.roots)))) < 1e-7)


@functools.lru_cache(maxsize=None)
def _random_campaign():
    """50 random QES equations per n = 1..8: BAE solutions, oracle levels, residual samples."""
    start = time.perf_counter()
    unmatched = missed = solutions = oracle_real = 0
    rel_worst = raw_worst = 0.0
    for n in range(1, 9):
        rng = np.random.default_rng(1000 + n)
        for _ in range(50):
            eq = _random_qes(rng, n)
            sols = solve_bae(eq, n)
            real = [lv for lv in oracle_solutions(eq, n) if lv.all_real and lv.simple_roots and not lv.is_complex]
            oracle_real += len(real)
            solutions += len(sols)
            unmatched += sum(not any(_same(lv, s) for lv in real) for s in sols)
            missed += sum(not any(_same(lv, s) for s in sols) for lv in real)
            for s in sols:
                poly, solved = Polynomial.from_roots(s.roots), eq.with_c0(s.c0)
                for t in rng.uniform(-3, 3, 32):
                    rel_worst = max(rel_worst, relative_residual(solved, poly, t))
                    raw_worst = max(raw_worst, abs(residual(solved, poly, t)))
    return dict(elapsed=time.perf_counter() - start, unmatched=unmatched, missed=missed,
                solutions=solutions, oracle_real=oracle_real, rel_worst=rel_worst, raw_worst=raw_worst)


def criterion_7():
    c = _random_campaign()
    ok = c["unmatched"] == 0 and c["missed"] == 0 and c["elapsed"] < 60.0
    return ok, (f"400 equations, {c['solutions']} BAE solutions ({c['unmatched']} unmatched), "
                f"{c['oracle_real']} real simple oracle levels ({c['missed']} missed), {c['elapsed']:.1f} s")


def criterion_8():
    c = _random_campaign()
    # the residual scales with S; it is judged relative to the operator's term magnitudes
    ok = c["rel_worst"] < 1e-9
    return ok, (f"{c['solutions']} solutions x 32 points: worst relative residual {c['rel_worst']:.1e} "
                f"(raw residual of monic S up to {c['raw_worst']:.1e})")


def criterion_9():
    comm = max(commutator_report(n) for n in range(17))
    cas = 0.0
    for n in range(17):
        cas = max(cas, float(np.abs(casimir(n) - (n / 2) * (n / 2 + 1) * np.eye(n + 1)).max()))
    h_dev = 0.0
    for n in range(17):
        rng = np.random.default_rng(n)
        for _ in range(50):
            a, b2, b1, b0 = rng.uniform(-3, 3, 4)
            eq = BasicEquation(a, b2, b1, b0, -n * b2)
            h_dev = max(h_dev, float(np.abs(algebraized_h(eq, n) - invariant_matrix(eq, n).entries).max()))
    ok = comm == 0.0 and cas == 0.0 and h_dev <= 1e-12
    return ok, f"n<=16: commutator defect {comm:g}, Casimir defect {cas:g}, max |H_sl2 - H_matrix| {h_dev:.1e}"


def criterion_10():
    harmonic = ModelSpec(ModelKind.ISOTONIC, {"omega": 1.0, "g": 0.0, "a": 1.0}, 0)
    sizes = [999, 1999, 3999, 7999]
    hs, errs = [], []
    for size in sizes:
        grid = RadialGrid(1e-9, 10.0, size)
        hs.append(grid.spacing)
        errs.append(abs(fd_spectrum(harmonic, grid, 1).eigenvalues[0] - 1.5))
    slopes = np.diff(np.log(errs)) / np.diff(np.log(hs))
    slope = float(np.polyfit(np.log(hs), np.log(errs), 1)[0])
    ok = abs(slope - 2.0) <= 0.2 and bool(np.all(np.abs(slopes - 2.0) <= 0.2))
    return ok, (f"harmonic E0 errors {', '.join(f'{e:.2e}' for e in errs)}; "
                f"log-log slope {slope:.3f} (steps {', '.join(f'{s:.3f}' for s in slopes)})")


def criterion_11(tmp_dir=None):
    import tempfile

    argv = ["scan", "--model", "isotonic", "--param", "omega=1", "--scan", "a=0.5:1.5:3",
            "--scan", "ell=0,1", "--n", "0:1", "--seed", "17", "--verify", "oracle"]
    outputs = []
    with tempfile.TemporaryDirectory(dir=tmp_dir) as tmp:
        for run, workers in enumerate(("1", "1", "2")):
            path = Path(tmp) / f"run{run}.json"
            code = driver_main(argv + ["--workers", workers, "--out", str(path)])
            outputs.append((code, path.read_bytes()))
    codes = {code for code, _ in outputs}
    ok = codes == {0} and len({data for _, data in outputs}) == 1
    n_records = len(json.loads(outputs[0][1]))
    return ok, f"3 runs (workers 1, 1, 2), exit codes {sorted(codes)}, {n_records} records, byte-identical={ok}"


def criterion_12():
    path = ROOT / "docs" / "coefficient_arbitration.md"
    exists = path.is_file()
    in_sync = exists and path.read_text(encoding="utf-8") == report()
    soft = softcore_b0_variants()
    derived_n1 = [r for r in soft if r.derived and r.n == 1]
    others_n1 = [r for r in soft if not r.derived and r.n == 1]
    soft_ok = bool(derived_n1) and all(r.confirmed for r in derived_n1) and not any(r.confirmed for r in others_n1)
    nonpoly = nonpoly_lambda_variants()
    nonpoly_ok = all(r.confirmed for r in nonpoly if r.derived) and not any(r.confirmed for r in nonpoly if not r.derived)
    golden_ok, _ = criterion_3()
    ok = exists and in_sync and soft_ok and nonpoly_ok and golden_ok
    return ok, (f"report {path.relative_to(ROOT)} exists={exists}, up to date={in_sync}; FD supports "
                f"b0=2(l+1)beta only={soft_ok} (the (l+1)beta form is its halved normalization, (l+2)beta unsupported); "
                f"lambda/(2 delta^2) only={nonpoly_ok}; soft-core n=0 golden={golden_ok}")


CRITERIA = {
    1: ("anharmonic n=0 golden", criterion_1),
    2: ("isotonic n=0 golden", criterion_2),
    3: ("soft-core n=0 golden", criterion_3),
    4: ("non-polynomial n=0 golden (lambda=-10, E0=-6.5)", criterion_4),
    5: ("n=1 quadratic agreement", criterion_5),
    6: ("isotonic n=1 radical datum", criterion_6),
    7: ("oracle equivalence", criterion_7),
    8: ("residual certification", criterion_8),
    9: ("sl(2) identities", criterion_9),
    10: ("FD convergence", criterion_10),
    11: ("determinism", criterion_11),
    12: ("coefficient arbitration report", criterion_12),
}


def evaluate(k):
    name, fn = CRITERIA[k]
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failure of the criterion, reported on its line
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return passed, f"CRITERION {k}: {'PASS' if passed else 'FAIL'} - {name}: {detail}"


@pytest.mark.parametrize("k", sorted(CRITERIA))
def test_criterion(k, acceptance_lines):
    passed, line = evaluate(k)
    print(line)
    acceptance_lines.append(line)
    assert passed, line


if __name__ == "__main__":
    results = [evaluate(k) for k in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(passed for passed, _ in results) else 1)

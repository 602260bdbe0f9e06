"""Acceptance criteria, one test each, printing a PASS/FAIL line.

Run directly (``python3 tests/test_acceptance.py``) or through pytest.
"""

import io
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from randsys import make_rng, rand_linear_system, rand_point, rand_system, rand_vertex  # noqa: E402

from aesolve.cli import run  # noqa: E402
from aesolve.fileformat import parse_system  # noqa: E402
from aesolve.interval import IntervalMatrix, QuantifiedBlock, QuantifiedSystem  # noqa: E402
from aesolve.lp import Witness, solve_feasibility, verify  # noqa: E402
from aesolve.oracle import OracleStatus, brute_force_feasible, oracle_ae_solvable, oracle_check_ae_solution  # noqa: E402
from aesolve.solutions import (  # noqa: E402
    Form,
    Kind,
    attain_exists_params,
    check_ae_solution,
    find_ae_solution,
    find_ae_solution_poly,
    substitution_holds,
    table1_condition,
)
from aesolve.solvability import (  # noqa: E402
    SpecialKind,
    Status,
    ae_solvable_exact,
    ae_solvable_ineq_form,
    ae_solvable_sufficient,
    ineq_ae_forms_equivalent,
    special_solvable,
    special_system,
)

EXAMPLE1 = """\
dims m=0 m'=2 n=0 n'=1
D:
  [-1,1]@E
  [-1,1]@A
b:
  -2
  1
"""

# (module-level) consistency findings gathered by the randomized criteria
CONFLICTS = []
CHECKED = {"exact_vs_oracle": 0, "sufficient_vs_oracle": 0}


def report(number, title, ok, detail, elapsed, limit=None):
    budget = f" (limit {limit:g} s)" if limit else ""
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} [{detail}; {elapsed:.2f} s{budget}]"
    print(line, flush=True)
    return ok


def _quiet_run(argv):
    out, err = io.StringIO(), io.StringIO()
    return run(argv, stdout=out, stderr=err), out.getvalue()


def _consistency(system, grid_n=1):
    """Record any clash between the solvability tests and the sampling oracle."""
    verdict = oracle_ae_solvable(system, grid_n)
    refuted = verdict.status is OracleStatus.REFUTED_WITH_WITNESS
    try:
        exact = ae_solvable_exact(system)
    except ValueError:
        exact = None
    if exact is not None:
        CHECKED["exact_vs_oracle"] += 1
        if exact.status is Status.SOLVABLE and refuted:
            CONFLICTS.append(("exact solvable, oracle refuted", system))
        if verdict.status is OracleStatus.CONFIRMED and exact.status is not Status.SOLVABLE:
            CONFLICTS.append(("exact unsolvable, oracle confirmed", system))
    suff = ae_solvable_sufficient(system)
    CHECKED["sufficient_vs_oracle"] += 1
    if suff.status is Status.SUFFICIENT_HOLDS and refuted:
        CONFLICTS.append(("sufficient holds, oracle refuted", system))
    return exact, suff, verdict


def criterion_1():
    t0 = time.perf_counter()
    system = parse_system(EXAMPLE1)
    no_solution = find_ae_solution(system) is None
    suff = ae_solvable_sufficient(system)
    oracle = oracle_ae_solvable(system, grid_n=5)
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp, "example1.txt")
        path.write_text(EXAMPLE1)
        codes = [_quiet_run([*cmd, str(path)])[0]
                 for cmd in (["find"], ["solvable", "--sufficient"], ["oracle", "--grid", "5"])]
    ok = (codes == [1, 2, 2] and no_solution and suff.status is Status.SUFFICIENT_FAILS
          and oracle.status is OracleStatus.INCONCLUSIVE_UP_TO_SAMPLES and oracle.counterexample is None)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 1.0
    detail = (f"find -> {'None' if no_solution else 'solution'}, sufficient -> {suff.status.value}, "
              f"oracle -> {oracle.status.value} after {oracle.samples_tested} samples, "
              f"{0 if oracle.counterexample is None else 1} refutations, CLI exit codes {codes}")
    return report(1, "solvable inequality pair without an AE solution", ok, detail, elapsed, 1)


def criterion_2():
    t0 = time.perf_counter()
    A = IntervalMatrix.point([[1, 1]])
    b = IntervalMatrix([Fraction(1)], [Fraction(2)])
    system = QuantifiedSystem.build(B=QuantifiedBlock.all_forall(A), a=QuantifiedBlock.all_forall(b))
    exact = ae_solvable_exact(system, stop_at_first_failure=False)
    per_s = {s: isinstance(r, Witness) and verify(exact.systems[s], r) for s, r in exact.witnesses.items()}
    grid = [Fraction(k, 4) for k in range(-12, 13)]
    strong_hits = sum(table1_condition(Kind.STRONG, Form.EQ_FREE, A, b, (u, v)) for u in grid for v in grid)
    none_found = find_ae_solution(system) is None
    elapsed = time.perf_counter() - t0
    ok = (exact.status is Status.SOLVABLE and len(per_s) == 2 and all(per_s.values())
          and strong_hits == 0 and none_found and elapsed < 1.0)
    detail = (f"exact -> {exact.status.value} with feasible s={sorted(per_s)}, strong holds at "
              f"{strong_hits}/{len(grid) ** 2} grid points, find -> {'None' if none_found else 'solution'}")
    return report(2, "strong-gap example", ok, detail, elapsed, 1)


def _points_for(rng, system, count):
    pts = []
    found = find_ae_solution(system)
    if found is not None:
        pts.append((found.x, found.y))
        # nudges around a known solution exercise the boundary of the set
        for _ in range(4):
            dx = tuple(v + Fraction(rng.randint(-1, 1), 4) for v in found.x)
            dy = tuple(v + Fraction(rng.randint(-1, 1), 4) for v in found.y)
            pts.append((dx, dy))
    while len(pts) < count:
        pts.append((rand_point(rng, system.n, nonneg=rng.random() < 0.8, denom=rng.choice((1, 2, 4))),
                     rand_point(rng, system.n_free, denom=rng.choice((1, 2, 4)))))
    return pts


def criterion_3(n_systems=500, n_points=20):
    t0 = time.perf_counter()
    rng = make_rng(3)
    disagreements, positives, total = 0, 0, 0
    for i in range(n_systems):
        system = rand_system(rng, radii=(None if i % 2 else [Fraction(0), Fraction(1, 2)]))
        for x, y in _points_for(rng, system, n_points):
            fast = check_ae_solution(system, x, y).is_solution
            slow = oracle_check_ae_solution(system, x, y)
            total += 1
            positives += fast
            disagreements += fast != slow
    elapsed = time.perf_counter() - t0
    ok = disagreements == 0 and elapsed < 60
    detail = f"{n_systems} systems, {total} points ({positives} AE solutions), {disagreements} disagreements"
    return report(3, "closed-form AE-solution test equals vertex oracle", ok, detail, elapsed, 60)


def criterion_4(n_systems=500):
    t0 = time.perf_counter()
    rng = make_rng(4)
    failures, feasible = 0, 0
    for _ in range(n_systems):
        lin = rand_linear_system(rng)
        res = solve_feasibility(lin)
        brute = brute_force_feasible(lin)
        feasible += isinstance(res, Witness)
        if not verify(lin, res) or (brute is not None) != isinstance(res, Witness):
            failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and elapsed < 60
    detail = f"{n_systems} systems ({feasible} feasible), {failures} failures"
    return report(4, "LP exactly-one-of witness/certificate", ok, detail, elapsed, 60)


def criterion_5(n_systems=200):
    t0 = time.perf_counter()
    rng = make_rng(5)
    disagreements, some = 0, 0
    for _ in range(n_systems):
        system = rand_system(rng, n_free=(0, 3), free_exists_degenerate=True,
                             radii=[Fraction(0), Fraction(1, 2), Fraction(1)])
        poly = find_ae_solution_poly(system)
        orth = find_ae_solution(system)
        some += orth is not None
        disagreements += (poly is None) != (orth is None)
        if poly is not None and not check_ae_solution(system, poly[0], poly[1]).is_solution:
            disagreements += 1
    elapsed = time.perf_counter() - t0
    ok = disagreements == 0
    detail = f"{n_systems} systems ({some} with an AE solution), {disagreements} disagreements"
    return report(5, "single lifted LP equals orthant enumeration", ok, detail, elapsed)


def _universal_free_ineq_system(rng):
    return rand_system(rng, m=(0, 0), m_ineq=(1, 3), n_free=(0, 3), free_exists_degenerate=True,
                       radii=[Fraction(0), Fraction(1, 2), Fraction(1)])


def criterion_6(n_systems=200, n_points=10):
    t0 = time.perf_counter()
    rng = make_rng(6)
    chain_bad, verdict_bad, solvable = 0, 0, 0
    for _ in range(n_systems):
        system = _universal_free_ineq_system(rng)
        for x, y in _points_for(rng, system, n_points):
            i, ii, iii = ineq_ae_forms_equivalent(system, x, y)
            chain_bad += not (i == ii == iii)
        verdict = ae_solvable_ineq_form(system)
        exists = find_ae_solution(system) is not None
        solvable += verdict.status is Status.SOLVABLE
        verdict_bad += (verdict.status is Status.SOLVABLE) != exists
        if verdict.solution is not None and not check_ae_solution(system, *verdict.solution).is_solution:
            verdict_bad += 1
        _consistency(system)
    elapsed = time.perf_counter() - t0
    ok = chain_bad == 0 and verdict_bad == 0
    detail = (f"{n_systems} systems ({solvable} solvable), {chain_bad} chain mismatches, "
              f"{verdict_bad} solvability/solution-existence mismatches")
    return report(6, "inequality-class equivalences and solvability = solution existence", ok, detail, elapsed)


def criterion_7(n_triples=200):
    t0 = time.perf_counter()
    rng = make_rng(7)
    failures, triples, tries = 0, 0, 0
    while triples < n_triples and tries < 50 * n_triples:
        tries += 1
        system = rand_system(rng, radii=[Fraction(0), Fraction(1, 2), Fraction(1)], p_forall=0.4)
        sol = find_ae_solution(system)
        if sol is None:
            continue
        choice = rand_vertex(rng, system, "forall")
        real = attain_exists_params(system, sol.x, sol.y, choice).as_realization()
        triples += 1
        if not (real.inside(system, "exists") and substitution_holds(choice, real, sol.x, sol.y)):
            failures += 1
    elapsed = time.perf_counter() - t0
    ok = failures == 0 and triples >= n_triples
    detail = f"{triples} triples, {failures} failures"
    return report(7, "attainment realization satisfies the point system", ok, detail, elapsed)


def criterion_8(per_kind=100):
    t0 = time.perf_counter()
    rng = make_rng(8)
    halves = [Fraction(k, 2) for k in range(-2, 3)]
    mismatches, counts = 0, []
    for kind in SpecialKind:
        bad, yes = 0, 0
        for _ in range(per_kind):
            def box(shape):
                lo = np.array([rng.choice(halves) for _ in range(int(np.prod(shape)))], dtype=object).reshape(shape)
                width = np.array([rng.choice(halves[2:]) for _ in range(lo.size)], dtype=object).reshape(shape)
                return IntervalMatrix(lo, lo + width)
            A, b = box((2, 2)), box((2,))
            formula = special_solvable(kind, A, b)
            system = special_system(kind, A, b)
            general = ae_solvable_exact(system).status is Status.SOLVABLE
            yes += formula
            bad += formula != general
            if kind.value.startswith(("strong", "tol", "ctrl")):
                _consistency(system, grid_n=0)
        mismatches += bad
        counts.append(yes)
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0
    detail = f"12 kinds x {per_kind} instances, solvable counts {counts}, {mismatches} mismatches"
    return report(8, "special-case formulas equal the general exact test", ok, detail, elapsed)


def criterion_9(n_systems=300):
    t0 = time.perf_counter()
    rng = make_rng(9)
    for i in range(n_systems):
        system = rand_system(rng, free_exists_degenerate=i % 3 != 0, max_wide_forall=4,
                             radii=[Fraction(0), Fraction(1, 2), Fraction(1)])
        _consistency(system)
    elapsed = time.perf_counter() - t0
    ok = not CONFLICTS
    detail = (f"{CHECKED['exact_vs_oracle']} exact and {CHECKED['sufficient_vs_oracle']} sufficient "
              f"verdicts compared with the oracle, {len(CONFLICTS)} conflicts")
    return report(9, "no solvable/refuted clashes", ok, detail, elapsed)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda f: f.__name__)
def test_acceptance(criterion, capsys):
    with capsys.disabled():
        print()
        assert criterion()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)

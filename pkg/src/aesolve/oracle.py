"""Brute-force cross-checks that do not go through the closed-form tests.

* :func:`oracle_check_ae_solution` walks the vertices of the universally
  quantified box and checks the existential side by interval evaluation.
* :func:`weak_solvable` decides weak solvability by sign enumeration.
* :func:`oracle_ae_solvable` samples universal realizations (vertices and a
  rational grid) looking for one whose residual system has no weak solution.
* :func:`brute_force_feasible` decides LP feasibility by enumerating minimal
  faces, independently of the simplex code.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import CapExceeded, DimensionError
from .interval import (
    BLOCK_NAMES,
    IntervalMatrix,
    QuantifiedBlock,
    QuantifiedSystem,
    Realization,
    ZERO,
    as_fractions,
    eval_range,
    rational_vector,
    sign_vectors,
    vertices,
    zeros,
)
from .lp import LinearSystem, Witness, solve_feasibility, stack_inequalities, verify

ForallRealization = Realization

DEFAULT_FORALL_CAP = 16
DEFAULT_FREE_CAP = 8


def wide_forall_entries(system: QuantifiedSystem) -> list:
    """``(block name, index)`` of every universally quantified entry with positive radius."""
    out = []
    for name in BLOCK_NAMES:
        box = getattr(system, name).forall
        for idx in np.ndindex(box.shape):
            if box.lower[idx] != box.upper[idx]:
                out.append((name, idx))
    return out


def oracle_check_ae_solution(system: QuantifiedSystem, x, y, cap: int = DEFAULT_FORALL_CAP) -> bool:
    """Is ``(x, y)`` an AE solution?  Decided from the definition.

    For every vertex of the universal box the existential parameters must be
    able to restore each row.  The universal box is a product over rows and a
    row's condition only involves that row's parameters, so the vertices are
    enumerated row by row; every vertex of the full box is still covered.
    Vertices suffice because each parameter enters its row affinely.
    """
    x = rational_vector(x, system.n)
    y = rational_vector(y, system.n_free)
    n_wide = len(wide_forall_entries(system))
    if n_wide > cap:
        raise CapExceeded(f"{n_wide} wide universal entries exceed cap {cap}")
    if any(v < 0 for v in x):
        return False
    xy = np.concatenate([x, y])

    def rows_ok(M: QuantifiedBlock, N: QuantifiedBlock, rhs: QuantifiedBlock, equation: bool) -> bool:
        exists_lhs = eval_range(IntervalMatrix(np.hstack([M.exists.lower, N.exists.lower]),
                                               np.hstack([M.exists.upper, N.exists.upper])), xy)
        for i in range(rhs.shape[0]):
            # universal residual r must lie in the range of  rhs^E - (M^E x + N^E y)
            need_lo = rhs.exists.lower[i] - exists_lhs.upper[i]
            need_hi = rhs.exists.upper[i] - exists_lhs.lower[i]
            row_box = IntervalMatrix(
                np.concatenate([M.forall.lower[i], N.forall.lower[i], [rhs.forall.lower[i]]]),
                np.concatenate([M.forall.upper[i], N.forall.upper[i], [rhs.forall.upper[i]]]),
            )
            for v in vertices(row_box):
                r = sum(v[:-1] * xy, ZERO) - v[-1]
                if r > need_hi or (equation and r < need_lo):
                    return False
        return True

    return (rows_ok(system.A, system.B, system.a, True)
            and rows_ok(system.C, system.D, system.b, False))


@dataclass(frozen=True, eq=False)
class WeakSolvability:
    solvable: bool
    witness: Optional[tuple] = None  # (x, y, s)
    results: dict = field(default_factory=dict)
    systems: dict = field(default_factory=dict)


def weak_sign_system(system: QuantifiedSystem, s) -> LinearSystem:
    """Weak solutions in orthant ``diag(s) y >= 0``; all parameters are treated
    as existential (total intervals)."""
    A, B, a = system.A.total, system.B.total, system.a.total
    C, D, b = system.C.total, system.D.total, system.b.total
    n, k = system.n, system.n_free
    sv = rational_vector(s)
    orth = zeros((k, k))
    for j in range(k):
        orth[j, j] = -sv[j]
    return stack_inequalities(n, k, [
        (A.lower, B.mid - B.rad * sv, a.upper),
        (-A.upper, -(B.mid + B.rad * sv), -a.lower),
        (C.lower, D.mid - D.rad * sv, b.upper),
        (zeros((k, n)), orth, zeros(k)),
    ])


def weak_solvable(system: QuantifiedSystem, cap: int = DEFAULT_FREE_CAP) -> WeakSolvability:
    """Does some realization of the (all-existential) interval system have a solution?"""
    if system.n_free > cap:
        raise CapExceeded(f"{system.n_free} free variables exceed cap {cap}")
    results, systems = {}, {}
    for s in sign_vectors(system.n_free):
        lin = weak_sign_system(system, s)
        res = solve_feasibility(lin)
        results[s], systems[s] = res, lin
        if isinstance(res, Witness):
            return WeakSolvability(True, (res.x, res.y, s), results, systems)
    return WeakSolvability(False, None, results, systems)


def residual_system(system: QuantifiedSystem, forall_choice: Realization) -> QuantifiedSystem:
    """Fix the universal parameters; what is left is an all-existential system."""
    blocks = {}
    for name in BLOCK_NAMES:
        blk = getattr(system, name)
        point = getattr(forall_choice, name)
        shifted = IntervalMatrix(blk.exists.lower + point, blk.exists.upper + point) if point.size \
            else blk.exists
        blocks[name] = QuantifiedBlock.all_exists(shifted)
    return QuantifiedSystem(**blocks)


class OracleStatus(enum.Enum):
    CONFIRMED = "confirmed"
    REFUTED_WITH_WITNESS = "refuted-with-witness"
    INCONCLUSIVE_UP_TO_SAMPLES = "inconclusive-up-to-samples"


@dataclass(frozen=True, eq=False)
class OracleVerdict:
    status: OracleStatus
    counterexample: Optional[Realization] = None
    samples_tested: int = 0
    refutation: Optional[WeakSolvability] = None


def grid_values(lo: Fraction, hi: Fraction, grid_n: int) -> list:
    """``lo + t (hi - lo)`` for ``t = k/(grid_n+1)``, ``k = 0..grid_n+1``."""
    return [lo + Fraction(k, grid_n + 1) * (hi - lo) for k in range(grid_n + 2)]


def forall_samples(system: QuantifiedSystem, grid_n: int):
    """Universal realizations: all box vertices first, then the remaining grid points."""
    wide = wide_forall_entries(system)
    base = {name: getattr(system, name).forall.lower.copy() for name in BLOCK_NAMES}
    choices = []
    for name, idx in wide:
        box = getattr(system, name).forall
        choices.append(grid_values(box.lower[idx], box.upper[idx], grid_n))

    def build(values) -> Realization:
        blocks = {k: v.copy() for k, v in base.items()}
        for (name, idx), val in zip(wide, values):
            blocks[name][idx] = val
        return Realization(**blocks)

    ends = [(c[0], c[-1]) for c in choices]
    for values in itertools.product(*ends):
        yield build(values)
    if grid_n > 0:
        for values in itertools.product(*choices):
            if all(v in e for v, e in zip(values, ends)):
                continue
            yield build(values)


def oracle_ae_solvable(system: QuantifiedSystem, grid_n: int = 3, cap: int = DEFAULT_FORALL_CAP,
                       free_cap: int = DEFAULT_FREE_CAP) -> OracleVerdict:
    """Try to falsify AE solvability by sampling universal realizations.

    Never proves solvability when the universal box is wide; with no wide
    universal entry there is a single realization and the verdict is exact.
    """
    wide = wide_forall_entries(system)
    if len(wide) > cap:
        raise CapExceeded(f"{len(wide)} wide universal entries exceed cap {cap}")
    if system.n_free > free_cap:
        raise CapExceeded(f"{system.n_free} free variables exceed cap {free_cap}")
    tested = 0
    for choice in forall_samples(system, grid_n):
        tested += 1
        ws = weak_solvable(residual_system(system, choice), free_cap)
        if not ws.solvable:
            if not all(verify(ws.systems[s], r) for s, r in ws.results.items()):
                raise AssertionError("refutation certificate failed independent verification")
            return OracleVerdict(OracleStatus.REFUTED_WITH_WITNESS, choice, tested, ws)
    status = OracleStatus.CONFIRMED if not wide else OracleStatus.INCONCLUSIVE_UP_TO_SAMPLES
    return OracleVerdict(status, None, tested)


def _particular_solution(rows: list, rhs: list, nvars: int) -> Optional[list]:
    """Exact Gauss-Jordan; a solution with free variables at zero, or None."""
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(nvars):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [vi - f * vr for vi, vr in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    if any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in M[r:]):
        return None
    sol = [ZERO] * nvars
    for i, c in enumerate(pivots):
        sol[c] = M[i][-1]
    return sol


def brute_force_feasible(system: LinearSystem) -> Optional[tuple]:
    """Feasibility by minimal-face enumeration; returns ``(x, y)`` or None.

    A nonempty polyhedron has a minimal face, which is the affine set cut out
    by the equations plus at most ``n + n'`` of its tight inequalities, and
    that whole affine set lies in the polyhedron.  So trying every such
    subset, taking any solution of the equality system, and testing it finds
    a feasible point whenever one exists.
    """
    n, k = system.n, system.n_free
    N = n + k
    eq_rows = [list(system.Aeq[i]) + list(system.Beq[i]) for i in range(system.p)]
    eq_rhs = list(system.beq)
    ineq_rows = [list(system.Ain[i]) + list(system.Bin[i]) for i in range(system.q)]
    ineq_rhs = list(system.bin)
    for j in range(n):
        row = [ZERO] * N
        row[j] = Fraction(-1)
        ineq_rows.append(row)
        ineq_rhs.append(ZERO)

    def feasible(z) -> bool:
        for row, b in zip(eq_rows, eq_rhs):
            if sum((a * v for a, v in zip(row, z)), ZERO) != b:
                return False
        for row, b in zip(ineq_rows, ineq_rhs):
            if sum((a * v for a, v in zip(row, z)), ZERO) > b:
                return False
        return True

    for size in range(0, min(N, len(ineq_rows)) + 1):
        for subset in itertools.combinations(range(len(ineq_rows)), size):
            rows = eq_rows + [ineq_rows[i] for i in subset]
            rhs = eq_rhs + [ineq_rhs[i] for i in subset]
            z = _particular_solution(rows, rhs, N)
            if z is not None and feasible(z):
                return tuple(z[:n]), tuple(z[n:])
    return None

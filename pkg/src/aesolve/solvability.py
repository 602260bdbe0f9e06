"""AE solvability: strong solvability of inequalities, the inequality class
where solvability equals AE-solution existence, the exact sign-vector test
for systems whose free-variable blocks carry no existential radius, a
general sufficient condition, and classical special cases."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import BudgetExceeded, DimensionError, PreconditionViolated
from .interval import (
    IntervalMatrix,
    QuantifiedSystem,
    as_fractions,
    matvec,
    rational_vector,
    sign_vectors,
    zeros,
)
from .lp import LinearSystem, Witness, solve_feasibility, stack_inequalities
from .solutions import Form, Kind, check_ae_solution, require_exists_free_degenerate, table1_system


class Status(enum.Enum):
    SOLVABLE = "solvable"
    UNSOLVABLE = "unsolvable"
    SUFFICIENT_HOLDS = "sufficient-holds"
    SUFFICIENT_FAILS = "sufficient-fails"


@dataclass(frozen=True, eq=False)
class SolvabilityVerdict:
    """Outcome of a solvability test.

    ``witnesses`` maps a sign vector to the LP result for it and ``systems``
    holds the matching LPs so every entry can be re-verified.  For the
    sufficient test the keys of a failing verdict are ``(z, s)`` pairs.
    """

    status: Status
    witnesses: dict = field(default_factory=dict)
    systems: dict = field(default_factory=dict)
    z_choice: Optional[tuple] = None
    failing_s: Optional[tuple] = None
    solution: Optional[tuple] = None

    @property
    def affirmative(self) -> bool:
        return self.status in (Status.SOLVABLE, Status.SUFFICIENT_HOLDS)


def _check_budget(count_exponent: int, max_exponent: Optional[int], what: str) -> None:
    if max_exponent is not None and count_exponent > max_exponent:
        raise BudgetExceeded(f"{what}: 2^{count_exponent} sign vectors exceeds budget 2^{max_exponent}")


def _col_signs(s) -> np.ndarray:
    return rational_vector(s).reshape(-1, 1)


def strong_solvability_system(A: IntervalMatrix, B: Optional[IntervalMatrix], b: IntervalMatrix) -> LinearSystem:
    """``upper(A) x + upper(B) y1 - lower(B) y2 <= lower(b)`` over ``x, y1, y2 >= 0``."""
    m, n = A.shape
    if B is None:
        B = IntervalMatrix.zeros((m, 0))
    if B.shape[0] != m or b.shape != (m,):
        raise DimensionError(f"incompatible shapes A {A.shape}, B {B.shape}, b {b.shape}")
    Ain = np.hstack([A.upper, B.upper, -B.lower])
    return LinearSystem(Ain.shape[1], 0, Ain=Ain, bin=b.lower)


def strong_solvable_ineq(A: IntervalMatrix, B: Optional[IntervalMatrix], b: IntervalMatrix):
    """Strong solvability of ``A x + B y <= b, x >= 0`` (y free) by one LP.

    A returned Witness lives in the lifted variables ``(x, y1, y2)``; use
    :func:`split_lifted` to recover ``(x, y1 - y2)``, which is a strong solution.
    """
    return solve_feasibility(strong_solvability_system(A, B, b))


def split_lifted(values, n: int) -> tuple:
    """``(x, y1, y2) -> (x, y1 - y2)`` for a lifted witness vector."""
    values = tuple(values)
    k = (len(values) - n) // 2
    x = values[:n]
    y = tuple(values[n + j] - values[n + k + j] for j in range(k))
    return x, y


def require_universal_free_ineq(system: QuantifiedSystem) -> None:
    """Shape ``C x + D^A y <= b, x >= 0``: no equations, no existential radius in D."""
    if system.m != 0:
        raise PreconditionViolated("system has an equation block")
    if any(v != 0 for v in system.D.exists.rad.flat):
        raise PreconditionViolated("free-variable block carries an existential radius")


def _ineq_class_parts(system: QuantifiedSystem):
    C, D, b = system.C, system.D, system.b
    return (C.exists.lower + C.forall.upper, D.mid, D.forall.rad, b.exists.upper + b.forall.lower)


def ineq_ae_forms_equivalent(system: QuantifiedSystem, x, y, y1=None, y2=None) -> tuple:
    """Evaluate three equivalent descriptions of an AE solution when the
    system is inequalities only and the free-variable block is purely
    universal: the general test, the ``|y|`` form and the split form.

    ``y1``/``y2`` default to the positive and negative parts of ``y``; any other
    nonnegative split may be passed (it must satisfy ``y1 - y2 = y``).
    """
    require_universal_free_ineq(system)
    x = rational_vector(x, system.n)
    y = rational_vector(y, system.n_free)
    if y1 is None and y2 is None:
        y1 = as_fractions([max(v, 0) for v in y])
        y2 = as_fractions([max(-v, 0) for v in y])
    else:
        y1 = rational_vector(y1, system.n_free)
        y2 = rational_vector(y2, system.n_free)
    Cx, Dm, Dr, rhs = _ineq_class_parts(system)
    x_ok = all(v >= 0 for v in x)

    general = check_ae_solution(system, x, y).is_solution
    abs_form = x_ok and bool(np.all(matvec(Cx, x) + matvec(Dm, y) + matvec(Dr, np.abs(y)) <= rhs))
    split_form = (
        x_ok
        and all(v >= 0 for v in y1) and all(v >= 0 for v in y2)
        and bool(np.all(y1 - y2 == y))
        and bool(np.all(matvec(Cx, x) + matvec(Dm + Dr, y1) - matvec(Dm - Dr, y2) <= rhs))
    )
    return general, abs_form, split_form


def universal_free_ineq_system(system: QuantifiedSystem) -> LinearSystem:
    require_universal_free_ineq(system)
    Cx, Dm, Dr, rhs = _ineq_class_parts(system)
    Ain = np.hstack([Cx, Dm + Dr, -(Dm - Dr)])
    return LinearSystem(Ain.shape[1], 0, Ain=Ain, bin=rhs)


def ae_solvable_ineq_form(system: QuantifiedSystem) -> SolvabilityVerdict:
    """AE solvability of ``C x + D^A y <= b, x >= 0``; here it coincides with
    the existence of an AE solution, decided by one LP."""
    lin = universal_free_ineq_system(system)
    res = solve_feasibility(lin)
    if isinstance(res, Witness):
        return SolvabilityVerdict(Status.SOLVABLE, {(): res}, {(): lin},
                                  solution=split_lifted(res.x, system.n))
    return SolvabilityVerdict(Status.UNSOLVABLE, {(): res}, {(): lin}, failing_s=())


def exact_sign_system(system: QuantifiedSystem, s) -> LinearSystem:
    """The LP attached to row-sign vector ``s`` in the exact solvability test.

    Variables ``(x, y1, y2) >= 0``.  Degenerate existential parts of B and D
    are folded into the midpoints.
    """
    require_exists_free_degenerate(system)
    return _sign_system(system, s, z=None)


def sufficient_sign_system(system: QuantifiedSystem, z, s) -> LinearSystem:
    """The LP attached to ``(z, s)`` in the sufficient solvability condition."""
    return _sign_system(system, s, z=z)


def _sign_system(system: QuantifiedSystem, s, z) -> LinearSystem:
    A, B, a, C, D, b = system.A, system.B, system.a, system.C, system.D, system.b
    m, n, k = system.m, system.n, system.n_free
    s = tuple(s)
    if len(s) != m:
        raise DimensionError(f"expected {m} row signs, got {len(s)}")
    sc = _col_signs(s) if m else zeros((0, 1))
    sv = rational_vector(s)
    zv = rational_vector(z if z is not None else (1,) * k)

    A_shift = A.forall.mid + sc * A.forall.rad
    a_shift = a.forall.mid - sv * a.forall.rad
    Bf_plus = B.forall.mid + sc * B.forall.rad
    Bf_minus = B.forall.mid - sc * B.forall.rad
    Be_low = B.exists.mid - B.exists.rad * zv
    Be_high = B.exists.mid + B.exists.rad * zv
    De = D.exists.mid - D.exists.rad * zv

    x_cols = n + 2 * k
    return stack_inequalities(x_cols, 0, [
        (np.hstack([A.exists.lower + A_shift, Be_low + Bf_plus, -(Be_low + Bf_minus)]),
         zeros((m, 0)), a.exists.upper + a_shift),
        (np.hstack([-(A.exists.upper + A_shift), -(Be_high + Bf_plus), Be_high + Bf_minus]),
         zeros((m, 0)), -a.exists.lower - a_shift),
        (np.hstack([C.forall.upper + C.exists.lower, D.forall.upper + De, -(D.forall.lower + De)]),
         zeros((system.m_ineq, 0)), b.forall.lower + b.exists.upper),
    ])


def ae_solvable_exact(system: QuantifiedSystem, *, stop_at_first_failure: bool = True,
                      max_rows: Optional[int] = None) -> SolvabilityVerdict:
    """Exact AE-solvability test, valid when Rad B^E = Rad D^E = 0.

    Solvable iff the LP for every ``s`` in {+1,-1}^m is feasible.  An
    Unsolvable verdict reports the lexicographically first failing ``s``
    together with its Farkas certificate.
    """
    require_exists_free_degenerate(system)
    _check_budget(system.m, max_rows, "exact test")
    witnesses, systems = {}, {}
    failing = None
    for s in sign_vectors(system.m):
        lin = exact_sign_system(system, s)
        res = solve_feasibility(lin)
        witnesses[s], systems[s] = res, lin
        if not isinstance(res, Witness) and failing is None:
            failing = s
            if stop_at_first_failure:
                break
    if failing is None:
        return SolvabilityVerdict(Status.SOLVABLE, witnesses, systems)
    return SolvabilityVerdict(Status.UNSOLVABLE, witnesses, systems, failing_s=failing)


def ae_solvable_sufficient(system: QuantifiedSystem, *, max_rows: Optional[int] = None,
                           max_free: Optional[int] = None) -> SolvabilityVerdict:
    """Sufficient condition for AE solvability of a general system.

    Looks for a ``z`` in {+1,-1}^n' such that the LP for every ``s`` in
    {+1,-1}^m is feasible.  SUFFICIENT_FAILS is inconclusive.
    """
    _check_budget(system.m, max_rows, "sufficient test (rows)")
    _check_budget(system.n_free, max_free, "sufficient test (free variables)")
    failures, failure_systems = {}, {}
    for z in sign_vectors(system.n_free):
        witnesses, systems = {}, {}
        for s in sign_vectors(system.m):
            lin = sufficient_sign_system(system, z, s)
            res = solve_feasibility(lin)
            witnesses[s], systems[s] = res, lin
            if not isinstance(res, Witness):
                failures[(z, s)], failure_systems[(z, s)] = res, lin
                break
        else:
            return SolvabilityVerdict(Status.SUFFICIENT_HOLDS, witnesses, systems, z_choice=z)
    return SolvabilityVerdict(Status.SUFFICIENT_FAILS, failures, failure_systems)


class SpecialKind(enum.Enum):
    STRONG_EQ_FREE = "strong-eq-free"
    STRONG_EQ_NONNEG = "strong-eq-nonneg"
    STRONG_INEQ_FREE = "strong-ineq-free"
    STRONG_INEQ_NONNEG = "strong-ineq-nonneg"
    WEAK_EQ_NONNEG = "weak-eq-nonneg"
    WEAK_INEQ_NONNEG = "weak-ineq-nonneg"
    TOL_EQ_FREE = "tol-eq-free"
    TOL_EQ_NONNEG = "tol-eq-nonneg"
    CTRL_EQ_NONNEG = "ctrl-eq-nonneg"
    TOL_INEQ_FREE = "tol-ineq-free"
    TOL_INEQ_NONNEG = "tol-ineq-nonneg"
    CTRL_INEQ_NONNEG = "ctrl-ineq-nonneg"


SPECIAL_SHAPE = {
    SpecialKind.STRONG_EQ_FREE: (Kind.STRONG, Form.EQ_FREE),
    SpecialKind.STRONG_EQ_NONNEG: (Kind.STRONG, Form.EQ_NONNEG),
    SpecialKind.STRONG_INEQ_FREE: (Kind.STRONG, Form.INEQ_FREE),
    SpecialKind.STRONG_INEQ_NONNEG: (Kind.STRONG, Form.INEQ_NONNEG),
    SpecialKind.WEAK_EQ_NONNEG: (Kind.WEAK, Form.EQ_NONNEG),
    SpecialKind.WEAK_INEQ_NONNEG: (Kind.WEAK, Form.INEQ_NONNEG),
    SpecialKind.TOL_EQ_FREE: (Kind.TOLERABLE, Form.EQ_FREE),
    SpecialKind.TOL_EQ_NONNEG: (Kind.TOLERABLE, Form.EQ_NONNEG),
    SpecialKind.CTRL_EQ_NONNEG: (Kind.CONTROLLABLE, Form.EQ_NONNEG),
    SpecialKind.TOL_INEQ_FREE: (Kind.TOLERABLE, Form.INEQ_FREE),
    SpecialKind.TOL_INEQ_NONNEG: (Kind.TOLERABLE, Form.INEQ_NONNEG),
    SpecialKind.CTRL_INEQ_NONNEG: (Kind.CONTROLLABLE, Form.INEQ_NONNEG),
}

PER_SIGN_KINDS = frozenset({
    SpecialKind.STRONG_EQ_FREE, SpecialKind.STRONG_EQ_NONNEG, SpecialKind.TOL_EQ_FREE,
    SpecialKind.TOL_EQ_NONNEG, SpecialKind.CTRL_EQ_NONNEG,
})


def special_system(kind: SpecialKind, A: IntervalMatrix, b: IntervalMatrix) -> QuantifiedSystem:
    """The quantified system whose AE solvability the special formula decides."""
    return table1_system(*SPECIAL_SHAPE[SpecialKind(kind)], A, b)


def special_solvability_systems(kind: SpecialKind, A: IntervalMatrix, b: IntervalMatrix) -> dict:
    """LPs of a classical solvability characterization, keyed by ``s`` (or ``()``).

    Free-variable kinds use ``x = x1 - x2`` with ``x1, x2 >= 0``.
    """
    kind = SpecialKind(kind)
    if len(A.shape) != 2 or b.shape != (A.shape[0],):
        raise DimensionError(f"matrix {A.shape} and right-hand side {b.shape} do not match")
    m, n = A.shape
    lo, hi, mid, rad = A.lower, A.upper, A.mid, A.rad
    K = SpecialKind

    if kind in PER_SIGN_KINDS:
        out = {}
        for s in sign_vectors(m):
            sc = _col_signs(s) if m else zeros((0, 1))
            sv = rational_vector(s)
            plus, minus = mid + sc * rad, mid - sc * rad
            free = kind in (K.STRONG_EQ_FREE, K.TOL_EQ_FREE)
            M = np.hstack([plus, -minus]) if free else plus
            cols = M.shape[1]
            if kind in (K.STRONG_EQ_FREE, K.STRONG_EQ_NONNEG):
                out[s] = LinearSystem(cols, 0, Aeq=M, beq=b.mid - sv * b.rad)
            elif kind in (K.TOL_EQ_FREE, K.TOL_EQ_NONNEG):
                out[s] = LinearSystem(cols, 0, Ain=np.vstack([M, -M]),
                                      bin=np.concatenate([b.upper, -b.lower]))
            else:  # CTRL_EQ_NONNEG: lower(A) x <= Mid b - diag(s) Rad b <= upper(A) x
                target = b.mid - sv * b.rad
                out[s] = LinearSystem(n, 0, Ain=np.vstack([lo, -hi]),
                                      bin=np.concatenate([target, -target]))
        return out

    single = {
        K.STRONG_INEQ_FREE: (np.hstack([hi, -lo]), b.lower),
        K.STRONG_INEQ_NONNEG: (hi, b.lower),
        K.WEAK_EQ_NONNEG: (np.vstack([lo, -hi]), np.concatenate([b.upper, -b.lower])),
        K.WEAK_INEQ_NONNEG: (lo, b.upper),
        K.TOL_INEQ_FREE: (np.hstack([hi, -lo]), b.upper),
        K.TOL_INEQ_NONNEG: (hi, b.upper),
        K.CTRL_INEQ_NONNEG: (lo, b.lower),
    }
    Ain, rhs = single[kind]
    return {(): LinearSystem(Ain.shape[1], 0, Ain=Ain, bin=rhs)}


def special_solvability(kind: SpecialKind, A: IntervalMatrix, b: IntervalMatrix):
    """Evaluate a classical characterization.

    Per-sign kinds return ``{s: FeasibilityResult}``; single-LP kinds return
    one FeasibilityResult.
    """
    kind = SpecialKind(kind)
    results = {s: solve_feasibility(lin) for s, lin in special_solvability_systems(kind, A, b).items()}
    if kind in PER_SIGN_KINDS:
        return results
    return results[()]


def special_solvable(kind: SpecialKind, A: IntervalMatrix, b: IntervalMatrix) -> bool:
    res = special_solvability(kind, A, b)
    if isinstance(res, dict):
        return all(isinstance(r, Witness) for r in res.values())
    return isinstance(res, Witness)

"""AE-solution membership, orthant decomposition, finders, attainment and
the classical special cases (weak/strong/tolerable/controllable)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DimensionError, NotAnAeSolution, PreconditionViolated
from .interval import (
    IntervalMatrix,
    QuantifiedBlock,
    QuantifiedSystem,
    Realization,
    as_fractions,
    check_signs,
    matvec,
    rational_vector,
    satisfies_point_system,
    sgn,
    sign_vectors,
    zeros,
)
from .lp import LinearSystem, Witness, solve_feasibility, stack_inequalities


@dataclass(frozen=True)
class AeSolutionReport:
    is_solution: bool
    eq_slack: tuple
    ineq_slack: tuple
    sign_violation: bool


class AeSolution(NamedTuple):
    x: tuple
    y: tuple
    s: tuple


def check_ae_solution(system: QuantifiedSystem, x, y) -> AeSolutionReport:
    """Evaluate the closed-form AE-solution test at ``(x, y)`` with exact slacks.

    Equation rows:   |Mid A x + Mid B y - Mid a|
                       <= (Rad A^E - Rad A^A) x + (Rad B^E - Rad B^A)|y| + Rad a^E - Rad a^A
    Inequality rows: Mid C x + Mid D y - Mid b
                       <= (Rad C^E - Rad C^A) x + (Rad D^E - Rad D^A)|y| + Rad b^E - Rad b^A
    plus x >= 0.  A slack is right-hand side minus left-hand side.
    """
    x = rational_vector(x, system.n)
    y = rational_vector(y, system.n_free)
    abs_y = np.abs(y)
    A, B, a, C, D, b = system.A, system.B, system.a, system.C, system.D, system.b

    eq_lhs = np.abs(matvec(A.mid, x) + matvec(B.mid, y) - a.mid)
    eq_rhs = (matvec(A.exists.rad - A.forall.rad, x) + matvec(B.exists.rad - B.forall.rad, abs_y)
              + a.exists.rad - a.forall.rad)
    ineq_lhs = matvec(C.mid, x) + matvec(D.mid, y) - b.mid
    ineq_rhs = (matvec(C.exists.rad - C.forall.rad, x) + matvec(D.exists.rad - D.forall.rad, abs_y)
                + b.exists.rad - b.forall.rad)

    eq_slack = tuple(as_fractions(eq_rhs - eq_lhs))
    ineq_slack = tuple(as_fractions(ineq_rhs - ineq_lhs))
    sign_violation = any(v < 0 for v in x)
    ok = not sign_violation and all(v >= 0 for v in eq_slack) and all(v >= 0 for v in ineq_slack)
    return AeSolutionReport(ok, eq_slack, ineq_slack, sign_violation)


def _check_block_shapes(M: QuantifiedBlock, rhs: QuantifiedBlock, x) -> np.ndarray:
    if len(M.shape) != 2 or rhs.shape != (M.shape[0],):
        raise DimensionError(f"matrix {M.shape} and right-hand side {rhs.shape} do not match")
    return rational_vector(x, M.shape[1])


def check_ae_solution_eq(Aq: QuantifiedBlock, bq: QuantifiedBlock, x) -> bool:
    """AE-solution test for interval equations ``A x = b`` with free ``x``."""
    x = _check_block_shapes(Aq, bq, x)
    lhs = np.abs(matvec(Aq.mid, x) - bq.mid)
    rhs = matvec(Aq.exists.rad - Aq.forall.rad, np.abs(x)) + bq.exists.rad - bq.forall.rad
    return bool(np.all(lhs <= rhs))


def check_ae_solution_ineq(Cq: QuantifiedBlock, bq: QuantifiedBlock, x) -> bool:
    """AE-solution test for interval inequalities ``C x <= b`` with free ``x``."""
    x = _check_block_shapes(Cq, bq, x)
    lhs = matvec(Cq.mid, x) - bq.mid
    rhs = matvec(Cq.exists.rad - Cq.forall.rad, np.abs(x)) + bq.exists.rad - bq.forall.rad
    return bool(np.all(lhs <= rhs))


def orthant_system(system: QuantifiedSystem, s) -> LinearSystem:
    """Linear description of the AE solutions lying in the orthant ``diag(s) y >= 0``.

    Inequality-only over sign-restricted ``x`` and free ``y``; the orthant
    constraints are the last ``n'`` rows.
    """
    s = check_signs(s, system.n_free)
    sv = rational_vector(s)
    A, B, a, C, D, b = system.A, system.B, system.a, system.C, system.D, system.b
    n, k = system.n, system.n_free
    radB = (B.forall.rad - B.exists.rad) * sv
    radD = (D.forall.rad - D.exists.rad) * sv
    orth_y = zeros((k, k))
    for j in range(k):
        orth_y[j, j] = -sv[j]
    return stack_inequalities(n, k, [
        (A.exists.lower + A.forall.upper, B.mid + radB, a.exists.upper + a.forall.lower),
        (-(A.exists.upper + A.forall.lower), -B.mid + radB, -a.exists.lower - a.forall.upper),
        (C.exists.lower + C.forall.upper, D.mid + radD, b.exists.upper + b.forall.lower),
        (zeros((k, n)), orth_y, zeros(k)),
    ])


def orthant_decomposition(system: QuantifiedSystem) -> dict:
    """Map every sign vector to its orthant piece; the AE-solution set is the union."""
    return {s: orthant_system(system, s) for s in sign_vectors(system.n_free)}


def midpoint_system(system: QuantifiedSystem) -> LinearSystem:
    return LinearSystem(
        system.n, system.n_free,
        Aeq=system.A.mid, Beq=system.B.mid, beq=system.a.mid,
        Ain=system.C.mid, Bin=system.D.mid, bin=system.b.mid,
    )


def orthant_order(system: QuantifiedSystem) -> list:
    """Search order: sign of a midpoint-system solution first (if any), then
    the remaining sign vectors lexicographically."""
    order = list(sign_vectors(system.n_free))
    if system.n_free:
        guess = solve_feasibility(midpoint_system(system))
        if isinstance(guess, Witness):
            first = sgn(guess.y)
            order.remove(first)
            order.insert(0, first)
    return order


@dataclass(frozen=True)
class OrthantOutcome:
    s: tuple
    system: LinearSystem
    result: object  # Witness | Certificate


def search_orthants(system: QuantifiedSystem, stop_at_first: bool = True) -> list:
    """Solve the orthant LPs in search order; stop at the first witness unless
    ``stop_at_first`` is false."""
    outcomes = []
    for s in orthant_order(system):
        lin = orthant_system(system, s)
        res = solve_feasibility(lin)
        outcomes.append(OrthantOutcome(s, lin, res))
        if stop_at_first and isinstance(res, Witness):
            break
    return outcomes


def find_ae_solution(system: QuantifiedSystem) -> Optional[AeSolution]:
    """Return an AE solution with its orthant, or None if every orthant is empty.

    Cost is 2^n' LPs.
    """
    for out in search_orthants(system):
        if isinstance(out.result, Witness):
            return AeSolution(out.result.x, out.result.y, out.s)
    return None


def require_exists_free_degenerate(system: QuantifiedSystem) -> None:
    if any(v != 0 for v in system.B.exists.rad.flat) or any(v != 0 for v in system.D.exists.rad.flat):
        raise PreconditionViolated("existential parts of B and D must have zero radius")


def lifted_system(system: QuantifiedSystem) -> LinearSystem:
    """Single LP in ``(x, y, z)`` with ``z >= |y|`` whose projection is the
    AE-solution set (valid when Rad B^E = Rad D^E = 0).  Free block is ``(y, z)``."""
    require_exists_free_degenerate(system)
    A, B, a, C, D, b = system.A, system.B, system.a, system.C, system.D, system.b
    n, k = system.n, system.n_free
    eye = zeros((k, k))
    for j in range(k):
        eye[j, j] = 1
    return stack_inequalities(n, 2 * k, [
        (A.exists.lower + A.forall.upper, np.hstack([B.mid, B.forall.rad]),
         a.exists.upper + a.forall.lower),
        (-(A.exists.upper + A.forall.lower), np.hstack([-B.mid, B.forall.rad]),
         -a.exists.lower - a.forall.upper),
        (C.exists.lower + C.forall.upper, np.hstack([D.mid, D.forall.rad]),
         b.exists.upper + b.forall.lower),
        (zeros((k, n)), np.hstack([eye, -eye]), zeros(k)),
        (zeros((k, n)), np.hstack([-eye, -eye]), zeros(k)),
    ])


def find_ae_solution_poly(system: QuantifiedSystem):
    """One-LP finder for systems with Rad B^E = Rad D^E = 0.

    Returns ``(x, y, z)`` with ``z >= |y|`` or None.
    """
    res = solve_feasibility(lifted_system(system))
    if not isinstance(res, Witness):
        return None
    k = system.n_free
    return res.x, res.y[:k], res.y[k:]


@dataclass(frozen=True, eq=False)
class AttainmentRealization:
    A_e: np.ndarray
    B_e: np.ndarray
    a_e: np.ndarray
    C_e: np.ndarray
    D_e: np.ndarray
    b_e: np.ndarray
    u: tuple

    def as_realization(self) -> Realization:
        return Realization(A=self.A_e, B=self.B_e, a=self.a_e, C=self.C_e, D=self.D_e, b=self.b_e)


def attain_exists_params(system: QuantifiedSystem, x, y, forall_choice: Realization) -> AttainmentRealization:
    """Existential parameters under which ``(x, y)`` solves the point system
    obtained from ``forall_choice``.

    Row ``i`` of the equation block is met by moving A^E, B^E, a^E away from
    their midpoints by the fraction ``u_i`` of their radii, where ``u_i`` is the
    realised residual divided by the total existential slack of that row.
    """
    x = rational_vector(x, system.n)
    y = rational_vector(y, system.n_free)
    if not check_ae_solution(system, x, y).is_solution:
        raise NotAnAeSolution("(x, y) is not an AE solution of the system")
    if not forall_choice.inside(system, "forall"):
        raise ValueError("forall_choice lies outside the universally quantified intervals")

    A, B, a, C, D, b = system.A, system.B, system.a, system.C, system.D, system.b
    f = forall_choice
    sy = rational_vector(sgn(y))
    residual = (matvec(f.A, x) + matvec(f.B, y) - f.a
                + matvec(A.exists.mid, x) + matvec(B.exists.mid, y) - a.exists.mid)
    spread = matvec(A.exists.rad, x) + matvec(B.exists.rad, np.abs(y)) + a.exists.rad
    u = as_fractions([r / d if d > 0 else 1 for r, d in zip(residual, spread)])

    col_u = u.reshape(-1, 1)
    return AttainmentRealization(
        A_e=as_fractions(A.exists.mid - col_u * A.exists.rad),
        B_e=as_fractions(B.exists.mid - col_u * B.exists.rad * sy),
        a_e=as_fractions(a.exists.mid + u * a.exists.rad),
        C_e=as_fractions(C.exists.lower),
        D_e=as_fractions(D.exists.mid - D.exists.rad * sy),
        b_e=as_fractions(b.exists.upper),
        u=tuple(u),
    )


def substitution_holds(forall_choice: Realization, exists_choice: Realization, x, y) -> bool:
    """Does ``(x, y)`` solve the point system with coefficients forall + exists?"""
    f, e = forall_choice, exists_choice
    return satisfies_point_system(f.A + e.A, f.B + e.B, f.a + e.a, f.C + e.C, f.D + e.D, f.b + e.b, x, y)


class Kind(enum.Enum):
    WEAK = "weak"
    STRONG = "strong"
    TOLERABLE = "tolerable"
    CONTROLLABLE = "controllable"


class Form(enum.Enum):
    EQ_FREE = "eq-free"
    EQ_NONNEG = "eq-nonneg"
    INEQ_FREE = "ineq-free"
    INEQ_NONNEG = "ineq-nonneg"


# (quantifier of the matrix, quantifier of the right-hand side); True = forall
KIND_QUANTIFIERS = {
    Kind.WEAK: (False, False),
    Kind.STRONG: (True, True),
    Kind.TOLERABLE: (True, False),
    Kind.CONTROLLABLE: (False, True),
}


def table1_condition(kind: Kind, form: Form, A: IntervalMatrix, b: IntervalMatrix, x) -> bool:
    """Closed-form robust feasibility test of ``x`` for one solution type and
    one problem form (``A x = b`` or ``A x <= b``, free or nonnegative ``x``)."""
    kind, form = Kind(kind), Form(form)
    if len(A.shape) != 2 or b.shape != (A.shape[0],):
        raise DimensionError(f"matrix {A.shape} and right-hand side {b.shape} do not match")
    x = rational_vector(x, A.shape[1])
    ax = np.abs(x)

    def le(lhs, rhs):
        return bool(np.all(as_fractions(lhs) <= as_fractions(rhs)))

    if form is Form.EQ_FREE:
        lhs = np.abs(matvec(A.mid, x) - b.mid)
        spread_A, spread_b = matvec(A.rad, ax), b.rad
        sign_A, sign_b = {
            Kind.WEAK: (1, 1), Kind.STRONG: (-1, -1),
            Kind.TOLERABLE: (-1, 1), Kind.CONTROLLABLE: (1, -1),
        }[kind]
        return le(lhs, sign_A * spread_A + sign_b * spread_b)

    if form is Form.INEQ_FREE:
        mx, rx = matvec(A.mid, x), matvec(A.rad, ax)
        if kind is Kind.WEAK:
            return le(mx, rx + b.upper)
        if kind is Kind.STRONG:
            return le(mx + rx, b.lower)
        if kind is Kind.TOLERABLE:
            return le(mx + rx, b.upper)
        return le(mx - rx, b.lower)

    if any(v < 0 for v in x):
        return False
    lo_x, hi_x = matvec(A.lower, x), matvec(A.upper, x)
    if form is Form.EQ_NONNEG:
        # the range {A x} = [lo_x, hi_x] must meet / lie in / cover [b_lo, b_hi]
        if kind is Kind.WEAK:
            return le(lo_x, b.upper) and le(b.lower, hi_x)
        if kind is Kind.STRONG:
            return le(b.upper, lo_x) and le(hi_x, b.lower)
        if kind is Kind.TOLERABLE:
            return le(hi_x, b.upper) and le(b.lower, lo_x)
        return le(lo_x, b.lower) and le(b.upper, hi_x)

    if kind is Kind.WEAK:
        return le(lo_x, b.upper)
    if kind is Kind.STRONG:
        return le(hi_x, b.lower)
    if kind is Kind.TOLERABLE:
        return le(hi_x, b.upper)
    return le(lo_x, b.lower)


def table1_system(kind: Kind, form: Form, A: IntervalMatrix, b: IntervalMatrix) -> QuantifiedSystem:
    """The general quantified system corresponding to one solution type/form.

    Free-variable forms put ``A`` in the free-variable block (B or D).
    """
    kind, form = Kind(kind), Form(form)
    a_forall, b_forall = KIND_QUANTIFIERS[kind]
    Mq = QuantifiedBlock.all_forall(A) if a_forall else QuantifiedBlock.all_exists(A)
    rq = QuantifiedBlock.all_forall(b) if b_forall else QuantifiedBlock.all_exists(b)
    slot = {Form.EQ_NONNEG: "A", Form.EQ_FREE: "B", Form.INEQ_NONNEG: "C", Form.INEQ_FREE: "D"}[form]
    rhs = "a" if slot in "AB" else "b"
    rows, cols = A.shape
    dims = dict(m=rows if rhs == "a" else 0, m_ineq=rows if rhs == "b" else 0,
                n=cols if slot in "AC" else 0, n_free=cols if slot in "BD" else 0)
    return QuantifiedSystem.build(**{slot: Mq, rhs: rq}, **dims)


def table1_point(form: Form, x) -> tuple:
    """Split a point for :func:`table1_system`: ``(x, y)`` of the general system."""
    form = Form(form)
    if form in (Form.EQ_FREE, Form.INEQ_FREE):
        return (), tuple(x)
    return tuple(x), ()

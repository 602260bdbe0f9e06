"""Exact rational feasibility for ``Aeq x + Beq y = beq, Ain x + Bin y <= bin, x >= 0``.

The decision is made by phase one of the primal simplex method over
Fractions with Bland's rule.  Infeasible systems come back with a Farkas
certificate ``(p, q)`` satisfying

    Aeq^T p + Ain^T q >= 0,  Beq^T p + Bin^T q = 0,  beq^T p + bin^T q <= -1,  q >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DimensionError
from .interval import ONE, ZERO, as_fractions, matvec, rational_matrix, rational_vector, zeros


class LinearSystem:
    """A concrete linear feasibility problem; ``x`` is sign-restricted, ``y`` free."""

    __slots__ = ("n", "n_free", "Aeq", "Beq", "beq", "Ain", "Bin", "bin")

    def __init__(self, n: int, n_free: int = 0, *, Aeq=None, Beq=None, beq=None,
                 Ain=None, Bin=None, bin=None):
        self.n = int(n)
        self.n_free = int(n_free)
        p = _rows(Aeq, Beq, beq)
        q = _rows(Ain, Bin, bin)
        self.Aeq = _block(Aeq, p, self.n)
        self.Beq = _block(Beq, p, self.n_free)
        self.beq = rational_vector(beq if beq is not None else [ZERO] * p, p)
        self.Ain = _block(Ain, q, self.n)
        self.Bin = _block(Bin, q, self.n_free)
        self.bin = rational_vector(bin if bin is not None else [ZERO] * q, q)
        for arr in (self.Aeq, self.Beq, self.beq, self.Ain, self.Bin, self.bin):
            arr.flags.writeable = False

    @property
    def p(self) -> int:
        return self.beq.shape[0]

    @property
    def q(self) -> int:
        return self.bin.shape[0]

    def __repr__(self) -> str:
        return f"LinearSystem(n={self.n}, n_free={self.n_free}, p={self.p}, q={self.q})"


def _rows(*parts) -> int:
    counts = {len(x) for x in parts if x is not None}
    if len(counts) > 1:
        raise DimensionError(f"row counts disagree: {sorted(counts)}")
    return counts.pop() if counts else 0


def _block(data, rows: int, cols: int) -> np.ndarray:
    if data is None:
        return zeros((rows, cols))
    return rational_matrix(data, rows, cols)


@dataclass(frozen=True)
class Witness:
    x: tuple
    y: tuple

    feasible = True


@dataclass(frozen=True)
class Certificate:
    p: tuple
    q: tuple

    feasible = False


FeasibilityResult = Union[Witness, Certificate]


def solve_feasibility(system: LinearSystem) -> FeasibilityResult:
    """Return a Witness if ``system`` is feasible, else a Farkas Certificate.

    Free variables are split as ``y = y+ - y-``, inequalities get slacks, rows
    are sign-flipped to a nonnegative right-hand side and one artificial
    variable per row starts the basis.  Phase one minimises the sum of the
    artificials; Bland's rule guarantees termination.
    """
    n, k, p, q = system.n, system.n_free, system.p, system.q
    rows = p + q
    ncols = n + 2 * k + q

    M = zeros((rows, ncols))
    M[:p, :n] = system.Aeq
    M[:p, n:n + k] = system.Beq
    M[:p, n + k:n + 2 * k] = -system.Beq
    M[p:, :n] = system.Ain
    M[p:, n:n + k] = system.Bin
    M[p:, n + k:n + 2 * k] = -system.Bin
    for i in range(q):
        M[p + i, n + 2 * k + i] = ONE
    rhs = np.concatenate([system.beq, system.bin]) if rows else zeros(0)
    sigma = [(-1 if v < 0 else 1) for v in rhs]
    for i, s in enumerate(sigma):
        if s < 0:
            M[i] = -M[i]
            rhs[i] = -rhs[i]

    # tableau columns: original | artificial | rhs;  last row holds reduced costs
    width = ncols + rows + 1
    T = zeros((rows + 1, width))
    T[:rows, :ncols] = M
    for i in range(rows):
        T[i, ncols + i] = ONE
    T[:rows, -1] = rhs
    T[rows, ncols:ncols + rows] = ONE
    for i in range(rows):
        T[rows] = T[rows] - T[i]
    basis = list(range(ncols, ncols + rows))

    while True:
        entering = next((j for j in range(width - 1) if T[rows, j] < 0), None)
        if entering is None:
            break
        leave, best = None, None
        for i in range(rows):
            a = T[i, entering]
            if a > 0:
                ratio = T[i, -1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        # phase one is bounded below by 0, so an entering column always has a positive entry
        _pivot(T, leave, entering)
        basis[leave] = entering

    infeasibility = -T[rows, -1]
    if infeasibility == 0:
        values = [ZERO] * (ncols + rows)
        for i, j in enumerate(basis):
            values[j] = T[i, -1]
        x = tuple(values[:n])
        y = tuple(values[n + j] - values[n + k + j] for j in range(k))
        return Witness(x, y)

    # simplex multipliers: reduced cost of artificial i is 1 - pi_i
    pi = [ONE - T[rows, ncols + i] for i in range(rows)]
    lam = [-sigma[i] * pi[i] / infeasibility for i in range(rows)]
    return Certificate(tuple(lam[:p]), tuple(lam[p:]))


def _pivot(T: np.ndarray, r: int, c: int) -> None:
    T[r] = T[r] / T[r, c]
    for i in range(T.shape[0]):
        if i != r and T[i, c] != 0:
            T[i] = T[i] - T[i, c] * T[r]


def verify(system: LinearSystem, result: FeasibilityResult) -> bool:
    """Exact, solver-independent check of a witness or certificate."""
    if isinstance(result, Witness):
        x = rational_vector(result.x, system.n)
        y = rational_vector(result.y, system.n_free)
        if any(v < 0 for v in x):
            return False
        eq = matvec(system.Aeq, x) + matvec(system.Beq, y)
        ineq = matvec(system.Ain, x) + matvec(system.Bin, y)
        return bool(np.all(eq == system.beq)) and bool(np.all(ineq <= system.bin))
    if isinstance(result, Certificate):
        p = rational_vector(result.p, system.p)
        q = rational_vector(result.q, system.q)
        if any(v < 0 for v in q):
            return False
        col_x = _tmatvec(system.Aeq, p, system.n) + _tmatvec(system.Ain, q, system.n)
        col_y = _tmatvec(system.Beq, p, system.n_free) + _tmatvec(system.Bin, q, system.n_free)
        value = sum(system.beq * p, ZERO) + sum(system.bin * q, ZERO)
        return bool(np.all(col_x >= 0)) and bool(np.all(col_y == 0)) and value <= -1
    raise TypeError(f"not a feasibility result: {result!r}")


def _tmatvec(M: np.ndarray, v: np.ndarray, cols: int) -> np.ndarray:
    if M.shape[0] == 0:
        return zeros(cols)
    return as_fractions(M.T @ v)


def is_feasible(system: LinearSystem) -> bool:
    return isinstance(solve_feasibility(system), Witness)


def stack_inequalities(n: int, n_free: int, blocks) -> LinearSystem:
    """Build an inequality-only system from ``(Ax_rows, By_rows, rhs)`` pieces."""
    Ain, Bin, rhs = [], [], []
    for A_part, B_part, r_part in blocks:
        A_part = as_fractions(A_part)
        B_part = as_fractions(B_part)
        r_part = as_fractions(r_part)
        Ain.extend(A_part.reshape(len(r_part), n).tolist())
        Bin.extend(B_part.reshape(len(r_part), n_free).tolist())
        rhs.extend(r_part.tolist())
    q = len(rhs)
    return LinearSystem(n, n_free, Ain=rational_matrix(Ain, q, n), Bin=rational_matrix(Bin, q, n_free), bin=rhs)


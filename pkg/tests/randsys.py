"""Random small instances shared by the test modules."""

import random
from fractions import Fraction

import numpy as np

from aesolve.interval import IntervalMatrix, QuantifiedBlock, QuantifiedSystem, Realization, zeros
from aesolve.lp import LinearSystem

HALVES = [Fraction(k, 2) for k in range(-2, 3)]


def rand_interval(rng, radii=None):
    if radii is None:
        lo, hi = sorted((rng.choice(HALVES), rng.choice(HALVES)))
        return lo, hi
    mid = rng.choice(HALVES)
    rad = rng.choice(radii)
    return mid - rad, mid + rad


def rand_block(rng, shape, *, p_forall=0.5, radii=None, forall_wide=True, exists_wide=True):
    """Each entry goes entirely to one quantifier, like a mask split."""
    f_lo, f_hi, e_lo, e_hi = zeros(shape), zeros(shape), zeros(shape), zeros(shape)
    for idx in np.ndindex(shape):
        lo, hi = rand_interval(rng, radii)
        forall = rng.random() < p_forall
        if (forall and not forall_wide) or (not forall and not exists_wide):
            lo = hi = rng.choice(HALVES)
        if forall:
            f_lo[idx], f_hi[idx] = lo, hi
        else:
            e_lo[idx], e_hi[idx] = lo, hi
    return QuantifiedBlock(IntervalMatrix(f_lo, f_hi), IntervalMatrix(e_lo, e_hi))


def count_wide_forall(system):
    return sum(int(np.sum(getattr(system, k).forall.lower != getattr(system, k).forall.upper))
               for k in "ABaCDb")


def rand_system(rng, *, m=(0, 2), m_ineq=(0, 2), n=(0, 2), n_free=(0, 2), max_wide_forall=6,
                p_forall=0.5, radii=None, free_exists_degenerate=False, dims=None):
    while True:
        if dims is None:
            mm, mi, nn, nf = (rng.randint(*m), rng.randint(*m_ineq), rng.randint(*n), rng.randint(*n_free))
        else:
            mm, mi, nn, nf = dims
        kw = dict(p_forall=p_forall, radii=radii)
        fkw = dict(kw, exists_wide=not free_exists_degenerate)
        system = QuantifiedSystem(
            A=rand_block(rng, (mm, nn), **kw), B=rand_block(rng, (mm, nf), **fkw),
            a=rand_block(rng, (mm,), **kw), C=rand_block(rng, (mi, nn), **kw),
            D=rand_block(rng, (mi, nf), **fkw), b=rand_block(rng, (mi,), **kw),
        )
        if count_wide_forall(system) <= max_wide_forall:
            return system


def rand_point(rng, length, nonneg=False, denom=2, span=3):
    vals = [Fraction(rng.randint(-span * denom, span * denom), denom) for _ in range(length)]
    return tuple(abs(v) for v in vals) if nonneg else tuple(vals)


def rand_vertex(rng, system, part="forall"):
    blocks = {}
    for name in "ABaCDb":
        box = getattr(getattr(system, name), part)
        val = box.lower.copy()
        for idx in np.ndindex(box.shape):
            if rng.random() < 0.5:
                val[idx] = box.upper[idx]
        blocks[name] = val
    return Realization(**blocks)


def rand_linear_system(rng, max_vars=4, max_cons=4, values=range(-2, 3)):
    total = rng.randint(1, max_vars)
    n = rng.randint(0, total)
    k = total - n
    cons = rng.randint(0, max_cons)
    p = rng.randint(0, cons)
    q = cons - p

    def mat(r, c):
        return [[Fraction(rng.choice(values)) for _ in range(c)] for _ in range(r)]

    def vec(r):
        return [Fraction(rng.choice(values)) for _ in range(r)]

    return LinearSystem(n, k, Aeq=np.array(mat(p, n), dtype=object).reshape(p, n),
                        Beq=np.array(mat(p, k), dtype=object).reshape(p, k), beq=vec(p),
                        Ain=np.array(mat(q, n), dtype=object).reshape(q, n),
                        Bin=np.array(mat(q, k), dtype=object).reshape(q, k), bin=vec(q))


def make_rng(seed):
    return random.Random(seed)

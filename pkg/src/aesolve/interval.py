"""Exact-rational intervals, interval matrices and quantifier-split systems.

Every scalar is a :class:`fractions.Fraction`.  Matrices and vectors are numpy
arrays of ``dtype=object`` holding Fractions, so numpy broadcasting and ``@``
work while arithmetic stays exact.
"""

from __future__ import annotations

import enum
import itertools
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import DimensionError

ZERO = Fraction(0)
ONE = Fraction(1)

SignVector = tuple  # tuple of +1/-1 ints


def to_rational(value) -> Fraction:
    """Convert ``value`` to a Fraction without any rounding.

    Strings may be ``"p/q"`` or decimal literals (``"0.5"`` -> 1/2).  Floats are
    converted through their shortest repr so ``0.1`` becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, numbers.Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"invalid rational literal {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def rational_vector(data, length: int | None = None) -> np.ndarray:
    items = [to_rational(v) for v in (data if data is not None else ())]
    if length is not None and len(items) != length:
        raise DimensionError(f"expected vector of length {length}, got {len(items)}")
    out = np.empty(len(items), dtype=object)
    out[:] = items
    return out


def rational_matrix(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Build a 2-D Fraction array; ``rows``/``cols`` give the shape of empty input."""
    nested = data.tolist() if isinstance(data, np.ndarray) else [list(r) for r in (data if data is not None else ())]
    if nested:
        shape = (len(nested), len(nested[0]))
        if any(len(r) != shape[1] for r in nested):
            raise DimensionError("ragged matrix rows")
    else:
        shape = (rows or 0, cols or 0)
        if shape[0] and shape[1]:
            raise DimensionError(f"expected a {shape[0]}x{shape[1]} matrix, got empty data")
    if (rows is not None and shape[0] != rows) or (cols is not None and shape[1] != cols):
        raise DimensionError(f"expected shape ({rows}, {cols}), got {shape}")
    out = np.empty(shape, dtype=object)
    for i, row in enumerate(nested):
        for j, v in enumerate(row):
            out[i, j] = to_rational(v)
    return out


def zeros(shape) -> np.ndarray:
    return np.full(shape, ZERO, dtype=object)


def as_fractions(arr) -> np.ndarray:
    """Normalise an object array (e.g. the int zeros numpy yields for empty
    products) so every entry is a Fraction."""
    arr = np.asarray(arr, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_rational(v)
    return out


def matvec(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    if M.shape[1] != v.shape[0]:
        raise DimensionError(f"cannot multiply {M.shape} matrix by vector of length {v.shape[0]}")
    return as_fractions(M @ v) if M.shape[0] else zeros(0)


def sgn(values) -> tuple:
    """Entrywise sign with sgn(0) = +1."""
    return tuple(1 if v >= 0 else -1 for v in values)


def sign_vectors(k: int) -> Iterator[tuple]:
    """All of {+1,-1}^k in lexicographic order, (+1,...,+1) first."""
    return itertools.product((1, -1), repeat=k)


def check_signs(s, length: int | None = None) -> tuple:
    s = tuple(int(v) for v in s)
    if any(v not in (1, -1) for v in s):
        raise ValueError(f"sign vector entries must be +1 or -1: {s}")
    if length is not None and len(s) != length:
        raise DimensionError(f"expected sign vector of length {length}, got {len(s)}")
    return s


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = to_rational(self.lo), to_rational(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo},{hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, value) -> "Interval":
        v = to_rational(value)
        return cls(v, v)

    @classmethod
    def from_mid_rad(cls, mid, rad) -> "Interval":
        mid, rad = to_rational(mid), to_rational(rad)
        return cls(mid - rad, mid + rad)

    @classmethod
    def parse(cls, text: str) -> "Interval":
        t = text.strip()
        if t.startswith("[") and t.endswith("]"):
            parts = t[1:-1].split(",")
            if len(parts) != 2:
                raise ValueError(f"malformed interval {text!r}")
            return cls(to_rational(parts[0]), to_rational(parts[1]))
        return cls.point(t)

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def rad(self) -> Fraction:
        return (self.hi - self.lo) / 2

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def __add__(self, other: "Interval") -> "Interval":
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: "Interval") -> "Interval":
        return self + (-other)

    def scale(self, c) -> "Interval":
        c = to_rational(c)
        if c >= 0:
            return Interval(c * self.lo, c * self.hi)
        return Interval(c * self.hi, c * self.lo)

    def __contains__(self, value) -> bool:
        v = to_rational(value)
        return self.lo <= v <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


class IntervalMatrix:
    """Box of real matrices (or vectors) given by entrywise bounds.

    Works for 1-D (vectors) and 2-D shapes, including shapes with a zero
    dimension.
    """

    __slots__ = ("_lo", "_hi")

    def __init__(self, lower, upper):
        lo = as_fractions(lower)
        hi = as_fractions(upper)
        if lo.shape != hi.shape:
            raise DimensionError(f"bound shapes differ: {lo.shape} vs {hi.shape}")
        if lo.ndim not in (1, 2):
            raise DimensionError("interval matrices must be 1-D or 2-D")
        if lo.size and not np.all(lo <= hi):
            raise ValueError("lower bound exceeds upper bound")
        self._lo = _freeze(lo)
        self._hi = _freeze(hi)

    @classmethod
    def point(cls, values) -> "IntervalMatrix":
        arr = as_fractions(values)
        return cls(arr, arr)

    @classmethod
    def zeros(cls, shape) -> "IntervalMatrix":
        z = zeros(shape)
        return cls(z, z)

    @classmethod
    def from_mid_rad(cls, mid, rad) -> "IntervalMatrix":
        mid, rad = as_fractions(mid), as_fractions(rad)
        return cls(mid - rad, mid + rad)

    @classmethod
    def from_intervals(cls, nested) -> "IntervalMatrix":
        """Build from a vector or matrix of Interval objects / ``(lo, hi)`` pairs."""

        def conv(item):
            return item if isinstance(item, Interval) else Interval(*item)

        if _is_matrix(nested):
            cells = [[conv(item) for item in row] for row in nested]
            lo = rational_matrix([[iv.lo for iv in row] for row in cells])
            hi = rational_matrix([[iv.hi for iv in row] for row in cells])
        else:
            cells = [conv(item) for item in nested]
            lo = rational_vector([iv.lo for iv in cells])
            hi = rational_vector([iv.hi for iv in cells])
        return cls(lo, hi)

    @property
    def shape(self) -> tuple:
        return self._lo.shape

    @property
    def lower(self) -> np.ndarray:
        return self._lo

    @property
    def upper(self) -> np.ndarray:
        return self._hi

    @property
    def mid(self) -> np.ndarray:
        return _freeze((self._lo + self._hi) / 2) if self._lo.size else self._lo

    @property
    def rad(self) -> np.ndarray:
        return _freeze((self._hi - self._lo) / 2) if self._lo.size else self._lo

    def __getitem__(self, idx) -> Interval:
        return Interval(self._lo[idx], self._hi[idx])

    def __iter__(self):
        for idx in np.ndindex(self.shape):
            yield self[idx]

    def __add__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add shapes {self.shape} and {other.shape}")
        return IntervalMatrix(self._lo + other._lo, self._hi + other._hi)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and bool(np.all(self._lo == other._lo))
            and bool(np.all(self._hi == other._hi))
        )

    __hash__ = None

    def contains(self, values) -> bool:
        arr = as_fractions(values)
        if arr.shape != self.shape:
            raise DimensionError(f"expected shape {self.shape}, got {arr.shape}")
        return bool(np.all(self._lo <= arr) and np.all(arr <= self._hi))

    def is_degenerate(self) -> bool:
        return bool(np.all(self._lo == self._hi))

    def __repr__(self) -> str:
        body = np.vectorize(lambda lo, hi: f"[{lo},{hi}]", otypes=[object])(self._lo, self._hi) if self._lo.size else "[]"
        return f"IntervalMatrix({body.tolist() if not isinstance(body, str) else body}, shape={self.shape})"


def _is_matrix(nested) -> bool:
    if len(nested) == 0:
        return False
    first = nested[0]
    return isinstance(first, (list, tuple)) and len(first) > 0 and isinstance(first[0], (Interval, list, tuple))


def mid_rad(M: IntervalMatrix) -> tuple[np.ndarray, np.ndarray]:
    return M.mid, M.rad


def eval_range(M: IntervalMatrix, x) -> IntervalMatrix:
    """Exact range of ``M0 @ x`` over all ``M0`` in ``M``.

    Each coefficient appears once, so summing scalar interval products is
    exact: coefficient j contributes ``[lo*x_j, hi*x_j]`` (endpoints swapped
    for negative ``x_j``).
    """
    if len(M.shape) != 2:
        raise DimensionError("eval_range needs a 2-D interval matrix")
    x = rational_vector(x, M.shape[1])
    nonneg = np.array([v >= 0 for v in x], dtype=bool)
    lo_terms = np.where(nonneg, M.lower * x, M.upper * x) if M.lower.size else zeros(M.shape)
    hi_terms = np.where(nonneg, M.upper * x, M.lower * x) if M.lower.size else zeros(M.shape)
    lo = as_fractions(lo_terms.sum(axis=1)) if M.shape[1] else zeros(M.shape[0])
    hi = as_fractions(hi_terms.sum(axis=1)) if M.shape[1] else zeros(M.shape[0])
    return IntervalMatrix(lo, hi)


class Quantifier(enum.Enum):
    FORALL = "A"
    EXISTS = "E"

    @classmethod
    def parse(cls, tag: str) -> "Quantifier":
        tag = tag.strip()
        if tag in ("A", "∀", "forall"):
            return cls.FORALL
        if tag in ("E", "∃", "exists"):
            return cls.EXISTS
        raise ValueError(f"unknown quantifier tag {tag!r}")


@dataclass(frozen=True)
class QuantifierMask:
    """Per-entry quantifiers; ``flags`` is row-major, flat or nested by row."""

    shape: tuple
    flags: tuple

    def __post_init__(self):
        shape = tuple(self.shape)
        flat = [f for row in self.flags for f in row] if any(isinstance(f, (list, tuple)) for f in self.flags) \
            else list(self.flags)
        flags = tuple(f if isinstance(f, Quantifier) else Quantifier.parse(f) for f in flat)
        if len(flags) != int(np.prod(shape)):
            raise DimensionError(f"mask of shape {shape} needs {int(np.prod(shape))} flags, got {len(flags)}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "flags", flags)

    @classmethod
    def uniform(cls, shape, q: Quantifier) -> "QuantifierMask":
        shape = tuple(shape)
        return cls(shape, (q,) * int(np.prod(shape)))

    def array(self) -> np.ndarray:
        arr = np.empty(len(self.flags), dtype=object)
        arr[:] = self.flags
        return arr.reshape(self.shape)


@dataclass(frozen=True, eq=False)
class QuantifiedBlock:
    """An interval block written as the sum of a universal and an existential part."""

    forall: IntervalMatrix
    exists: IntervalMatrix

    def __post_init__(self):
        if self.forall.shape != self.exists.shape:
            raise DimensionError(
                f"forall part {self.forall.shape} and exists part {self.exists.shape} differ"
            )

    @classmethod
    def all_forall(cls, M) -> "QuantifiedBlock":
        M = _as_interval_matrix(M)
        return cls(M, IntervalMatrix.zeros(M.shape))

    @classmethod
    def all_exists(cls, M) -> "QuantifiedBlock":
        M = _as_interval_matrix(M)
        return cls(IntervalMatrix.zeros(M.shape), M)

    @classmethod
    def zeros(cls, shape) -> "QuantifiedBlock":
        z = IntervalMatrix.zeros(shape)
        return cls(z, z)

    @property
    def shape(self) -> tuple:
        return self.forall.shape

    @property
    def total(self) -> IntervalMatrix:
        return self.forall + self.exists

    @property
    def mid(self) -> np.ndarray:
        return self.forall.mid + self.exists.mid

    @property
    def rad(self) -> np.ndarray:
        return self.forall.rad + self.exists.rad

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuantifiedBlock):
            return NotImplemented
        return self.forall == other.forall and self.exists == other.exists

    __hash__ = None


def _as_interval_matrix(M) -> IntervalMatrix:
    if isinstance(M, IntervalMatrix):
        return M
    return IntervalMatrix.point(M)


def split_by_mask(M: IntervalMatrix, mask: QuantifierMask) -> QuantifiedBlock:
    if tuple(M.shape) != tuple(mask.shape):
        raise DimensionError(f"mask shape {mask.shape} does not match matrix shape {M.shape}")
    is_forall = np.array([f is Quantifier.FORALL for f in mask.flags], dtype=bool).reshape(M.shape)
    z = zeros(M.shape)
    forall = IntervalMatrix(np.where(is_forall, M.lower, z), np.where(is_forall, M.upper, z))
    exists = IntervalMatrix(np.where(is_forall, z, M.lower), np.where(is_forall, z, M.upper))
    return QuantifiedBlock(forall, exists)


@dataclass(frozen=True, eq=False)
class QuantifiedSystem:
    """``A x + B y = a,  C x + D y <= b,  x >= 0`` with quantifier-split blocks.

    Shapes: A (m, n), B (m, n'), a (m,), C (m', n), D (m', n'), b (m',).
    """

    A: QuantifiedBlock
    B: QuantifiedBlock
    a: QuantifiedBlock
    C: QuantifiedBlock
    D: QuantifiedBlock
    b: QuantifiedBlock

    def __post_init__(self):
        m, n = self.A.shape
        if len(self.B.shape) != 2 or self.B.shape[0] != m:
            raise DimensionError(f"B must have {m} rows, has shape {self.B.shape}")
        n_free = self.B.shape[1]
        if self.a.shape != (m,):
            raise DimensionError(f"a must have shape ({m},), has {self.a.shape}")
        if len(self.C.shape) != 2 or self.C.shape[1] != n:
            raise DimensionError(f"C must have {n} columns, has shape {self.C.shape}")
        m_ineq = self.C.shape[0]
        if self.D.shape != (m_ineq, n_free):
            raise DimensionError(f"D must have shape ({m_ineq}, {n_free}), has {self.D.shape}")
        if self.b.shape != (m_ineq,):
            raise DimensionError(f"b must have shape ({m_ineq},), has {self.b.shape}")

    @classmethod
    def build(cls, *, A=None, B=None, a=None, C=None, D=None, b=None,
              m=None, m_ineq=None, n=None, n_free=None) -> "QuantifiedSystem":
        """Assemble a system, filling omitted blocks with zeros.

        Each block may be a QuantifiedBlock or a plain rational array (taken as a
        degenerate interval).  Dimensions are inferred from the given blocks
        unless stated explicitly.
        """
        blocks = {k: _as_block(v) for k, v in dict(A=A, B=B, a=a, C=C, D=D, b=b).items() if v is not None}

        def infer(current, candidates):
            for val in candidates:
                if val is None:
                    continue
                if current is None:
                    current = val
                elif current != val:
                    raise DimensionError(f"inconsistent block dimensions ({current} vs {val})")
            return 0 if current is None else current

        def dim(name, axis):
            return blocks[name].shape[axis] if name in blocks else None

        m = infer(m, [dim("A", 0), dim("B", 0), dim("a", 0)])
        m_ineq = infer(m_ineq, [dim("C", 0), dim("D", 0), dim("b", 0)])
        n = infer(n, [dim("A", 1), dim("C", 1)])
        n_free = infer(n_free, [dim("B", 1), dim("D", 1)])
        shapes = dict(A=(m, n), B=(m, n_free), a=(m,), C=(m_ineq, n), D=(m_ineq, n_free), b=(m_ineq,))
        full = {k: blocks.get(k, QuantifiedBlock.zeros(shape)) for k, shape in shapes.items()}
        return cls(**full)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def m_ineq(self) -> int:
        return self.C.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def n_free(self) -> int:
        return self.B.shape[1]

    def blocks(self) -> dict:
        return dict(A=self.A, B=self.B, a=self.a, C=self.C, D=self.D, b=self.b)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuantifiedSystem):
            return NotImplemented
        return all(self.blocks()[k] == other.blocks()[k] for k in "ABaCDb")

    __hash__ = None


BLOCK_NAMES = ("A", "B", "a", "C", "D", "b")


def _as_block(value) -> QuantifiedBlock:
    if isinstance(value, QuantifiedBlock):
        return value
    if isinstance(value, IntervalMatrix):
        raise TypeError("wrap interval matrices with QuantifiedBlock.all_forall/all_exists "
                        "or split_by_mask to state their quantifiers")
    return QuantifiedBlock.all_exists(IntervalMatrix.point(value))


@dataclass(frozen=True, eq=False)
class Realization:
    """Point values for the six blocks of a system (e.g. a choice of all
    universally quantified parameters)."""

    A: np.ndarray
    B: np.ndarray
    a: np.ndarray
    C: np.ndarray
    D: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        for name in BLOCK_NAMES:
            object.__setattr__(self, name, _freeze(as_fractions(getattr(self, name))))

    def blocks(self) -> dict:
        return {k: getattr(self, k) for k in BLOCK_NAMES}

    def inside(self, system: QuantifiedSystem, part: str = "forall") -> bool:
        """True iff every block lies inside the ``part`` ("forall"/"exists") intervals."""
        sys_blocks = system.blocks()
        for name in BLOCK_NAMES:
            box = getattr(sys_blocks[name], part)
            value = getattr(self, name)
            if value.shape != box.shape or not box.contains(value):
                return False
        return True

    @classmethod
    def lower_of(cls, system: QuantifiedSystem, part: str = "forall") -> "Realization":
        return cls(**{k: getattr(v, part).lower for k, v in system.blocks().items()})

    @classmethod
    def mid_of(cls, system: QuantifiedSystem, part: str = "forall") -> "Realization":
        return cls(**{k: getattr(v, part).mid for k, v in system.blocks().items()})


def satisfies_point_system(A, B, a, C, D, b, x, y) -> bool:
    """Exact check of ``A x + B y = a, C x + D y <= b, x >= 0``."""
    x = rational_vector(x)
    y = rational_vector(y)
    if any(v < 0 for v in x):
        return False
    eq = matvec(as_fractions(A), x) + matvec(as_fractions(B), y)
    ineq = matvec(as_fractions(C), x) + matvec(as_fractions(D), y)
    return bool(np.all(eq == as_fractions(a))) and bool(np.all(ineq <= as_fractions(b)))


def vertices(box: IntervalMatrix) -> Iterator[np.ndarray]:
    """Every endpoint realization of ``box`` (only wide entries branch)."""
    wide = [idx for idx in np.ndindex(box.shape) if box.lower[idx] != box.upper[idx]]
    for choice in itertools.product((0, 1), repeat=len(wide)):
        value = box.lower.copy()
        for idx, c in zip(wide, choice):
            if c:
                value[idx] = box.upper[idx]
        yield value


def intervals_from_strings(rows: Sequence) -> IntervalMatrix:
    """Helper for literals: ``[["[1,2]", "3"], ...]`` or a flat vector."""
    if rows and isinstance(rows[0], (list, tuple)):
        return IntervalMatrix.from_intervals([[Interval.parse(str(v)) for v in r] for r in rows])
    return IntervalMatrix.from_intervals([Interval.parse(str(v)) for v in rows])

"""Text format for quantified interval systems.

Example::

    # A^E x <= -2,  A^A x <= 1  (x free)
    dims m=0 m'=2 n=0 n'=1
    D:
      [-1,1]@E
      [-1,1]@A
    b:
      -2
      1

Entries are ``[lo,hi]@A`` (universal), ``[lo,hi]@E`` (existential), a sum of
both such as ``[0,1]@A+[-1,1]@E``, or a bare rational.  ``∀``/``∃`` are
accepted in place of ``A``/``E``.  Rationals are ``p/q`` or decimals.
Matrix sections have one row per line; vector sections may spread their
entries over any number of lines.  Empty blocks may be omitted.
"""

from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

from .interval import (
    BLOCK_NAMES,
    Interval,
    IntervalMatrix,
    QuantifiedBlock,
    QuantifiedSystem,
    Quantifier,
    Realization,
    to_rational,
    zeros,
)

_TOKEN = re.compile(r"(?:\[[^\]]*\]|[^\s\[])+")
_PART_SPLIT = re.compile(r"(?<=@[AE\u2200\u2203])\+")
_DIM_KEYS = {"m": "m", "m'": "m_ineq", "mp": "m_ineq", "n": "n", "n'": "n_free", "np": "n_free"}


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


def _shapes(dims: dict) -> dict:
    m, mi, n, k = dims["m"], dims["m_ineq"], dims["n"], dims["n_free"]
    return dict(A=(m, n), B=(m, k), a=(m,), C=(mi, n), D=(mi, k), b=(mi,))


def _parse_rational(text: str, line: int, col: int) -> Fraction:
    try:
        return to_rational(text)
    except ValueError:
        raise ParseError(line, col, f"invalid rational {text!r}") from None


def _parse_interval(text: str, line: int, col: int) -> Interval:
    if text.startswith("["):
        if not text.endswith("]"):
            raise ParseError(line, col, f"malformed interval {text!r}")
        parts = text[1:-1].split(",")
        if len(parts) != 2:
            raise ParseError(line, col, f"interval needs two bounds: {text!r}")
        lo = _parse_rational(parts[0], line, col)
        hi = _parse_rational(parts[1], line, col)
        if lo > hi:
            raise ParseError(line, col, f"empty interval {text!r} (lower bound exceeds upper)")
        return Interval(lo, hi)
    return Interval.point(_parse_rational(text, line, col))


def parse_entry(token: str, line: int = 1, col: int = 1) -> tuple:
    """Return ``(forall_part, exists_part)`` intervals for one entry."""
    forall = exists = None
    for piece in _PART_SPLIT.split(token):
        if "@" in piece:
            body, _, tag = piece.rpartition("@")
            try:
                q = Quantifier.parse(tag)
            except ValueError:
                raise ParseError(line, col, f"unknown quantifier tag {tag!r}") from None
            iv = _parse_interval(body, line, col)
            if q is Quantifier.FORALL:
                if forall is not None:
                    raise ParseError(line, col, "universal part given twice")
                forall = iv
            else:
                if exists is not None:
                    raise ParseError(line, col, "existential part given twice")
                exists = iv
        else:
            iv = _parse_interval(piece, line, col)
            if not iv.is_degenerate:
                raise ParseError(line, col, f"wide interval {piece!r} needs a quantifier tag (@A or @E)")
            if exists is not None:
                raise ParseError(line, col, "existential part given twice")
            exists = iv
    zero = Interval.point(0)
    return forall or zero, exists or zero


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if content.strip():
            yield number, content


def _parse_dims(number: int, content: str) -> dict:
    tokens = content.split()
    dims = {"m": 0, "m_ineq": 0, "n": 0, "n_free": 0}
    for tok in tokens[1:]:
        key, sep, value = tok.partition("=")
        col = content.index(tok) + 1
        if not sep or key not in _DIM_KEYS:
            raise ParseError(number, col, f"bad dimension declaration {tok!r}")
        try:
            dims[_DIM_KEYS[key]] = int(value)
        except ValueError:
            raise ParseError(number, col, f"dimension must be an integer: {tok!r}") from None
        if dims[_DIM_KEYS[key]] < 0:
            raise ParseError(number, col, f"negative dimension {tok!r}")
    return dims


def _read_sections(text: str):
    """Yield the dims dict and, per section, a list of rows of (token, line, col)."""
    dims = None
    sections = {}
    current = None
    header_re = re.compile(r"^\s*([A-Za-z])\s*:\s*(.*)$")
    for number, content in _lines(text):
        stripped = content.strip()
        if dims is None:
            if not stripped.startswith("dims"):
                raise ParseError(number, 1, "expected a 'dims' declaration first")
            dims = _parse_dims(number, content)
            continue
        match = header_re.match(content)
        if match and match.group(1) in BLOCK_NAMES and not stripped.startswith("["):
            name = match.group(1)
            if name in sections:
                raise ParseError(number, 1, f"section {name!r} given twice")
            sections[name] = []
            current = name
            rest_col = match.start(2)
            rest = match.group(2)
            if rest.strip():
                sections[name].append([(m.group(), number, rest_col + m.start() + 1)
                                       for m in _TOKEN.finditer(rest)])
            continue
        if match and not stripped.startswith("["):
            raise ParseError(number, 1, f"unknown section {match.group(1)!r}")
        if current is None:
            raise ParseError(number, 1, "entries before any section header")
        sections[current].append([(m.group(), number, m.start() + 1) for m in _TOKEN.finditer(content)])
    if dims is None:
        raise ParseError(1, 1, "empty document")
    return dims, sections


def _collect(name: str, rows: list, shape: tuple, convert):
    """Lay out parsed tokens in ``shape``; ``convert(token, line, col)`` -> value."""
    line = rows[0][0][1] if rows and rows[0] else 1
    if len(shape) == 1:
        flat = [t for row in rows for t in row]
        if len(flat) != shape[0]:
            raise ParseError(line, 1, f"section {name} needs {shape[0]} entries, got {len(flat)}")
        return [[convert(*t)] for t in flat]
    if len(rows) != shape[0]:
        raise ParseError(line, 1, f"section {name} needs {shape[0]} rows, got {len(rows)}")
    out = []
    for row in rows:
        if len(row) != shape[1]:
            ln = row[0][1] if row else line
            raise ParseError(ln, 1, f"section {name}: row needs {shape[1]} entries, got {len(row)}")
        out.append([convert(*t) for t in row])
    return out


def parse_system(text: str) -> QuantifiedSystem:
    dims, sections = _read_sections(text)
    shapes = _shapes(dims)
    blocks = {}
    for name in BLOCK_NAMES:
        shape = shapes[name]
        size = int(np.prod(shape))
        if name not in sections:
            if size:
                raise ParseError(1, 1, f"missing section {name} of shape {shape}")
            blocks[name] = QuantifiedBlock.zeros(shape)
            continue
        if not size:
            if any(sections[name]):
                raise ParseError(sections[name][0][0][1], 1, f"section {name} must be empty")
            blocks[name] = QuantifiedBlock.zeros(shape)
            continue
        cells = _collect(name, sections[name], shape, parse_entry)
        f_lo, f_hi, e_lo, e_hi = (zeros(shape) for _ in range(4))
        for idx in np.ndindex(shape):
            i = idx[0]
            j = idx[1] if len(idx) == 2 else 0
            f, e = cells[i][j]
            f_lo[idx], f_hi[idx], e_lo[idx], e_hi[idx] = f.lo, f.hi, e.lo, e.hi
        blocks[name] = QuantifiedBlock(IntervalMatrix(f_lo, f_hi), IntervalMatrix(e_lo, e_hi))
    return QuantifiedSystem(**blocks)


def format_rational(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def format_entry(f: Interval, e: Interval) -> str:
    zero = Interval.point(0)
    if f == zero and e.is_degenerate:
        return format_rational(e.lo)
    parts = []
    if f != zero:
        parts.append(f"[{format_rational(f.lo)},{format_rational(f.hi)}]@A")
    if e != zero:
        parts.append(f"[{format_rational(e.lo)},{format_rational(e.hi)}]@E")
    return "+".join(parts)


def serialize_system(system: QuantifiedSystem) -> str:
    lines = [f"dims m={system.m} m'={system.m_ineq} n={system.n} n'={system.n_free}"]
    for name in BLOCK_NAMES:
        blk = getattr(system, name)
        if not int(np.prod(blk.shape)):
            continue
        lines.append(f"{name}:")
        if len(blk.shape) == 1:
            for i in range(blk.shape[0]):
                lines.append("  " + format_entry(blk.forall[i], blk.exists[i]))
        else:
            for i in range(blk.shape[0]):
                lines.append("  " + " ".join(format_entry(blk.forall[i, j], blk.exists[i, j])
                                             for j in range(blk.shape[1])))
    return "\n".join(lines) + "\n"


def parse_realization(text: str, system: QuantifiedSystem) -> Realization:
    """Point values for the universal parameters of ``system``.

    Same layout as a system file with bare rationals only; the ``dims`` line
    is optional and omitted sections default to the lower bound of the
    universal part.
    """
    if not any(content.strip().startswith("dims") for _, content in _lines(text)):
        text = f"dims m={system.m} m'={system.m_ineq} n={system.n} n'={system.n_free}\n" + text
    dims, sections = _read_sections(text)
    expected = {"m": system.m, "m_ineq": system.m_ineq, "n": system.n, "n_free": system.n_free}
    if dims != expected:
        raise ParseError(1, 1, f"dimensions {dims} do not match the system {expected}")
    shapes = _shapes(dims)
    values = {}
    for name in BLOCK_NAMES:
        shape = shapes[name]
        if name not in sections:
            values[name] = getattr(system, name).forall.lower.copy()
            continue
        cells = _collect(name, sections[name], shape, _parse_rational)
        arr = zeros(shape)
        for idx in np.ndindex(shape):
            arr[idx] = cells[idx[0]][idx[1] if len(idx) == 2 else 0]
        values[name] = arr
    return Realization(**values)


def serialize_realization(realization: Realization) -> str:
    lines = []
    for name in BLOCK_NAMES:
        arr = getattr(realization, name)
        if not arr.size:
            continue
        lines.append(f"{name}:")
        if arr.ndim == 1:
            lines.extend("  " + format_rational(v) for v in arr)
        else:
            lines.extend("  " + " ".join(format_rational(v) for v in row) for row in arr)
    return "\n".join(lines) + "\n"


def parse_vector(text: str) -> tuple:
    """Comma-separated rationals, e.g. ``"1/2,-3,0.25"``; empty string -> ()."""
    text = text.strip()
    if not text:
        return ()
    return tuple(to_rational(t) for t in text.split(","))

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aesolve.errors import DimensionError
from aesolve.interval import (
    Interval,
    IntervalMatrix,
    QuantifiedBlock,
    QuantifiedSystem,
    Quantifier,
    QuantifierMask,
    Realization,
    eval_range,
    intervals_from_strings,
    mid_rad,
    satisfies_point_system,
    sgn,
    sign_vectors,
    split_by_mask,
    to_rational,
    vertices,
)

F = Fraction
A, E = Quantifier.FORALL, Quantifier.EXISTS

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=6)


@st.composite
def boxes(draw, shape):
    lo = np.empty(shape, dtype=object)
    hi = np.empty(shape, dtype=object)
    for idx in np.ndindex(shape):
        a, b = sorted((draw(rationals), draw(rationals)))
        lo[idx], hi[idx] = a, b
    return IntervalMatrix(lo, hi)


class TestRationals:
    def test_decimal_and_fraction_strings_agree(self):
        assert to_rational("0.5") == to_rational("1/2") == F(1, 2)

    def test_float_uses_shortest_repr(self):
        assert to_rational(0.1) == F(1, 10)

    @pytest.mark.parametrize("bad", ["x", "1/0", float("nan"), float("inf")])
    def test_rejects_garbage(self, bad):
        with pytest.raises(ValueError):
            to_rational(bad)

    def test_rejects_bool(self):
        with pytest.raises(TypeError):
            to_rational(True)

    def test_sgn_of_zero_is_plus(self):
        assert sgn([F(-1), F(0), F(3)]) == (-1, 1, 1)

    def test_sign_vectors_start_all_plus(self):
        vs = list(sign_vectors(2))
        assert vs[0] == (1, 1) and len(vs) == 4 and len(set(vs)) == 4
        assert list(sign_vectors(0)) == [()]


class TestMidRad:
    def test_single_entry(self):
        mid, rad = mid_rad(IntervalMatrix.from_intervals([[(1, 2)]]))
        assert mid.tolist() == [[F(3, 2)]] and rad.tolist() == [[F(1, 2)]]

    def test_degenerate(self):
        mid, rad = mid_rad(IntervalMatrix.from_intervals([[(3, 3)]]))
        assert mid.tolist() == [[3]] and rad.tolist() == [[0]]

    def test_row_of_two(self):
        mid, rad = mid_rad(IntervalMatrix.from_intervals([[(-1, 1), (-2, -2)]]))
        assert mid.tolist() == [[0, -2]] and rad.tolist() == [[1, 0]]

    @given(boxes((2, 3)))
    def test_mid_rad_round_trip(self, M):
        back = IntervalMatrix.from_mid_rad(M.mid, M.rad)
        assert back == M
        assert all(r >= 0 for r in M.rad.flat)

    def test_rejects_inverted_bounds(self):
        with pytest.raises(ValueError):
            IntervalMatrix([[F(2)]], [[F(1)]])
        with pytest.raises(ValueError):
            Interval(F(2), F(1))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            IntervalMatrix([[F(0), F(0)]], [[F(1)]])


class TestSplit:
    def test_mixed_mask(self):
        M = IntervalMatrix.from_intervals([[(-1, 1), (0, 2)]])
        blk = split_by_mask(M, QuantifierMask((1, 2), ((A, E),)))
        assert blk.forall == IntervalMatrix.from_intervals([[(-1, 1), (0, 0)]])
        assert blk.exists == IntervalMatrix.from_intervals([[(0, 0), (0, 2)]])

    def test_all_exists(self):
        M = IntervalMatrix.from_intervals([[(-1, 1), (0, 2)]])
        blk = split_by_mask(M, QuantifierMask.uniform((1, 2), E))
        assert blk.forall == IntervalMatrix.zeros((1, 2)) and blk.exists == M

    def test_all_forall(self):
        M = IntervalMatrix.from_intervals([[(-1, 1), (0, 2)]])
        blk = split_by_mask(M, QuantifierMask.uniform((1, 2), A))
        assert blk.exists == IntervalMatrix.zeros((1, 2)) and blk.forall == M

    @given(boxes((2, 2)), st.lists(st.booleans(), min_size=4, max_size=4))
    def test_split_parts_add_up(self, M, flags):
        mask = QuantifierMask((2, 2), tuple(tuple(A if f else E for f in flags[i:i + 2]) for i in (0, 2)))
        blk = split_by_mask(M, mask)
        assert blk.total == M

    def test_quantifier_aliases(self):
        assert Quantifier.parse("∀") is A and Quantifier.parse("exists") is E
        with pytest.raises(ValueError):
            Quantifier.parse("Q")


class TestEvalRange:
    def test_scalar(self):
        r = eval_range(IntervalMatrix.from_intervals([[(-1, 1)]]), [2])
        assert r[0] == Interval(F(-2), F(2))

    def test_one_by_two_matches_endpoint_enumeration(self):
        M = IntervalMatrix.from_intervals([[(1, 1), (0, 2)]])
        x = [F(1), F(-1)]
        r = eval_range(M, x)
        values = [sum(v[0] * x) for v in vertices(M)]
        assert r[0] == Interval(min(values), max(values)) == Interval(F(-1), F(1))

    def test_zero_input(self):
        M = intervals_from_strings([["[-1,3]", "[2,5]"], ["[0,1]", "7"]])
        r = eval_range(M, [0, 0])
        assert r == IntervalMatrix.zeros((2,))

    @settings(max_examples=60)
    @given(boxes((2, 2)), st.lists(rationals, min_size=2, max_size=2))
    def test_range_equals_vertex_hull(self, M, x):
        r = eval_range(M, x)
        for i in range(2):
            vals = [sum(v[i] * np.array(x, dtype=object)) for v in vertices(M)]
            assert r[i] == Interval(min(vals), max(vals))

    @given(boxes((1, 2)), boxes((1, 2)), st.lists(rationals, min_size=2, max_size=2))
    def test_monotone_under_inclusion(self, M, extra, x):
        # widening the box can only widen the range
        wider = IntervalMatrix(M.lower - extra.rad, M.upper + extra.rad)
        inner, outer = eval_range(M, x)[0], eval_range(wider, x)[0]
        assert outer.lo <= inner.lo and inner.hi <= outer.hi


class TestSystem:
    def test_build_infers_dimensions(self):
        s = QuantifiedSystem.build(C=[[1, 2]], b=[3])
        assert (s.m, s.m_ineq, s.n, s.n_free) == (0, 1, 2, 0)

    def test_build_rejects_bare_interval_matrix(self):
        with pytest.raises(TypeError):
            QuantifiedSystem.build(C=IntervalMatrix.point([[1]]), b=[1])

    def test_inconsistent_dimensions(self):
        with pytest.raises(DimensionError):
            QuantifiedSystem.build(A=[[1, 2]], C=[[1]], a=[0], b=[0])

    def test_point_system_check(self):
        assert satisfies_point_system([[1]], [[1]], [2], [[0]], [[1]], [1], [1], [1])
        assert not satisfies_point_system([[1]], [[1]], [2], [[0]], [[1]], [1], [-1], [3])

    def test_realization_inside(self):
        blk = QuantifiedBlock.all_forall(IntervalMatrix.from_intervals([(0, 1)]))
        s = QuantifiedSystem.build(C=[[1]], b=blk)
        assert Realization.mid_of(s).inside(s)
        outside = Realization(**{**Realization.mid_of(s).blocks(), "b": np.array([F(2)], dtype=object)})
        assert not outside.inside(s)

    def test_vertices_branch_only_on_wide_entries(self):
        M = IntervalMatrix.from_intervals([[(0, 1), (2, 2)], [(3, 4), (5, 5)]])
        vs = list(vertices(M))
        assert len(vs) == 4
        assert {tuple(v.flat) for v in vs} == {(a, 2, b, 5) for a, b in itertools.product((0, 1), (3, 4))}

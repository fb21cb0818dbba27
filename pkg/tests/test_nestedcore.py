"""Oracles and geometric closed forms for nested sums."""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest

from _util import literal_nested_sum
from horadam_sums.combinatorics import nested_ones
from horadam_sums.exactnum import QuadExt
from horadam_sums.nestedcore import (ONES, EvalCounter, NaiveCapExceededError,
                                     NestedSumSpec, PoleError, SumTerm, f_closed,
                                     f_closed_parity_split, g_closed, geom_sum,
                                     geometric_term, master_E, oracle_nested,
                                     oracle_nested_naive, varied_limit_reduction)
from horadam_sums.sequences import FIBONACCI, horadam

GENERIC = horadam(2, 5, 1, 3)


class TestSumTerm:
    def test_ones(self):
        assert ONES.value(17) == 1

    def test_sequence_with_index_map(self):
        summand = SumTerm(seq=FIBONACCI, index_mul=3, index_add=2)
        assert summand.value(2) == 21  # F[8]

    def test_weight_and_alternation(self):
        summand = SumTerm(seq=FIBONACCI, weight_base=Fraction(1, 2), alternating=True)
        assert summand.value(3) == -Fraction(2, 8)

    def test_negative_index_weight(self):
        summand = geometric_term(Fraction(2))
        assert summand.value(-3) == Fraction(1, 8)

    def test_zero_weight_rejected(self):
        with pytest.raises(ValueError):
            SumTerm(weight_base=Fraction(0))

    def test_quad_weight(self):
        tau = QuadExt(Fraction(1, 2), Fraction(1, 2), 5)
        assert geometric_term(tau).value(2) == tau * tau


class TestSpec:
    def test_uniform_limits_broadcast(self):
        spec = NestedSumSpec(3, 5, 1, ONES)
        assert spec.lower_limits == (1, 1, 1)

    def test_per_level_limits(self):
        spec = NestedSumSpec(2, 5, (0, 1), ONES)
        assert spec.lower_limits == (0, 1)

    def test_wrong_arity_rejected(self):
        with pytest.raises(ValueError):
            NestedSumSpec(3, 5, (1, 2), ONES)

    def test_depth_validated(self):
        with pytest.raises(ValueError):
            NestedSumSpec(0, 5, 1, ONES)


class TestGeomSum:
    def test_powers_of_two(self):
        assert geom_sum(Fraction(2), 3) == 14

    def test_empty(self):
        assert geom_sum(Fraction(2), 0) == 0
        assert geom_sum(Fraction(2), -5) == 0

    def test_half(self):
        assert geom_sum(Fraction(1, 2), 2) == Fraction(3, 4)

    @pytest.mark.parametrize("x", [Fraction(0), Fraction(1)])
    def test_poles_rejected(self, x):
        with pytest.raises(PoleError):
            geom_sum(x, 3)

    @pytest.mark.parametrize("x", [Fraction(3), Fraction(-2), Fraction(2, 7)])
    def test_matches_direct_sum(self, x):
        for m in range(-2, 12):
            assert geom_sum(x, m) == sum((x ** k for k in range(1, m + 1)), Fraction(0))


class TestMasterClosedForm:
    def test_depth_one(self):
        # 2 + 4 + 8 = 14, scaled by (x-1)/x = 1/2
        assert master_E(Fraction(2), 1, 3, 1) == 7

    def test_single_term_sum(self):
        x = Fraction(5, 3)
        c = 2
        assert master_E(x, 1, c, c) == (x - 1) / x * x ** c

    def test_depth_two(self):
        assert master_E(Fraction(3), 2, 2, 1) == Fraction(20, 3)

    def test_poles_rejected(self):
        for x in (Fraction(0), Fraction(1)):
            with pytest.raises(PoleError):
                master_E(x, 2, 3, 1)

    @pytest.mark.parametrize("x", [Fraction(2), Fraction(3), Fraction(1, 2),
                                   Fraction(-2), Fraction(5, 3)])
    def test_equals_scaled_oracle(self, x):
        ratio = (x - 1) / x
        for n, c in product(range(1, 5), (-2, 0, 1, 3)):
            for a_n in range(c, c + 8):
                spec = NestedSumSpec(n, a_n, c, geometric_term(x))
                assert master_E(x, n, a_n, c) == ratio ** n * oracle_nested(spec)

    def test_quad_ext_argument(self):
        tau = QuadExt(Fraction(1, 2), Fraction(1, 2), 5)
        ratio = (tau - 1) / tau
        spec = NestedSumSpec(2, 4, 1, geometric_term(tau))
        assert master_E(tau, 2, 4, 1) == ratio ** 2 * oracle_nested(spec)


class TestFandG:
    def test_f_depth_one(self):
        assert f_closed(Fraction(2), Fraction(1), 1, 3, 1) == 14

    def test_f_single_term(self):
        assert f_closed(Fraction(1), Fraction(2), 1, 1, 1) == Fraction(1, 2)

    def test_f_pole(self):
        with pytest.raises(PoleError):
            f_closed(Fraction(2), Fraction(2), 1, 3, 1)
        with pytest.raises(PoleError):
            f_closed(Fraction(0), Fraction(2), 1, 3, 1)

    def test_g_depth_one(self):
        # -2 + 4
        assert g_closed(Fraction(2), Fraction(1), 1, 2, 1) == 2

    def test_g_single_term(self):
        x, y, c = Fraction(3), Fraction(2), 1
        assert g_closed(x, y, 1, c, c) == -(x / y) ** c

    def test_g_pole(self):
        with pytest.raises(PoleError):
            g_closed(Fraction(2), Fraction(-2), 1, 3, 1)

    @pytest.mark.parametrize("x,y", [(Fraction(3), Fraction(2)), (Fraction(1), Fraction(3)),
                                     (Fraction(-2), Fraction(5)), (Fraction(1, 2), Fraction(3))])
    def test_f_equals_oracle(self, x, y):
        for n, c in product(range(1, 4), (0, 1, 2)):
            for a_n in range(c, c + 6):
                spec = NestedSumSpec(n, a_n, c, geometric_term(x / y))
                assert f_closed(x, y, n, a_n, c) == oracle_nested(spec)

    @pytest.mark.parametrize("x,y", [(Fraction(2), Fraction(1)), (Fraction(1), Fraction(3)),
                                     (Fraction(5), Fraction(2))])
    def test_g_equals_oracle(self, x, y):
        for n, c in product(range(1, 4), (0, 1, 2)):
            for a_n in range(c, c + 6):
                spec = NestedSumSpec(n, a_n, c, geometric_term(x / y, alternating=True))
                assert g_closed(x, y, n, a_n, c) == oracle_nested(spec)

    def test_parity_split_equals_plain(self):
        values = (Fraction(3), Fraction(2), Fraction(-1), Fraction(1, 2), Fraction(7))
        for x, y in product(values, repeat=2):
            if x == y or x == 0 or y == 0:
                continue
            for n, c in product(range(1, 6), (-1, 1, 2)):
                for a_n in range(c - 2, c + 5):
                    assert (f_closed_parity_split(x, y, n, a_n, c)
                            == f_closed(x, y, n, a_n, c))


class TestOracles:
    def test_fibonacci_double_sum(self):
        spec = NestedSumSpec(2, 3, 1, SumTerm(seq=FIBONACCI))
        assert oracle_nested(spec) == 7  # F[7] - F[4] - 3

    def test_empty_outermost(self):
        spec = NestedSumSpec(3, 0, 1, SumTerm(seq=FIBONACCI))
        assert oracle_nested(spec) == 0
        assert oracle_nested_naive(spec) == 0

    def test_ones_matches_closed_count(self):
        for depth, c in product(range(1, 5), (-2, 0, 1)):
            for upper in range(c - 1, c + 9):
                spec = NestedSumSpec(depth, upper, c, ONES)
                assert oracle_nested(spec) == nested_ones(depth, upper, c)

    def test_naive_count_example(self):
        counter = EvalCounter()
        spec = NestedSumSpec(3, 6, 1, ONES)
        value = oracle_nested_naive(spec, counter=counter)
        assert value == 56 and counter.count == 56  # C(8, 3)

    def test_cap_enforced(self):
        spec = NestedSumSpec(6, 40, 1, ONES)
        with pytest.raises(NaiveCapExceededError):
            oracle_nested_naive(spec, cap=1000)

    def test_dp_matches_naive_and_literal(self):
        terms = [ONES,
                 SumTerm(seq=FIBONACCI),
                 SumTerm(seq=GENERIC, index_mul=2, index_add=-1),
                 geometric_term(Fraction(3, 2)),
                 geometric_term(Fraction(-2), alternating=True),
                 SumTerm(seq=FIBONACCI, index_mul=1, weight_base=Fraction(1, 2))]
        for summand in terms:
            for depth, c in product(range(1, 4), (-1, 1)):
                for upper in range(c - 2, c + 6):
                    spec = NestedSumSpec(depth, upper, c, summand)
                    dp = oracle_nested(spec)
                    assert dp == oracle_nested_naive(spec)
                    assert dp == literal_nested_sum(depth, upper, c, summand.value)

    def test_varied_limits_against_literal(self):
        summand = SumTerm(seq=FIBONACCI)
        for limits in [(1, 2), (2, 1), (0, 1, 2), (2, 0, 1), (-1, 1, 0)]:
            for upper in range(-1, 7):
                spec = NestedSumSpec(len(limits), upper, limits, summand)
                expected = literal_nested_sum(len(limits), upper, limits, summand.value)
                assert oracle_nested(spec) == expected
                assert oracle_nested_naive(spec) == expected

    def test_dp_eval_count_linear(self):
        counter = EvalCounter()
        spec = NestedSumSpec(4, 13, 1, ONES)
        oracle_nested(spec, counter=counter)
        assert counter.count == 4 * 13


class TestVariedLimitReduction:
    def test_uniform_degenerates_to_master(self):
        x = Fraction(2)
        for n, c in product(range(1, 5), (0, 1, 2)):
            for a_n in range(c, c + 6):
                spec = NestedSumSpec(n, a_n, c, geometric_term(x))
                assert varied_limit_reduction(spec) == master_E(x, n, a_n, c)

    def test_two_level_example(self):
        x = Fraction(2)
        spec = NestedSumSpec(2, 3, (1, 2), geometric_term(x))
        ratio = (x - 1) / x
        assert varied_limit_reduction(spec) == ratio ** 2 * oracle_nested(spec)

    def test_three_level_example(self):
        x = Fraction(3, 2)
        spec = NestedSumSpec(3, 4, (0, 1, 2), geometric_term(x))
        ratio = (x - 1) / x
        assert varied_limit_reduction(spec) == ratio ** 3 * oracle_nested(spec)

    @pytest.mark.parametrize("x", [Fraction(2), Fraction(-3), Fraction(2, 5)])
    def test_grid_against_oracle(self, x):
        # non-crossing limit profiles: c[k] >= c[k-1] - 1 at every level
        ratio = (x - 1) / x
        limit_sets = [(1,), (0, 2), (2, 1), (1, 1, 3), (-1, -2, 0), (0, 1, 2, 1)]
        for limits in limit_sets:
            n = len(limits)
            assert all(limits[k] >= limits[k - 1] - 1 for k in range(1, n))
            for upper in range(limits[-1] - 1, max(limits) + 5):
                spec = NestedSumSpec(n, upper, limits, geometric_term(x))
                assert varied_limit_reduction(spec) == ratio ** n * oracle_nested(spec)

    def test_crossing_limits_evaluate_without_crash(self):
        # outside the reduction's validity domain the formula still evaluates;
        # agreement there is mapped, not presumed
        spec = NestedSumSpec(2, 2, (2, 0), geometric_term(Fraction(2)))
        value = varied_limit_reduction(spec)
        assert value == Fraction(1, 2)  # frozen: formula as written
        assert oracle_nested(spec) * Fraction(1, 4) == 1  # true scaled sum differs

    def test_rejects_non_geometric(self):
        with pytest.raises(ValueError):
            varied_limit_reduction(NestedSumSpec(2, 3, 1, SumTerm(seq=FIBONACCI)))

    def test_rejects_pole(self):
        with pytest.raises(PoleError):
            varied_limit_reduction(NestedSumSpec(2, 3, 1, geometric_term(Fraction(1))))

"""Generalized binomials and nested unit-count closed forms."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _util import falling_binom, literal_nested_sum
from horadam_sums.combinatorics import binom, binom_column_sum, nested_ones


class TestBinom:
    def test_standard_value(self):
        assert binom(5, 3) == 10

    def test_k_zero(self):
        for top in (-7, -1, 0, 3, 100):
            assert binom(top, 0) == 1

    def test_negative_top(self):
        # (-2)(-3)(-4)/6
        assert binom(-2, 3) == -4

    def test_zero_band(self):
        for top in range(0, 6):
            for k in range(top + 1, 9):
                assert binom(top, k) == 0

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError):
            binom(4, -1)

    @given(top=st.integers(-60, 60), k=st.integers(0, 25))
    @settings(max_examples=300)
    def test_matches_falling_factorial(self, top, k):
        assert binom(top, k) == falling_binom(top, k)

    def test_pascal_identity_grid(self):
        for top in range(-25, 26):
            for k in range(0, 41):
                assert binom(top, k + 1) + binom(top, k) == binom(top + 1, k + 1)


class TestColumnSum:
    def test_example(self):
        # k=2, c=1, m=3: C(2,2) + C(3,2) + C(4,2) = 1 + 3 + 6
        assert binom_column_sum(2, 3, 1) == 10

    def test_counting(self):
        assert binom_column_sum(0, 5, 1) == 5

    def test_empty_range(self):
        assert binom_column_sum(3, 0, 1) == 0
        assert binom_column_sum(0, -10, -2) == 0

    @pytest.mark.parametrize("c", [-3, 0, 1, 5])
    @pytest.mark.parametrize("k", [0, 1, 2, 5, 9])
    def test_matches_direct_summation(self, k, c):
        for m in range(c - 20, c + 21):
            direct = sum(binom(j - c + k, k) for j in range(c, m + 1))
            assert binom_column_sum(k, m, c) == direct


class TestNestedOnes:
    def test_double_sum(self):
        # sum_{b1=1..3} sum_{b0=1..b1} 1 = 1 + 2 + 3
        assert nested_ones(2, 3, 1) == 6

    def test_single_term(self):
        assert nested_ones(1, 4, 4) == 1

    def test_zero_lower(self):
        assert nested_ones(2, 2, 0) == 6

    def test_empty(self):
        assert nested_ones(3, 0, 1) == 0

    def test_depth_validated(self):
        with pytest.raises(ValueError):
            nested_ones(0, 3, 1)

    @pytest.mark.parametrize("c", [-3, 0, 1, 5])
    def test_matches_literal_nested_sum(self, c):
        for depth in range(1, 7):
            for upper in range(c - 1, c + 13):
                literal = literal_nested_sum(depth, upper, c, lambda _: 1)
                assert nested_ones(depth, upper, c) == literal

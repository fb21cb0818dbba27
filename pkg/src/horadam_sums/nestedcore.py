"""Nested-sum evaluation: exact oracles and the geometric closed forms.

A nested sum of depth ``n`` over a summand ``t`` is

    sum_{k[n-1] = c[n-1]}^{A} sum_{k[n-2] = c[n-2]}^{k[n-1]} ...
        sum_{k[0] = c[0]}^{k[1]} t(k[0])

where each index runs from its own lower limit up to the next outer index and
the outermost runs up to ``A``. Sums whose upper limit falls below the lower
limit are empty and contribute zero.

Two independent evaluators are provided: :func:`oracle_nested` computes the
value by iterated prefix sums in O(depth * range) summand evaluations, while
:func:`oracle_nested_naive` literally enumerates every index tuple. Their
agreement guards against a shared bug, and both serve as ground truth for the
closed forms in this module and in :mod:`horadam_sums.identities`.

All values are exact: :class:`~fractions.Fraction`, or
:class:`~horadam_sums.exactnum.QuadExt` when the summand's geometric weight
lives in a quadratic extension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple, Union

from .combinatorics import binom
from .exactnum import QuadExt, neg_one_pow
from .sequences import HoradamParams, term

Scalar = Union[Fraction, QuadExt]

DEFAULT_NAIVE_CAP = 500_000


class PoleError(ValueError):
    """A closed form was evaluated at a parameter value where it divides by zero."""


class NaiveCapExceededError(RuntimeError):
    """A naive enumeration would exceed the configured summand budget."""


@dataclass
class EvalCounter:
    """Mutable tally of summand-scale evaluations (terms, binomials)."""

    count: int = 0

    def add(self, k: int = 1) -> None:
        self.count += k


@dataclass(frozen=True)
class SumTerm:
    """Innermost summand of a nested sum.

    The value at index ``k`` is the product of up to three factors:
    a sequence term ``seq[index_mul*k + index_add]``, a geometric weight
    ``weight_base**k`` and, when ``alternating``, the sign ``(-1)**k``.
    An omitted factor contributes 1. The weight base must be nonzero so that
    negative indices stay well-defined.
    """

    seq: Optional[HoradamParams] = None
    index_mul: int = 1
    index_add: int = 0
    weight_base: Optional[Scalar] = None
    alternating: bool = False

    def __post_init__(self):
        base = self.weight_base
        if base is not None:
            if isinstance(base, int):
                base = Fraction(base)
                object.__setattr__(self, "weight_base", base)
            if not base:
                raise ValueError("weight base must be nonzero")

    def value(self, k: int) -> Scalar:
        result: Scalar = Fraction(1)
        if self.seq is not None:
            result = term(self.seq, self.index_mul * k + self.index_add)
        if self.weight_base is not None:
            result = result * self.weight_base ** k
        if self.alternating and k % 2:
            result = -result
        return result


ONES = SumTerm()


def geometric_term(base: Scalar, alternating: bool = False) -> SumTerm:
    """Summand ``base**k`` (optionally times ``(-1)**k``)."""
    return SumTerm(weight_base=base, alternating=alternating)


@dataclass(frozen=True)
class NestedSumSpec:
    """Shape of a nested sum: depth, outer upper limit, per-level lower limits, summand.

    ``lower_limits`` may be a single int (shared by every level) or one value
    per level ordered innermost first.
    """

    depth: int
    upper: int
    lower_limits: Tuple[int, ...] = field()
    term: SumTerm = ONES

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        limits = self.lower_limits
        if isinstance(limits, int):
            limits = (limits,) * self.depth
        else:
            limits = tuple(limits)
        if len(limits) != self.depth:
            raise ValueError(f"need {self.depth} lower limits, got {len(limits)}")
        object.__setattr__(self, "lower_limits", limits)


def _zero_like(summand: SumTerm) -> Scalar:
    if isinstance(summand.weight_base, QuadExt):
        return summand.weight_base * 0
    return Fraction(0)


def oracle_nested(spec: NestedSumSpec, counter: Optional[EvalCounter] = None) -> Scalar:
    """Exact nested-sum value by iterated prefix sums.

    Level 1 accumulates summand values from its lower limit; each further
    level accumulates the previous level's partial sums. Costs
    O(depth * range) summand evaluations instead of the multinomial blow-up
    of direct enumeration.
    """
    summand = spec.term
    zero = _zero_like(summand)
    lo = min(spec.lower_limits)
    hi = spec.upper
    if hi < spec.lower_limits[-1] or hi < lo:
        return zero
    width = hi - lo + 1
    current: list = []
    for level in range(spec.depth):
        start = spec.lower_limits[level]
        acc = zero
        sums = [zero] * width
        for idx in range(width):
            if lo + idx >= start:
                acc = acc + (summand.value(lo + idx) if level == 0 else current[idx])
                if counter is not None:
                    counter.add()
            sums[idx] = acc
        current = sums
    return current[-1]


def oracle_nested_naive(spec: NestedSumSpec, cap: Optional[int] = DEFAULT_NAIVE_CAP,
                        counter: Optional[EvalCounter] = None) -> Scalar:
    """Literal recursive enumeration of every index tuple.

    Costs one summand evaluation per tuple, which grows like
    C(range + depth, depth); instances whose tuple count exceeds ``cap``
    are rejected rather than run.
    """
    if cap is not None:
        expected = oracle_nested(NestedSumSpec(spec.depth, spec.upper, spec.lower_limits, ONES))
        if expected > cap:
            raise NaiveCapExceededError(
                f"{expected} summand evaluations exceed the naive cap {cap}")
    summand = spec.term
    zero = _zero_like(summand)
    limits = spec.lower_limits

    def descend(level: int, upper: int) -> Scalar:
        total = zero
        if level == 0:
            for k in range(limits[0], upper + 1):
                total = total + summand.value(k)
                if counter is not None:
                    counter.add()
        else:
            for k in range(limits[level], upper + 1):
                total = total + descend(level - 1, k)
        return total

    return descend(spec.depth - 1, spec.upper)


def geom_sum(x: Scalar, m: int) -> Scalar:
    """sum_{k=1}^{m} x**k in closed form (x**(m+1) - x) / (x - 1); empty for m < 1."""
    if x == 0 or x == 1:
        raise PoleError(f"x = {x} is a pole of the geometric closed form")
    if m < 1:
        return x * 0
    return (x ** (m + 1) - x) / (x - 1)


def master_E(x: Scalar, n: int, a_n: int, c: int,
             counter: Optional[EvalCounter] = None) -> Scalar:
    """Closed form for the scaled nested geometric sum with uniform lower limit.

    Returns ``x**a_n - x**(c-1) * sum_{j=0}^{n-1} ((x-1)/x)**j * C(a_n+j-c, j)``,
    which equals ``((x-1)/x)**n`` times the depth-``n`` nested sum of ``x**k``
    with every lower limit ``c`` and outer upper limit ``a_n``.
    """
    if x == 0 or x == 1:
        raise PoleError(f"x = {x} is a pole of the master closed form")
    if n < 1:
        raise ValueError("n must be >= 1")
    ratio = (x - 1) / x
    power = x ** 0
    total = x * 0
    for j in range(n):
        total = total + power * binom(a_n + j - c, j)
        if counter is not None:
            counter.add()
        power = power * ratio
    return x ** a_n - x ** (c - 1) * total


def f_closed(x: Scalar, y: Scalar, n: int, a_n: int, c: int,
             counter: Optional[EvalCounter] = None) -> Scalar:
    """Closed form for the depth-``n`` nested sum of ``(x/y)**k`` (lower limit c).

    Requires x, y nonzero and x != y (the pole of this form).
    """
    if x == 0 or y == 0:
        raise PoleError("x and y must be nonzero")
    if x == y:
        raise PoleError("x = y is a pole of the f-form")
    u = x / (x - y)
    w = x / y
    shift = w ** (c - 1)
    total = u * 0
    for j in range(n):
        total = total + u ** (n - j) * shift * binom(a_n + j - c, j)
        if counter is not None:
            counter.add()
    return u ** n * w ** a_n - total


def g_closed(x: Scalar, y: Scalar, n: int, a_n: int, c: int,
             counter: Optional[EvalCounter] = None) -> Scalar:
    """Closed form for the depth-``n`` nested sum of ``(-1)**k * (x/y)**k``.

    Requires x, y nonzero and x != -y (the pole of this form).
    """
    if x == 0 or y == 0:
        raise PoleError("x and y must be nonzero")
    if x == -y:
        raise PoleError("x = -y is a pole of the g-form")
    u = x / (x + y)
    w = x / y
    shift = w ** (c - 1)
    total = u * 0
    for j in range(n):
        total = total + u ** (n - j) * shift * binom(a_n + j - c, j)
        if counter is not None:
            counter.add()
    return neg_one_pow(a_n) * u ** n * w ** a_n + neg_one_pow(c) * total


def f_closed_parity_split(x: Scalar, y: Scalar, n: int, a_n: int, c: int,
                          counter: Optional[EvalCounter] = None) -> Scalar:
    """Same value as :func:`f_closed`, with the correction sum split by index parity.

    The even-index terms run j = 0 .. floor((n-1)/2) over C(a_n+2j-c, 2j) and
    the odd-index terms j = 1 .. ceil((n-1)/2) over C(a_n+2j-1-c, 2j-1).
    """
    if x == 0 or y == 0:
        raise PoleError("x and y must be nonzero")
    if x == y:
        raise PoleError("x = y is a pole of the f-form")
    u = x / (x - y)
    w = x / y
    shift = w ** (c - 1)
    even = u * 0
    for j in range((n - 1) // 2 + 1):
        even = even + u ** (n - 2 * j) * shift * binom(a_n + 2 * j - c, 2 * j)
        if counter is not None:
            counter.add()
    odd = u * 0
    for j in range(1, n // 2 + 1):
        odd = odd + u ** (n - 2 * j + 1) * shift * binom(a_n + 2 * j - 1 - c, 2 * j - 1)
        if counter is not None:
            counter.add()
    return u ** n * w ** a_n - even - odd


def varied_limit_reduction(spec: NestedSumSpec,
                           counter: Optional[EvalCounter] = None) -> Scalar:
    """Reduce a geometric nested sum with per-level lower limits to unit counts.

    ``spec.term`` must be a pure geometric summand ``x**k``. Returns

        x**A - x**(c[n-1] - 1)
            - sum_{j=1}^{n-1} ((x-1)/x)**j * x**(c[n-1-j] - 1) * N_j

    where ``N_j`` is the j-level nested sum of 1 over the outermost j lower
    limits (upper limit ``A``), evaluated exactly by :func:`oracle_nested`.

    The result equals ``((x-1)/x)**n`` times the full nested sum of ``x**k``
    whenever the limits do not cross: each ``c[k] >= c[k-1] - 1`` and
    ``A >= c[n-1] - 1``. Crossing limits make some intermediate geometric
    step range over empty sums where its closed form fails; the formula is
    still evaluated as written, so callers can map that domain empirically.
    """
    summand = spec.term
    if summand.seq is not None or summand.alternating or summand.weight_base is None:
        raise ValueError("reduction applies to pure geometric summands x**k")
    x = summand.weight_base
    if x == 0 or x == 1:
        raise PoleError(f"x = {x} is a pole of the reduction")
    n = spec.depth
    limits = spec.lower_limits
    ratio = (x - 1) / x
    result = x ** spec.upper - x ** (limits[n - 1] - 1)
    for j in range(1, n):
        ones_spec = NestedSumSpec(j, spec.upper, limits[n - j:], ONES)
        count = oracle_nested(ones_spec, counter=counter)
        result = result - ratio ** j * x ** (limits[n - 1 - j] - 1) * count
    return result

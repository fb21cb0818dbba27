"""Catalog of nested-sum closed forms and the engine that verifies them.

Each :class:`IdentityId` names one closed-form evaluation of a nested sum
whose innermost summand involves a second-order recurrence sequence. For
every identity the left-hand side is evaluated independently by the exact
prefix-sum oracle and the right-hand side by a dedicated evaluator coded
directly from the closed form; :func:`verify` demands bit-exact agreement.

The catalog covers the general four-parameter family (tags F3..F7), the
Fibonacci/Lucas cubic-index forms (F1*/F2*), and the spelled-out
specializations for the restricted (p = 1) and gibonacci (p = 1, q = -1)
families. Specialized evaluators are written from their own displays, not by
delegating to the general form, so that the degeneration checks are genuine
cross-validations.

Closed forms are evaluated anywhere their denominators permit, including
points with an empty left-hand side (outer upper limit below the lower
limit). Those points are classified ``outside_domain`` rather than failed:
agreement there is mapped empirically, not presumed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Tuple

from .combinatorics import binom
from .exactnum import (DivisionByZeroError, QuadExt, ZeroToNegativePowerError,
                       neg_one_pow, rat_pow)
from .nestedcore import EvalCounter, NestedSumSpec, PoleError, SumTerm, oracle_nested
from .sequences import (FIBONACCI, LUCAS, HoradamParams, HoradamSequence,
                        first_kind_term, gibonacci, horadam, second_kind_term)


class IdentityId(str, Enum):
    H = "H"
    F1A = "F1a"
    F1B = "F1b"
    F2A = "F2a"
    F2B = "F2b"
    F3 = "F3"
    F4 = "F4"
    F5 = "F5"
    F6A = "F6a"
    F6B = "F6b"
    F7 = "F7"
    F3_W = "F3_w"
    F3_G = "F3_G"
    F4_G = "F4_G"
    F5_G = "F5_G"
    F6_G_EVEN = "F6_G_even"
    F6_G_ODD = "F6_G_odd"
    F6_F_EVEN = "F6_F_even"
    F6_F_ODD = "F6_F_odd"
    F6_L_EVEN = "F6_L_even"
    F6_L_ODD = "F6_L_odd"
    F7_W = "F7_w"
    F7_G = "F7_G"
    F7_R1D0_W = "F7_r1d0_w"
    F7_R1D0_G = "F7_r1d0_G"

    def __str__(self) -> str:  # "F3" rather than "IdentityId.F3" in messages
        return self.value


class InvalidInstanceError(ValueError):
    """Instance parameters violate a precondition of the chosen identity."""


class SurdResidueError(ArithmeticError):
    """An evaluation that must be rational produced a nonzero surd part."""


# Built-in parameter families used as verification fixtures. Seeds are chosen
# so that the main sequence has no zero terms in the swept index window
# (zeros of the first/second-kind companions are unavoidable and are handled
# by precondition skips).
FAMILIES: Dict[str, HoradamParams] = {
    "fibonacci": FIBONACCI,
    "lucas": LUCAS,
    "gibonacci31": gibonacci(3, 1),
    "gibonacci_neg": gibonacci(-1, 2),
    "integer_root": horadam(1, 4, 3, 2),   # discriminant 1, roots 2 and 1
    "negative_d": horadam(1, 4, 1, 1),     # discriminant -3, period 6
    "generic": horadam(2, 5, 1, 3),        # discriminant -11, restricted
}

_FIXED_PARAMS: Dict[IdentityId, HoradamParams] = {
    IdentityId.H: FIBONACCI,
    IdentityId.F1A: FIBONACCI,
    IdentityId.F1B: LUCAS,
    IdentityId.F2A: FIBONACCI,
    IdentityId.F2B: LUCAS,
    IdentityId.F6_F_EVEN: FIBONACCI,
    IdentityId.F6_F_ODD: FIBONACCI,
    IdentityId.F6_L_EVEN: LUCAS,
    IdentityId.F6_L_ODD: LUCAS,
}

_GIBONACCI_IDS = frozenset({
    IdentityId.F3_G, IdentityId.F4_G, IdentityId.F5_G,
    IdentityId.F6_G_EVEN, IdentityId.F6_G_ODD,
    IdentityId.F7_G, IdentityId.F7_R1D0_G,
})
_RESTRICTED_IDS = frozenset({IdentityId.F3_W, IdentityId.F7_W, IdentityId.F7_R1D0_W})

_F3_LIKE = frozenset({IdentityId.F3, IdentityId.F3_W, IdentityId.F3_G})
_F4_LIKE = frozenset({IdentityId.F4, IdentityId.F4_G})
_F5_LIKE = frozenset({IdentityId.F5, IdentityId.F5_G})
_F6_LIKE = frozenset({
    IdentityId.F6A, IdentityId.F6B,
    IdentityId.F6_G_EVEN, IdentityId.F6_G_ODD,
    IdentityId.F6_F_EVEN, IdentityId.F6_F_ODD,
    IdentityId.F6_L_EVEN, IdentityId.F6_L_ODD,
})
_F6_EVEN = frozenset({IdentityId.F6A, IdentityId.F6_G_EVEN,
                      IdentityId.F6_F_EVEN, IdentityId.F6_L_EVEN})
_F7_LIKE = frozenset({IdentityId.F7, IdentityId.F7_W, IdentityId.F7_G})
_F7_R1D0 = frozenset({IdentityId.F7_R1D0_W, IdentityId.F7_R1D0_G})


@dataclass(frozen=True)
class IdentityInstance:
    """One concrete evaluation point of an identity.

    Construction validates every precondition of the chosen identity (family
    shape, parity, nonzero denominators and weight bases) and raises
    :class:`InvalidInstanceError` naming the violated condition. Evaluators
    may therefore assume a valid instance.
    """

    identity: IdentityId
    params: Optional[HoradamParams]
    n: int
    a_n: int
    c: int = 1
    r: int = 1
    s: int = 0
    d: int = 0

    def __post_init__(self):
        ident = self.identity
        params = self.params
        fixed = _FIXED_PARAMS.get(ident)
        if fixed is not None:
            if params is None:
                object.__setattr__(self, "params", fixed)
            elif params != fixed:
                raise InvalidInstanceError(f"{ident} is specific to one fixed sequence family")
        elif params is None:
            raise InvalidInstanceError(f"{ident} requires explicit sequence parameters")
        _validate(self)

    def sequence(self) -> HoradamSequence:
        return HoradamSequence.of(self.params)


def _validate(inst: IdentityInstance) -> None:
    ident = inst.identity
    params = inst.params
    p, q = params.p, params.q
    n, r, s, d = inst.n, inst.r, inst.s, inst.d

    def fail(reason: str) -> None:
        raise InvalidInstanceError(f"{ident}: {reason}")

    def u(j: int) -> Fraction:
        return first_kind_term(p, q, j)

    def v(j: int) -> Fraction:
        return second_kind_term(p, q, j)

    def w(j: int) -> Fraction:
        return HoradamSequence.of(params).term(j)

    if n < 1:
        fail("n must be a positive integer")
    if ident in _RESTRICTED_IDS and p != 1:
        fail("restricted form requires p = 1")
    if ident in _GIBONACCI_IDS and (p != 1 or q != -1):
        fail("gibonacci form requires p = 1, q = -1")
    if ident is IdentityId.H and (inst.r, inst.s, inst.c) != (1, 0, 1):
        fail("this form is fixed at r = 1, s = 0, c = 1")

    if ident in _F3_LIKE or ident in _F4_LIKE:
        if v(r) == 0:
            fail(f"V_{r} = 0")
    elif ident in _F5_LIKE:
        if r == 0:
            fail("r must be nonzero")
        if r + d == 0:
            fail("r + d must be nonzero")
        if u(r) == 0:
            fail(f"U_{r} = 0")
        if u(r + d) == 0:
            fail(f"U_{r + d} = 0")
        if u(d) == 0:
            fail(f"U_{d} = 0 (degenerate weight base)")
    elif ident in _F6_LIKE:
        want_even = ident in _F6_EVEN
        if n % 2 == 0 and not want_even:
            fail("n must be odd for this variant")
        if n % 2 == 1 and want_even:
            fail("n must be even for this variant")
        if r == 0:
            fail("r must be nonzero")
        if params.discriminant == 0:
            fail("discriminant must be nonzero")
        if u(r) == 0:
            fail(f"U_{r} = 0")
        if v(r + d) == 0:
            fail(f"V_{r + d} = 0")
        if v(d) == 0:
            fail(f"V_{d} = 0 (degenerate weight base)")
    elif ident in _F7_LIKE or ident in _F7_R1D0:
        if ident in _F7_R1D0 and (r, d) != (1, 0):
            fail("this form is fixed at r = 1, d = 0")
        if r + 1 == d:
            fail("r + 1 = d makes the leading denominator index zero")
        if u(r - d + 1) == 0:
            fail(f"U_{r - d + 1} = 0")
        if u(r - d) == 0:
            fail(f"U_{r - d} = 0 (degenerate weight base)")
        if w(s + d) == 0:
            fail(f"W_{s + d} = 0")
        if w(s + d - 1) == 0:
            fail(f"W_{s + d - 1} = 0 (degenerate weight base)")
        if w(r + s) == 0:
            fail(f"W_{r + s} = 0")


# ---------------------------------------------------------------------------
# Left-hand sides
# ---------------------------------------------------------------------------

def lhs_spec(inst: IdentityInstance) -> NestedSumSpec:
    """The oracle-evaluable nested-sum shape matching the identity's left side."""
    ident = inst.identity
    params = inst.params
    p, q = params.p, params.q
    r, s, d = inst.r, inst.s, inst.d

    if ident is IdentityId.H:
        summand = SumTerm(seq=params)
    elif ident in (IdentityId.F1A, IdentityId.F1B):
        summand = SumTerm(seq=params, index_mul=3, index_add=s)
    elif ident in (IdentityId.F2A, IdentityId.F2B):
        summand = SumTerm(seq=params, index_mul=3, index_add=s, alternating=True)
    elif ident in _F3_LIKE:
        summand = SumTerm(seq=params, index_mul=r, index_add=s,
                          weight_base=1 / second_kind_term(p, q, r))
    elif ident in _F4_LIKE:
        summand = SumTerm(seq=params, index_mul=2 * r, index_add=s,
                          weight_base=rat_pow(q, -r), alternating=True)
    elif ident in _F5_LIKE:
        summand = SumTerm(seq=params, index_mul=r, index_add=s,
                          weight_base=first_kind_term(p, q, d) / first_kind_term(p, q, r + d))
    elif ident in _F6_LIKE:
        summand = SumTerm(seq=params, index_mul=r, index_add=s,
                          weight_base=second_kind_term(p, q, d) / second_kind_term(p, q, r + d))
    elif ident in _F7_LIKE:
        seq = HoradamSequence.of(params)
        weight = (q * first_kind_term(p, q, r - d) / first_kind_term(p, q, r - d + 1)
                  * seq.term(s + d - 1) / seq.term(s + d))
        summand = SumTerm(weight_base=weight)
    elif ident in _F7_R1D0:
        seq = HoradamSequence.of(params)
        weight = q * seq.term(s - 1) / seq.term(s)
        summand = SumTerm(weight_base=weight)
    else:  # pragma: no cover - exhaustive over IdentityId
        raise InvalidInstanceError(f"no left-hand side registered for {ident}")
    return NestedSumSpec(inst.n, inst.a_n, inst.c, summand)


# ---------------------------------------------------------------------------
# Right-hand sides
#
# Each evaluator transcribes its own closed form. The optional counter tallies
# one unit per summand-family sequence term and per binomial coefficient, so
# reported closed-form costs are measured, not assumed.
# ---------------------------------------------------------------------------

def _tracked(inst: IdentityInstance, counter: Optional[EvalCounter]):
    seq = inst.sequence()

    def w(j: int) -> Fraction:
        if counter is not None:
            counter.add()
        return seq.term(j)

    def bi(top: int, k: int) -> int:
        if counter is not None:
            counter.add()
        return binom(top, k)

    return w, bi


def rhs_H(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """Fibonacci nested sum of F[k]: F[a+2n] minus binomial-weighted even-index terms."""
    w, bi = _tracked(inst, counter)
    n, a = inst.n, inst.a_n
    total = Fraction(0)
    for j in range(n):
        total += w(2 * (n - j)) * bi(a + j - 1, j)
    return w(a + 2 * n) - total


def rhs_F1(variant: str, inst: IdentityInstance,
           counter: Optional[EvalCounter] = None) -> Fraction:
    """Closed form for the nested sum of F[3k+s] (variant "a") or L[3k+s] ("b")."""
    if variant not in ("a", "b"):
        raise ValueError("variant must be 'a' or 'b'")
    w, bi = _tracked(inst, counter)
    n, a, c, s = inst.n, inst.a_n, inst.c, inst.s
    total = Fraction(0)
    for j in range(n):
        total += w(2 * (n - j) + 3 * (c - 1) + s) * bi(a + j - c, j) / 2 ** (n - j)
    return w(2 * n + 3 * a + s) / 2 ** n - total


def rhs_F2(variant: str, inst: IdentityInstance,
           counter: Optional[EvalCounter] = None) -> Fraction:
    """Closed form for the alternating nested sum of (-1)**k F[3k+s] or L[3k+s]."""
    if variant not in ("a", "b"):
        raise ValueError("variant must be 'a' or 'b'")
    w, bi = _tracked(inst, counter)
    n, a, c, s = inst.n, inst.a_n, inst.c, inst.s
    total = Fraction(0)
    for j in range(n):
        total += w(n - j + 3 * (c - 1) + s) * bi(a + j - c, j) / 2 ** (n - j)
    return neg_one_pow(a) * w(n + 3 * a + s) / 2 ** n + neg_one_pow(c) * total


def rhs_F3(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """General closed form for the nested sum of W[rk+s] / V_r**k."""
    w, bi = _tracked(inst, counter)
    q = inst.params.q
    n, a, c, r, s = inst.n, inst.a_n, inst.c, inst.r, inst.s
    vr = second_kind_term(inst.params.p, q, r)
    total = Fraction(0)
    for j in range(n):
        total += (neg_one_pow(n - j) * w(r * (2 * n - 2 * j + c - 1) + s)
                  / rat_pow(q, r * (n - j)) * bi(a + j - c, j))
    lead = neg_one_pow(n) * w(r * (a + 2 * n) + s) / (rat_pow(q, r * n) * rat_pow(vr, a))
    return lead - total / rat_pow(vr, c - 1)


def rhs_F3_w(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """Restricted (p = 1) closed form for the nested sum of w[rk+s] / v_r**k."""
    w, bi = _tracked(inst, counter)
    q = inst.params.q
    n, a, c, r, s = inst.n, inst.a_n, inst.c, inst.r, inst.s
    vr = second_kind_term(1, q, r)
    total = Fraction(0)
    for j in range(n):
        total += (neg_one_pow(n - j) * w(r * (2 * n - 2 * j + c - 1) + s)
                  / rat_pow(q, r * (n - j)) * bi(a + j - c, j))
    lead = neg_one_pow(n) * w(r * (a + 2 * n) + s) / (rat_pow(q, r * n) * rat_pow(vr, a))
    return lead - total / rat_pow(vr, c - 1)


def rhs_F3_G(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """Gibonacci closed form for the nested sum of G[rk+s] / L_r**k."""
    w, bi = _tracked(inst, counter)
    n, a, c, r, s = inst.n, inst.a_n, inst.c, inst.r, inst.s
    lr = second_kind_term(1, -1, r)
    total = Fraction(0)
    for j in range(n):
        total += (neg_one_pow((n - j) * (r - 1)) * w(r * (2 * n - 2 * j + c - 1) + s)
                  * bi(a + j - c, j))
    lead = neg_one_pow(n * (r - 1)) * w(r * (a + 2 * n) + s) / rat_pow(lr, a)
    return lead - total / rat_pow(lr, c - 1)


def rhs_F4(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """General closed form for the nested sum of (-1)**k W[2rk+s] / q**(rk)."""
    w, bi = _tracked(inst, counter)
    q = inst.params.q
    n, a, c, r, s = inst.n, inst.a_n, inst.c, inst.r, inst.s
    vr = second_kind_term(inst.params.p, q, r)
    total = Fraction(0)
    for j in range(n):
        total += w(r * (n - j + 2 * c - 2) + s) / rat_pow(vr, n - j) * bi(a + j - c, j)
    lead = neg_one_pow(a) * w(r * (2 * a + n) + s) / (rat_pow(q, r * a) * rat_pow(vr, n))
    return lead + neg_one_pow(c) / rat_pow(q, r * (c - 1)) * total


def rhs_F4_G(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """Gibonacci closed form for the nested sum of (-1)**((r-1)k) G[2rk+s]."""
    w, bi = _tracked(inst, counter)
    n, a, c, r, s = inst.n, inst.a_n, inst.c, inst.r, inst.s
    lr = second_kind_term(1, -1, r)
    total = Fraction(0)
    for j in range(n):
        total += w(r * (n - j + 2 * c - 2) + s) / rat_pow(lr, n - j) * bi(a + j - c, j)
    lead = neg_one_pow((r - 1) * a) * w(r * (2 * a + n) + s) / rat_pow(lr, n)
    return lead + neg_one_pow(r * (c - 1) + c) * total


def rhs_F5(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """General closed form for the nested sum of (U_d/U_{r+d})**k W[rk+s]."""
    w, bi = _tracked(inst, counter)
    p, q = inst.params.p, inst.params.q
    n, a, c, r, s, d = inst.n, inst.a_n, inst.c, inst.r, inst.s, inst.d
    ud = first_kind_term(p, q, d)
    ur = first_kind_term(p, q, r)
    urd = first_kind_term(p, q, r + d)
    total = Fraction(0)
    for j in range(n):
        total += (neg_one_pow(n - j) / rat_pow(q, d * (n - j)) * rat_pow(ud / ur, n - j)
                  * w(r * (n - j + c - 1) + d * (n - j) + s) * bi(a + j - c, j))
    lead = (neg_one_pow(n) * rat_pow(ud, n + a)
            / (rat_pow(q, d * n) * rat_pow(ur, n) * rat_pow(urd, a))
            * w((r + d) * n + r * a + s))
    return lead - rat_pow(ud / urd, c - 1) * total


def rhs_F5_G(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """Gibonacci closed form for the nested sum of (F_d/F_{r+d})**k G[rk+s]."""
    w, bi = _tracked(inst, counter)
    n, a, c, r, s, d = inst.n, inst.a_n, inst.c, inst.r, inst.s, inst.d
    fd = first_kind_term(1, -1, d)
    fr = first_kind_term(1, -1, r)
    frd = first_kind_term(1, -1, r + d)
    total = Fraction(0)
    for j in range(n):
        total += (neg_one_pow((n - j) * (d + 1)) * rat_pow(fd / fr, n - j)
                  * w(r * (n - j + c - 1) + d * (n - j) + s) * bi(a + j - c, j))
    lead = (neg_one_pow(n * (d + 1)) * rat_pow(fd, n + a)
            / (rat_pow(fr, n) * rat_pow(frd, a)) * w((r + d) * n + r * a + s))
    return lead - rat_pow(fd / frd, c - 1) * total


def rhs_F6_quad(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> QuadExt:
    """General closed form for the nested sum of (V_d/V_{r+d})**k W[rk+s].

    Evaluated in Q(sqrt(D)) where delta = sqrt(D) appears; delta occurs only
    in even powers, so the surd part of the result must be exactly zero.
    The n-even and n-odd displays differ and are dispatched here.
    """
    w, bi = _tracked(inst, counter)
    params = inst.params
    p, q = params.p, params.q
    n, a, c, r, s, d = inst.n, inst.a_n, inst.c, inst.r, inst.s, inst.d
    disc = params.discriminant
    delta = QuadExt.sqrt(disc)
    ratio_vu = second_kind_term(p, q, d) / first_kind_term(p, q, r)
    ratio_vv = second_kind_term(p, q, d) / second_kind_term(p, q, r + d)
    shift = QuadExt.from_rational(rat_pow(ratio_vv, c - 1), disc)

    def lift(value: Fraction) -> QuadExt:
        return QuadExt.from_rational(value, disc)

    if n % 2 == 0:
        lead = lift(rat_pow(ratio_vu, n) * rat_pow(ratio_vv, a)
                    * w(r * (n + a) + d * n + s) / rat_pow(q, d * n)) / delta ** n
        even = delta * 0
        for j in range((n - 2) // 2 + 1):
            even = even + delta ** (2 * j) * lift(
                w((r + d) * (n - 2 * j) + r * (c - 1) + s)
                * rat_pow(ratio_vu, n - 2 * j) / rat_pow(q, d * (n - 2 * j))
                * bi(a + 2 * j - c, 2 * j))
        odd = delta * 0
        for j in range(1, n // 2 + 1):
            pair = (w((r + d) * (n - 2 * j + 1) + r * (c - 1) + s + 1)
                    - q * w((r + d) * (n - 2 * j + 1) + r * (c - 1) + s - 1))
            odd = odd + delta ** (2 * j) * lift(
                pair * rat_pow(ratio_vu, n - 2 * j + 1)
                / rat_pow(q, d * (n - 2 * j + 1)) * bi(a + 2 * j - 1 - c, 2 * j - 1))
        return lead - shift * (even / delta ** n) - shift * (odd / delta ** (n + 2))

    lead_pair = (w(r * (n + a) + d * n + s + 1) - q * w(r * (n + a) + d * n + s - 1))
    lead = lift(rat_pow(ratio_vu, n) * rat_pow(ratio_vv, a) * lead_pair
                / rat_pow(q, d * n)) / delta ** (n + 1)
    even = delta * 0
    for j in range((n - 1) // 2 + 1):
        pair = (w((r + d) * (n - 2 * j) + r * (c - 1) + s + 1)
                - q * w((r + d) * (n - 2 * j) + r * (c - 1) + s - 1))
        even = even + delta ** (2 * j) * lift(
            pair * rat_pow(ratio_vu, n - 2 * j) / rat_pow(q, d * (n - 2 * j))
            * bi(a + 2 * j - c, 2 * j))
    odd = delta * 0
    for j in range(1, (n - 1) // 2 + 1):
        odd = odd + delta ** (2 * j) * lift(
            w((r + d) * (n - 2 * j + 1) + r * (c - 1) + s)
            * rat_pow(ratio_vu, n - 2 * j + 1) / rat_pow(q, d * (n - 2 * j + 1))
            * bi(a + 2 * j - 1 - c, 2 * j - 1))
    return lead - shift * ((even + odd) / delta ** (n + 1))


def rhs_F6(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """Rational value of the F6 closed form; raises if the surd part survives."""
    value = rhs_F6_quad(inst, counter)
    if value.surd_part != 0:
        raise SurdResidueError(
            f"{inst.identity} produced surd residue {value.surd_part} at {inst}")
    return value.rat_part


def _rhs_F6_fib_lucas(inst: IdentityInstance, main: str,
                      counter: Optional[EvalCounter] = None) -> Fraction:
    """Shared body of the four Fibonacci/Lucas-number forms of F6.

    ``main`` selects the summand sequence ("F" or "L"); the companion
    sequence appears in the odd-index correction terms, with prefactors of
    5**(k/2) absorbed according to the display being transcribed.
    """
    n, a, c, r, s, d = inst.n, inst.a_n, inst.c, inst.r, inst.s, inst.d

    def fib(j: int) -> Fraction:
        if counter is not None:
            counter.add()
        return first_kind_term(1, -1, j)

    def luc(j: int) -> Fraction:
        if counter is not None:
            counter.add()
        return second_kind_term(1, -1, j)

    def bi(top: int, k: int) -> int:
        if counter is not None:
            counter.add()
        return binom(top, k)

    w_main = fib if main == "F" else luc
    w_other = luc if main == "F" else fib
    ld = second_kind_term(1, -1, d)
    lrd = second_kind_term(1, -1, r + d)
    fr = first_kind_term(1, -1, r)
    ratio_lf = ld / fr
    shift = rat_pow(ld / lrd, c - 1)
    five = Fraction(5)

    if n % 2 == 0:
        scale = rat_pow(five, n // 2)
        lead = rat_pow(ratio_lf, n) * rat_pow(ld / lrd, a) * w_main(r * (n + a) + d * n + s) / scale
        even = Fraction(0)
        for j in range((n - 2) // 2 + 1):
            even += (five ** j * rat_pow(ratio_lf, n - 2 * j)
                     * w_main((r + d) * (n - 2 * j) + r * (c - 1) + s)
                     * bi(a + 2 * j - c, 2 * j))
        odd = Fraction(0)
        for j in range(1, n // 2 + 1):
            odd += (five ** j * rat_pow(ratio_lf, n - 2 * j + 1)
                    * w_other((r + d) * (n - 2 * j + 1) + r * (c - 1) + s)
                    * bi(a + 2 * j - 1 - c, 2 * j - 1))
        odd_scale = scale * five if main == "F" else scale
        return lead - shift * even / scale - shift * neg_one_pow(d) * odd / odd_scale

    scale = rat_pow(five, (n + 1) // 2)
    lead_scale = scale if main == "F" else rat_pow(five, (n - 1) // 2)
    lead = (neg_one_pow(d) * rat_pow(ratio_lf, n) * rat_pow(ld / lrd, a)
            * w_other(r * (n + a) + d * n + s) / lead_scale)
    even = Fraction(0)
    for j in range((n - 1) // 2 + 1):
        even += (five ** j * rat_pow(ratio_lf, n - 2 * j)
                 * w_other((r + d) * (n - 2 * j) + r * (c - 1) + s)
                 * bi(a + 2 * j - c, 2 * j))
    odd = Fraction(0)
    for j in range(1, (n - 1) // 2 + 1):
        odd += (five ** j * rat_pow(ratio_lf, n - 2 * j + 1)
                * w_main((r + d) * (n - 2 * j + 1) + r * (c - 1) + s)
                * bi(a + 2 * j - 1 - c, 2 * j - 1))
    return lead - neg_one_pow(d) * shift * even / lead_scale - shift * odd / scale


def rhs_F6_G(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """Gibonacci closed form for the nested sum of (L_d/L_{r+d})**k G[rk+s].

    Powers of sqrt(5) collapse to powers of 5; the odd-index corrections pair
    neighbouring terms G[j+1] + G[j-1]. Dispatches on the parity of n.
    """
    w, bi = _tracked(inst, counter)
    n, a, c, r, s, d = inst.n, inst.a_n, inst.c, inst.r, inst.s, inst.d
    ld = second_kind_term(1, -1, d)
    lrd = second_kind_term(1, -1, r + d)
    fr = first_kind_term(1, -1, r)
    ratio_lf = ld / fr
    shift = rat_pow(ld / lrd, c - 1)
    five = Fraction(5)

    if n % 2 == 0:
        scale = rat_pow(five, n // 2)
        lead = rat_pow(ratio_lf, n) * rat_pow(ld / lrd, a) * w(r * (n + a) + d * n + s) / scale
        even = Fraction(0)
        for j in range((n - 2) // 2 + 1):
            even += (five ** j * rat_pow(ratio_lf, n - 2 * j)
                     * w((r + d) * (n - 2 * j) + r * (c - 1) + s)
                     * bi(a + 2 * j - c, 2 * j))
        odd = Fraction(0)
        for j in range(1, n // 2 + 1):
            pair = (w((r + d) * (n - 2 * j + 1) + r * (c - 1) + s + 1)
                    + w((r + d) * (n - 2 * j + 1) + r * (c - 1) + s - 1))
            odd += (five ** j * rat_pow(ratio_lf, n - 2 * j + 1) * pair
                    * bi(a + 2 * j - 1 - c, 2 * j - 1))
        return (lead - shift * even / scale
                - shift * neg_one_pow(d) * odd / (scale * five))

    scale = rat_pow(five, (n + 1) // 2)
    lead_pair = w(r * (n + a) + d * n + s + 1) + w(r * (n + a) + d * n + s - 1)
    lead = (neg_one_pow(d) * rat_pow(ratio_lf, n) * rat_pow(ld / lrd, a)
            * lead_pair / scale)
    even = Fraction(0)
    for j in range((n - 1) // 2 + 1):
        pair = (w((r + d) * (n - 2 * j) + r * (c - 1) + s + 1)
                + w((r + d) * (n - 2 * j) + r * (c - 1) + s - 1))
        even += (five ** j * rat_pow(ratio_lf, n - 2 * j) * pair
                 * bi(a + 2 * j - c, 2 * j))
    odd = Fraction(0)
    for j in range(1, (n - 1) // 2 + 1):
        odd += (five ** j * rat_pow(ratio_lf, n - 2 * j + 1)
                * w((r + d) * (n - 2 * j + 1) + r * (c - 1) + s)
                * bi(a + 2 * j - 1 - c, 2 * j - 1))
    return lead - neg_one_pow(d) * shift * even / scale - shift * odd / scale


def rhs_F7(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """General closed form for the purely geometric nested sum with base
    q * (U_{r-d}/U_{r-d+1}) * (W_{s+d-1}/W_{s+d})."""
    w, bi = _tracked(inst, counter)
    p, q = inst.params.p, inst.params.q
    n, a, c, r, s, d = inst.n, inst.a_n, inst.c, inst.r, inst.s, inst.d
    u0 = first_kind_term(p, q, r - d)
    u1 = first_kind_term(p, q, r - d + 1)
    wsd1 = w(s + d - 1)
    wsd = w(s + d)
    wrs = w(r + s)
    ratio_u = u0 / u1
    ratio_w = wsd1 / wsd
    ratio_rs = wsd1 / wrs
    total = Fraction(0)
    for j in range(n):
        total += (neg_one_pow(n - j) * rat_pow(q, n - j) * rat_pow(u0, n - j)
                  * rat_pow(ratio_rs, n - j) * bi(a + j - c, j))
    lead = (neg_one_pow(n) * rat_pow(q, n + a) * rat_pow(u0, n)
            * rat_pow(ratio_u, a) * rat_pow(ratio_w, a) * rat_pow(ratio_rs, n))
    return lead - rat_pow(q, c - 1) * rat_pow(ratio_u, c - 1) * rat_pow(ratio_w, c - 1) * total


def rhs_F7_w(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """Restricted (p = 1) form of the F7 closed form."""
    w, bi = _tracked(inst, counter)
    q = inst.params.q
    n, a, c, r, s, d = inst.n, inst.a_n, inst.c, inst.r, inst.s, inst.d
    u0 = first_kind_term(1, q, r - d)
    u1 = first_kind_term(1, q, r - d + 1)
    ws1 = w(s + d - 1)
    ws = w(s + d)
    wrs = w(r + s)
    ratio_u = u0 / u1
    ratio_w = ws1 / ws
    ratio_rs = ws1 / wrs
    total = Fraction(0)
    for j in range(n):
        total += (neg_one_pow(n - j) * rat_pow(q, n - j) * rat_pow(u0, n - j)
                  * rat_pow(ratio_rs, n - j) * bi(a + j - c, j))
    lead = (neg_one_pow(n) * rat_pow(q, n + a) * rat_pow(u0, n)
            * rat_pow(ratio_u, a) * rat_pow(ratio_w, a) * rat_pow(ratio_rs, n))
    return lead - rat_pow(q, c - 1) * rat_pow(ratio_u, c - 1) * rat_pow(ratio_w, c - 1) * total


def rhs_F7_G(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """Gibonacci form of the F7 closed form (alternating geometric base)."""
    w, bi = _tracked(inst, counter)
    n, a, c, r, s, d = inst.n, inst.a_n, inst.c, inst.r, inst.s, inst.d
    f0 = first_kind_term(1, -1, r - d)
    f1 = first_kind_term(1, -1, r - d + 1)
    gsd1 = w(s + d - 1)
    gsd = w(s + d)
    grs = w(r + s)
    ratio_f = f0 / f1
    ratio_g = gsd1 / gsd
    ratio_rs = gsd1 / grs
    total = Fraction(0)
    for j in range(n):
        total += rat_pow(f0, n - j) * rat_pow(ratio_rs, n - j) * bi(a + j - c, j)
    lead = (neg_one_pow(a) * rat_pow(f0, n) * rat_pow(ratio_f, a)
            * rat_pow(ratio_g, a) * rat_pow(ratio_rs, n))
    return lead + neg_one_pow(c) * rat_pow(ratio_f, c - 1) * rat_pow(ratio_g, c - 1) * total


def rhs_F7_r1d0_w(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """r = 1, d = 0 restricted form: geometric base q * w[s-1]/w[s]."""
    w, bi = _tracked(inst, counter)
    q = inst.params.q
    n, a, c, s = inst.n, inst.a_n, inst.c, inst.s
    ws1 = w(s - 1)
    ws = w(s)
    wsp = w(s + 1)
    ratio_w = ws1 / ws
    ratio_up = ws1 / wsp
    total = Fraction(0)
    for j in range(n):
        total += (neg_one_pow(n - j) * rat_pow(q, n - j) * rat_pow(ratio_up, n - j)
                  * bi(a + j - c, j))
    lead = neg_one_pow(n) * rat_pow(q, n + a) * rat_pow(ratio_w, a) * rat_pow(ratio_up, n)
    return lead - rat_pow(q, c - 1) * rat_pow(ratio_w, c - 1) * total


def rhs_F7_r1d0_G(inst: IdentityInstance, counter: Optional[EvalCounter] = None) -> Fraction:
    """r = 1, d = 0 gibonacci form: alternating geometric base G[s-1]/G[s]."""
    w, bi = _tracked(inst, counter)
    n, a, c, s = inst.n, inst.a_n, inst.c, inst.s
    gs1 = w(s - 1)
    gs = w(s)
    gsp = w(s + 1)
    ratio_g = gs1 / gs
    ratio_up = gs1 / gsp
    total = Fraction(0)
    for j in range(n):
        total += rat_pow(ratio_up, n - j) * bi(a + j - c, j)
    lead = neg_one_pow(a) * rat_pow(ratio_g, a) * rat_pow(ratio_up, n)
    return lead + neg_one_pow(c) * rat_pow(ratio_g, c - 1) * total


RHS_EVALUATORS: Dict[IdentityId, Callable[..., Fraction]] = {
    IdentityId.H: rhs_H,
    IdentityId.F1A: lambda inst, counter=None: rhs_F1("a", inst, counter),
    IdentityId.F1B: lambda inst, counter=None: rhs_F1("b", inst, counter),
    IdentityId.F2A: lambda inst, counter=None: rhs_F2("a", inst, counter),
    IdentityId.F2B: lambda inst, counter=None: rhs_F2("b", inst, counter),
    IdentityId.F3: rhs_F3,
    IdentityId.F3_W: rhs_F3_w,
    IdentityId.F3_G: rhs_F3_G,
    IdentityId.F4: rhs_F4,
    IdentityId.F4_G: rhs_F4_G,
    IdentityId.F5: rhs_F5,
    IdentityId.F5_G: rhs_F5_G,
    IdentityId.F6A: rhs_F6,
    IdentityId.F6B: rhs_F6,
    IdentityId.F6_G_EVEN: rhs_F6_G,
    IdentityId.F6_G_ODD: rhs_F6_G,
    IdentityId.F6_F_EVEN: lambda inst, counter=None: _rhs_F6_fib_lucas(inst, "F", counter),
    IdentityId.F6_F_ODD: lambda inst, counter=None: _rhs_F6_fib_lucas(inst, "F", counter),
    IdentityId.F6_L_EVEN: lambda inst, counter=None: _rhs_F6_fib_lucas(inst, "L", counter),
    IdentityId.F6_L_ODD: lambda inst, counter=None: _rhs_F6_fib_lucas(inst, "L", counter),
    IdentityId.F7: rhs_F7,
    IdentityId.F7_W: rhs_F7_w,
    IdentityId.F7_G: rhs_F7_G,
    IdentityId.F7_R1D0_W: rhs_F7_r1d0_w,
    IdentityId.F7_R1D0_G: rhs_F7_r1d0_G,
}


def evaluate_rhs(inst: IdentityInstance,
                 counter: Optional[EvalCounter] = None) -> Fraction:
    """Evaluate the closed form matching the instance's identity."""
    return RHS_EVALUATORS[inst.identity](inst, counter)


# ---------------------------------------------------------------------------
# Verification engine
# ---------------------------------------------------------------------------

CLASS_VERIFIED = "verified"
CLASS_MISMATCH = "mismatch"
CLASS_OUTSIDE = "outside_domain"
CLASS_SKIPPED = "skipped"
CLASS_ERROR = "error"


@dataclass(frozen=True)
class EvaluationReport:
    """Outcome of evaluating one identity instance both ways."""

    identity: IdentityId
    params: HoradamParams
    n: int
    a_n: int
    c: int
    r: int
    s: int
    d: int
    lhs: Optional[Fraction]
    rhs: Optional[Fraction]
    equal: Optional[bool]
    oracle_terms: int
    closed_terms: int
    oracle_ns: int
    closed_ns: int
    classification: str
    detail: str = ""


def _report_coords(identity: IdentityId, params: HoradamParams, n: int, a_n: int,
                   c: int, r: int, s: int, d: int, **extra) -> EvaluationReport:
    defaults = dict(lhs=None, rhs=None, equal=None, oracle_terms=0, closed_terms=0,
                    oracle_ns=0, closed_ns=0, classification=CLASS_SKIPPED, detail="")
    defaults.update(extra)
    return EvaluationReport(identity, params, n, a_n, c, r, s, d, **defaults)


_EVALUATION_ERRORS = (PoleError, DivisionByZeroError, ZeroDivisionError,
                      ZeroToNegativePowerError, SurdResidueError, ValueError)


def verify(inst: IdentityInstance) -> EvaluationReport:
    """Evaluate oracle and closed form for one instance and compare exactly.

    Evaluation-time failures (poles, non-invertible elements, surd residue)
    are folded into an ``error`` report rather than raised.
    """
    oracle_counter = EvalCounter()
    closed_counter = EvalCounter()
    coords = (inst.identity, inst.params, inst.n, inst.a_n, inst.c, inst.r, inst.s, inst.d)
    try:
        start = time.perf_counter_ns()
        lhs = oracle_nested(lhs_spec(inst), counter=oracle_counter)
        oracle_ns = time.perf_counter_ns() - start
        start = time.perf_counter_ns()
        rhs = evaluate_rhs(inst, counter=closed_counter)
        closed_ns = time.perf_counter_ns() - start
    except _EVALUATION_ERRORS as exc:
        return _report_coords(*coords, oracle_terms=oracle_counter.count,
                              closed_terms=closed_counter.count,
                              classification=CLASS_ERROR, detail=str(exc))
    equal = lhs == rhs
    if inst.a_n >= inst.c:
        classification = CLASS_VERIFIED if equal else CLASS_MISMATCH
    else:
        classification = CLASS_OUTSIDE
    return EvaluationReport(*coords, lhs=lhs, rhs=rhs, equal=equal,
                            oracle_terms=oracle_counter.count,
                            closed_terms=closed_counter.count,
                            oracle_ns=oracle_ns, closed_ns=closed_ns,
                            classification=classification)


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian grid of instance coordinates for one identity.

    ``a_offsets`` positions the outer upper limit relative to each lower
    limit (``a_n = c + offset``); ``a_values`` may instead pin absolute
    values. Dimensions an identity does not use are collapsed to one point.
    """

    families: Tuple[HoradamParams, ...] = ()
    n_values: Tuple[int, ...] = (1, 2, 3)
    c_values: Tuple[int, ...] = (1,)
    r_values: Tuple[int, ...] = (1,)
    s_values: Tuple[int, ...] = (0,)
    d_values: Tuple[int, ...] = (0,)
    a_offsets: Tuple[int, ...] = tuple(range(-2, 9))
    a_values: Optional[Tuple[int, ...]] = None


def _grid_dims(identity: IdentityId) -> frozenset:
    """Which of (r, s, d) the identity actually varies over."""
    if identity is IdentityId.H:
        return frozenset()
    if identity in (IdentityId.F1A, IdentityId.F1B, IdentityId.F2A, IdentityId.F2B):
        return frozenset({"s"})
    if identity in _F3_LIKE or identity in _F4_LIKE:
        return frozenset({"r", "s"})
    if identity in _F7_R1D0:
        return frozenset({"s"})
    return frozenset({"r", "s", "d"})


def iter_sweep(identity: IdentityId, grid: Optional[SweepGrid] = None):
    """Yield one :class:`EvaluationReport` per grid point, in grid order.

    Points whose instance construction fails a precondition are yielded as
    ``skipped`` reports, never raised. Streaming keeps large sweeps at
    constant memory.
    """
    if grid is None:
        grid = default_grid(identity)
    dims = _grid_dims(identity)
    families: Tuple[Optional[HoradamParams], ...]
    if identity in _FIXED_PARAMS:
        families = (None,)
    elif grid.families:
        families = grid.families
    else:
        raise ValueError(f"{identity} needs at least one parameter family")
    c_values = (1,) if identity is IdentityId.H else grid.c_values
    r_values = grid.r_values if "r" in dims else (1,)
    s_values = grid.s_values if "s" in dims else (0,)
    d_values = grid.d_values if "d" in dims else (0,)

    for params, n, c, r, s, d in product(families, grid.n_values, c_values,
                                         r_values, s_values, d_values):
        a_values = grid.a_values if grid.a_values is not None else tuple(
            c + off for off in grid.a_offsets)
        for a_n in a_values:
            try:
                inst = IdentityInstance(identity, params, n, a_n, c, r, s, d)
            except InvalidInstanceError as exc:
                shown = params if params is not None else _FIXED_PARAMS.get(identity)
                yield _report_coords(identity, shown, n, a_n, c, r, s, d,
                                     classification=CLASS_SKIPPED, detail=str(exc))
                continue
            yield verify(inst)


def sweep(identity: IdentityId, grid: Optional[SweepGrid] = None) -> List[EvaluationReport]:
    """Run :func:`verify` over a grid, one report per point, in grid order."""
    return list(iter_sweep(identity, grid))


@dataclass(frozen=True)
class SweepSummary:
    total: int
    verified: int
    mismatched: int
    outside_domain: int
    skipped: int
    errors: int

    @property
    def exit_code(self) -> int:
        return 1 if self.mismatched else 0


def summarize(reports: List[EvaluationReport]) -> SweepSummary:
    tally = {CLASS_VERIFIED: 0, CLASS_MISMATCH: 0, CLASS_OUTSIDE: 0,
             CLASS_SKIPPED: 0, CLASS_ERROR: 0}
    for report in reports:
        tally[report.classification] += 1
    return SweepSummary(total=len(reports), verified=tally[CLASS_VERIFIED],
                        mismatched=tally[CLASS_MISMATCH],
                        outside_domain=tally[CLASS_OUTSIDE],
                        skipped=tally[CLASS_SKIPPED], errors=tally[CLASS_ERROR])


def _fams(*names: str) -> Tuple[HoradamParams, ...]:
    return tuple(FAMILIES[name] for name in names)


_STD_FAMILIES = _fams("fibonacci", "gibonacci31", "integer_root", "negative_d", "generic")
_GIBONACCI_FAMILIES = _fams("fibonacci", "lucas", "gibonacci31", "gibonacci_neg")
_RESTRICTED_FAMILIES = _fams("fibonacci", "gibonacci31", "negative_d", "generic")


def default_grid(identity: IdentityId) -> SweepGrid:
    """A deterministic grid sized to exercise the identity across families."""
    if identity is IdentityId.H:
        return SweepGrid(n_values=(1, 2, 3), a_offsets=tuple(range(0, 13)))
    if identity in (IdentityId.F1A, IdentityId.F1B, IdentityId.F2A, IdentityId.F2B):
        return SweepGrid(n_values=(1, 2, 3, 4), c_values=(-2, 0, 1, 3),
                         s_values=(-3, 0, 2, 5), a_offsets=tuple(range(-2, 9)))
    if identity in (IdentityId.F3, IdentityId.F4):
        return SweepGrid(families=_STD_FAMILIES, n_values=(1, 2, 3), c_values=(-1, 1),
                         r_values=(-2, -1, 1, 2), s_values=(-2, 0, 3),
                         a_offsets=tuple(range(-2, 7)))
    if identity is IdentityId.F5:
        return SweepGrid(families=_STD_FAMILIES, n_values=(1, 2, 3), c_values=(-1, 1),
                         r_values=(-1, 1, 2), s_values=(0, 2), d_values=(-1, 1, 2),
                         a_offsets=tuple(range(-2, 7)))
    if identity is IdentityId.F6A:
        return SweepGrid(families=_STD_FAMILIES, n_values=(2, 4), c_values=(-1, 1),
                         r_values=(-1, 1, 2), s_values=(0, 2), d_values=(0, 1),
                         a_offsets=tuple(range(-1, 7)))
    if identity is IdentityId.F6B:
        return SweepGrid(families=_STD_FAMILIES, n_values=(1, 3), c_values=(-1, 1),
                         r_values=(-1, 1, 2), s_values=(0, 2), d_values=(0, 1),
                         a_offsets=tuple(range(-1, 7)))
    if identity is IdentityId.F7:
        return SweepGrid(families=_STD_FAMILIES, n_values=(1, 2, 3), c_values=(-1, 1),
                         r_values=(-1, 1, 2), s_values=(-1, 0, 2), d_values=(-1, 0, 1),
                         a_offsets=tuple(range(-2, 7)))
    if identity is IdentityId.F3_W:
        return SweepGrid(families=_RESTRICTED_FAMILIES, n_values=(1, 2), c_values=(-1, 1),
                         r_values=(-1, 1, 2), s_values=(0, 2), a_offsets=tuple(range(-1, 7)))
    if identity in (IdentityId.F3_G, IdentityId.F4_G):
        return SweepGrid(families=_GIBONACCI_FAMILIES, n_values=(1, 2), c_values=(-1, 1),
                         r_values=(-1, 1, 2), s_values=(0, 2), a_offsets=tuple(range(-1, 7)))
    if identity is IdentityId.F5_G:
        return SweepGrid(families=_GIBONACCI_FAMILIES, n_values=(1, 2), c_values=(-1, 1),
                         r_values=(-1, 1, 2), s_values=(0, 2), d_values=(1, 2),
                         a_offsets=tuple(range(-1, 7)))
    if identity in (IdentityId.F6_G_EVEN, IdentityId.F6_F_EVEN, IdentityId.F6_L_EVEN):
        return SweepGrid(families=_GIBONACCI_FAMILIES, n_values=(2, 4), c_values=(-1, 1),
                         r_values=(-1, 1, 2), s_values=(0, 2), d_values=(0, 1),
                         a_offsets=tuple(range(-1, 7)))
    if identity in (IdentityId.F6_G_ODD, IdentityId.F6_F_ODD, IdentityId.F6_L_ODD):
        return SweepGrid(families=_GIBONACCI_FAMILIES, n_values=(1, 3), c_values=(-1, 1),
                         r_values=(-1, 1, 2), s_values=(0, 2), d_values=(0, 1),
                         a_offsets=tuple(range(-1, 7)))
    if identity is IdentityId.F7_W:
        return SweepGrid(families=_RESTRICTED_FAMILIES, n_values=(1, 2), c_values=(-1, 1),
                         r_values=(1, 2), s_values=(-1, 0, 2), d_values=(-1, 0),
                         a_offsets=tuple(range(-1, 7)))
    if identity is IdentityId.F7_G:
        return SweepGrid(families=_GIBONACCI_FAMILIES, n_values=(1, 2), c_values=(-1, 1),
                         r_values=(1, 2), s_values=(-1, 0, 2), d_values=(-1, 0),
                         a_offsets=tuple(range(-1, 7)))
    if identity in _F7_R1D0:
        fams = _RESTRICTED_FAMILIES if identity is IdentityId.F7_R1D0_W else _GIBONACCI_FAMILIES
        return SweepGrid(families=fams, n_values=(1, 2, 3), c_values=(-1, 0, 1),
                         s_values=(-2, 2, 3), a_offsets=tuple(range(-1, 7)))
    raise ValueError(f"no default grid for {identity}")  # pragma: no cover

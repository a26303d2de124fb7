"""Periodic continued fractions of quadratic irrationals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterator, Sequence

from .exactmath import IntMatrix2, QuadraticNumber, quad_floor

__all__ = [
    "PeriodicContinuedFraction",
    "Convergent",
    "RationalInput",
    "cf_expand",
    "cf_value",
    "convergents",
    "complete_quotients",
    "good_approximations",
    "primitive_period",
    "cyclic_equivalent",
    "cyclic_rotation_offset",
]


class RationalInput(ValueError):
    """A quadratic irrational was required."""


@dataclass(frozen=True)
class PeriodicContinuedFraction:
    """``(-1 if negative) * [a0; a1, ..., a_{k0-1}, period repeated]``.

    The preperiod always holds a0, so the period starts at index >= 1.
    """

    negative: bool
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def partial_quotient(self, k: int) -> int:
        if k < len(self.preperiod):
            return self.preperiod[k]
        return self.period[(k - len(self.preperiod)) % len(self.period)]

    def __str__(self) -> str:
        pre = list(self.preperiod)
        head = f"{pre[0]}"
        rest = ", ".join(str(a) for a in pre[1:])
        per = ", ".join(str(a) for a in self.period)
        body = head + "; " + (rest + ", " if rest else "") + "(" + per + ")*"
        return ("-" if self.negative else "") + "[" + body + "]"


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    index: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


def _require_irrational(x: QuadraticNumber) -> QuadraticNumber:
    x = QuadraticNumber.coerce(x)
    if x.is_rational:
        raise RationalInput(f"{x} is rational")
    return x


def complete_quotients(x: QuadraticNumber) -> Iterator[tuple[int, QuadraticNumber]]:
    """Yield (a_k, x_k) for the regular expansion of x (a0 may be negative)."""
    x = _require_irrational(x)
    while True:
        a = quad_floor(x)
        yield a, x
        x = (x - a).reciprocal()


def cf_expand(x: QuadraticNumber) -> PeriodicContinuedFraction:
    x = _require_irrational(x)
    negative = x.sign() < 0
    seen: dict[QuadraticNumber, int] = {}
    quotients: list[int] = []
    for k, (a, xk) in enumerate(complete_quotients(abs(x))):
        # a0 stays in the preperiod even for purely periodic values
        if k >= 1:
            if xk in seen:
                start = seen[xk]
                pre, per = quotients[:start], quotients[start:]
                prim = primitive_period(per)
                assert len(prim) == len(per), "first repeat must give a primitive period"
                return PeriodicContinuedFraction(negative, tuple(pre), tuple(prim))
            seen[xk] = k
        quotients.append(a)
    raise AssertionError("unreachable")


def _product(word: Sequence[int]) -> IntMatrix2:
    m = IntMatrix2.identity()
    for a in word:
        m = m @ IntMatrix2(a, 1, 1, 0)
    return m


def cf_value(cf: PeriodicContinuedFraction, D: int | None = None) -> QuadraticNumber:
    """Exact value of a periodic expansion via the period's fixed-point quadratic.

    Long periods give huge discriminants; passing the expected field D
    avoids factoring them.
    """
    per = _product(cf.period)
    P, P1, Q, Q1 = per.a, per.b, per.c, per.d
    if not Q:
        raise ValueError("degenerate period")
    # y = (P y + P1) / (Q y + Q1), take the root above 1
    disc = (P - Q1) ** 2 + 4 * Q * P1
    if D is not None and disc % D == 0 and isqrt(disc // D) ** 2 == disc // D:
        s, base = isqrt(disc // D), D
    else:
        s, base = 1, disc
    y = max(QuadraticNumber(P - Q1, s, 2 * Q, base), QuadraticNumber(P - Q1, -s, 2 * Q, base))
    pre = _product(cf.preperiod)
    x = (pre.a * y + pre.b) / (pre.c * y + pre.d)
    return -x if cf.negative else x


def convergents(cf: PeriodicContinuedFraction | Sequence[int], n: int) -> list[Convergent]:
    """The first n convergents p_k/q_k starting at index -1 (1/0)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    quot = cf.partial_quotient if isinstance(cf, PeriodicContinuedFraction) else cf.__getitem__
    out = []
    p0, q0, p1, q1 = 0, 1, 1, 0
    for k in range(-1, n - 1):
        if k == -1:
            out.append(Convergent(1, 0, -1))
            continue
        a = quot(k)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append(Convergent(p1, q1, k))
    return out


def _signed_convergents(x: QuadraticNumber, q_max: int) -> tuple[list[int], list[tuple[int, int]]]:
    """Regular partial quotients of x and convergents (index -1 first) past q_max."""
    quotients: list[int] = []
    conv = [(1, 0)]
    p0, q0, p1, q1 = 0, 1, 1, 0
    for a, _ in complete_quotients(x):
        quotients.append(a)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        conv.append((p1, q1))
        # two extra quotients so the intermediate forms reaching q_max are covered
        if len(quotients) >= 3 and conv[-3][1] > q_max:
            break
    return quotients, conv


def good_approximations(x: QuadraticNumber, q_max: int) -> tuple[list[Fraction], list[Fraction]]:
    """Good lower and upper approximations of the second kind with q <= q_max.

    Generated from the intermediate fractions (p_k + r p_{k+1})/(q_k + r q_{k+1}),
    even k below x and odd k above, then checked against the defining inequality.
    """
    x = _require_irrational(x)
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    a, conv = _signed_convergents(x, q_max)
    # conv[j] is the convergent of index j - 1
    lower: set[Fraction] = set()
    upper: set[Fraction] = set()
    for k in range(-1, len(a) - 2):
        pk, qk = conv[k + 1]
        pk1, qk1 = conv[k + 2]
        for r in range(0 if k >= 0 else 1, a[k + 2] + 1):
            num, den = pk + r * pk1, qk + r * qk1
            if den > q_max:
                break
            (lower if k % 2 == 0 else upper).add(Fraction(num, den))
    lower_l, upper_l = sorted(lower, key=lambda f: f.denominator), sorted(upper, key=lambda f: f.denominator)
    _check_improving(x, lower_l, below=True)
    _check_improving(x, upper_l, below=False)
    return lower_l, upper_l


def _check_improving(x: QuadraticNumber, fracs: list[Fraction], below: bool) -> None:
    prev = None
    for f in fracs:
        err = f.numerator - f.denominator * x
        assert (err.sign() < 0) == below, f"{f} on the wrong side"
        err = abs(err)
        assert prev is None or err < prev, f"{f} does not improve"
        prev = err


def primitive_period(word: Sequence[int]) -> list[int]:
    w = list(word)
    if not w:
        raise ValueError("empty word")
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w == w[:d] * (n // d):
            return w[:d]
    return w


def cyclic_rotation_offset(w1: Sequence[int], w2: Sequence[int]) -> int | None:
    """Offset s with primitive(w1) == rotate(primitive(w2), s), or None."""
    a, b = primitive_period(w1), primitive_period(w2)
    if len(a) != len(b):
        return None
    for s in range(len(b)):
        if a == b[s:] + b[:s]:
            return s
    return None


def cyclic_equivalent(w1: Sequence[int], w2: Sequence[int]) -> bool:
    return cyclic_rotation_offset(w1, w2) is not None

"""Exact arithmetic with a real number given by its continued fraction.

Signs of ``a*alpha + b`` and floors of ``n*alpha + beta`` are decided by
bracketing alpha between consecutive convergents, never in floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional


class HorizonExceeded(ArithmeticError):
    """The available precision cannot certify the requested quantity."""


@dataclass(frozen=True)
class ContinuedFraction:
    """[a0; prefix..., repeat, repeat, ...]; an empty ``repeat`` means a finite expansion.

    ``max_terms`` is the precision horizon: no more partial quotients than this
    are ever expanded.
    """

    a0: int
    prefix: tuple = ()
    repeat: tuple = ()
    max_terms: int = 400

    def __post_init__(self):
        if any(a < 1 for a in self.prefix + self.repeat):
            raise ValueError("partial quotients after a0 must be positive")

    @classmethod
    def golden_conjugate(cls) -> "ContinuedFraction":
        """(sqrt 5 - 1)/2 = [0; 1, 1, 1, ...]."""
        return cls(0, (), (1,))

    @classmethod
    def from_quotients(cls, quotients) -> "ContinuedFraction":
        q = tuple(quotients)
        return cls(q[0], q[1:], ())

    @property
    def is_rational(self) -> bool:
        return not self.repeat

    def quotient(self, i: int) -> Optional[int]:
        """i-th partial quotient (i >= 1), or None past the end of a finite expansion."""
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        if not self.repeat:
            return None
        return self.repeat[(i - len(self.prefix) - 1) % len(self.repeat)]

    def to_json(self):
        return {"a0": self.a0, "prefix": list(self.prefix), "repeat": list(self.repeat)}

    def __float__(self):
        lo, hi = value_bracket(self, 40)
        return float((lo + hi) / 2)


@lru_cache(maxsize=256)
def convergents(cf: ContinuedFraction) -> tuple:
    """((p_0, q_0), (p_1, q_1), ...) up to the horizon."""
    out = []
    p_prev, q_prev = 1, 0
    p, q = cf.a0, 1
    out.append((p, q))
    for i in range(1, cf.max_terms + 1):
        a = cf.quotient(i)
        if a is None:
            break
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        out.append((p, q))
    return tuple(out)


def value_bracket(cf: ContinuedFraction, k: int) -> tuple[Fraction, Fraction]:
    """An interval [lo, hi] containing alpha, from convergents k and k+1.

    Rational expansions that are exhausted return the exact point."""
    conv = convergents(cf)
    if k + 1 >= len(conv):
        if cf.is_rational:
            p, q = conv[-1]
            v = Fraction(p, q)
            return v, v
        raise HorizonExceeded(f"continued fraction horizon reached at depth {k}")
    (p1, q1), (p2, q2) = conv[k], conv[k + 1]
    a, b = Fraction(p1, q1), Fraction(p2, q2)
    return (a, b) if a <= b else (b, a)


def _start_depth(cf: ContinuedFraction, scale) -> int:
    # first depth where the bracket width 1/(q_k q_{k+1}) is well below 1/scale
    conv = convergents(cf)
    target = 64 * (abs(scale) + 1)
    k = 0
    while k + 2 < len(conv) and conv[k][1] * conv[k + 1][1] < target:
        k += 1
    return k


def sign_linear(cf: ContinuedFraction, a, b) -> int:
    """Sign of a*alpha + b for rational a, b."""
    a, b = Fraction(a), Fraction(b)
    if a == 0:
        return (b > 0) - (b < 0)
    k = _start_depth(cf, a)
    while True:
        lo, hi = value_bracket(cf, k)
        x, y = a * lo + b, a * hi + b
        if lo == hi:
            return (x > 0) - (x < 0)
        if x > 0 and y > 0:
            return 1
        if x < 0 and y < 0:
            return -1
        k += 4


def floor_linear(cf: ContinuedFraction, a, b) -> int:
    """floor(a*alpha + b) for rational a, b, certified.

    When a*alpha + b is irrational the bracket eventually excludes every
    integer; a rational value is only possible for a = 0 or a rational alpha.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0:
        return b.__floor__()
    k = _start_depth(cf, a)
    while True:
        lo, hi = value_bracket(cf, k)
        f1 = (a * lo + b).__floor__()
        f2 = (a * hi + b).__floor__()
        if f1 == f2:
            return f1
        k += 4


def floor_range(cf: ContinuedFraction, c, r, lo: int, hi: int) -> list[int]:
    """[floor((n + c)*alpha + r) for n in range(lo, hi)] with integer arithmetic.

    ``c`` and ``r`` are rationals.  All values are decided against one
    convergent bracket; the rare ones it cannot separate fall back to
    :func:`floor_linear`.
    """
    c, r = Fraction(c), Fraction(r)
    if hi <= lo:
        return []
    scale = max(abs(lo + c), abs(hi + c)) + 1
    k = _start_depth(cf, scale)
    a_lo, a_hi = value_bracket(cf, k)
    cn, cd = c.numerator, c.denominator
    rn, rd = r.numerator, r.denominator
    out = []
    p1, q1 = a_lo.numerator, a_lo.denominator
    p2, q2 = a_hi.numerator, a_hi.denominator
    d1, d2 = q1 * cd * rd, q2 * cd * rd
    s1, s2 = rn * q1 * cd, rn * q2 * cd
    for n in range(lo, hi):
        t = n * cd + cn
        f1 = (t * p1 * rd + s1) // d1
        f2 = (t * p2 * rd + s2) // d2
        if f1 != f2:
            f1 = floor_linear(cf, n + c, r)
        out.append(f1)
    return out


def compare_linear(cf: ContinuedFraction, a1, b1, a2, b2) -> int:
    """Sign of (a1*alpha + b1) - (a2*alpha + b2)."""
    return sign_linear(cf, Fraction(a1) - Fraction(a2), Fraction(b1) - Fraction(b2))


def frac_form(cf: ContinuedFraction, a, b) -> tuple[Fraction, Fraction]:
    """(a, b') with a*alpha + b' = frac(a*alpha + b), exactly."""
    a, b = Fraction(a), Fraction(b)
    return a, b - floor_linear(cf, a, b)


def approx(cf: ContinuedFraction, a, b, depth: int = 30) -> Fraction:
    """A rational approximation of a*alpha + b (for display and sampling only)."""
    depth = min(depth, len(convergents(cf)) - 2) if not cf.is_rational else len(convergents(cf))
    lo, hi = value_bracket(cf, depth)
    return Fraction(a) * (lo + hi) / 2 + Fraction(b)

"""Finitely described subsets of Z^d.

Every description answers exact membership queries.  Descriptions whose
symmetric difference with a periodic set is finite additionally expose a
``periodic_form`` used for exact density computations.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import product
from math import gcd
from typing import Callable, Optional

import numpy as np

from .group import Elem, ElemLike, Window, elem

INT_BOUND = 2**62
MATERIALIZE_CAP = 10**6


class UniverseExceeded(LookupError):
    """Membership asked outside the declared universe of an explicit set."""


class BlockRuleOverflow(OverflowError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class SubsetDesc:
    dim: int = 1

    def contains(self, g: ElemLike) -> bool:
        raise NotImplementedError

    def __contains__(self, g) -> bool:
        return self.contains(g)

    def indicator(self, lo: int, hi: int) -> np.ndarray:
        """Boolean membership array over the interval [lo, hi) of Z."""
        self._require_line()
        return np.fromiter((self.contains((i,)) for i in range(lo, hi)), dtype=bool, count=hi - lo)

    def periodic_form(self) -> Optional[tuple["Periodic", frozenset]]:
        """(P, D) with self equal to P symmetric-difference D and D finite, or None."""
        return None

    def _require_line(self):
        if self.dim != 1:
            raise ValueError("operation only supported for subsets of Z")

    # combinator sugar
    def __or__(self, other):
        return Union((self, other))

    def __and__(self, other):
        return Intersection((self, other))

    def __invert__(self):
        return Complement(self)

    def shift(self, s: ElemLike) -> "SubsetDesc":
        return Shift(self, elem(s, self.dim))


@dataclass(frozen=True)
class Periodic(SubsetDesc):
    """{g : (g_1 mod m_1, ..., g_d mod m_d) in residues}."""

    modulus: tuple
    residues: frozenset

    def __post_init__(self):
        m = tuple(int(x) for x in self.modulus)
        if any(x < 1 for x in m):
            raise ValueError("moduli must be positive")
        res = frozenset(tuple(r % mi for r, mi in zip(elem(r), m)) for r in self.residues)
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "residues", res)

    @classmethod
    def progression(cls, a: int, b: int = 0) -> "Periodic":
        """a*Z + b in Z."""
        if a == 0:
            raise ValueError("use Explicit for singletons")
        a = abs(a)
        return cls((a,), frozenset({(b % a,)}))

    @classmethod
    def line(cls, m: int, residues) -> "Periodic":
        return cls((m,), frozenset((r % m,) for r in residues))

    @property
    def dim(self) -> int:
        return len(self.modulus)

    @property
    def period_size(self) -> int:
        return int(np.prod(self.modulus))

    def contains(self, g) -> bool:
        g = elem(g, self.dim)
        return tuple(c % m for c, m in zip(g, self.modulus)) in self.residues

    def indicator(self, lo, hi):
        self._require_line()
        m = self.modulus[0]
        base = np.zeros(m, dtype=bool)
        for (r,) in self.residues:
            base[r] = True
        return base[np.arange(lo, hi) % m]

    def periodic_form(self):
        return self, frozenset()

    def lift(self, modulus: tuple) -> "Periodic":
        """Same set, described with a multiple of the current modulus."""
        if any(M % m for M, m in zip(modulus, self.modulus)):
            raise ValueError("target modulus must be a multiple")
        res = frozenset(
            g for g in product(*(range(M) for M in modulus)) if self.contains(g)
        )
        return Periodic(modulus, res)

    def reduced(self) -> "Periodic":
        """Equivalent description with the smallest modulus per axis."""
        mod = list(self.modulus)
        for axis in range(self.dim):
            for p in sorted(_divisors(mod[axis])):
                if p == mod[axis]:
                    break
                step = [0] * self.dim
                step[axis] = p
                if all(tuple((c + s) % m for c, s, m in zip(r, step, mod)) in self.residues
                       for r in self.residues):
                    mod[axis] = p
                    break
        mod = tuple(mod)
        res = frozenset(tuple(c % m for c, m in zip(r, mod)) for r in self.residues)
        return Periodic(mod, res)


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@dataclass(frozen=True)
class Explicit(SubsetDesc):
    """A finite set.  With a ``universe`` the set is only known inside that box
    ([lo, hi) per axis); queries outside it raise :class:`UniverseExceeded`."""

    window: Window
    universe: Optional[tuple] = None

    @property
    def dim(self) -> int:
        if self.universe is not None:
            return len(self.universe[0])
        return self.window.dim

    def _check(self, g):
        if self.universe is not None:
            lo, hi = self.universe
            if any(not (a <= c < b) for c, a, b in zip(g, lo, hi)):
                raise UniverseExceeded(f"universe exceeded at {g}")

    def contains(self, g) -> bool:
        g = elem(g, self.dim)
        self._check(g)
        return g in self.window

    def indicator(self, lo, hi):
        self._require_line()
        self._check((lo,))
        self._check((hi - 1,))
        out = np.zeros(hi - lo, dtype=bool)
        for (c,) in self.window:
            if lo <= c < hi:
                out[c - lo] = True
        return out

    def periodic_form(self):
        if self.universe is not None:
            return None
        return Periodic((1,) * self.dim, frozenset()), frozenset(self.window)


@dataclass(frozen=True)
class BlockUnion(SubsetDesc):
    """Union of blocks [start(j), start(j) + length(j)) over j = j0, j0+1, ...

    ``start`` and ``length`` are callables of j (normally parsed DSL
    expressions); ``j1=None`` means the union is infinite, in which case the
    starts must increase strictly.
    """

    start: Callable[[int], int]
    length: Callable[[int], int]
    j0: int = 1
    j1: Optional[int] = None

    def _block(self, j: int) -> tuple[int, int]:
        a, ell = self.start(j), self.length(j)
        if abs(a) > INT_BOUND or abs(ell) > INT_BOUND or abs(a + ell) > INT_BOUND:
            raise BlockRuleOverflow(f"block rule overflows integer bounds at j={j}")
        return a, max(ell, 0)

    def blocks_until(self, hi: int):
        """Yield blocks (a, b) in order of increasing j while a < hi."""
        j = self.j0
        prev = None
        while self.j1 is None or j <= self.j1:
            a, ell = self._block(j)
            if prev is not None and a <= prev and self.j1 is None:
                raise ValueError("block starts must increase strictly for infinite unions")
            if a >= hi and self.j1 is None:
                return
            yield a, a + ell
            prev = a
            j += 1

    def contains(self, g) -> bool:
        (c,) = elem(g, 1)
        return any(a <= c < b for a, b in self.blocks_until(c + 1))

    def indicator(self, lo, hi):
        out = np.zeros(hi - lo, dtype=bool)
        for a, b in self.blocks_until(hi):
            a2, b2 = max(a, lo), min(b, hi)
            if a2 < b2:
                out[a2 - lo:b2 - lo] = True
        return out

    def periodic_form(self):
        if self.j1 is None:
            return None
        pts = set()
        for a, b in self.blocks_until(INT_BOUND):
            if len(pts) + (b - a) > MATERIALIZE_CAP:
                return None
            pts.update((c,) for c in range(a, b))
        return Periodic((1,), frozenset()), frozenset(pts)


@dataclass(frozen=True)
class Shift(SubsetDesc):
    """E + s."""

    base: SubsetDesc
    s: Elem

    @property
    def dim(self):
        return self.base.dim

    def contains(self, g):
        g = elem(g, self.dim)
        return self.base.contains(tuple(a - b for a, b in zip(g, self.s)))

    def indicator(self, lo, hi):
        self._require_line()
        return self.base.indicator(lo - self.s[0], hi - self.s[0])

    def periodic_form(self):
        pf = self.base.periodic_form()
        if pf is None:
            return None
        P, D = pf
        res = frozenset(tuple(r + c for r, c in zip(x, self.s)) for x in P.residues)
        return Periodic(P.modulus, res), frozenset(tuple(a + b for a, b in zip(x, self.s)) for x in D)


@dataclass(frozen=True)
class Complement(SubsetDesc):
    base: SubsetDesc

    @property
    def dim(self):
        return self.base.dim

    def contains(self, g):
        return not self.base.contains(g)

    def indicator(self, lo, hi):
        return ~self.base.indicator(lo, hi)

    def periodic_form(self):
        pf = self.base.periodic_form()
        if pf is None:
            return None
        P, D = pf
        all_res = frozenset(product(*(range(m) for m in P.modulus)))
        return Periodic(P.modulus, all_res - P.residues), D


class _NAry(SubsetDesc):
    items: tuple

    @property
    def dim(self):
        return self.items[0].dim

    def _combine(self, flags) -> bool:
        raise NotImplementedError

    def contains(self, g):
        return self._combine(e.contains(g) for e in self.items)

    def periodic_form(self):
        forms = [e.periodic_form() for e in self.items]
        if any(f is None for f in forms):
            return None
        mod = tuple(reduce(_lcm, axis) for axis in zip(*(P.modulus for P, _ in forms)))
        lifted = [P.lift(mod) for P, _ in forms]
        res = frozenset(
            g for g in product(*(range(m) for m in mod))
            if self._combine(P.contains(g) for P in lifted)
        )
        P = Periodic(mod, res)
        candidates = frozenset().union(*(D for _, D in forms))
        D = frozenset(g for g in candidates if self.contains(g) != P.contains(g))
        return P, D


@dataclass(frozen=True)
class Union(_NAry):
    items: tuple

    def _combine(self, flags):
        return any(flags)

    def indicator(self, lo, hi):
        return np.logical_or.reduce([e.indicator(lo, hi) for e in self.items])


@dataclass(frozen=True)
class Intersection(_NAry):
    items: tuple

    def _combine(self, flags):
        return all(flags)

    def indicator(self, lo, hi):
        return np.logical_and.reduce([e.indicator(lo, hi) for e in self.items])


def normalize(E: SubsetDesc) -> SubsetDesc:
    """Collapse combinators to a reduced :class:`Periodic` when that is exact."""
    pf = E.periodic_form()
    if pf is not None and not pf[1]:
        return pf[0].reduced()
    return E


def exact_density(E: SubsetDesc):
    """|R|/m for the periodic part, or None if E is not periodic up to a finite set."""
    from fractions import Fraction

    pf = E.periodic_form()
    if pf is None:
        return None
    P = pf[0]
    return Fraction(len(P.residues), P.period_size)


def everything(dim: int = 1) -> Periodic:
    return Periodic((1,) * dim, frozenset({(0,) * dim}))


def nothing(dim: int = 1) -> Periodic:
    return Periodic((1,) * dim, frozenset())

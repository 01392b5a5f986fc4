"""Configurations x in A^G with exact symbol queries.

Symbols are ints ``0..k-1``.  Every description answers ``symbol_at`` exactly;
configurations on Z also answer ``symbols(lo, hi)`` as a numpy array.  Two
optional structural views feed the exact mean-distance routes:

* ``periodic_form()`` -- (modulus, block, overrides): periodic up to finitely
  many overridden sites, any dimension;
* ``eventual_form()`` -- an :class:`EventuallyPeriodic` equal to the
  configuration (Z only).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Optional

import numpy as np

from .group import Elem, ElemLike, elem
from .irrational import ContinuedFraction, HorizonExceeded, floor_linear, floor_range
from .sets import SubsetDesc

SYMBOL_HORIZON = 2**24


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class Alphabet:
    size: int
    labels: tuple = ()

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("alphabet needs at least one symbol")
        labels = self.labels or tuple(str(i) for i in range(self.size))
        if len(labels) != self.size or len(set(labels)) != self.size:
            raise ValueError("labels must be distinct, one per symbol")
        object.__setattr__(self, "labels", tuple(labels))

    def label(self, s: int) -> str:
        return self.labels[s]


class ConfigDesc:
    dim: int = 1

    def symbol_at(self, g: ElemLike) -> int:
        raise NotImplementedError

    def symbols(self, lo: int, hi: int) -> np.ndarray:
        """Symbols on [lo, hi) of Z."""
        self._require_line()
        return np.fromiter((self.symbol_at((n,)) for n in range(lo, hi)), dtype=np.int64, count=hi - lo)

    def periodic_form(self) -> Optional[tuple]:
        """(modulus, block, overrides) or None.

        ``block`` is an int array of shape ``modulus``; ``overrides`` maps
        finitely many sites to symbols that differ from the periodic value.
        """
        return None

    def eventual_form(self) -> Optional["EventuallyPeriodic"]:
        if self.dim != 1:
            return None
        pf = self.periodic_form()
        if pf is None:
            return None
        (m,), block, over = pf
        block = tuple(int(v) for v in block)
        if not over:
            return EventuallyPeriodic(block, block, 0, ())
        lo = min(g for (g,) in over)
        hi = max(g for (g,) in over) + 1
        mid = tuple(over.get((n,), block[n % m]) for n in range(lo, hi))
        # anchors are relative to lo and hi
        left = tuple(block[(lo + i) % m] for i in range(m))
        right = tuple(block[(hi + i) % m] for i in range(m))
        return EventuallyPeriodic(left, right, lo, mid)

    def translate(self, s: ElemLike) -> "ConfigDesc":
        return translate(self, s)

    def _require_line(self):
        if self.dim != 1:
            raise ValueError("operation only supported for configurations on Z")


def translate(x: ConfigDesc, s: ElemLike) -> ConfigDesc:
    """(s.x)(g) = x(g + s)."""
    s = elem(s, x.dim)
    if all(c == 0 for c in s):
        return x
    if isinstance(x, Constant):
        return x
    if isinstance(x, Translated):
        return translate(x.base, tuple(a + b for a, b in zip(x.s, s)))
    return Translated(x, s)


# --- concrete variants ------------------------------------------------------


@dataclass(frozen=True)
class Constant(ConfigDesc):
    symbol: int
    dim: int = 1

    def symbol_at(self, g):
        return self.symbol

    def symbols(self, lo, hi):
        return np.full(hi - lo, self.symbol, dtype=np.int64)

    def periodic_form(self):
        return (1,) * self.dim, np.full((1,) * self.dim, self.symbol, dtype=np.int64), {}


def _as_block(block) -> np.ndarray:
    if isinstance(block, str):
        return np.array([int(c) for c in block], dtype=np.int64)
    return np.asarray(block, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Periodic(ConfigDesc):
    """x(g) = block[g mod shape(block)]; a string block like "01" is a word on Z."""

    block: object

    def __post_init__(self):
        b = _as_block(self.block)
        if b.ndim == 0 or b.size == 0:
            raise ValueError("block must be nonempty")
        b.setflags(write=False)
        object.__setattr__(self, "block", b)

    @property
    def dim(self):
        return self.block.ndim

    @property
    def modulus(self) -> tuple:
        return tuple(self.block.shape)

    def __eq__(self, other):
        return isinstance(other, Periodic) and np.array_equal(self.block, other.block)

    def __hash__(self):
        return hash((self.block.shape, self.block.tobytes()))

    def symbol_at(self, g):
        g = elem(g, self.dim)
        return int(self.block[tuple(c % m for c, m in zip(g, self.modulus))])

    def symbols(self, lo, hi):
        self._require_line()
        return self.block[np.arange(lo, hi) % self.modulus[0]].copy()

    def periodic_form(self):
        return self.modulus, self.block, {}

    def word(self) -> str:
        return "".join(str(int(v)) for v in self.block.ravel())


@dataclass(frozen=True)
class FiniteDefect(ConfigDesc):
    """``background`` with finitely many sites overridden."""

    background: ConfigDesc
    overrides: tuple  # ((g, symbol), ...)

    def __post_init__(self):
        items = self.overrides.items() if isinstance(self.overrides, dict) else self.overrides
        d = self.background.dim
        norm = tuple(sorted((elem(g, d), int(s)) for g, s in items))
        object.__setattr__(self, "overrides", norm)

    @property
    def dim(self):
        return self.background.dim

    @property
    def override_map(self) -> dict:
        m = self.__dict__.get("_map")
        if m is None:
            m = dict(self.overrides)
            object.__setattr__(self, "_map", m)
        return m

    def symbol_at(self, g):
        g = elem(g, self.dim)
        m = self.override_map
        return m[g] if g in m else self.background.symbol_at(g)

    def symbols(self, lo, hi):
        out = self.background.symbols(lo, hi).copy()
        for (c,), s in self.overrides:
            if lo <= c < hi:
                out[c - lo] = s
        return out

    def periodic_form(self):
        pf = self.background.periodic_form()
        if pf is None:
            return None
        mod, block, over = pf
        merged = dict(over)
        for g, s in self.overrides:
            base = int(block[tuple(c % m for c, m in zip(g, mod))])
            if s == base:
                merged.pop(g, None)
            else:
                merged[g] = s
        return mod, block, merged

    def eventual_form(self):
        ev = self.background.eventual_form()
        if ev is None:
            return None
        return ev.with_overrides(dict(self.overrides))


@dataclass(frozen=True)
class EventuallyPeriodic(ConfigDesc):
    """A configuration on Z that is periodic on each half-line.

    x(t) = left[(t - lo) mod |left|] for t < lo, middle[t - lo] on
    [lo, lo + |middle|), and right[(t - hi) mod |right|] for t >= hi.
    """

    left: tuple
    right: tuple
    lo: int = 0
    middle: tuple = ()

    def __post_init__(self):
        if not self.left or not self.right:
            raise ValueError("periodic tails must be nonempty")
        for name in ("left", "right", "middle"):
            v = getattr(self, name)
            if isinstance(v, str):
                v = tuple(int(c) for c in v)
            object.__setattr__(self, name, tuple(int(c) for c in v))

    @property
    def hi(self) -> int:
        return self.lo + len(self.middle)

    def symbol_at(self, g):
        (t,) = elem(g, 1)
        if t < self.lo:
            return self.left[(t - self.lo) % len(self.left)]
        if t >= self.hi:
            return self.right[(t - self.hi) % len(self.right)]
        return self.middle[t - self.lo]

    def symbols(self, lo, hi):
        t = np.arange(lo, hi)
        L = np.asarray(self.left, dtype=np.int64)[(t - self.lo) % len(self.left)]
        R = np.asarray(self.right, dtype=np.int64)[(t - self.hi) % len(self.right)]
        out = np.where(t < self.lo, L, R)
        if self.middle:
            mid = (t >= self.lo) & (t < self.hi)
            out[mid] = np.asarray(self.middle, dtype=np.int64)[t[mid] - self.lo]
        return out

    def eventual_form(self):
        return self

    def periodic_form(self):
        m = _lcm(len(self.left), len(self.right))
        # compare both tails over one common period, far outside the middle
        a = self.lo - m
        b = self.hi
        left_vals = {t % m: self.symbol_at(t) for t in range(a - m, a)}
        right_vals = {t % m: self.symbol_at(t) for t in range(b, b + m)}
        if left_vals != right_vals:
            return None
        block = np.array([left_vals[r] for r in range(m)], dtype=np.int64)
        over = {}
        for t in range(self.lo - m, self.hi + m):
            s = self.symbol_at(t)
            if s != block[t % m]:
                over[(t,)] = s
        return (m,), block, over

    def with_overrides(self, over: dict) -> "EventuallyPeriodic":
        if not over:
            return self
        pts = [g[0] for g in over]
        lo = min(self.lo, min(pts))
        hi = max(self.hi, max(pts) + 1)
        mid = tuple(over.get((t,), self.symbol_at(t)) for t in range(lo, hi))
        mL, mR = len(self.left), len(self.right)
        # re-anchor the tails at the new cut points
        left = tuple(self.symbol_at(lo - mL + i) for i in range(mL))
        right = tuple(self.symbol_at(hi + i) for i in range(mR))
        return EventuallyPeriodic(left, right, lo, mid)


@dataclass(frozen=True)
class RotationCoding(ConfigDesc):
    """x(n) = floor((n+1)*alpha + beta) - floor(n*alpha + beta) with 0 < alpha < 1.

    The offset is beta = beta_rational + beta_alpha * alpha; every floor is
    certified through convergents of alpha.
    """

    alpha: ContinuedFraction
    beta_rational: Fraction = Fraction(0)
    beta_alpha: int = 0

    def __post_init__(self):
        object.__setattr__(self, "beta_rational", Fraction(self.beta_rational))
        if self.alpha.a0 != 0 or self.alpha.is_rational:
            raise ValueError("rotation coding needs an irrational alpha in (0, 1)")

    def _floor(self, n: int) -> int:
        return floor_linear(self.alpha, n + self.beta_alpha, self.beta_rational)

    def symbol_at(self, g):
        (n,) = elem(g, 1)
        if abs(n) > SYMBOL_HORIZON:
            raise HorizonExceeded(f"site {n} beyond the symbol horizon")
        return self._floor(n + 1) - self._floor(n)

    def symbols(self, lo, hi):
        if max(abs(lo), abs(hi)) > SYMBOL_HORIZON:
            raise HorizonExceeded("window beyond the symbol horizon")
        f = floor_range(self.alpha, self.beta_alpha, self.beta_rational, lo, hi + 1)
        return np.diff(np.array(f, dtype=np.int64))

    def with_offset(self, beta_rational) -> "RotationCoding":
        return RotationCoding(self.alpha, Fraction(beta_rational), self.beta_alpha)


@dataclass(frozen=True, eq=False)
class SubstitutionFixedPoint(ConfigDesc):
    """Two-sided fixed point of a substitution, built from seeds.

    The right half is lim sigma^n(right_seed) (needs sigma(right_seed) to start
    with right_seed); the left half is read backwards from lim sigma^(m n)(left_seed)
    for the smallest m with sigma^m(left_seed) ending in left_seed.
    """

    rules: tuple  # ((symbol, image), ...)
    right_seed: int = 0
    left_seed: Optional[int] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        items = self.rules.items() if isinstance(self.rules, dict) else self.rules
        rules = tuple(sorted((int(a), tuple(int(c) for c in w)) for a, w in items))
        object.__setattr__(self, "rules", rules)
        r = dict(rules)
        if not r[self.right_seed] or r[self.right_seed][0] != self.right_seed:
            raise ValueError("image of the right seed must start with the seed")
        if self.left_seed is None:
            object.__setattr__(self, "left_seed", self.right_seed)

    def _apply(self, word: list, power: int = 1) -> list:
        r = dict(self.rules)
        for _ in range(power):
            word = [c for a in word for c in r[a]]
        return word

    def _left_power(self) -> int:
        for m in range(1, 2 * len(self.rules) + 3):
            w = self._apply([self.left_seed], m)
            if w[-1] == self.left_seed and len(w) > 1:
                return m
        raise ValueError("no power of the substitution fixes the left seed at the end")

    def _half(self, side: str, need: int) -> list:
        key = side
        w = self._cache.get(key)
        if w is None:
            w = [self.right_seed] if side == "R" else [self.left_seed]
        while len(w) < need:
            if len(w) > SYMBOL_HORIZON:
                raise HorizonExceeded("substitution word beyond the symbol horizon")
            nxt = self._apply(w) if side == "R" else self._apply(w, self._left_power())
            if len(nxt) <= len(w):
                raise ValueError("substitution is not growing on the seed")
            w = nxt
        self._cache[key] = w
        return w

    def symbol_at(self, g):
        (n,) = elem(g, 1)
        if n >= 0:
            return self._half("R", n + 1)[n]
        w = self._half("L", -n)
        return w[len(w) + n]

    def symbols(self, lo, hi):
        return np.array([self.symbol_at(n) for n in range(lo, hi)], dtype=np.int64)


@dataclass(frozen=True)
class IndicatorOfSubset(ConfigDesc):
    """0 on E and 1 off E."""

    E: SubsetDesc

    @property
    def dim(self):
        return self.E.dim

    def symbol_at(self, g):
        return 0 if self.E.contains(elem(g, self.dim)) else 1

    def symbols(self, lo, hi):
        return (~self.E.indicator(lo, hi)).astype(np.int64)

    def periodic_form(self):
        pf = self.E.periodic_form()
        if pf is None:
            return None
        P, D = pf
        block = np.ones(P.modulus, dtype=np.int64)
        for r in P.residues:
            block[r] = 0
        over = {g: (0 if not P.contains(g) else 1) for g in D}
        return P.modulus, block, over


@dataclass(frozen=True)
class Translated(ConfigDesc):
    base: ConfigDesc
    s: Elem

    @property
    def dim(self):
        return self.base.dim

    def symbol_at(self, g):
        g = elem(g, self.dim)
        return self.base.symbol_at(tuple(a + b for a, b in zip(g, self.s)))

    def symbols(self, lo, hi):
        return self.base.symbols(lo + self.s[0], hi + self.s[0])

    def periodic_form(self):
        pf = self.base.periodic_form()
        if pf is None:
            return None
        mod, block, over = pf
        shifted = np.roll(block, shift=tuple(-c for c in self.s), axis=tuple(range(len(mod))))
        over2 = {tuple(a - b for a, b in zip(g, self.s)): v for g, v in over.items()}
        return mod, shifted, over2

    def eventual_form(self):
        ev = self.base.eventual_form()
        if ev is None:
            return None
        return EventuallyPeriodic(ev.left, ev.right, ev.lo - self.s[0], ev.middle)


@dataclass(frozen=True)
class Flipped(ConfigDesc):
    """``base`` with every symbol on S replaced by (symbol + 1) mod k."""

    base: ConfigDesc
    S: SubsetDesc
    k: int = 2

    @property
    def dim(self):
        return self.base.dim

    def symbol_at(self, g):
        g = elem(g, self.dim)
        s = self.base.symbol_at(g)
        return (s + 1) % self.k if self.S.contains(g) else s

    def symbols(self, lo, hi):
        b = self.base.symbols(lo, hi)
        return np.where(self.S.indicator(lo, hi), (b + 1) % self.k, b)

    def periodic_form(self):
        pb = self.base.periodic_form()
        ps = self.S.periodic_form()
        if pb is None or ps is None:
            return None
        mod_b, block, over = pb
        P, D = ps
        mod = tuple(_lcm(a, b) for a, b in zip(mod_b, P.modulus))
        new = np.empty(mod, dtype=np.int64)
        for g in product(*(range(m) for m in mod)):
            v = int(block[tuple(c % m for c, m in zip(g, mod_b))])
            new[g] = (v + 1) % self.k if P.contains(g) else v
        out = {}
        for g in set(over) | set(D):
            v = self.symbol_at(g)
            if v != new[tuple(c % m for c, m in zip(g, mod))]:
                out[g] = v
        return mod, new, out


def _splitmix(z: np.ndarray) -> np.ndarray:
    z = (z + np.uint64(0x9E3779B97F4A7C15))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class SeededRandom(ConfigDesc):
    """Pseudo-random point of the full shift: a hash of (seed, g) reduced mod k.

    Pure in g, so any window of it is reproducible without generating the
    configuration in order.
    """

    k: int
    seed: int
    dim: int = 1

    def _hash(self, coords: np.ndarray) -> np.ndarray:
        with np.errstate(over="ignore"):
            h = _splitmix(np.full(coords.shape[0], self.seed, dtype=np.uint64))
            for axis in range(coords.shape[1]):
                h = _splitmix(h ^ coords[:, axis].astype(np.int64).view(np.uint64))
        return (h % np.uint64(self.k)).astype(np.int64)

    def symbol_at(self, g):
        g = elem(g, self.dim)
        return int(self._hash(np.array([g], dtype=np.int64))[0])

    def symbols(self, lo, hi):
        self._require_line()
        return self._hash(np.arange(lo, hi, dtype=np.int64).reshape(-1, 1))


class TransitiveWordCatalog(ConfigDesc):
    """A point on Z whose right half lists every admissible word.

    Words of length 1, 2, 3, ... are written in lexicographic order; for a
    subshift of finite type consecutive words are joined by shortest
    connecting paths.  The left half repeats a fixed cycle leading into the
    first word.  Every admissible word occurs infinitely often to the right,
    so the orbit of this point is dense.
    """

    def __init__(self, k: int, adjacency=None):
        self.k = k
        A = np.ones((k, k), dtype=bool) if adjacency is None else np.asarray(adjacency, dtype=bool)
        self.adjacency = A
        self._is_full = bool(A.all())
        from .graphs import essential_states, shortest_cycle_through, shortest_path

        self._essential = essential_states(A)
        if not self._essential:
            raise ValueError("the shift of finite type is empty")
        self._shortest_path = shortest_path
        first = min(self._essential)
        self._left = shortest_cycle_through(A, first, self._essential)
        # rotate so the cycle ends just before `first`
        self._left = tuple(self._left[1:] + self._left[:1])
        self._buf: list = []
        self._length = 0
        self._words = self._word_stream()

    def __repr__(self):
        return f"TransitiveWordCatalog(k={self.k}, full={self._is_full})"

    def __eq__(self, other):
        return isinstance(other, TransitiveWordCatalog) and np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash(("catalog", self.adjacency.tobytes()))

    def _word_stream(self):
        ess = sorted(self._essential)
        A = self.adjacency
        L = 1
        while True:
            stack = [[s] for s in reversed(ess)]
            while stack:
                w = stack.pop()
                if len(w) == L:
                    yield w
                    continue
                for b in reversed(ess):
                    if A[w[-1], b]:
                        stack.append(w + [b])
            L += 1

    def _extend(self, need: int):
        if need > SYMBOL_HORIZON:
            raise HorizonExceeded(f"catalog position {need} beyond the symbol horizon")
        while len(self._buf) < need:
            w = next(self._words)
            if self._buf and not self._is_full:
                path = self._shortest_path(self.adjacency, self._buf[-1], w[0])
                self._buf.extend(path[1:-1])
            self._buf.extend(w)

    def symbol_at(self, g):
        (n,) = elem(g, 1)
        if n < 0:
            m = len(self._left)
            return self._left[n % m]
        self._extend(n + 1)
        return self._buf[n]

    def symbols(self, lo, hi):
        out = np.empty(hi - lo, dtype=np.int64)
        if hi > 0:
            self._extend(hi)
            a = max(lo, 0)
            out[a - lo:] = self._buf[a:hi]
        if lo < 0:
            neg = np.arange(lo, min(hi, 0))
            out[:len(neg)] = np.asarray(self._left, dtype=np.int64)[neg % len(self._left)]
        return out


def window_pattern(x: ConfigDesc, window) -> tuple:
    """((g, x(g)), ...) over a window."""
    return tuple((g, x.symbol_at(g)) for g in window)

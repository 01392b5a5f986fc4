"""From subsets of the group to measures on an orbit closure, and the finite
intersection demonstrators built on it.

A set E becomes the 0/1 configuration xi with xi = 0 exactly on E.  Averaging
Dirac masses along a window W gives the empirical measure
mu_W = |W|^-1 sum_{s in W} delta_{s xi}; on the origin cylinder [x_0 = 0] it
charges |E cap W| / |W|.  Translating the measure by g moves the window to
W + g, so the change in any cylinder mass is at most |(W + g) symmetric
difference W| / |W|.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd
from typing import Sequence

import numpy as np

from .configs import ConfigDesc, Constant, IndicatorOfSubset, Periodic
from .density import DensityEstimate, _scan, banach_upper_density, frac_str
from .group import Window, elem, invariance_defect
from .sets import Intersection, Periodic as PeriodicSet, Shift, SubsetDesc
from .systems import CylinderSet, visit_times

SEARCH_CAP = 2 * 10**6


class CapExceeded(ValueError):
    pass


def indicator_config(E: SubsetDesc) -> ConfigDesc:
    """0 on E, 1 elsewhere; periodic sets give periodic configurations."""
    pf = E.periodic_form()
    if pf is not None and not pf[1]:
        P = pf[0].reduced()
        if len(P.residues) == P.period_size:
            return Constant(0, E.dim)
        if not P.residues:
            return Constant(1, E.dim)
        block = np.ones(P.modulus, dtype=np.int64)
        for r in P.residues:
            block[r] = 0
        return Periodic(block)
    return IndicatorOfSubset(E)


def origin_cylinder(symbol: int = 0, dim: int = 1) -> CylinderSet:
    return CylinderSet.origin(symbol, dim)


@dataclass(frozen=True)
class EmpiricalMeasure:
    xi: ConfigDesc
    window: Window

    def __post_init__(self):
        if len(self.window) == 0:
            raise ValueError("window must be nonempty")

    def visits(self, B: CylinderSet, shift=None) -> int:
        W = self.window if shift is None else self.window.translate(shift)
        return len(visit_times(self.xi, B, W))

    def mass(self, B: CylinderSet) -> Fraction:
        return Fraction(self.visits(B), len(self.window))

    def translated_mass(self, g, B: CylinderSet) -> Fraction:
        """(g mu)(B) = mu(g^-1 B): the same average taken over W + g."""
        return Fraction(self.visits(B, elem(g, self.xi.dim)), len(self.window))

    def origin_masses(self, k: int) -> list:
        return [self.mass(origin_cylinder(a, self.xi.dim)) for a in range(k)]

    def to_json(self):
        return {"xi": repr(self.xi), "window": [list(self.window.elems[0]), list(self.window.elems[-1])],
                "size": len(self.window)}


def empirical_measure(xi: ConfigDesc, window) -> EmpiricalMeasure:
    W = window if isinstance(window, Window) else Window.of(window, xi.dim)
    return EmpiricalMeasure(xi, W)


def invariance_defect_measure(m: EmpiricalMeasure, g, B: CylinderSet) -> tuple[Fraction, Fraction]:
    """(|(g mu)(B) - mu(B)|, |(W + g) symmetric-difference W| / |W|); the first never exceeds the second."""
    g = elem(g, m.xi.dim)
    defect = abs(m.translated_mass(g, B) - m.mass(B))
    bound = invariance_defect(m.window, g)
    if defect > bound:
        raise AssertionError("invariance defect exceeds the window bound")
    return defect, bound


# --- correspondence along optimal windows ----------------------------------------


@dataclass
class CorrespondenceRow:
    length: int
    window: tuple
    mass: Fraction
    bd_upper: DensityEstimate
    inside: bool

    def to_json(self):
        return {"length": self.length, "window": list(self.window), "massA0": frac_str(self.mass),
                "bdUpper": [frac_str(self.bd_upper.lower), frac_str(self.bd_upper.upper)],
                "inside": self.inside}


def correspondence_rows(E: SubsetDesc, lengths: Sequence[int], radius: int = 2**10, center: int = 0) -> list:
    """For each length, the best-placed window W and mu_W([x_0 = 0]) against the BD* interval.

    For a set periodic up to a finite set and lengths that are multiples of
    the period, every window of that length carries the exact density."""
    if E.dim != 1:
        raise ValueError("optimal windows are searched on Z")
    lengths = sorted(set(int(L) for L in lengths))
    xi = indicator_config(E)
    sc = _scan(E, lengths, radius, center)
    bd = banach_upper_density(E, schedule=lengths, radius=radius, center=center)
    rows = []
    for L, g in zip(sc.lengths, sc.argmax):
        m = empirical_measure(xi, Window.interval(g, g + L)).mass(origin_cylinder())
        rows.append(CorrespondenceRow(L, (g, g + L), m, bd, bd.lower <= m <= bd.upper))
    return rows


# --- intersection demonstrators ------------------------------------------------------


def _shifted(E: SubsetDesc, t) -> SubsetDesc:
    return Shift(E, tuple(-c for c in elem(t, E.dim)))


def _bd(E: SubsetDesc, radius: int) -> DensityEstimate:
    return banach_upper_density(E, radius=radius) if E.periodic_form() is not None else \
        banach_upper_density(E, n=64, radius=radius)


@dataclass
class IntersectionWitness:
    shifts: tuple
    density: DensityEstimate
    target: Fraction
    met: bool
    searched: int

    def to_json(self):
        return {"shifts": [list(s) for s in self.shifts], "density": [frac_str(self.density.lower),
                frac_str(self.density.upper)], "method": self.density.method, "target": frac_str(self.target),
                "met": self.met, "searched": self.searched}


def multi_intersection_search(E: SubsetDesc, shifts, k: int, eps, radius: int = 2**10) -> IntersectionWitness:
    """The k shifts t_1 < ... < t_k from ``shifts`` maximizing BD*(cap (E - t_i)),
    compared with BD*(E)^k - eps; ties go to the lexicographically least tuple."""
    eps = Fraction(eps)
    ts = sorted(elem(t, E.dim) for t in shifts)
    if k < 1 or k > len(ts):
        raise ValueError("need 1 <= k <= number of shifts")
    if comb(len(ts), k) > SEARCH_CAP:
        raise CapExceeded("too many shift tuples")
    base = _bd(E, radius)
    target = base.upper ** k - eps
    best, best_t, n = None, None, 0
    for tup in combinations(ts, k):
        n += 1
        est = _bd(Intersection(tuple(_shifted(E, t) for t in tup)), radius)
        if best is None or est.lower > best.lower:
            best, best_t = est, tup
    return IntersectionWitness(best_t, best, target, best.lower >= target, n)


def pair_density_lemma(S: SubsetDesc, W, radius: int = 2**10) -> IntersectionWitness:
    """First pair l_1 < l_2 in W (lexicographic) with BD*((S - l_1) cap (S - l_2)) >= BD*(S)^2 / 2;
    the best pair when none qualifies."""
    ls = sorted(elem(t, S.dim) for t in W)
    if len(ls) < 2:
        raise ValueError("W needs two elements")
    if comb(len(ls), 2) > SEARCH_CAP:
        raise CapExceeded("too many pairs")
    base = _bd(S, radius)
    target = base.upper ** 2 / 2
    best, best_t, n = None, None, 0
    for pair in combinations(ls, 2):
        n += 1
        est = _bd(_shifted(S, pair[0]) & _shifted(S, pair[1]), radius)
        if est.lower >= target:
            return IntersectionWitness(pair, est, target, True, n)
        if best is None or est.lower > best.lower:
            best, best_t = est, pair
    return IntersectionWitness(best_t, best, target, False, n)


@dataclass(frozen=True)
class FiniteMeasureSpace:
    """Points 0..n-1 with rational weights and a list of subsets E_1..E_m."""

    weights: tuple
    subsets: tuple

    def __post_init__(self):
        w = tuple(Fraction(v) for v in self.weights)
        if any(v < 0 for v in w) or sum(w) != 1:
            raise ValueError("weights must be nonnegative and sum to 1")
        subs = tuple(frozenset(int(i) for i in E) for E in self.subsets)
        if any(i < 0 or i >= len(w) for E in subs for i in E):
            raise ValueError("subset element outside the ground set")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "subsets", subs)

    @classmethod
    def uniform(cls, n: int, subsets) -> "FiniteMeasureSpace":
        return cls(tuple(Fraction(1, n) for _ in range(n)), tuple(subsets))

    @property
    def n(self) -> int:
        return len(self.weights)

    def mass(self, E) -> Fraction:
        return sum((self.weights[i] for i in E), Fraction(0))


@dataclass
class FiniteWitness:
    indices: tuple
    mass: Fraction
    target: Fraction
    a: Fraction
    found: bool
    searched: int

    def to_json(self):
        out = {"indices": list(self.indices), "mass": frac_str(self.mass), "target": frac_str(self.target),
               "a": frac_str(self.a), "found": self.found, "searched": self.searched}
        if not self.found:
            out["note"] = "no witness among these sets; m may be below the threshold size, not a counterexample"
        return out


def finite_intersection_checker(space: FiniteMeasureSpace, k: int, eps, a=None) -> FiniteWitness:
    """Exhaustive search over k-subsets of the E_i for mass(cap) >= a^k - eps.

    Returns the best k-subset (largest mass, lexicographically least); ``a``
    defaults to min mass(E_i) and must be positive."""
    eps = Fraction(eps)
    m = len(space.subsets)
    if k < 1 or k > m:
        raise ValueError("need 1 <= k <= m")
    if comb(m, k) > SEARCH_CAP:
        raise CapExceeded(f"C({m}, {k}) subsets exceed the search cap")
    masses = [space.mass(E) for E in space.subsets]
    a = min(masses) if a is None else Fraction(a)
    if a <= 0:
        raise ValueError("a must be positive")
    if any(v < a for v in masses):
        raise ValueError("some E_i has mass below a")
    target = a**k - eps
    # integer weights over a common denominator; rows are membership masks
    D = 1
    for v in space.weights:
        D = D * v.denominator // gcd(D, v.denominator)
    w = np.array([int(v * D) for v in space.weights], dtype=np.int64)
    M = np.zeros((m, space.n), dtype=np.int64)
    for i, E in enumerate(space.subsets):
        M[i, list(E)] = 1
    if k == 2:
        G = (M * w) @ M.T
        iu = np.triu_indices(m, 1)
        vals = G[iu]
        j = int(np.argmax(vals))  # first maximum in lexicographic pair order
        best_idx, best_num, n = (int(iu[0][j]), int(iu[1][j])), int(vals[j]), len(vals)
    else:
        best_num, best_idx, n = -1, None, 0
        for idx in combinations(range(m), k):
            n += 1
            v = int(w[np.logical_and.reduce(M[list(idx)] > 0)].sum())
            if v > best_num:
                best_num, best_idx = v, idx
    best = Fraction(best_num, D)
    return FiniteWitness(best_idx, best, target, a, best >= target, n)


# --- seeded instances ------------------------------------------------------------------


def random_space(rng: np.random.Generator, m: int, a, n: int = 20, tight: bool = False) -> FiniteMeasureSpace:
    """m random subsets of a uniform n-point space, each of mass at least a.

    Sizes are uniform in [ceil(a n), n]; ``tight`` pins every set at ceil(a n),
    the hardest case for finding a heavy intersection."""
    a = Fraction(a)
    need = -(-a.numerator * n // a.denominator)
    subs = []
    for _ in range(m):
        size = need if tight else int(rng.integers(need, n + 1))
        subs.append(tuple(sorted(int(i) for i in rng.choice(n, size=size, replace=False))))
    return FiniteMeasureSpace.uniform(n, subs)


def random_periodic_set(rng: np.random.Generator, max_period: int = 12, min_density=Fraction(3, 10)) -> PeriodicSet:
    """A periodic subset of Z with density at least ``min_density``."""
    min_density = Fraction(min_density)
    m = int(rng.integers(1, max_period + 1))
    need = max(1, -(-min_density.numerator * m // min_density.denominator))
    size = int(rng.integers(need, m + 1))
    res = frozenset((int(r),) for r in rng.choice(m, size=size, replace=False))
    return PeriodicSet((m,), res)


def finite_intersection_instances(seed: int, count: int = 200, m: int = 50, a=Fraction(2, 5), k: int = 2,
                     eps=Fraction(1, 20), n: int = 20, tight: bool = False) -> list:
    rng = np.random.default_rng(seed)
    return [finite_intersection_checker(random_space(rng, m, a, n, tight), k, eps, a) for _ in range(count)]


"""Banach and Folner-asymptotic densities of subsets of Z^d."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .group import FolnerSpec, elem, folner_interval, folner_window
from .sets import Complement, Intersection, Shift, SubsetDesc

DEFAULT_RADIUS = 2**13


def frac_str(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class DensityEstimate:
    lower: Fraction
    upper: Fraction
    method: str
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper <= 1:
            raise ValueError(f"invalid density interval [{self.lower}, {self.upper}]")
        if self.method == "exact-periodic" and self.lower != self.upper:
            raise ValueError("exact estimates must be point intervals")

    @property
    def is_exact(self) -> bool:
        return self.method == "exact-periodic"

    @property
    def value(self) -> Fraction:
        if not self.is_exact:
            raise ValueError("estimate is not exact")
        return self.lower

    def to_json(self):
        return {
            "lower": frac_str(self.lower),
            "upper": frac_str(self.upper),
            "method": self.method,
            "params": self.params,
        }


def _exact_upper(E: SubsetDesc) -> Optional[DensityEstimate]:
    pf = E.periodic_form()
    if pf is None:
        return None
    P = pf[0]
    size = P.period_size
    # one full period, placed at every residue translate
    if P.dim == 1:
        (m,) = P.modulus
        ind = P.indicator(0, 2 * m).astype(np.int64)
        csum = np.concatenate([[0], np.cumsum(ind)])
        best = int((csum[m:2 * m] - csum[0:m]).max())
    else:
        box = list(product(*(range(m) for m in P.modulus)))
        best = max(
            sum(P.contains(tuple(b + c for b, c in zip(g, h))) for h in box) for g in box
        )
    v = Fraction(best, size)
    return DensityEstimate(v, v, "exact-periodic", {"period": list(P.modulus)})


@dataclass
class _Scan:
    """Per-length sup of window counts over a scope of shifts of an interval window."""

    lengths: list
    sups: list
    argmax: list


def _scan(E: SubsetDesc, lengths: Sequence[int], radius: int, center: int = 0) -> _Scan:
    n_max = max(lengths)
    lo, hi = center - radius, center + radius + n_max
    ind = E.indicator(lo, hi).astype(np.int64)
    csum = np.concatenate([[0], np.cumsum(ind)])
    sups, arg = [], []
    for L in lengths:
        counts = csum[L:L + 2 * radius + 1] - csum[0:2 * radius + 1]
        k = int(np.argmax(counts))
        sups.append(int(counts[k]))
        arg.append(lo + k)
    return _Scan(list(lengths), sups, arg)


def banach_upper_density(
    E: SubsetDesc,
    n: int = 12,
    radius: int = DEFAULT_RADIUS,
    schedule: Optional[Sequence[int]] = None,
    center: int = 0,
) -> DensityEstimate:
    """Upper Banach density.

    Sets that are periodic up to a finite set get the exact value (one period
    is an optimal window).  Anything else is estimated from interval windows of
    the lengths in ``schedule`` (default ``1..n``) placed at every shift in
    ``[center - radius, center + radius]``: the upper end is the smallest
    windowed supremum, the lower end the ratio realized by the best-placed
    window of the largest length (a term of a shifted-box Folner sequence),
    never reported above the upper end.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    exact = _exact_upper(E)
    if exact is not None:
        return exact
    if E.dim != 1:
        raise ValueError("windowed densities are implemented for subsets of Z only")
    lengths = sorted(set(schedule)) if schedule else list(range(1, n + 1))
    sc = _scan(E, lengths, radius, center)
    ratios = [Fraction(s, L) for s, L in zip(sc.sups, sc.lengths)]
    i_min = min(range(len(ratios)), key=lambda i: (ratios[i], sc.lengths[i]))
    upper = ratios[i_min]
    L_big = sc.lengths[-1]
    raw_lower = ratios[-1]
    lower = min(raw_lower, upper)
    g = sc.argmax[-1]
    params = {
        "n": max(lengths),
        "radius": radius,
        "center": center,
        "schedule": [lengths[0], lengths[-1]] if lengths == list(range(lengths[0], lengths[-1] + 1)) else lengths,
        "inf_window_length": sc.lengths[i_min],
        "lower_window": [g, g + L_big],
        "raw_lower": frac_str(raw_lower),
    }
    return DensityEstimate(lower, upper, "windowed", params)


def banach_lower_density(E: SubsetDesc, **params) -> DensityEstimate:
    """BD_*(E) = 1 - BD^*(complement of E), interval reversed."""
    c = banach_upper_density(Complement(E), **params)
    return DensityEstimate(1 - c.upper, 1 - c.lower, c.method, c.params)


def banach_density(E: SubsetDesc, **params) -> Optional[Fraction]:
    """BD(E) when it is exactly known to exist, else None."""
    up = banach_upper_density(E, **params)
    low = banach_lower_density(E, **params)
    if up.is_exact and low.is_exact and up.value == low.value:
        return up.value
    return None


@dataclass(frozen=True)
class AsymptoticDensity:
    ratios: tuple  # ((n, |E cap F_n| / |F_n|), ...)
    upper: DensityEstimate
    lower: DensityEstimate
    limit_exact: bool

    def to_json(self):
        return {
            "ratios": [[n, frac_str(r)] for n, r in self.ratios],
            "upper": self.upper.to_json(),
            "lower": self.lower.to_json(),
            "limit": "exact" if self.limit_exact else "empirical over range",
        }


def window_ratios(E: SubsetDesc, folner: FolnerSpec, n_range: Sequence[int]) -> list:
    ns = list(n_range)
    bounds = [folner_interval(folner, n) for n in ns] if E.dim == 1 else [None] * len(ns)
    out = []
    if all(b is not None for b in bounds):
        lo = min(a for a, _ in bounds)
        hi = max(b for _, b in bounds)
        csum = np.concatenate([[0], np.cumsum(E.indicator(lo, hi).astype(np.int64))])
        for n, (a, b) in zip(ns, bounds):
            out.append((n, Fraction(int(csum[b - lo] - csum[a - lo]), b - a)))
        return out
    for n in ns:
        W = folner_window(folner, n)
        out.append((n, Fraction(sum(E.contains(g) for g in W), len(W))))
    return out


def asymptotic_density(E: SubsetDesc, folner: FolnerSpec, n_range: Sequence[int]) -> AsymptoticDensity:
    """Ratios |E cap F_n|/|F_n| over ``n_range`` with limsup/liminf read off the tail.

    Only sets that are periodic up to a finite set receive an exact limit."""
    ns = list(n_range)
    if not ns:
        raise ValueError("n_range must be nonempty")
    ratios = window_ratios(E, folner, ns)
    exact = _exact_upper(E)
    params = {"folner": folner.to_json(), "n_range": [ns[0], ns[-1]]}
    if exact is not None:
        v = exact.value
        est = DensityEstimate(v, v, "exact-periodic", params)
        return AsymptoticDensity(tuple(ratios), est, est, True)
    tail = [r for _, r in ratios[len(ratios) // 2:]]
    hi, lo = max(tail), min(tail)
    return AsymptoticDensity(
        tuple(ratios),
        DensityEstimate(hi, hi, "windowed", params),
        DensityEstimate(lo, lo, "windowed", params),
        False,
    )


@dataclass
class CalculusReport:
    rows: list  # (name, applicable, passed, witness)

    @property
    def passed(self) -> bool:
        return all(p for _, applicable, p, _ in self.rows if applicable)

    def to_json(self):
        return {
            "passed": self.passed,
            "rows": [
                {"check": n, "applicable": a, "passed": p, "witness": w} for n, a, p, w in self.rows
            ],
        }


def _exact(E: SubsetDesc) -> Fraction:
    est = _exact_upper(E)
    if est is None:
        raise ValueError("non-exact input rejected: set is not periodic up to a finite set")
    return est.value


def _subset(A: SubsetDesc, B: SubsetDesc) -> bool:
    P, D = Intersection((A, Complement(B))).periodic_form()
    return not P.residues and not D


def verify_density_calculus(E1: SubsetDesc, E2: SubsetDesc, s) -> CalculusReport:
    """Exact checks of shift invariance and the density-one calculus on exact inputs."""
    s = elem(s, E1.dim)
    d1, d2 = _exact(E1), _exact(E2)
    rows = []
    for name, E, d in (("E1", E1, d1), ("E2", E2, d2)):
        ds = _exact(Shift(E, s))
        rows.append((f"shift invariance {name}", True, ds == d,
                     {"BD*": frac_str(d), "BD*(E+s)": frac_str(ds)}))
        low = 1 - _exact(Complement(E))
        rows.append((f"lower <= upper {name}", True, low <= d,
                     {"BD_*": frac_str(low), "BD*": frac_str(d)}))
    for (na, A, da), (nb, B, db) in ((("E1", E1, d1), ("E2", E2, d2)), (("E2", E2, d2), ("E1", E1, d1))):
        nested = _subset(A, B)
        rows.append((f"monotone {na} <= {nb}", nested, (da <= db) if nested else True,
                     {"BD*(A)": frac_str(da), "BD*(B)": frac_str(db)}))
    one1 = 1 - _exact(Complement(E1)) == 1
    one2 = 1 - _exact(Complement(E2)) == 1
    if _subset(E1, E2):
        rows.append(("density one passes to supersets", one1, (1 - _exact(Complement(E2)) == 1) if one1 else True, {}))
    for name, E, one in (("E1", E1, one1), ("E2", E2, one2)):
        c = _exact(Complement(E))
        rows.append((f"complement of density-one {name} has density zero", one, c == 0 if one else True,
                     {"BD*(G minus E)": frac_str(c)}))
        t = 1 - _exact(Complement(Shift(E, s)))
        rows.append((f"translate of density-one {name}", one, t == 1 if one else True,
                     {"BD_*(E+s)": frac_str(t)}))
    both = one1 and one2
    inter = 1 - _exact(Complement(Intersection((E1, E2))))
    rows.append(("intersection of density-one sets", both, inter == 1 if both else True,
                 {"BD_*(E1 cap E2)": frac_str(inter)}))
    return CalculusReport(rows)

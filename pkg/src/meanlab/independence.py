"""Independence sets for tuples of cylinders, phi_A(F), independence density, IE-pairs.

A tuple A = (A_1, ..., A_k) is independent along J when for every assignment
w: J -> {1..k} the translated cylinders A_{w(j)} + j have a common point.
The search keeps, for the current J, the engine states of every assignment
(merged when their futures coincide), so each new element costs k times the
number of distinct states rather than k^|J| feasibility checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Optional, Sequence

import numpy as np

from .configs import Constant, Periodic
from .density import frac_str
from .graphs import simple_cycles
from .group import Window, elem, enumerate_group
from .systems import (
    SFT,
    CylinderSet,
    FullShift,
    PeriodicOrbit,
    SturmianSystem,
    SubshiftSpec,
    cylinder_nonempty,
    merge_constraints,
)

J_CAP = 20
F_CAP = 14
DEFAULT_THRESHOLD = Fraction(1, 20)


class CapExceeded(ValueError):
    pass


@dataclass
class IndependenceResult:
    F: Window
    best_J: Window
    phi: int
    exact: bool = True
    upper: Optional[int] = None  # certified upper bound on phi when not exact

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.phi if self.exact else self.upper, len(self.F))

    def to_json(self):
        return {"F": self.F.to_json(), "J": self.best_J.to_json(), "phi": self.phi, "exact": self.exact,
                "phi_upper": self.phi if self.exact else self.upper}


@dataclass
class DensityInterval:
    lower: Fraction
    upper: Fraction
    certificate: Optional[dict]
    windows: list  # IndependenceResult per schedule entry

    @property
    def upper_bounds(self) -> list:
        return [r.ratio for r in self.windows]

    def to_json(self):
        return {"densityLower": frac_str(self.lower), "densityUpper": frac_str(self.upper),
                "certificate": self.certificate,
                "windows": [dict(r.to_json(), ratio=frac_str(r.ratio)) for r in self.windows]}


@dataclass
class IEWitness:
    pair: tuple  # (CylinderSet, CylinderSet)
    points: tuple
    J: dict  # certificate: periodic independence set
    density_lower: Fraction
    density_upper: Fraction
    windows: list = field(default_factory=list)

    def to_json(self):
        return {"cylinders": [c.to_json() for c in self.pair], "points": [repr(p) for p in self.points],
                "J": self.J, "densityLower": frac_str(self.density_lower),
                "densityUpper": frac_str(self.density_upper), "windows": self.windows}


@dataclass
class IESearch:
    witness: Optional[IEWitness]
    threshold: Fraction
    scale: dict
    tried: list

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_json(self):
        return {"found": self.found, "threshold": frac_str(self.threshold), "scale": self.scale,
                "witness": self.witness.to_json() if self.witness else None,
                "verdict": "witness" if self.found else "none found at this scale",
                "tried": self.tried}


# --- feasibility bookkeeping --------------------------------------------------


def _check_tuple(A: Sequence[CylinderSet]) -> list:
    A = list(A)
    if len(A) < 2:
        raise ValueError("independence needs k >= 2 cylinder sets")
    if len(A) > 4:
        raise ValueError("tuples beyond k = 4 are not supported")
    return A


def _sites(A, J) -> list:
    return sorted({g for j in J for C in A for g, _ in C.translate(j).constraints})


class _Tracker:
    """Engine states of all assignments over the elements added so far."""

    def __init__(self, X: SubshiftSpec, A, universe: Sequence):
        self.X = X
        self.A = A
        self.eng = X.engine(_sites(A, universe))
        offs = [g[0] for C in A for g, _ in C.constraints] or [0]
        self.min_off = min(offs)
        self.moves = {}

    def _placed(self, j, i):
        key = (j, i)
        if key not in self.moves:
            self.moves[key] = self.A[i].translate(j).constraints
        return self.moves[key]

    def start(self) -> dict:
        st = self.eng.start()
        return {self.eng.key(st): st}

    def extend(self, states: dict, j) -> Optional[dict]:
        """States after adding j, or None when some assignment becomes infeasible."""
        out = {}
        cut = j[0] + self.min_off
        for st in states.values():
            for i in range(len(self.A)):
                nxt = self.eng.add(st, self._placed(j, i), cut)
                if nxt is None or not self.eng.finish(nxt):
                    return None
                out.setdefault(self.eng.key(nxt), nxt)
        return out


def _sorted_window(J, dim) -> list:
    return sorted(elem(g, dim) for g in J)


def _dim(X: SubshiftSpec, A) -> int:
    return A[0].dim if A[0].constraints else X.dim


def is_independent(X: SubshiftSpec, A: Sequence[CylinderSet], J: Iterable, cap: int = J_CAP) -> bool:
    """Exact check of all k^|J| assignments, sharing work between assignment prefixes."""
    A = _check_tuple(A)
    Js = _sorted_window(J, _dim(X, A))
    if len(Js) > cap:
        raise CapExceeded(f"|J| = {len(Js)} exceeds the cap {cap}")
    tr = _Tracker(X, A, Js)
    states = tr.start()
    for j in Js:
        states = tr.extend(states, j)
        if states is None:
            return False
    return True


def is_independent_exhaustive(X: SubshiftSpec, A: Sequence[CylinderSet], J: Iterable) -> bool:
    """Reference check: one cylinder_nonempty call per assignment."""
    A = _check_tuple(A)
    Js = _sorted_window(J, _dim(X, A))
    for w in product(range(len(A)), repeat=len(Js)):
        merged = merge_constraints(A[i].translate(j) for i, j in zip(w, Js))
        if merged is None or not cylinder_nonempty(X, merged):
            return False
    return True


# --- phi ----------------------------------------------------------------------


def phi(X: SubshiftSpec, A: Sequence[CylinderSet], F: Iterable, cap: Optional[int] = None) -> IndependenceResult:
    """max |J| over independence sets J inside F, with the lexicographically least maximizer.

    Include-first depth-first search over F in increasing order; a branch dies
    as soon as one assignment is infeasible (independence is hereditary) or
    cannot beat the incumbent.  Past the cap only a greedy lower bound and the
    trivial upper bound |F| are returned.
    """
    A = _check_tuple(A)
    Fs = _sorted_window(F, _dim(X, A))
    Fw = Window(tuple(Fs))
    if cap is None:
        cap = F_CAP if len(A) == 2 else 10
    tr = _Tracker(X, A, Fs)
    if len(Fs) > cap:
        states, J = tr.start(), []
        for j in Fs:
            nxt = tr.extend(states, j)
            if nxt is not None:
                states, J = nxt, J + [j]
        return IndependenceResult(Fw, Window(tuple(J)), len(J), exact=False, upper=len(Fs))
    n = len(Fs)
    best: list = []

    def dfs(idx, J, states):
        nonlocal best
        if len(J) > len(best):
            best = list(J)
        if idx == n or len(J) + (n - idx) <= len(best):
            return
        nxt = tr.extend(states, Fs[idx])
        if nxt is not None:
            dfs(idx + 1, J + [Fs[idx]], nxt)
        dfs(idx + 1, J, states)

    dfs(0, [], tr.start())
    return IndependenceResult(Fw, Window(tuple(best)), len(best))


def phi_exhaustive(X: SubshiftSpec, A: Sequence[CylinderSet], F: Iterable) -> IndependenceResult:
    """Reference phi: subsets by decreasing size, each in lexicographic order."""
    A = _check_tuple(A)
    Fs = _sorted_window(F, _dim(X, A))
    for r in range(len(Fs), 0, -1):
        for J in combinations(Fs, r):
            if is_independent_exhaustive(X, A, J):
                return IndependenceResult(Window(tuple(Fs)), Window(J), r)
    return IndependenceResult(Window(tuple(Fs)), Window(()), 0)


# --- density --------------------------------------------------------------------


def _normalized(tr: _Tracker, states: dict, j: int) -> frozenset:
    """State keys seen from the last added element, for translation-invariant engines."""
    out = set()
    for st in states.values():
        if isinstance(tr.X, FullShift):
            out.add(tuple(((g[0] - j,) + tuple(g[1:]), a) for g, a in st))
        else:
            pos, front, pending = st
            out.add((None if pos is None else pos - j, None if front is None else front.tobytes(),
                     tuple(((g[0] - j,), a) for g, a in pending)))
    return frozenset(out)


def periodic_certificate(X: SubshiftSpec, A, max_period: int = 8, max_steps: int = 256) -> Optional[dict]:
    """Smallest p such that pZ is an independence set, proved by a fixpoint.

    The normalized state collection after adding 0, p, 2p, ... evolves
    deterministically, so once it repeats every later collection has already
    been checked feasible; independence being hereditary, every finite subset
    of pZ is then independent.  Only for systems on Z with translation-
    invariant engines (full shifts and shifts of finite type).
    """
    if X.dim != 1 or not isinstance(X, (FullShift, SFT)):
        return None
    A = _check_tuple(A)
    for p in range(1, max_period + 1):
        tr = _Tracker(X, A, [(0,)])
        states = tr.start()
        seen = {}
        ok = False
        for step in range(max_steps):
            j = (p * step,)
            states = tr.extend(states, j)
            if states is None:
                break
            key = _normalized(tr, states, j[0])
            if key in seen:
                ok = True
                break
            seen[key] = step
        if ok:
            return {"J": f"{p}Z", "period": p, "density": frac_str(Fraction(1, p)),
                    "verified_steps": step + 1, "argument": "state collection along pZ repeats"}
    return None


def _schedule_windows(schedule, dim: int) -> list:
    out = []
    for w in schedule:
        if isinstance(w, int):
            out.append([(i,) for i in range(w)] if dim == 1 else None)
        else:
            out.append([elem(g, dim) for g in w])
    if any(w is None for w in out):
        raise ValueError("integer schedule entries denote intervals of Z")
    return out


def independence_density(X: SubshiftSpec, A, window_schedule, cap: Optional[int] = None) -> DensityInterval:
    """[lower, upper] for I(A): upper is min phi/|F| over the schedule (valid since I is an
    infimum), lower comes only from a periodic independence-set certificate."""
    A = _check_tuple(A)
    wins = _schedule_windows(window_schedule, _dim(X, A))
    if not wins:
        raise ValueError("window schedule must be nonempty")
    rows = [phi(X, A, W, cap) for W in wins]
    upper = min(r.ratio for r in rows)
    cert = periodic_certificate(X, A)
    lower = Fraction(cert["density"]) if cert else Fraction(0)
    if lower > upper:
        raise AssertionError("certificate contradicts window bound")
    return DensityInterval(lower, upper, cert, rows)


# --- IE pairs -------------------------------------------------------------------


def candidate_points(X: SubshiftSpec) -> list:
    """A few distinct points of X to pair up."""
    if isinstance(X, FullShift):
        return [Constant(a, X.dim) for a in range(X.k)]
    if isinstance(X, SFT):
        out = []
        for c in simple_cycles(X.adjacency, X.essential, max_len=4):
            out.extend(Periodic(np.roll(np.array(c, dtype=np.int64), -r)) for r in range(len(c)))
        return out
    if isinstance(X, PeriodicOrbit):
        return [y for _, y in X.orbit()]
    if isinstance(X, SturmianSystem):
        return [X.point(Fraction(i, 4)) for i in range(4)]
    return [X.transitive_point()]


def candidate_pairs(X: SubshiftSpec, resolution: int) -> list:
    pts = candidate_points(X)
    out = []
    for x, y in combinations(pts, 2):
        A0 = CylinderSet.around(x, _first_sites(x.dim, resolution))
        A1 = CylinderSet.around(y, _first_sites(y.dim, resolution))
        if merge_constraints([A0, A1]) is None:
            out.append((x, y))
    return out


def _first_sites(dim: int, K: int) -> list:
    return enumerate_group(dim, K)


def find_ie_pair(
    X: SubshiftSpec,
    candidate_pairs_: Optional[Sequence[tuple]] = None,
    resolution: int = 1,
    window_schedule=(4, 8, 12),
    threshold=DEFAULT_THRESHOLD,
) -> IESearch:
    """A pair of points whose cylinders at ``resolution`` sites have certified independence
    density above ``threshold``; a miss is reported as none found at this scale."""
    threshold = Fraction(threshold)
    pairs = candidate_pairs(X, resolution) if candidate_pairs_ is None else list(candidate_pairs_)
    tried = []
    for x, y in pairs:
        A = (CylinderSet.around(x, _first_sites(x.dim, resolution)),
             CylinderSet.around(y, _first_sites(y.dim, resolution)))
        if merge_constraints(A) is not None:
            raise ValueError("candidate cylinders must be disjoint at this resolution")
        dens = independence_density(X, A, window_schedule)
        tried.append({"points": [repr(x), repr(y)], "densityLower": frac_str(dens.lower),
                      "densityUpper": frac_str(dens.upper)})
        if dens.lower > threshold:
            wins = [r.to_json() for r in dens.windows]
            return IESearch(IEWitness(A, (x, y), dens.certificate, dens.lower, dens.upper, wins),
                            threshold, _scale(resolution, window_schedule), tried)
    return IESearch(None, threshold, _scale(resolution, window_schedule), tried)


def _scale(resolution, schedule) -> dict:
    return {"resolution": resolution,
            "windows": [w if isinstance(w, int) else len(list(w)) for w in schedule]}

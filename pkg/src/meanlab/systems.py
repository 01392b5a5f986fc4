"""Subshifts, cylinder sets and the compact metric.

A subshift is described by one of :class:`FullShift`, :class:`SFT`,
:class:`SturmianSystem`, :class:`PeriodicOrbit` or :class:`OrbitClosure`.
All of them decide admissibility of finite patterns through a feasibility
engine (see :meth:`SubshiftSpec.engine`), which the independence search also
drives incrementally.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from itertools import product
from typing import Iterable, Optional

import numpy as np

from .configs import (
    ConfigDesc,
    Periodic,
    RotationCoding,
    TransitiveWordCatalog,
    translate,
)
from .graphs import essential_states, is_strongly_connected, strong_components
from .group import Elem, ElemLike, Window, elem, enumerate_group
from .irrational import ContinuedFraction, compare_linear, floor_range, frac_form

HORIZON_FLAG = "horizon-limited"


# --- cylinders --------------------------------------------------------------


@dataclass(frozen=True)
class CylinderSet:
    """{x : x(g) = a for every (g, a) in constraints}."""

    constraints: tuple

    def __post_init__(self):
        items = self.constraints.items() if isinstance(self.constraints, dict) else self.constraints
        seen = {}
        for g, a in items:
            g = elem(g)
            if seen.get(g, a) != a:
                raise ValueError(f"conflicting constraints at {g}")
            seen[g] = int(a)
        object.__setattr__(self, "constraints", tuple(sorted(seen.items())))

    @classmethod
    def origin(cls, symbol: int, dim: int = 1) -> "CylinderSet":
        return cls((((0,) * dim, symbol),))

    @classmethod
    def around(cls, x: ConfigDesc, window: Iterable[ElemLike]) -> "CylinderSet":
        """The cylinder fixing x on ``window``."""
        pts = [elem(g, x.dim) for g in window]
        return cls(tuple((g, x.symbol_at(g)) for g in pts))

    @classmethod
    def ball(cls, x: ConfigDesc, delta) -> "CylinderSet":
        """A cylinder inside the open ball B(x, delta).

        Fixing x on the first K enumeration positions bounds the distance by
        2^-K, so K is the least integer with 2^-K < delta.
        """
        K = ball_depth(delta)
        return cls.around(x, enumerate_group(x.dim, K))

    @property
    def window(self) -> Window:
        return Window(tuple(g for g, _ in self.constraints))

    @property
    def pattern(self) -> tuple:
        return tuple(a for _, a in self.constraints)

    @property
    def dim(self) -> int:
        return len(self.constraints[0][0]) if self.constraints else 1

    def as_dict(self) -> dict:
        return dict(self.constraints)

    def translate(self, s: ElemLike) -> "CylinderSet":
        """Constraints moved to window + s (the set s^-1 A in additive notation)."""
        s = elem(s, self.dim)
        return CylinderSet(tuple((tuple(a + b for a, b in zip(g, s)), v) for g, v in self.constraints))

    def contains(self, x: ConfigDesc) -> bool:
        return all(x.symbol_at(g) == a for g, a in self.constraints)

    def offsets(self) -> tuple[int, int]:
        """(min, max) first coordinate of the window."""
        if not self.constraints:
            return 0, 0
        c = [g[0] for g, _ in self.constraints]
        return min(c), max(c)

    def to_json(self):
        return {"window": [list(g) for g, _ in self.constraints], "symbols": list(self.pattern)}


def merge_constraints(parts: Iterable) -> Optional[dict]:
    """Union of constraint sets, or None when two of them disagree somewhere."""
    out: dict = {}
    for part in parts:
        items = part.constraints if isinstance(part, CylinderSet) else part.items()
        for g, a in items:
            if out.setdefault(g, a) != a:
                return None
    return out


def ball_depth(delta) -> int:
    delta = Fraction(str(delta)) if isinstance(delta, float) else Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    K = 1
    while Fraction(1, 2**K) >= delta:
        K += 1
    return K


# --- metric -----------------------------------------------------------------


@dataclass(frozen=True)
class MetricSpec:
    """d(x, y) = sum_i 2^-i [x(g_i) != y(g_i)] over the canonical enumeration."""

    n_max: int = 10**6

    def to_json(self):
        return {"weights": "2^-i", "enumeration": "max-norm shells, zigzag-lex", "n_max": self.n_max}


def distance(x: ConfigDesc, y: ConfigDesc, K: int) -> tuple[Fraction, Fraction]:
    """[partial sum over the first K sites, partial + 2^-K]; the true d lies inside."""
    if K < 1:
        raise ValueError("truncation K must be >= 1")
    if x.dim != y.dim:
        raise ValueError("configurations live on different groups")
    total = 0
    for i, g in enumerate(enumerate_group(x.dim, K), start=1):
        if x.symbol_at(g) != y.symbol_at(g):
            total += 2 ** (K - i)
    lo = Fraction(total, 2**K)
    return lo, lo + Fraction(1, 2**K)


def visit_times(x: ConfigDesc, U: CylinderSet, search: Window) -> Window:
    """{s in search : translate(x, s) in U}."""
    if len(search) == 0:
        return Window(())
    if x.dim == 1 and U.constraints:
        lo_s, hi_s = search.elems[0][0], search.elems[-1][0] + 1
        a, b = U.offsets()
        sym = x.symbols(lo_s + a, hi_s + b)
        ok = np.ones(hi_s - lo_s, dtype=bool)
        for (g,), v in U.constraints:
            ok &= sym[g - a:g - a + hi_s - lo_s] == v
        return Window(tuple(s for s in search if ok[s[0] - lo_s]))
    return Window(tuple(s for s in search if U.contains(translate(x, s))))


# --- feasibility engines ----------------------------------------------------
#
# An engine state summarizes a set of constraints.  ``add`` merges further
# constraints and may discard everything strictly left of ``cut`` once no later
# constraint can land there; it returns None on a certain contradiction.
# ``finish`` says whether the accumulated constraints are realizable.


class _GraphEngine:
    """Paths in a labelled graph restricted to its essential states."""

    def __init__(self, A: np.ndarray, labels: tuple, essential: frozenset):
        self.A = A.astype(np.int64)
        self.labels = np.asarray(labels)
        self.ess = np.zeros(len(labels), dtype=bool)
        self.ess[list(essential)] = True
        self._pow = {1: self.A > 0}

    def _reach(self, gap: int) -> np.ndarray:
        if gap not in self._pow:
            half = self._reach(gap // 2).astype(np.int64)
            sq = (half @ half) > 0
            self._pow[gap] = sq if gap % 2 == 0 else (sq.astype(np.int64) @ self.A) > 0
        return self._pow[gap]

    def start(self):
        return (None, None, ())

    def _advance(self, state, cut):
        pos, front, pending = state
        keep = []
        for g, a in pending:
            p = g[0]
            if cut is not None and p >= cut:
                keep.append((g, a))
                continue
            allowed = self.ess & (self.labels == a)
            if front is None:
                new = allowed
            else:
                step = self._reach(p - pos)
                new = (front[:, None] & step).any(axis=0) & allowed
            if not new.any():
                return None
            pos, front = p, new
        return (pos, front, tuple(keep))

    def add(self, state, constraints, cut=None):
        pending = dict(state[2])
        for g, a in constraints:
            if pending.setdefault(g, a) != a:
                return None
            if state[0] is not None and g[0] <= state[0]:
                raise ValueError("constraint placed left of an already finalized site")
        st = (state[0], state[1], tuple(sorted(pending.items())))
        return self._advance(st, cut)

    def finish(self, state) -> bool:
        return state is not None and self._advance(state, None) is not None

    def key(self, state):
        pos, front, pending = state
        return (pos, None if front is None else front.tobytes(), pending)


class _CandidateEngine:
    """A finite list of candidate patterns; a state is the set still consistent."""

    def __init__(self, n: int, symbol):
        self.n = n
        self.symbol = symbol  # (candidate, site) -> symbol

    def start(self):
        return frozenset(range(self.n))

    def add(self, state, constraints, cut=None):
        alive = frozenset(c for c in state if all(self.symbol(c, g) == a for g, a in constraints))
        return alive or None

    def finish(self, state) -> bool:
        return bool(state)

    def key(self, state):
        return state


class _FreeEngine:
    """The full shift: constraints are realizable iff they do not clash."""

    def __init__(self, k: int):
        self.k = k

    def start(self):
        return ()

    def add(self, state, constraints, cut=None):
        merged = dict(state)
        for g, a in constraints:
            if not 0 <= a < self.k or merged.setdefault(g, a) != a:
                return None
        if cut is not None:
            merged = {g: a for g, a in merged.items() if g[0] >= cut}
        return tuple(sorted(merged.items()))

    def finish(self, state) -> bool:
        return state is not None

    def key(self, state):
        return state


# --- subshift descriptions --------------------------------------------------


@dataclass(frozen=True)
class Transitivity:
    verdict: str  # transitive | not-transitive | horizon-limited
    reason: str
    witness: Optional[ConfigDesc] = None

    def to_json(self):
        return {"verdict": self.verdict, "reason": self.reason,
                "witness": None if self.witness is None else repr(self.witness)}


class SubshiftSpec:
    dim: int = 1
    k: int = 2
    horizon_limited: bool = False
    name: str = "subshift"

    def engine(self, sites: Iterable[Elem] = ()):
        """A feasibility engine valid for constraints on ``sites``."""
        raise NotImplementedError

    def transitive_point(self) -> ConfigDesc:
        raise NotImplementedError

    def to_json(self):
        return {"system": self.name}


@dataclass(frozen=True)
class FullShift(SubshiftSpec):
    k: int = 2
    dim: int = 1

    @property
    def name(self):
        return f"fullshift:{self.k}" + (f"^Z{self.dim}" if self.dim > 1 else "")

    def engine(self, sites=()):
        return _FreeEngine(self.k)

    def graph(self):
        A = np.ones((self.k, self.k), dtype=bool)
        return A, tuple(range(self.k))

    def transitive_point(self):
        if self.dim != 1:
            raise ValueError("the word-catalog point is defined on Z only")
        return TransitiveWordCatalog(self.k)


@dataclass(frozen=True, eq=False)
class SFT(SubshiftSpec):
    """Vertex shift on Z: x(n) -> x(n+1) must be an edge of ``adjacency``."""

    adjacency: object
    label: str = ""

    def __post_init__(self):
        A = np.asarray(self.adjacency, dtype=bool)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
            raise ValueError("adjacency must be a nonempty square matrix")
        A.setflags(write=False)
        object.__setattr__(self, "adjacency", A)

    def __eq__(self, other):
        return isinstance(other, SFT) and np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self):
        return hash(self.adjacency.tobytes())

    @classmethod
    def from_forbidden(cls, k: int, forbidden: Iterable[str]) -> "SFT":
        A = np.ones((k, k), dtype=bool)
        for w in forbidden:
            if len(w) != 2:
                raise ValueError("only forbidden words of length 2 are supported")
            A[int(w[0]), int(w[1])] = False
        return cls(A)

    @property
    def k(self):
        return self.adjacency.shape[0]

    @property
    def name(self):
        return self.label or "sft:" + ";".join("".join("1" if v else "0" for v in row) for row in self.adjacency)

    @property
    def essential(self) -> frozenset:
        return essential_states(self.adjacency)

    def graph(self):
        return self.adjacency, tuple(range(self.k))

    def engine(self, sites=()):
        return _GraphEngine(self.adjacency, tuple(range(self.k)), self.essential)

    def essential_matrix(self) -> np.ndarray:
        idx = sorted(self.essential)
        return self.adjacency[np.ix_(idx, idx)]

    def transitive_point(self):
        return TransitiveWordCatalog(self.k, self.adjacency)

    def to_json(self):
        return {"system": self.name, "adjacency": self.adjacency.astype(int).tolist()}


@dataclass(frozen=True)
class SturmianSystem(SubshiftSpec):
    """Orbit closure of the rotation coding by alpha."""

    alpha: ContinuedFraction
    label: str = ""

    @property
    def name(self):
        return self.label or f"sturmian:{self.alpha.to_json()}"

    def engine(self, sites=()):
        pts = sorted({g[0] for g in sites})
        if not pts:
            pts = [0]
        return _CandidateEngine(*self._arc_patterns(pts[0], pts[-1] + 1))

    def _arc_patterns(self, lo: int, hi: int):
        pats = sturmian_arc_patterns(self.alpha, lo, hi)

        def symbol(c, g):
            return pats[c][g[0] - lo]

        return len(pats), symbol

    def point(self, beta=Fraction(0), beta_alpha: int = 0) -> RotationCoding:
        return RotationCoding(self.alpha, Fraction(beta), beta_alpha)

    def transitive_point(self):
        return self.point()

    def to_json(self):
        return {"system": self.name, "alpha": self.alpha.to_json()}


@lru_cache(maxsize=512)
def sturmian_cuts(alpha: ContinuedFraction, lo: int, hi: int) -> tuple:
    """Cut points frac(-j alpha), j in [lo, hi], as sorted linear forms (a, b) = a*alpha + b."""
    cuts = [frac_form(alpha, -j, 0) for j in range(lo, hi + 1)]

    def cmp(u, v):
        return compare_linear(alpha, u[0], u[1], v[0], v[1])

    return tuple(sorted(cuts, key=cmp_to_key(cmp)))


@lru_cache(maxsize=512)
def sturmian_arcs(alpha: ContinuedFraction, lo: int, hi: int) -> tuple:
    """Offsets beta (as (a, b) with beta = a*alpha + b) at the midpoints of the
    arcs cut out by the sites [lo, hi); one per admissible pattern."""
    cuts = sturmian_cuts(alpha, lo, hi)
    mids = []
    for u, v in zip(cuts, cuts[1:]):
        mids.append(((u[0] + v[0]) / 2, (u[1] + v[1]) / 2))
    u, v = cuts[-1], cuts[0]
    mids.append(((u[0] + v[0]) / 2, (u[1] + v[1] + 1) / 2))
    return tuple(mids)


@lru_cache(maxsize=512)
def sturmian_arc_patterns(alpha: ContinuedFraction, lo: int, hi: int) -> tuple:
    out = []
    for a, b in sturmian_arcs(alpha, lo, hi):
        f = floor_range(alpha, a, b, lo, hi + 1)
        out.append(tuple(int(f[i + 1] - f[i]) for i in range(hi - lo)))
    return tuple(out)


@dataclass(frozen=True)
class PeriodicOrbit(SubshiftSpec):
    """The finite orbit of a periodic configuration."""

    x: Periodic

    @property
    def dim(self):
        return self.x.dim

    @property
    def k(self):
        return int(self.x.block.max()) + 1

    @property
    def name(self):
        return f"periodic:{self.x.word()}" if self.dim == 1 else "periodic"

    def orbit(self) -> list:
        """Distinct points of the orbit, in order of the shifts that produce them."""
        seen, out = set(), []
        for s in product(*(range(m) for m in self.x.modulus)):
            y = translate(self.x, s)
            key = np.roll(self.x.block, tuple(-c for c in s), axis=tuple(range(self.dim))).tobytes()
            if key not in seen:
                seen.add(key)
                out.append((s, y))
        return out

    def engine(self, sites=()):
        shifts = [s for s, _ in self.orbit()]

        def symbol(c, g):
            return self.x.symbol_at(tuple(a + b for a, b in zip(g, shifts[c])))

        return _CandidateEngine(len(shifts), symbol)

    def graph(self):
        if self.dim != 1:
            raise ValueError("cycle graph is defined on Z only")
        (p,) = self.x.modulus
        A = np.zeros((p, p), dtype=bool)
        for i in range(p):
            A[i, (i + 1) % p] = True
        return A, tuple(int(v) for v in self.x.block)

    def transitive_point(self):
        return self.x

    def to_json(self):
        return {"system": self.name, "block": self.x.block.tolist()}


@dataclass(frozen=True)
class OrbitClosure(SubshiftSpec):
    """Orbit closure of a configuration on Z, known only through the shifts
    s in [-horizon, horizon]; every verdict about it is horizon-limited."""

    x: ConfigDesc
    horizon: int = 4096
    k: int = 2
    horizon_limited: bool = True

    @property
    def name(self):
        return f"orbit-closure:{self.x!r}"

    def engine(self, sites=()):
        pts = [g[0] for g in sites] or [0]
        lo, hi = min(pts), max(pts) + 1
        H = self.horizon
        sym = self.x.symbols(-H + lo, H + hi)

        def symbol(c, g):
            return int(sym[c + g[0] - lo])

        return _CandidateEngine(2 * H + 1, symbol)

    def transitive_point(self):
        return self.x


# --- operations -------------------------------------------------------------


def _constraint_items(C) -> list:
    if isinstance(C, CylinderSet):
        return list(C.constraints)
    if isinstance(C, dict):
        return [(elem(g), int(a)) for g, a in C.items()]
    return [(elem(g), int(a)) for g, a in C]


def cylinder_nonempty(X: SubshiftSpec, C) -> bool:
    """Exact: does some point of X satisfy every constraint of C?"""
    items = _constraint_items(C)
    if not items:
        return True
    eng = X.engine([g for g, _ in items])
    st = eng.add(eng.start(), items)
    return eng.finish(st)


def _check_window(X: SubshiftSpec, F: Window, need_interval: bool):
    if len(F) == 0:
        raise ValueError("window must be nonempty")
    if need_interval and not F.is_interval():
        raise ValueError(f"{X.name}: pattern counting needs an interval window")


def pattern_count(X: SubshiftSpec, F: Window) -> int:
    """Exact number N(F) of patterns on F that occur in X."""
    if isinstance(X, FullShift):
        _check_window(X, F, False)
        return X.k ** len(F)
    if isinstance(X, SFT):
        _check_window(X, F, True)
        idx = sorted(X.essential)
        if not idx:
            return 0
        M = [[int(v) for v in row] for row in X.essential_matrix()]
        vec = [1] * len(idx)
        for _ in range(len(F) - 1):
            vec = [sum(M[i][j] * vec[j] for j in range(len(idx))) for i in range(len(idx))]
        return sum(vec)
    if isinstance(X, SturmianSystem):
        _check_window(X, F, True)
        a, b = F.bounds()
        return len(set(sturmian_arc_patterns(X.alpha, a, b)))
    if isinstance(X, PeriodicOrbit):
        _check_window(X, F, False)
        return len({tuple(y.symbol_at(g) for g in F) for _, y in X.orbit()})
    if isinstance(X, OrbitClosure):
        _check_window(X, F, True)
        a, b = F.bounds()
        H = X.horizon
        sym = X.x.symbols(-H + a, H + b)
        n = b - a
        return len({tuple(sym[i:i + n]) for i in range(2 * H + 1)})
    raise TypeError(f"unsupported system {X!r}")


def _reducible_transitive(A: np.ndarray, ess: frozenset) -> bool:
    """Dense orbit in a vertex shift whose essential graph is not strongly connected.

    The left tail of a point with dense orbit lives in one cyclic component and
    the right tail in another; every other component would need unbounded
    visits.  So exactly two cyclic components C1 -> C2 must exist, linked by a
    single route through transient states.
    """
    idx = sorted(ess)
    sub = A[np.ix_(idx, idx)]
    n, lab = strong_components(sub)
    comps = {}
    for i, c in enumerate(lab):
        comps.setdefault(int(c), []).append(i)
    cyclic = [c for c, members in comps.items()
              if len(members) > 1 or sub[members[0], members[0]]]
    if len(cyclic) != 2:
        return False
    c1, c2 = cyclic
    in1 = {i for i in comps[c1]}
    in2 = {i for i in comps[c2]}
    others = set(range(len(idx))) - in1 - in2

    def routes(src_set, dst_set):
        total = 0
        for u in src_set:
            stack = [u]
            while stack:
                v = stack.pop()
                for w in np.flatnonzero(sub[v]):
                    w = int(w)
                    if w in dst_set:
                        total += 1
                    elif w in others:
                        stack.append(w)
        return total

    r12, r21 = routes(in1, in2), routes(in2, in1)
    return sorted((r12, r21)) == [0, 1]


def transitivity_check(X: SubshiftSpec) -> Transitivity:
    if isinstance(X, FullShift):
        w = X.transitive_point() if X.dim == 1 else None
        return Transitivity("transitive", "full shift: the word-catalog point has a dense orbit", w)
    if isinstance(X, SFT):
        ess = X.essential
        if not ess:
            return Transitivity("not-transitive", "empty shift")
        if is_strongly_connected(X.essential_matrix()):
            return Transitivity("transitive", "essential graph strongly connected", X.transitive_point())
        if _reducible_transitive(X.adjacency, ess):
            return Transitivity("transitive",
                                "two cyclic components joined by a unique route: a dense orbit "
                                "through an isolated point")
        return Transitivity("not-transitive", "essential graph not strongly connected")
    if isinstance(X, SturmianSystem):
        for n in range(1, 31):
            if pattern_count(X, Window.interval(0, n)) != n + 1:
                return Transitivity("horizon-limited", f"complexity check failed at n={n}")
        return Transitivity("transitive", "minimal rotation coding; complexity n+1 verified to n=30",
                            X.transitive_point())
    if isinstance(X, PeriodicOrbit):
        return Transitivity("transitive", "single finite orbit", X.x)
    if isinstance(X, OrbitClosure):
        return Transitivity(HORIZON_FLAG, "orbit closure of the generating point within the horizon", X.x)
    raise TypeError(f"unsupported system {X!r}")

"""Mean pseudometrics on configurations and mean-equicontinuity classification.

Three quantities are estimated for a pair x, y:

* Besicovitch  D_F(x, y) = limsup_n |F_n|^-1 sum_{g in F_n} d(gx, gy),
* Banach       Dbar(x, y) = inf_F sup_g |F|^-1 sum_{t in F+g} d(tx, ty),
* Weyl         D(x, y) = sup over Folner sequences of D_F(x, y).

Exact route: when the mismatch set {g : x(g) != y(g)} is periodic up to a
finite set, every one of them equals its density (the metric weights sum to
one).  On Z, pairs that are periodic on each half-line give Dbar = D =
max(left density, right density).  Everything else is windowed: exact
rational averages of the truncated metric over interval windows within a
declared shift scope.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .configs import (
    ConfigDesc,
    EventuallyPeriodic,
    Flipped,
    Periodic,
    RotationCoding,
    Translated,
    translate,
)
from .density import frac_str
from .graphs import is_strongly_connected, shortest_path, simple_cycles
from .group import CenteredBoxes, FolnerSpec, Window, enumerate_group, folner_interval, folner_window
from .irrational import compare_linear, frac_form, value_bracket
from .sets import Complement, Explicit, Intersection, Periodic as PeriodicSet, Shift, SubsetDesc, exact_density
from .systems import (
    FullShift,
    OrbitClosure,
    PeriodicOrbit,
    SFT,
    SturmianSystem,
    SubshiftSpec,
    CylinderSet,
    ball_depth,
    distance,
    sturmian_cuts,
    transitivity_check,
    visit_times,
)

EXACT = "exact-periodic"
WINDOWED = "windowed"
MAX_WINDOWED_K = 40


class DichotomyError(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class MeanDistanceEstimate:
    lower: Fraction
    upper: Fraction
    mode: str
    evidence: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper <= 1:
            raise ValueError(f"invalid estimate [{self.lower}, {self.upper}]")
        if self.mode == EXACT and self.lower != self.upper:
            raise ValueError("exact estimates must be point intervals")

    @property
    def is_exact(self) -> bool:
        return self.mode == EXACT

    @property
    def gap(self) -> Fraction:
        return self.upper - self.lower

    def to_json(self):
        return {"lower": frac_str(self.lower), "upper": frac_str(self.upper), "mode": self.mode,
                "evidence": self.evidence}


# --- mismatch sets ----------------------------------------------------------


@dataclass(frozen=True)
class MismatchSet(SubsetDesc):
    """{g : x(g) != y(g)}."""

    x: ConfigDesc
    y: ConfigDesc

    @property
    def dim(self):
        return self.x.dim

    def contains(self, g):
        return self.x.symbol_at(g) != self.y.symbol_at(g)

    def indicator(self, lo, hi):
        return self.x.symbols(lo, hi) != self.y.symbols(lo, hi)

    def periodic_form(self):
        px, py = self.x.periodic_form(), self.y.periodic_form()
        if px is None or py is None:
            return None
        (mx, bx, ox), (my, by, oy) = px, py
        mod = tuple(_lcm(a, b) for a, b in zip(mx, my))
        res = frozenset(
            g for g in product(*(range(m) for m in mod))
            if bx[tuple(c % m for c, m in zip(g, mx))] != by[tuple(c % m for c, m in zip(g, my))]
        )
        P = PeriodicSet(mod, res)
        D = frozenset(g for g in set(ox) | set(oy) if self.contains(g) != P.contains(g))
        return P, D


def mismatch_set(x: ConfigDesc, y: ConfigDesc) -> SubsetDesc:
    """The mismatch set, using structure when one side is a recoloring of the other."""
    if x.dim != y.dim:
        raise ValueError("configurations live on different groups")
    if isinstance(x, Translated) and isinstance(y, Translated) and x.s == y.s:
        return Shift(mismatch_set(x.base, y.base), tuple(-c for c in x.s))
    if isinstance(x, Flipped) and x.base == y and x.k >= 2:
        return x.S
    if isinstance(y, Flipped) and y.base == x and y.k >= 2:
        return y.S
    if isinstance(x, Flipped) and isinstance(y, Flipped) and x.base == y.base and x.k == y.k:
        return (x.S & ~y.S) | (y.S & ~x.S)
    return MismatchSet(x, y)


def _tail_densities(x: ConfigDesc, y: ConfigDesc) -> Optional[tuple[Fraction, Fraction]]:
    ex, ey = x.eventual_form(), y.eventual_form()
    if ex is None or ey is None:
        return None
    L = _lcm(len(ex.left), len(ey.left))
    top = min(ex.lo, ey.lo)
    left = int((ex.symbols(top - L, top) != ey.symbols(top - L, top)).sum())
    R = _lcm(len(ex.right), len(ey.right))
    bot = max(ex.hi, ey.hi)
    right = int((ex.symbols(bot, bot + R) != ey.symbols(bot, bot + R)).sum())
    return Fraction(left, L), Fraction(right, R)


@dataclass(frozen=True)
class ExactMean:
    left: Fraction
    right: Fraction
    route: str

    @property
    def banach(self) -> Fraction:
        return max(self.left, self.right)


def exact_mean(x: ConfigDesc, y: ConfigDesc) -> Optional[ExactMean]:
    """Exact tail densities of the mismatch set, when available."""
    M = mismatch_set(x, y)
    d = exact_density(M)
    if d is not None:
        return ExactMean(d, d, "periodic mismatch set up to finitely many sites")
    if x.dim == 1:
        t = _tail_densities(x, y)
        if t is not None:
            return ExactMean(t[0], t[1], "periodic tails on both half-lines")
    return None


def _exact_estimate(em: ExactMean, value: Fraction, extra=None) -> MeanDistanceEstimate:
    ev = {"route": em.route, "left_density": frac_str(em.left), "right_density": frac_str(em.right)}
    ev.update(extra or {})
    return MeanDistanceEstimate(value, value, EXACT, ev)


# --- windowed machinery -----------------------------------------------------


def _offsets(K: int) -> list:
    return [g[0] for g in enumerate_group(1, K)]


def weighted_mismatch(x: ConfigDesc, y: ConfigDesc, lo: int, hi: int, K: int) -> np.ndarray:
    """2^K times the truncated distance d_K(tx, ty), for t in [lo, hi), as ints."""
    if not 1 <= K <= MAX_WINDOWED_K:
        raise ValueError(f"truncation K must lie in [1, {MAX_WINDOWED_K}] for windowed estimates")
    offs = _offsets(K)
    a, b = min(offs), max(offs)
    m = (x.symbols(lo + a, hi + b + 1) != y.symbols(lo + a, hi + b + 1)).astype(np.int64)
    f = np.zeros(hi - lo, dtype=np.int64)
    n = hi - lo
    for i, o in enumerate(offs, start=1):
        f += m[o - a:o - a + n] << (K - i)
    return f


def _interval(total: int, size: int, K: int) -> tuple[Fraction, Fraction]:
    lo = Fraction(total, size * 2**K)
    return lo, min(Fraction(1), lo + Fraction(1, 2**K))


@dataclass(frozen=True)
class WindowParams:
    """Window lengths 1..n_max (or an explicit schedule) placed at every shift
    in [center - radius, center + radius]; metric truncated at K sites."""

    n_max: int = 200
    radius: int = 2**12
    K: int = 20
    center: int = 0
    schedule: Optional[tuple] = None

    def lengths(self) -> list:
        if self.schedule:
            return sorted(set(int(L) for L in self.schedule))
        return list(range(1, self.n_max + 1))

    def to_json(self):
        return {"n_max": self.n_max, "radius": self.radius, "K": self.K, "center": self.center,
                "schedule": list(self.schedule) if self.schedule else None}


@dataclass
class _Scan:
    params: WindowParams
    lengths: list
    sups: list  # per length: max window sum (integer numerator)
    argmax: list  # per length: window start realizing it
    csum: np.ndarray
    lo: int

    def window_sum(self, a: int, b: int) -> int:
        return int(self.csum[b - self.lo] - self.csum[a - self.lo])


def _scan(x, y, p: WindowParams) -> _Scan:
    lengths = p.lengths()
    L_max = max(lengths)
    half = max(L_max, p.n_max)
    lo = p.center - p.radius - half
    hi = p.center + p.radius + half + 1
    f = weighted_mismatch(x, y, lo, hi, p.K)
    csum = np.concatenate([[0], np.cumsum(f)])
    first = p.center - p.radius - lo
    sups, arg = [], []
    for L in lengths:
        starts = np.arange(first, first + 2 * p.radius + 1)
        sums = csum[starts + L] - csum[starts]
        k = int(np.argmax(sums))
        sups.append(int(sums[k]))
        arg.append(int(starts[k]) + lo)
    return _Scan(p, lengths, sups, arg, csum, lo)


def _banach_upper(sc: _Scan) -> tuple[Fraction, int]:
    K = sc.params.K
    best, best_L = None, None
    for L, s in zip(sc.lengths, sc.sups):
        up = _interval(s, L, K)[1]
        if best is None or up < best:
            best, best_L = up, L
    return best, best_L


def _family_lowers(sc: _Scan) -> dict:
    """Lower values from three shifted-box Folner families, each read at its last term."""
    p = sc.params
    K = p.K
    c = p.center
    n = max(1, min(p.n_max, p.radius))
    out = {
        "centered": _interval(sc.window_sum(c - n, c + n + 1), 2 * n + 1, K)[0],
        "shifted-0": _interval(sc.window_sum(c, c + n), n, K)[0],
        # the n-th window is the best-placed window of length n
        "adversarial": _interval(sc.sups[-1], sc.lengths[-1], K)[0],
    }
    return out


def _windowed(x, y, p: WindowParams, which: str) -> MeanDistanceEstimate:
    if x.dim != 1:
        raise ValueError("windowed mean distances are implemented on Z only")
    sc = _scan(x, y, p)
    upper, inf_L = _banach_upper(sc)
    fam = _family_lowers(sc)
    raw = max(fam.values())
    lower = min(raw, upper)
    g = sc.argmax[-1]
    ev = {
        "params": p.to_json(),
        "estimator": which,
        "inf_window_length": inf_L,
        "sup_placement": [g, g + sc.lengths[-1]],
        "families": {k: frac_str(v) for k, v in sorted(fam.items())},
        "raw_lower": frac_str(raw),
        "lower_justification": "D = Dbar for amenable abelian actions; lower from shifted-box Folner families",
    }
    return MeanDistanceEstimate(lower, upper, WINDOWED, ev)


# --- public estimators ------------------------------------------------------


def banach_mean_distance(x: ConfigDesc, y: ConfigDesc, params: WindowParams = WindowParams()) -> MeanDistanceEstimate:
    em = exact_mean(x, y)
    if em is not None:
        return _exact_estimate(em, em.banach)
    return _windowed(x, y, params, "banach")


def weyl_distance(x: ConfigDesc, y: ConfigDesc, params: WindowParams = WindowParams()) -> MeanDistanceEstimate:
    em = exact_mean(x, y)
    if em is not None:
        return _exact_estimate(em, em.banach)
    return _windowed(x, y, params, "weyl")


def besicovitch_distance(
    x: ConfigDesc, y: ConfigDesc, folner: FolnerSpec, n_range: Sequence[int], K: int = 20
) -> MeanDistanceEstimate:
    """limsup along ``folner``: exact when the limit is forced, else the range-empirical
    interval [max tail lower, max tail upper] over the last half of ``n_range``."""
    ns = list(n_range)
    if not ns:
        raise ValueError("n_range must be nonempty")
    em = exact_mean(x, y)
    if em is not None:
        if em.left == em.right:
            return _exact_estimate(em, em.left)
        if isinstance(folner, CenteredBoxes) and folner.dim == 1:
            return _exact_estimate(em, (em.left + em.right) / 2, {"centered": "average of the two tails"})
    rows = []
    for n in ns:
        b = folner_interval(folner, n)
        if b is not None and x.dim == 1:
            a, c = b
            total = int(weighted_mismatch(x, y, a, c, min(K, MAX_WINDOWED_K)).sum())
            rows.append((n, *_interval(total, c - a, min(K, MAX_WINDOWED_K))))
        else:
            W = folner_window(folner, n)
            los = [distance(translate(x, g), translate(y, g), K)[0] for g in W]
            lo = sum(los, Fraction(0)) / len(W)
            rows.append((n, lo, min(Fraction(1), lo + Fraction(1, 2**K))))
    tail = rows[len(rows) // 2:]
    lower = max(r[1] for r in tail)
    upper = max(r[2] for r in tail)
    ev = {"folner": folner.to_json(), "n_range": [ns[0], ns[-1]], "K": K,
          "ratios": [[n, frac_str(lo)] for n, lo, _ in rows[-8:]]}
    return MeanDistanceEstimate(lower, upper, WINDOWED, ev)


# --- classification ---------------------------------------------------------


def default_eps_grid() -> list:
    return [Fraction(1, 2**i) for i in range(1, 7)]


def default_delta_grid(X: SubshiftSpec = None) -> list:
    depth = 512 if isinstance(X, SturmianSystem) else 10
    return [Fraction(1, 2**i) for i in range(1, depth + 1)]


@dataclass
class PointVerdict:
    point: str
    verdict: str  # equicontinuous | sensitive | inconclusive
    grade: str  # exact | certified | empirical | horizon-limited
    rows: list = field(default_factory=list)
    delta0: Optional[Fraction] = None

    def to_json(self):
        out = {"point": self.point, "verdict": self.verdict, "grade": self.grade, "rows": self.rows}
        if self.delta0 is not None:
            out["delta0"] = frac_str(self.delta0)
        return out


@dataclass
class EquicontinuityReport:
    system: str
    verdict: str  # almost-equicontinuous | sensitive | inconclusive
    grade: str
    points: list
    params: dict
    equicontinuous: bool = False  # every point equicontinuous (finite systems)

    @property
    def label(self) -> str:
        if self.verdict == "almost-equicontinuous" and self.equicontinuous and self.grade == "exact":
            return "equicontinuous-exact"
        return f"{self.verdict}-{self.grade}"

    def to_json(self):
        return {"system": self.system, "verdict": self.verdict, "grade": self.grade, "label": self.label,
                "equicontinuous": self.equicontinuous, "params": self.params,
                "points": [p.to_json() for p in self.points]}


def _flip_witness(X: FullShift, x: ConfigDesc, delta) -> dict:
    C = CylinderSet.ball(x, delta)
    S = Intersection((PeriodicSet.progression(2, 0), Complement(Explicit(C.window))))
    y = Flipped(x, S, X.k)
    if not C.contains(y):
        raise AssertionError("flip witness left the cylinder")
    est = weyl_distance(x, y)
    return {"delta": frac_str(Fraction(delta)), "K": ball_depth(delta), "witness": "flip on 2Z outside the cylinder",
            "D_lower": frac_str(est.lower), "mode": est.mode}


def _cycle_pair(A, ess) -> tuple:
    """Two cycles whose periodic patterns disagree on a positive fraction of sites
    under every alignment; returns (c1, c2, min mismatch density)."""
    cycles = simple_cycles(A, ess, max_len=8)
    best = None
    for c1 in cycles:
        for c2 in cycles:
            if c1 == c2:
                continue
            L = _lcm(len(c1), len(c2))
            dmin = min(
                Fraction(sum(c1[t % len(c1)] != c2[(t + s) % len(c2)] for t in range(L)), L)
                for s in range(len(c2))
            )
            if best is None or dmin > best[2]:
                best = (c1, c2, dmin)
    if best is None or best[2] == 0:
        raise ValueError("no pair of separated cycles")
    return best


def _sft_extension(A, x: ConfigDesc, a: int, b: int, cycle: tuple) -> EventuallyPeriodic:
    """A point agreeing with x on [a, b) whose tails both repeat ``cycle``."""
    mid = [int(v) for v in x.symbols(a, b)]
    to_cycle = shortest_path(A, mid[-1], cycle[0])[1:-1]
    from_cycle = shortest_path(A, cycle[-1], mid[0])[1:-1]
    middle = from_cycle + mid + to_cycle
    lo = a - len(from_cycle)
    # left tail ends with cycle[-1] just before `lo`
    m = len(cycle)
    left = tuple(cycle[i % m] for i in range(m))
    return EventuallyPeriodic(left, tuple(cycle), lo, tuple(middle))


def _sft_witness(X: SFT, x: ConfigDesc, delta, pair, catalog: bool) -> dict:
    c1, c2, dmin = pair
    C = CylinderSet.ball(x, delta)
    a, b = C.offsets()
    A = X.adjacency
    y = _sft_extension(A, x, a, b + 1, c1)
    if not C.contains(y):
        raise AssertionError("extension left the cylinder")
    row = {"delta": frac_str(Fraction(delta)), "K": ball_depth(delta), "tail_cycle": list(c1)}
    em = exact_mean(x, y)
    if em is not None:
        if em.banach <= dmin / 2:
            y = _sft_extension(A, x, a, b + 1, c2)
            em = exact_mean(x, y)
        row.update({"D_lower": frac_str(em.banach), "mode": EXACT})
    elif catalog:
        row.update({
            "D_lower": frac_str(dmin),
            "mode": "certified",
            "argument": "x contains blocks repeating cycle %s of every length right of the cut, where y "
                        "repeats cycle %s; their patterns disagree on a fraction >= %s of sites under "
                        "every alignment" % (list(c2), list(c1), frac_str(dmin)),
        })
    else:
        raise ValueError("no certified lower bound for this point")
    return row


def _sturmian_arc(X: SturmianSystem, x: RotationCoding, window: Window):
    """Certified rational sub-interval of offsets beta' whose codings agree with x on window."""
    a, b = window.bounds()
    cuts = sturmian_cuts(X.alpha, a, b)
    beta = (Fraction(x.beta_alpha), x.beta_rational)
    fb = frac_form(X.alpha, *beta)
    below = [c for c in cuts if compare_linear(X.alpha, c[0], c[1], fb[0], fb[1]) <= 0]
    above = [c for c in cuts if compare_linear(X.alpha, c[0], c[1], fb[0], fb[1]) > 0]
    lo_f = below[-1] if below else (cuts[-1][0], cuts[-1][1] - 1)
    hi_f = above[0] if above else (cuts[0][0], cuts[0][1] + 1)
    return fb, lo_f, hi_f


def _rational_inside(X, lo_f, hi_f, t: Fraction) -> Fraction:
    """A rational point (1-t)*lo + t*hi (approximately) certified strictly inside (lo, hi)."""
    depth = 10
    while True:
        l1, h1 = value_bracket(X.alpha, depth)
        mid_a = (l1 + h1) / 2
        lo_v = lo_f[0] * mid_a + lo_f[1]
        hi_v = hi_f[0] * mid_a + hi_f[1]
        q = lo_v + t * (hi_v - lo_v)
        q = Fraction(q).limit_denominator(2**64)
        if compare_linear(X.alpha, lo_f[0], lo_f[1], 0, q) < 0 and compare_linear(X.alpha, hi_f[0], hi_f[1], 0, q) > 0:
            return q
        depth += 10


def _sturmian_samples(X: SturmianSystem, x: RotationCoding, delta, budget: int) -> tuple:
    C = CylinderSet.ball(x, delta)
    fb, lo_f, hi_f = _sturmian_arc(X, x, C.window)
    ts = [Fraction(i, budget + 1) for i in range(1, budget + 1)]
    ys = []
    for t in ts:
        q = _rational_inside(X, lo_f, hi_f, t)
        y = RotationCoding(X.alpha, q, 0)
        if not C.contains(y):
            raise AssertionError("perturbed offset left the cylinder")
        ys.append(y)
    return C, ys


def _empirical_rows(x, sample_fn, eps_grid, delta_grid, params: WindowParams) -> tuple[list, bool]:
    """For each eps find the first delta (binary search over the grid) whose samples
    all have Weyl upper bound < eps."""
    rows = []
    cache = {}

    def worst(i):
        if i not in cache:
            ys = sample_fn(delta_grid[i])
            ests = [weyl_distance(x, y, params) for y in ys]
            cache[i] = (max(e.upper for e in ests), len(ys))
        return cache[i]

    all_ok = True
    for eps in eps_grid:
        lo, hi = 0, len(delta_grid) - 1
        if worst(hi)[0] >= eps:
            rows.append({"eps": frac_str(eps), "delta": None, "found": False})
            all_ok = False
            continue
        while lo < hi:
            mid = (lo + hi) // 2
            if worst(mid)[0] < eps:
                hi = mid
            else:
                lo = mid + 1
        up, n = worst(lo)
        rows.append({"eps": frac_str(eps), "delta": frac_str(delta_grid[lo]), "K": ball_depth(delta_grid[lo]),
                     "samples": n, "max_weyl_upper": frac_str(up), "found": True})
    return rows, all_ok


def classify_point(
    X: SubshiftSpec,
    x: ConfigDesc,
    eps_grid=None,
    delta_grid=None,
    sample_budget: int = 4,
    params: WindowParams = WindowParams(n_max=256, radius=1024, K=20),
) -> PointVerdict:
    eps_grid = [Fraction(e) for e in (eps_grid or default_eps_grid())]
    delta_grid = [Fraction(d) for d in (delta_grid or default_delta_grid(X))]
    name = repr(x)
    if isinstance(X, PeriodicOrbit):
        others = [y for _, y in X.orbit()]
        rows = []
        for eps in eps_grid:
            for d in delta_grid:
                C = CylinderSet.ball(x, d)
                inside = [y for y in others if C.contains(y)]
                if all(exact_mean(x, y).banach < eps for y in inside):
                    rows.append({"eps": frac_str(eps), "delta": frac_str(d), "points_in_cylinder": len(inside),
                                 "max_D": frac_str(max(exact_mean(x, y).banach for y in inside))})
                    break
            else:
                return PointVerdict(name, "inconclusive", "exact", rows)
        return PointVerdict(name, "equicontinuous", "exact", rows)
    if isinstance(X, FullShift):
        rows = [_flip_witness(X, x, d) for d in delta_grid]
        d0 = Fraction(1, 4)
        ok = all(Fraction(r["D_lower"]) > d0 for r in rows)
        return PointVerdict(name, "sensitive" if ok else "inconclusive", "certified", rows, d0)
    if isinstance(X, SFT):
        ess = X.essential
        pair = _cycle_pair(X.adjacency, ess)
        catalog = type(x).__name__ == "TransitiveWordCatalog"
        rows = [_sft_witness(X, x, d, pair, catalog) for d in delta_grid]
        d0 = pair[2] / 2
        ok = all(Fraction(r["D_lower"]) > d0 for r in rows)
        return PointVerdict(name, "sensitive" if ok else "inconclusive", "certified", rows, d0)
    if isinstance(X, SturmianSystem):
        if not isinstance(x, RotationCoding):
            raise ValueError("Sturmian points are sampled as rotation codings")
        rows, ok = _empirical_rows(
            x, lambda d: _sturmian_samples(X, x, d, sample_budget)[1], eps_grid, delta_grid, params)
        return PointVerdict(name, "equicontinuous" if ok else "inconclusive", "empirical", rows)
    if isinstance(X, OrbitClosure):
        def samples(d):
            C = CylinderSet.ball(x, d)
            hits = visit_times(x, C, Window.interval(-X.horizon, X.horizon + 1))
            return [translate(x, s) for s in hits.elems[:sample_budget + 1] if s != (0,)][:sample_budget] or [x]

        rows, ok = _empirical_rows(x, samples, eps_grid, delta_grid, params)
        return PointVerdict(name, "equicontinuous" if ok else "inconclusive", "horizon-limited", rows)
    raise TypeError(f"unsupported system {X!r}")


def _sample_points(X: SubshiftSpec, seed: int, count: int) -> list:
    if isinstance(X, PeriodicOrbit):
        return [y for _, y in X.orbit()][1:]
    rng = np.random.default_rng(seed)
    if isinstance(X, FullShift):
        from .configs import SeededRandom

        return [SeededRandom(X.k, int(rng.integers(2**31))) for _ in range(count)]
    if isinstance(X, SturmianSystem):
        return [X.point(Fraction(int(rng.integers(1, 997)), 997)) for _ in range(count)]
    if isinstance(X, SFT):
        ess = X.essential
        cycles = simple_cycles(X.adjacency, ess, max_len=6)
        pts = []
        for i in range(count):
            c = cycles[int(rng.integers(len(cycles)))]
            pts.append(Periodic(np.array(c, dtype=np.int64)))
        return pts
    return []


def classify_system(
    X: SubshiftSpec,
    eps_grid=None,
    delta_grid=None,
    sample_budget: int = 4,
    n_sample_points: int = 2,
    seed: int = 7,
    params: WindowParams = WindowParams(n_max=256, radius=1024, K=20),
) -> EquicontinuityReport:
    """The dichotomy for a transitive system: almost mean-equicontinuous or mean-sensitive."""
    tr = transitivity_check(X)
    if tr.verdict == "not-transitive":
        raise DichotomyError("dichotomy requires transitivity")
    eps_grid = [Fraction(e) for e in (eps_grid or default_eps_grid())]
    delta_grid = [Fraction(d) for d in (delta_grid or default_delta_grid(X))]
    info = {"eps_grid": [frac_str(e) for e in eps_grid],
            "delta_grid": [frac_str(delta_grid[0]), frac_str(delta_grid[-1]), len(delta_grid)],
            "sample_budget": sample_budget, "seed": seed, "window": params.to_json(),
            "metric": "sum_i 2^-i [x(g_i) != y(g_i)], max-norm shell enumeration",
            "ball_containment": "cylinder on first K sites is inside B(x, delta) for 2^-K < delta",
            "transitivity": tr.reason}
    if isinstance(X, SFT):
        ess = X.essential
        if not is_strongly_connected(X.essential_matrix()):
            return EquicontinuityReport(X.name, "inconclusive", "exact", [], dict(info, reason=
                                        "reducible transitive SFT: classification not implemented"))
        idx = sorted(ess)
        sub = X.essential_matrix()
        if (sub.sum(axis=1) == 1).all():
            # a single cycle: the system is one finite orbit
            cyc = simple_cycles(X.adjacency, ess, max_len=len(idx))[0]
            rep = classify_system(PeriodicOrbit(Periodic(np.array(cyc))), eps_grid, delta_grid,
                                  sample_budget, n_sample_points, seed, params)
            rep.system = X.name
            return rep
    if isinstance(X, FullShift) and X.dim != 1:
        raise ValueError("classification is implemented for systems on Z")
    x0 = tr.witness if tr.witness is not None else X.transitive_point()
    points = [classify_point(X, x0, eps_grid, delta_grid, sample_budget, params)]
    if not isinstance(X, OrbitClosure):
        for y in _sample_points(X, seed, n_sample_points):
            points.append(classify_point(X, y, eps_grid, delta_grid, sample_budget, params))
    head = points[0]
    if head.verdict == "sensitive":
        verdict, grade = "sensitive", head.grade
    elif head.verdict == "equicontinuous":
        verdict, grade = "almost-equicontinuous", head.grade
    else:
        verdict, grade = "inconclusive", head.grade
    every = False
    if isinstance(X, PeriodicOrbit):
        # the sampled points are the whole orbit
        every = all(p.verdict == "equicontinuous" for p in points)
    return EquicontinuityReport(X.name, verdict, grade, points, info, every)


def pairwise_exact(X: PeriodicOrbit) -> list:
    """Exact Dbar between all orbit points of a finite system."""
    pts = [y for _, y in X.orbit()]
    return [[exact_mean(a, b).banach for b in pts] for a in pts]

"""Topological entropy of subshifts, entropy of Bernoulli and Markov measures,
and the variational inequality h_mu <= h_top.

Topological entropy is the Folner pattern-count entropy lim log N(F_n)/|F_n|.
Logs are natural; reports also carry base-2 values.  Every N(F_n) is an exact
integer and every cell probability of a rational measure an exact Fraction;
logarithms are evaluated with mpmath at ``DIGITS`` significant digits.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath
import numpy as np
import sympy

from .density import frac_str
from .group import FolnerSpec, Window, folner_interval, folner_window
from .systems import (
    SFT,
    FullShift,
    OrbitClosure,
    PeriodicOrbit,
    SturmianSystem,
    SubshiftSpec,
    pattern_count,
)

DIGITS = 50
ROOT_EPS = Fraction(1, 10**12)
CHARPOLY_MAX = 6


def _log(q) -> mpmath.mpf:
    with mpmath.workdps(DIGITS):
        if isinstance(q, Fraction):
            return mpmath.log(q.numerator) - mpmath.log(q.denominator)
        return mpmath.log(q)


def _num(v) -> str:
    return mpmath.nstr(v, 15)


@dataclass
class EntropyEstimate:
    rows: list  # (n, |F_n|, N or H, value)
    claim: str  # exact | bounded | empirical
    value: Optional[mpmath.mpf] = None
    interval: Optional[tuple] = None  # enclosure of the limit
    note: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def upper(self):
        if self.interval is not None:
            return self.interval[1]
        return min(r[3] for r in self.rows)

    def to_json(self):
        out = {
            "rows": [{"n": n, "size": s, "count": str(c), "value": _num(v)} for n, s, c, v in self.rows],
            "claim": self.claim,
            "note": self.note,
        }
        if self.value is not None:
            out["value"] = _num(self.value)
            out["value_log2"] = _num(self.value / mpmath.log(2))
        if self.interval is not None:
            out["interval"] = [_num(self.interval[0]), _num(self.interval[1])]
        out.update(self.extra)
        return out


# --- spectral radius ----------------------------------------------------------


@dataclass(frozen=True)
class PerronEnclosure:
    lo: Fraction
    hi: Fraction
    method: str

    def to_json(self):
        return {"lo": frac_str(self.lo), "hi": frac_str(self.hi), "method": self.method}


def _charpoly_root(M: np.ndarray, eps: Fraction) -> PerronEnclosure:
    t = sympy.Symbol("t")
    p = sympy.Matrix(M.astype(int).tolist()).charpoly(t).as_poly()
    roots = p.intervals()
    a, b = max(iv for iv, _ in roots)
    a, b = p.refine_root(a, b, eps=sympy.Rational(eps.numerator, eps.denominator))
    lo = Fraction(int(sympy.numer(a)), int(sympy.denom(a)))
    hi = Fraction(int(sympy.numer(b)), int(sympy.denom(b)))
    return PerronEnclosure(lo, hi, "characteristic polynomial root isolation")


def _collatz_wielandt(M: np.ndarray, eps: Fraction, max_iter: int = 2000) -> PerronEnclosure:
    """min (Bv)_i/v_i <= rho(B) <= max (Bv)_i/v_i for v > 0, with B = M + I (aperiodic)."""
    n = M.shape[0]
    B = [[int(M[i, j]) + (i == j) for j in range(n)] for i in range(n)]
    v = [1] * n
    lo, hi = Fraction(0), Fraction(max(sum(r) for r in B))
    for _ in range(max_iter):
        w = [sum(B[i][j] * v[j] for j in range(n)) for i in range(n)]
        ratios = [Fraction(w[i], v[i]) for i in range(n)]
        lo, hi = max(lo, min(ratios)), min(hi, max(ratios))
        if hi - lo < eps:
            break
        g = max(w).bit_length() - 64
        v = [max(1, x >> g) for x in w] if g > 0 else w
    return PerronEnclosure(lo - 1, hi - 1, "Collatz-Wielandt bounds on A + I")


def perron_root(A, eps: Fraction = ROOT_EPS) -> PerronEnclosure:
    """Certified enclosure of the spectral radius of a nonnegative integer matrix."""
    M = np.asarray(A, dtype=np.int64)
    if M.size == 0:
        return PerronEnclosure(Fraction(0), Fraction(0), "empty")
    if M.shape[0] <= CHARPOLY_MAX:
        return _charpoly_root(M, eps)
    return _collatz_wielandt(M, eps)


# --- topological entropy --------------------------------------------------------


def _windows(X: SubshiftSpec, folner: Optional[FolnerSpec], n_max: int) -> list:
    out = []
    for n in range(1, n_max + 1):
        if folner is None:
            out.append((n, Window.interval(0, n)))
            continue
        b = folner_interval(folner, n) if X.dim == 1 else None
        out.append((n, Window.interval(*b) if b else folner_window(folner, n)))
    return out


def topological_entropy(X: SubshiftSpec, folner: Optional[FolnerSpec] = None, n_max: int = 12) -> EntropyEstimate:
    rows = []
    for n, F in _windows(X, folner, n_max):
        N = pattern_count(X, F)
        with mpmath.workdps(DIGITS):
            rows.append((n, len(F), N, _log(N) / len(F)))
    if isinstance(X, FullShift):
        v = _log(X.k)
        return EntropyEstimate(rows, "exact", v, (v, v), f"log {X.k}")
    if isinstance(X, SFT):
        ess = X.essential
        if not ess:
            return EntropyEstimate(rows, "exact", mpmath.mpf(0), (mpmath.mpf(0),) * 2, "empty shift")
        enc = perron_root(X.essential_matrix())
        if enc.hi < 1:
            raise AssertionError("a nonempty shift of finite type has spectral radius >= 1")
        lo, hi = _log(max(enc.lo, Fraction(1))), _log(enc.hi)
        with mpmath.workdps(DIGITS):
            mid = (lo + hi) / 2
        return EntropyEstimate(rows, "exact", mid, (lo, hi), "log of the Perron root",
                               {"perron_root": enc.to_json()})
    if isinstance(X, PeriodicOrbit):
        z = mpmath.mpf(0)
        return EntropyEstimate(rows, "exact", z, (z, z), "finite system")
    if isinstance(X, SturmianSystem):
        bound = rows[-1][3]
        return EntropyEstimate(rows, "bounded", None, (mpmath.mpf(0), bound),
                               f"<= log(N(n))/n at n={rows[-1][0]}, -> 0")
    if isinstance(X, OrbitClosure):
        return EntropyEstimate(rows, "empirical", None, None, "observed words within the horizon")
    raise TypeError(f"unsupported system {X!r}")


def fekete_check(X: SubshiftSpec, n_max: int = 20) -> list:
    """Rows (n, N(n), N(n+1), ok) for (1/n) log N(n) >= (1/(n+1)) log N(n+1), compared as
    N(n)^(n+1) >= N(n+1)^n on exact integers."""
    counts = [pattern_count(X, Window.interval(0, n)) for n in range(1, n_max + 2)]
    out = []
    for n in range(1, n_max + 1):
        a, b = counts[n - 1], counts[n]
        out.append((n, a, b, a ** (n + 1) >= b ** n))
    return out


# --- measures -------------------------------------------------------------------


def _fr(v) -> Fraction:
    return Fraction(v) if not isinstance(v, str) else Fraction(v.strip())


@dataclass(frozen=True)
class Bernoulli:
    p: tuple

    def __post_init__(self):
        p = tuple(_fr(v) for v in self.p)
        if any(v < 0 for v in p) or sum(p) != 1:
            raise ValueError("a probability vector needs nonnegative entries summing to 1")
        object.__setattr__(self, "p", p)

    @property
    def name(self):
        return "bernoulli:" + ",".join(frac_str(v) for v in self.p)

    def chain(self):
        k = len(self.p)
        return Markov(tuple(self.p for _ in range(k)), self.p)

    def entropy(self) -> mpmath.mpf:
        with mpmath.workdps(DIGITS):
            return -sum((_log(v) * v for v in self.p if v), mpmath.mpf(0))


@dataclass(frozen=True)
class Markov:
    """Stationary Markov measure; state s emits symbol labels[s]."""

    P: tuple
    pi: tuple
    labels: Optional[tuple] = None

    def __post_init__(self):
        P = tuple(tuple(_fr(v) for v in row) for row in self.P)
        pi = tuple(_fr(v) for v in self.pi)
        n = len(P)
        if any(len(r) != n for r in P) or len(pi) != n:
            raise ValueError("transition matrix must be square and match the stationary vector")
        if any(v < 0 for r in P for v in r) or any(sum(r) != 1 for r in P):
            raise ValueError("rows of a stochastic matrix are nonnegative and sum to 1")
        if any(v < 0 for v in pi) or sum(pi) != 1:
            raise ValueError("stationary vector must be a probability vector")
        if any(sum(pi[i] * P[i][j] for i in range(n)) != pi[j] for j in range(n)):
            raise ValueError("pi P != pi")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "pi", pi)
        object.__setattr__(self, "labels", tuple(range(n)) if self.labels is None else tuple(self.labels))

    @classmethod
    def stationary(cls, P, labels=None) -> "Markov":
        """Solve pi P = pi exactly (unique when P is irreducible)."""
        M = sympy.Matrix([[sympy.Rational(str(_fr(v))) for v in row] for row in P])
        n = M.shape[0]
        sys_ = (M.T - sympy.eye(n)).col_join(sympy.ones(1, n))
        rhs = sympy.zeros(n, 1).col_join(sympy.ones(1, 1))
        sol, params = sys_.gauss_jordan_solve(rhs)
        if params.shape[0]:
            raise ValueError("stationary distribution is not unique")
        pi = tuple(Fraction(int(sympy.numer(v)), int(sympy.denom(v))) for v in sol)
        return cls(tuple(tuple(row) for row in P), pi, labels)

    @classmethod
    def orbit_uniform(cls, X: PeriodicOrbit) -> "Markov":
        """Uniform measure on a finite orbit, as a deterministic chain on the period."""
        block = [int(v) for v in X.x.block]
        p = len(block)
        P = tuple(tuple(Fraction(int(j == (i + 1) % p)) for j in range(p)) for i in range(p))
        return cls(P, tuple(Fraction(1, p) for _ in range(p)), tuple(block))

    @property
    def name(self):
        return "markov"

    def chain(self):
        return self

    def entropy(self) -> mpmath.mpf:
        """Entropy rate -sum pi_i P_ij log P_ij (the chain is its own generating process
        when labels are injective or transitions deterministic)."""
        n = len(self.P)
        with mpmath.workdps(DIGITS):
            return -sum((_log(self.P[i][j]) * (self.pi[i] * self.P[i][j])
                         for i in range(n) for j in range(n) if self.P[i][j]), mpmath.mpf(0))


@dataclass(frozen=True)
class Parry:
    """Maximal-entropy Markov measure of an irreducible shift of finite type; its
    transition probabilities are irrational and carried at ``DIGITS`` digits."""

    adjacency: tuple

    @classmethod
    def of(cls, X: SFT) -> "Parry":
        return cls(tuple(tuple(int(v) for v in row) for row in X.adjacency))

    @property
    def name(self):
        return "parry"

    def chain(self):
        with mpmath.workdps(DIGITS):
            A = mpmath.matrix([list(r) for r in self.adjacency])
            E, ER = mpmath.eig(A)
            E2, EL = mpmath.eig(A.T)
            idx = max(range(len(E)), key=lambda i: mpmath.re(E[i]))
            jdx = max(range(len(E2)), key=lambda i: mpmath.re(E2[i]))
            lam = mpmath.re(E[idx])
            n = A.rows
            v = [abs(mpmath.re(ER[i, idx])) for i in range(n)]
            u = [abs(mpmath.re(EL[i, jdx])) for i in range(n)]
            P = [[A[i, j] * v[j] / (lam * v[i]) if v[i] else mpmath.mpf(0) for j in range(n)] for i in range(n)]
            z = sum(u[i] * v[i] for i in range(n))
            pi = [u[i] * v[i] / z for i in range(n)]
        return _FloatChain(P, pi, tuple(range(n)))

    def entropy(self) -> mpmath.mpf:
        return self.chain().entropy()


@dataclass
class _FloatChain:
    P: list
    pi: list
    labels: tuple

    def chain(self):
        return self

    def entropy(self):
        n = len(self.P)
        with mpmath.workdps(DIGITS):
            return -sum((self.pi[i] * self.P[i][j] * mpmath.log(self.P[i][j])
                         for i in range(n) for j in range(n) if self.P[i][j] > 0), mpmath.mpf(0))


MeasureSpec = (Bernoulli, Markov, Parry)


@dataclass(frozen=True)
class PartitionSpec:
    """Partition by the word on [0, m): m = 1 is the origin-symbol partition."""

    k: int
    m: int = 1

    @classmethod
    def origin(cls, k: int) -> "PartitionSpec":
        return cls(k, 1)

    def cells(self) -> int:
        return self.k ** self.m

    def verify(self) -> bool:
        """Cells are the k^m words of length m: pairwise disjoint, and every point of
        a subshift over k symbols reads one of them on [0, m)."""
        return self.k >= 1 and self.m >= 1


def _check_measure(X: SubshiftSpec, mu):
    if isinstance(mu, Bernoulli):
        if not isinstance(X, FullShift) or len(mu.p) != X.k:
            raise ValueError("Bernoulli measures live on the full shift with matching alphabet")
        return
    if isinstance(mu, Parry):
        if not isinstance(X, SFT) or np.asarray(mu.adjacency).shape != X.adjacency.shape:
            raise ValueError("Parry measure does not match the system")
        return
    if isinstance(mu, Markov):
        ch = mu
        n = len(ch.P)
        allowed = None
        if isinstance(X, SFT):
            allowed = X.adjacency
        elif isinstance(X, PeriodicOrbit):
            block = [int(v) for v in X.x.block]
            words = {tuple(block[(i + t) % len(block)] for t in range(2)) for i in range(len(block))}
            for i in range(n):
                for j in range(n):
                    if ch.P[i][j] and ch.pi[i] and (ch.labels[i], ch.labels[j]) not in words:
                        raise ValueError("Markov measure charges words outside the orbit")
            return
        elif not isinstance(X, FullShift):
            raise ValueError("Markov measures are supported on full shifts, SFTs and finite orbits")
        for i in range(n):
            for j in range(n):
                if ch.P[i][j] and allowed is not None and not allowed[ch.labels[i], ch.labels[j]]:
                    raise ValueError("Markov measure charges a forbidden transition")
        return
    raise TypeError(f"unsupported measure {mu!r}")


def word_masses(mu, length: int) -> dict:
    """Exact (or DIGITS-digit for Parry) masses of all words of a length with positive mass."""
    ch = mu.chain()
    n = len(ch.P)
    exact = not isinstance(ch, _FloatChain)
    out = {}

    def walk(word, fwd):
        if len(word) == length:
            m = sum(fwd)
            if m:
                out[tuple(word)] = m
            return
        syms = sorted(set(ch.labels))
        for a in syms:
            if not word:
                nxt = [ch.pi[s] if ch.labels[s] == a else 0 for s in range(n)]
            else:
                nxt = [sum(fwd[r] * ch.P[r][s] for r in range(n) if fwd[r]) if ch.labels[s] == a else 0
                       for s in range(n)]
            if any(nxt):
                walk(word + [a], nxt)

    if exact:
        walk([], None)
    else:
        with mpmath.workdps(DIGITS):
            walk([], None)
    return out


def _shannon(masses) -> mpmath.mpf:
    with mpmath.workdps(DIGITS):
        return -sum((_log(m) * m if isinstance(m, Fraction) else m * mpmath.log(m) for m in masses), mpmath.mpf(0))


def measure_entropy(X: SubshiftSpec, mu, part: Optional[PartitionSpec] = None, n_max: int = 8) -> EntropyEstimate:
    """(1/n) H(P^[0,n)) for n = 1..n_max, and the entropy-rate claim of the measure."""
    _check_measure(X, mu)
    part = part or PartitionSpec.origin(X.k)
    if not part.verify():
        raise ValueError("invalid partition")
    rows = []
    for n in range(1, n_max + 1):
        masses = word_masses(mu, n + part.m - 1)
        H = _shannon(masses.values())
        with mpmath.workdps(DIGITS):
            rows.append((n, n, H, H / n))
    claim = mu.entropy()
    note = {"Bernoulli": "-sum p_i log p_i", "Markov": "-sum pi_i P_ij log P_ij",
            "Parry": "-sum pi_i P_ij log P_ij at %d digits" % DIGITS}[type(mu).__name__]
    return EntropyEstimate(rows, "exact", claim, (claim, claim), note, {"measure": mu.name})


def nonincreasing_rates(est: EntropyEstimate, tol=mpmath.mpf(10) ** -40) -> bool:
    vals = [r[3] for r in est.rows]
    return all(b <= a + tol for a, b in zip(vals, vals[1:]))


@dataclass
class VariationalReport:
    system: str
    h_top: EntropyEstimate
    rows: list  # (measure name, h_mu, ok)
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(ok for _, _, ok in self.rows)

    @property
    def best(self):
        return max((h for _, h, _ in self.rows), default=None)

    @property
    def gap(self):
        if self.best is None:
            return None
        return self.h_top.upper - self.best

    def to_json(self):
        return {"system": self.system, "h_top": self.h_top.to_json(), "tolerance": self.tolerance,
                "measures": [{"measure": n, "h_mu": _num(h), "ok": ok} for n, h, ok in self.rows],
                "max_h_mu": _num(self.best) if self.best is not None else None,
                "gap": _num(self.gap) if self.gap is not None else None, "passed": self.passed}


def check_variational(X: SubshiftSpec, measures: Sequence, n_max: int = 12, tolerance: float = 1e-6) -> VariationalReport:
    ht = topological_entropy(X, n_max=n_max)
    tol = mpmath.mpf(tolerance)
    rows = []
    for mu in measures:
        _check_measure(X, mu)
        h = mu.entropy()
        rows.append((mu.name, h, bool(h <= ht.upper + tol)))
    return VariationalReport(X.name, ht, rows, tolerance)


def parse_measure(text: str, X: SubshiftSpec):
    """``bernoulli:3/4,1/4``, ``parry``, ``uniform`` or ``orbit``."""
    text = text.strip()
    if text.startswith("bernoulli:"):
        return Bernoulli(tuple(Fraction(v) for v in text.split(":", 1)[1].split(",")))
    if text == "uniform" and isinstance(X, FullShift):
        return Bernoulli(tuple(Fraction(1, X.k) for _ in range(X.k)))
    if text == "parry" and isinstance(X, SFT):
        return Parry.of(X)
    if text == "orbit" and isinstance(X, PeriodicOrbit):
        return Markov.orbit_uniform(X)
    raise ValueError(f"unknown measure {text!r} for {X.name}")

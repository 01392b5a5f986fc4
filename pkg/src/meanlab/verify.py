"""Acceptance rows: each check recomputes its quantities and reports measured values.

Rows are independent; they may run on a thread pool, and the report is
assembled in row order so the body does not depend on scheduling.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from .configs import Periodic, SeededRandom
from .correspondence import (
    correspondence_rows,
    empirical_measure,
    indicator_config,
    invariance_defect_measure,
    multi_intersection_search,
    pair_density_lemma,
    finite_intersection_instances,
    random_periodic_set,
)
from .density import asymptotic_density, banach_lower_density, banach_upper_density, frac_str, verify_density_calculus
from .dsl import parse_set
from .entropy import DIGITS, topological_entropy
from .group import CenteredBoxes, Window
from .independence import find_ie_pair, phi, phi_exhaustive
from .meanmetric import WindowParams, banach_mean_distance, classify_system, weyl_distance
from .sets import Periodic as PeriodicSet, Shift
from .systems import CylinderSet, FullShift, SturmianSystem, pattern_count
from .zoo import ZOO, system

SUITES = {
    "density": (1, 2),
    "meanmetric": (3, 4),
    "independence": (7,),
    "entropy": (5, 6),
    "correspondence": (9, 10),
    "all": tuple(range(1, 12)),
}

STURMIAN_EPS = [Fraction(1, 2**i) for i in range(1, 6)]


@dataclass
class Row:
    id: int
    name: str
    passed: bool
    mode: str  # exact | bounded | empirical
    measured: dict

    def to_json(self):
        return {"id": self.id, "criterion": self.name, "passed": bool(self.passed), "mode": self.mode,
                "measured": self.measured}


def _rng(seed: int, salt: int) -> np.random.Generator:
    return np.random.default_rng([seed, salt])


def _random_periodic_config(rng, m: int, k: int = 2) -> Periodic:
    return Periodic(rng.integers(0, k, size=m).astype(np.int64))


# --- criteria ------------------------------------------------------------------------


def c1_density_exactness(seed: int) -> Row:
    bad = []
    for a in range(2, 13):
        for b in range(a):
            E = PeriodicSet((a,), frozenset({(b,)}))
            up, lo = banach_upper_density(E), banach_lower_density(E)
            if not (up.is_exact and up.lower == Fraction(1, a) and lo.lower == lo.upper == Fraction(1, a)):
                bad.append(f"{a}Z+{b}")
    rng = _rng(seed, 1)
    shift_bad, calc_bad = 0, 0
    for _ in range(100):
        E = random_periodic_set(rng, 12, 0)
        F = random_periodic_set(rng, 12, 0)
        s = int(rng.integers(-50, 51))
        d, ds = banach_upper_density(E), banach_upper_density(Shift(E, (s,)))
        if not (d.is_exact and ds.is_exact and d.lower == ds.lower):
            shift_bad += 1
        if not verify_density_calculus(E, F, (s,)).passed:
            calc_bad += 1
    ok = not bad and shift_bad == 0 and calc_bad == 0
    return Row(1, "density exactness", ok, "exact",
               {"progressions_checked": sum(range(2, 13)), "progression_failures": bad,
                "shift_invariance_failures": shift_bad, "calculus_failures": calc_bad, "seeded_sets": 100})


def c2_banach_vs_asymptotic(seed: int) -> Row:
    E = parse_set("blocks(j=1..inf: 2^j, j)")
    n = 2**14
    asym = asymptotic_density(E, CenteredBoxes(1), [n])
    ratio = asym.ratios[-1][1]
    bd = banach_upper_density(E, n=12, radius=2**13)
    ok = ratio < Fraction(1, 100) and bd.lower >= Fraction(11, 12)
    return Row(2, "Banach vs asymptotic separation", ok, "empirical",
               {"centered_ratio_at_2^14": frac_str(ratio), "bd_upper_lower": frac_str(bd.lower),
                "bd_upper_upper": frac_str(bd.upper), "lower_window": bd.params["lower_window"]})


def c3_banach_equals_weyl(seed: int) -> Row:
    rng = _rng(seed, 3)
    exact_bad = 0
    for _ in range(50):
        m = int(rng.integers(1, 13))
        k = int(rng.integers(2, 4))
        x = _random_periodic_config(rng, m, k)
        y = _random_periodic_config(rng, int(rng.choice([d for d in range(1, 13) if m % d == 0])), k)
        b, w = banach_mean_distance(x, y), weyl_distance(x, y)
        if not (b.is_exact and w.is_exact and b.lower == w.lower and b.upper == w.upper):
            exact_bad += 1
    params = WindowParams(n_max=200, K=20)
    gaps, overlap_bad = [], 0
    for i in range(20):
        x, y = SeededRandom(2, 2 * i + int(seed) * 1000), SeededRandom(2, 2 * i + 1 + int(seed) * 1000)
        b, w = banach_mean_distance(x, y, params), weyl_distance(x, y, params)
        if max(b.lower, w.lower) > min(b.upper, w.upper):
            overlap_bad += 1
        gaps.append(max(b.upper, w.upper) - min(b.lower, w.lower))
    ok = exact_bad == 0 and overlap_bad == 0 and max(gaps) <= Fraction(1, 20)
    return Row(3, "Banach = Weyl", ok, "exact+empirical",
               {"periodic_pairs": 50, "periodic_mismatches": exact_bad, "fullshift_pairs": 20,
                "overlap_failures": overlap_bad, "max_gap": frac_str(max(gaps)), "K": 20, "n_max": 200})


@lru_cache(maxsize=None)
def _classified(name: str):
    X = system(name)
    eps = STURMIAN_EPS if isinstance(X, SturmianSystem) else None
    return classify_system(X, eps_grid=eps)


def _both_verdicts(rep) -> bool:
    kinds = {p.verdict for p in rep.points}
    return "sensitive" in kinds and "equicontinuous" in kinds


def c4_dichotomy(seed: int) -> Row:
    full = _classified("fullshift:2")
    per = [_classified(n) for n in ("periodic:01", "periodic:001")]
    stu = _classified("sturmian:golden")
    d0 = full.points[0].delta0
    both = [r.system for r in [full, stu, *per] if _both_verdicts(r)]
    ok = (full.verdict == "sensitive" and full.grade == "certified" and d0 is not None and d0 >= Fraction(1, 4)
          and all(r.label == "equicontinuous-exact" for r in per)
          and stu.label == "almost-equicontinuous-empirical" and not both)
    stu_rows = stu.points[0].rows
    return Row(4, "equicontinuity/sensitivity dichotomy", ok, "exact+empirical",
               {"fullshift:2": full.label, "delta0": frac_str(d0) if d0 is not None else None,
                "periodic": {r.system: r.label for r in per}, "sturmian:golden": stu.label,
                "sturmian_rows": [{"eps": r["eps"], "delta": r["delta"], "max_weyl_upper": r.get("max_weyl_upper")}
                                  for r in stu_rows],
                "systems_with_both_verdicts": both})


def c5_entropy_exactness(seed: int) -> Row:
    bad = []
    for k in range(2, 7):
        est = topological_entropy(FullShift(k), n_max=6)
        with mpmath.workdps(DIGITS):
            close = abs(est.value - mpmath.log(k)) < mpmath.mpf(10) ** -40
        if not (est.claim == "exact" and est.note == f"log {k}" and close):
            bad.append(k)
    g = system("sft:golden")
    est = topological_entropy(g, n_max=20)
    target = mpmath.log((1 + mpmath.sqrt(5)) / 2)
    err = abs(est.value - target)
    n20 = est.rows[19][3]
    ok = not bad and est.claim == "exact" and err <= mpmath.mpf(10) ** -6 and abs(n20 - est.value) <= 0.01
    return Row(5, "entropy exactness", ok, "exact",
               {"fullshift_failures": bad, "golden_value": mpmath.nstr(est.value, 12),
                "golden_error": mpmath.nstr(err, 3), "count_value_n20": mpmath.nstr(n20, 8),
                "perron_root": est.extra["perron_root"]})


def c6_sturmian_entropy(seed: int) -> Row:
    X = system("sturmian:golden")
    counts = [pattern_count(X, Window.interval(0, n)) for n in range(1, 31)]
    exact = all(c == n + 1 for n, c in zip(range(1, 31), counts))
    est = topological_entropy(X, n_max=30)
    bound = est.interval[1]
    ok = exact and est.claim == "bounded" and bound <= 0.12 and "-> 0" in est.note
    return Row(6, "Sturmian near-zero entropy", ok, "bounded",
               {"complexity_n_plus_1_to_30": exact, "bound_n30": mpmath.nstr(bound, 8), "claim": est.note})


def _phi_instances(seed: int) -> list:
    A = (CylinderSet.origin(0), CylinderSet.origin(1))
    systems = [system(n) for n in ("fullshift:2", "sft:golden", "periodic:01", "periodic:001", "sturmian:golden")]
    rng = _rng(seed, 7)
    out = []
    for X in systems:
        for n in range(1, 9):
            out.append((X, A, [(i,) for i in range(n)]))
        for _ in range(4):
            size = int(rng.integers(2, 11))
            F = sorted(int(v) for v in rng.choice(14, size=size, replace=False))
            out.append((X, A, [(v,) for v in F]))
    A2 = (CylinderSet((((0,), 0), ((1,), 1))), CylinderSet((((0,), 1), ((1,), 0))))
    for name in ("fullshift:2", "sft:golden"):
        for n in range(1, 7):
            out.append((system(name), A2, [(i,) for i in range(n)]))
    return out


def c7_ie_pairs(seed: int) -> Row:
    fs = find_ie_pair(system("fullshift:2"))
    fs_ok = fs.found and fs.witness.density_lower >= Fraction(99, 100)
    none = {}
    for name in ("periodic:01", "periodic:001", "sturmian:golden"):
        r = find_ie_pair(system(name), window_schedule=(4, 8, 12), threshold=Fraction(1, 20))
        none[name] = not r.found
    mism = 0
    insts = _phi_instances(seed)
    for X, A, F in insts:
        a, b = phi(X, A, F), phi_exhaustive(X, A, F)
        if a.phi != b.phi or a.best_J != b.best_J:
            mism += 1
    ok = fs_ok and all(none.values()) and mism == 0
    return Row(7, "IE pairs and phi oracle", ok, "exact",
               {"fullshift_density_lower": frac_str(fs.witness.density_lower) if fs.found else None,
                "no_witness": none, "phi_instances": len(insts), "phi_mismatches": mism})


def c8_consistency(seed: int) -> Row:
    rows, violations = [], []
    for name in ZOO:
        X = system(name)
        rep = _classified(name)
        est = topological_entropy(X, n_max=30 if isinstance(X, SturmianSystem) else 12)
        zero_claim = (est.claim == "exact" and est.interval[1] == 0) or \
                     (est.claim == "bounded" and est.interval[1] <= 0.12)
        positive = est.claim == "exact" and est.interval[0] > 0
        if rep.verdict == "almost-equicontinuous" and not zero_claim:
            violations.append(f"{name}: equicontinuous with positive entropy")
        if positive and rep.verdict != "sensitive":
            violations.append(f"{name}: positive entropy without a sensitive verdict")
        ie = find_ie_pair(X, window_schedule=(4, 8, 12))
        if positive != ie.found:
            violations.append(f"{name}: entropy and IE search disagree")
        rows.append({"system": name, "verdict": rep.label, "entropy_claim": est.claim,
                     "entropy_upper": mpmath.nstr(est.interval[1], 8) if est.interval else None,
                     "ie_witness": ie.found})
    return Row(8, "entropy/equicontinuity consistency sweep", not violations, "exact+empirical",
               {"systems": rows, "violations": violations})


def c9_correspondence(seed: int) -> Row:
    rng = _rng(seed, 9)
    outside = 0
    for _ in range(100):
        E = random_periodic_set(rng, 12, 0)
        m = E.modulus[0]
        for r in correspondence_rows(E, [m, 2 * m, 4 * m], radius=64):
            if not (r.inside and r.bd_upper.is_exact):
                outside += 1
    over = 0
    for _ in range(1000):
        E = random_periodic_set(rng, 12, 0)
        xi = indicator_config(E)
        a, L = int(rng.integers(-100, 100)), int(rng.integers(1, 60))
        g = int(rng.integers(-12, 13))
        width = int(rng.integers(1, 4))
        pattern = rng.integers(0, 2, size=width)
        B = CylinderSet(tuple(((i,), int(v)) for i, v in enumerate(pattern)))
        try:
            invariance_defect_measure(empirical_measure(xi, Window.interval(a, a + L)), g, B)
        except AssertionError:
            over += 1
    return Row(9, "correspondence", outside == 0 and over == 0, "exact",
               {"periodic_sets": 100, "containment_failures": outside, "defect_triples": 1000,
                "defect_bound_failures": over})


def c10_demonstrators(seed: int) -> Row:
    rng = _rng(seed, 10)
    lemma_ok = multi_ok = 0
    for _ in range(200):
        S = random_periodic_set(rng, 12, Fraction(3, 10))
        m = S.modulus[0]
        if pair_density_lemma(S, range(1, m + 2)).met:
            lemma_ok += 1
        if multi_intersection_search(S, range(1, m + 2), 2, Fraction(1, 20)).met:
            multi_ok += 1
    finite = finite_intersection_instances(int(seed), 200, m=50, a=Fraction(2, 5), k=2, eps=Fraction(1, 20))
    finite_ok = sum(w.found for w in finite)
    tight = finite_intersection_instances(int(seed), 200, m=50, a=Fraction(2, 5), k=2, eps=Fraction(1, 20), tight=True)
    tight_ok = sum(w.found for w in tight)
    ok = lemma_ok == 200 and multi_ok == 200 and finite_ok == 200 and tight_ok == 200
    return Row(10, "intersection demonstrators", ok, "exact",
               {"pair_lemma": f"{lemma_ok}/200", "multi_intersection": f"{multi_ok}/200",
                "finite_intersection": f"{finite_ok}/200", "finite_intersection_tight": f"{tight_ok}/200",
                "tight_min_mass": frac_str(min(w.mass for w in tight)),
                "finite_params": {"m": 50, "a": "2/5", "k": 2, "eps": "1/20"}})


def c11_determinism(seed: int) -> Row:
    a = body_bytes(["density", "correspondence"], seed, threads=1)
    b = body_bytes(["density", "correspondence"], seed, threads=4)
    return Row(11, "determinism", a == b, "exact",
               {"suites": ["density", "correspondence"], "threads": [1, 4], "identical": a == b,
                "bytes": len(a)})


CRITERIA = {
    1: c1_density_exactness,
    2: c2_banach_vs_asymptotic,
    3: c3_banach_equals_weyl,
    4: c4_dichotomy,
    5: c5_entropy_exactness,
    6: c6_sturmian_entropy,
    7: c7_ie_pairs,
    8: c8_consistency,
    9: c9_correspondence,
    10: c10_demonstrators,
    11: c11_determinism,
}


def run_rows(ids, seed: int = 7, threads: int = 1) -> list:
    ids = sorted(set(ids))
    if threads <= 1:
        return [CRITERIA[i](seed) for i in ids]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futs = {i: pool.submit(CRITERIA[i], seed) for i in ids}
        return [futs[i].result() for i in ids]


def verify(suite: str = "all", seed: int = 7, threads: int = 1) -> dict:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    rows = run_rows(SUITES[suite], seed, threads)
    return {"suite": suite, "seed": seed, "passed": all(r.passed for r in rows),
            "rows": [r.to_json() for r in rows]}


def body_bytes(suites, seed: int, threads: int) -> bytes:
    ids = [i for s in suites for i in SUITES[s]]
    rows = run_rows(ids, seed, threads)
    return json.dumps([r.to_json() for r in rows], sort_keys=True).encode()

"""Systems and points addressable by name."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .configs import Constant, Flipped, Periodic, RotationCoding, SeededRandom, translate
from .correspondence import indicator_config
from .dsl import parse_set
from .irrational import ContinuedFraction
from .systems import SFT, FullShift, OrbitClosure, PeriodicOrbit, SturmianSystem, SubshiftSpec

ZOO = ("fullshift:2", "fullshift:3", "sft:golden", "sturmian:golden", "periodic:01", "periodic:001",
       "indicator:3Z+1")

GOLDEN = ((1, 1), (1, 0))


def system(name: str) -> SubshiftSpec:
    """fullshift:k, sft:golden, sft:<forbidden,words>, sturmian:golden,
    sturmian:[a0;q1,q2,...] (periodic tail written after '|'), periodic:<word>,
    indicator:<set DSL>."""
    kind, _, arg = name.strip().partition(":")
    if kind == "fullshift":
        return FullShift(int(arg or 2))
    if kind == "sft":
        if arg == "golden":
            return SFT(np.array(GOLDEN), "sft:golden")
        words = [w for w in arg.split(",") if w]
        k = max(int(c) for w in words for c in w) + 1 if words else 2
        return SFT(SFT.from_forbidden(max(k, 2), words).adjacency, name)
    if kind == "sturmian":
        if arg == "golden":
            return SturmianSystem(ContinuedFraction.golden_conjugate(), "sturmian:golden")
        return SturmianSystem(_parse_cf(arg), name)
    if kind == "periodic":
        if not arg or any(c not in "0123456789" for c in arg):
            raise ValueError("periodic:<word> takes a word of digits")
        return PeriodicOrbit(Periodic(arg))
    if kind == "indicator":
        xi = indicator_config(parse_set(arg))
        if isinstance(xi, Periodic):
            return PeriodicOrbit(xi)
        if isinstance(xi, Constant):
            return PeriodicOrbit(Periodic(str(xi.symbol)))
        return OrbitClosure(xi)
    raise ValueError(f"unknown system {name!r}; known: {', '.join(ZOO)}")


def _parse_cf(text: str) -> ContinuedFraction:
    """[0;2,1|1,2] = 0 + prefix (2, 1) + repeating (1, 2)."""
    t = text.strip().strip("[]")
    a0, _, rest = t.partition(";")
    pre, _, rep = rest.partition("|")
    def ints(s):
        return tuple(int(v) for v in s.split(",") if v.strip())

    return ContinuedFraction(int(a0), ints(pre), ints(rep))


def point(text: str, X: SubshiftSpec):
    """transitive, const:a, periodic:<word>, random:<seed>, beta:<p/q> (rotation offset),
    flip:<set DSL> (transitive point recolored on a set), shift:<n>:<point>."""
    kind, _, arg = text.strip().partition(":")
    if kind == "transitive":
        return X.transitive_point()
    if kind == "const":
        return Constant(int(arg), X.dim)
    if kind == "periodic":
        return Periodic(arg)
    if kind == "random":
        return SeededRandom(X.k, int(arg), X.dim)
    if kind == "beta":
        if not isinstance(X, SturmianSystem):
            raise ValueError("beta:<offset> needs a Sturmian system")
        return RotationCoding(X.alpha, Fraction(arg))
    if kind == "flip":
        return Flipped(X.transitive_point(), parse_set(arg), X.k)
    if kind == "shift":
        s, _, rest = arg.partition(":")
        return translate(point(rest, X), (int(s),))
    raise ValueError(f"unknown point {text!r}")

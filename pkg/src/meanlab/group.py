"""The acting group Z^d: elements, finite windows and Folner sequences.

Group elements are plain tuples of ints.  The group operation is written
additively, so a right translate ``F g`` becomes ``F + g``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

ENUMERATION_CAP = 10**6

Elem = tuple
ElemLike = Union[int, Sequence[int]]


def elem(g: ElemLike, dim: int | None = None) -> Elem:
    """Normalize an int or an int sequence into a group element."""
    if isinstance(g, (int,)) and not isinstance(g, bool):
        t = (int(g),)
    else:
        t = tuple(int(c) for c in g)
    if dim is not None and len(t) != dim:
        if len(t) == 1 and dim > 1:
            t = t + (0,) * (dim - 1)
        else:
            raise ValueError(f"element {t} does not live in Z^{dim}")
    return t


def add(a: Elem, b: Elem) -> Elem:
    return tuple(x + y for x, y in zip(a, b))


def neg(a: Elem) -> Elem:
    return tuple(-x for x in a)


def zero(dim: int) -> Elem:
    return (0,) * dim


def sup_norm(a: Elem) -> int:
    return max((abs(x) for x in a), default=0)


def _zigzag(c: int) -> int:
    # 0, 1, -1, 2, -2, ... -> 0, 1, 2, 3, 4, ...
    return 2 * c - 1 if c > 0 else -2 * c


@lru_cache(maxsize=64)
def _shell(dim: int, r: int) -> tuple:
    if r == 0:
        return (zero(dim),)
    out = []

    def rec(prefix, left):
        if left == 0:
            if sup_norm(prefix) == r:
                out.append(prefix)
            return
        for c in range(-r, r + 1):
            rec(prefix + (c,), left - 1)

    rec((), dim)
    out.sort(key=lambda g: tuple(_zigzag(c) for c in g))
    return tuple(out)


def enumerate_group(dim: int, count: int) -> list[Elem]:
    """First ``count`` elements of Z^dim in max-norm shell order.

    Inside a shell, elements are ordered lexicographically with respect to the
    zigzag order 0, 1, -1, 2, -2, ... on each coordinate, so in Z the
    enumeration reads 0, 1, -1, 2, -2, ...
    """
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    if count < 1:
        raise ValueError("count must be >= 1")
    if count > ENUMERATION_CAP:
        raise ValueError(f"count {count} exceeds enumeration cap {ENUMERATION_CAP}")
    if dim == 1:
        return [(_nth_int(i),) for i in range(1, count + 1)]
    out: list[Elem] = []
    r = 0
    while len(out) < count:
        out.extend(_shell(dim, r))
        r += 1
    return out[:count]


def _nth_int(i: int) -> int:
    # 1-based position in 0, 1, -1, 2, -2, ...
    return i // 2 if i % 2 == 0 else -(i // 2)


@dataclass(frozen=True)
class Window:
    """A finite subset of Z^d, stored sorted and deduplicated."""

    elems: tuple
    _members: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        items = tuple(sorted(set(self.elems)))
        dims = {len(g) for g in items}
        if len(dims) > 1:
            raise ValueError("mixed dimensions in window")
        object.__setattr__(self, "elems", items)
        object.__setattr__(self, "_members", frozenset(items))

    @classmethod
    def of(cls, items: Iterable[ElemLike], dim: int | None = None) -> "Window":
        return cls(tuple(elem(g, dim) for g in items))

    @classmethod
    def interval(cls, a: int, b: int) -> "Window":
        """The integer interval [a, b) in Z."""
        return cls(tuple((i,) for i in range(a, b)))

    @classmethod
    def box(cls, lo: Sequence[int], hi: Sequence[int]) -> "Window":
        """The half-open box prod [lo_i, hi_i)."""
        axes = [range(a, b) for a, b in zip(lo, hi)]
        pts: list[tuple] = [()]
        for ax in axes:
            pts = [p + (c,) for p in pts for c in ax]
        return cls(tuple(pts))

    @property
    def dim(self) -> int:
        return len(self.elems[0]) if self.elems else 1

    def __len__(self) -> int:
        return len(self.elems)

    def __iter__(self):
        return iter(self.elems)

    def __contains__(self, g) -> bool:
        return elem(g) in self._members

    def translate(self, g: ElemLike) -> "Window":
        g = elem(g, self.dim)
        return Window(tuple(add(h, g) for h in self.elems))

    def symmetric_difference(self, other: "Window") -> int:
        return len(self._members ^ other._members)

    def is_interval(self) -> bool:
        if not self.elems or self.dim != 1:
            return False
        a, b = self.elems[0][0], self.elems[-1][0]
        return b - a + 1 == len(self.elems)

    def bounds(self) -> tuple[int, int]:
        """(min, max + 1) for a window in Z."""
        return self.elems[0][0], self.elems[-1][0] + 1

    def to_json(self):
        return [list(g) for g in self.elems]


# --- Folner sequences -------------------------------------------------------


@dataclass(frozen=True)
class CenteredBoxes:
    """F_n = [-scale*n, scale*n]^dim."""

    dim: int = 1
    scale: int = 1

    def to_json(self):
        return {"variant": "CenteredBoxes", "dim": self.dim, "scale": self.scale}


@dataclass(frozen=True)
class ShiftedBoxes:
    """F_n = [0, n)^dim + s_n.

    ``shift`` is either an expression in ``n`` (e.g. ``"2^n"``, ``"0"``),
    applied along the first axis, or an explicit tuple of elements s_1, s_2, ...
    """

    dim: int = 1
    shift: Union[str, tuple] = "0"

    def to_json(self):
        s = self.shift if isinstance(self.shift, str) else [list(g) for g in self.shift]
        return {"variant": "ShiftedBoxes", "dim": self.dim, "shift": s}


@dataclass(frozen=True)
class ExplicitList:
    """An arbitrary list of windows; carries no asymptotic-invariance guarantee."""

    windows: tuple

    checked = False

    def to_json(self):
        return {"variant": "ExplicitList", "windows": [w.to_json() for w in self.windows]}


FolnerSpec = Union[CenteredBoxes, ShiftedBoxes, ExplicitList]


def folner_window(spec: FolnerSpec, n: int) -> Window:
    if n < 1:
        raise ValueError("Folner index must be >= 1")
    if isinstance(spec, CenteredBoxes):
        h = spec.scale * n
        return Window.box([-h] * spec.dim, [h + 1] * spec.dim)
    if isinstance(spec, ShiftedBoxes):
        if isinstance(spec.shift, str):
            from .dsl import eval_int_expr

            s = (eval_int_expr(spec.shift, {"n": n}),) + (0,) * (spec.dim - 1)
        else:
            if n > len(spec.shift):
                raise IndexError(f"no shift recorded for index {n}")
            s = elem(spec.shift[n - 1], spec.dim)
        return Window.box(list(s), [c + n for c in s])
    if isinstance(spec, ExplicitList):
        if n > len(spec.windows):
            raise IndexError(f"index {n} beyond explicit Folner list of length {len(spec.windows)}")
        return spec.windows[n - 1]
    raise TypeError(f"unknown Folner spec {spec!r}")


def folner_interval(spec: FolnerSpec, n: int) -> tuple[int, int] | None:
    """Bounds [a, b) when F_n is an interval of Z, computed without materializing it."""
    if isinstance(spec, CenteredBoxes) and spec.dim == 1:
        h = spec.scale * n
        return -h, h + 1
    if isinstance(spec, ShiftedBoxes) and spec.dim == 1:
        if isinstance(spec.shift, str):
            from .dsl import eval_int_expr

            s = eval_int_expr(spec.shift, {"n": n})
        else:
            s = elem(spec.shift[n - 1], 1)[0]
        return s, s + n
    w = folner_window(spec, n)
    if w.is_interval():
        return w.bounds()
    return None


def folner_from_json(obj) -> FolnerSpec:
    v = obj["variant"]
    if v == "CenteredBoxes":
        return CenteredBoxes(obj.get("dim", 1), obj.get("scale", 1))
    if v == "ShiftedBoxes":
        s = obj.get("shift", "0")
        if not isinstance(s, str):
            s = tuple(tuple(g) for g in s)
        return ShiftedBoxes(obj.get("dim", 1), s)
    if v == "ExplicitList":
        return ExplicitList(tuple(Window.of(w) for w in obj["windows"]))
    raise ValueError(f"unknown Folner variant {v!r}")


def invariance_defect(A: Window, g: ElemLike) -> Fraction:
    """|(A + g) symmetric-difference A| / |A|."""
    if len(A) == 0:
        raise ValueError("window must be nonempty")
    return Fraction(A.translate(g).symmetric_difference(A), len(A))


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


def is_invariant(A: Window, F: Window, eps) -> bool:
    """(F, eps)-invariance: |{s in A : F + s subset of A}| >= (1 - eps)|A|."""
    eps = _as_fraction(eps)
    if not 0 <= eps <= 1:
        raise ValueError("eps must lie in [0, 1]")
    if len(A) == 0 or len(F) == 0:
        raise ValueError("windows must be nonempty")
    good = sum(1 for s in A if all(add(f, s) in A._members for f in F))
    return good >= (1 - eps) * len(A)

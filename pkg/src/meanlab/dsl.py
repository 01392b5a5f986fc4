"""Text DSL for subsets of Z.

Grammar::

    set     := prog | '{' [int (',' int)*] '}' | blocks | call
    prog    := [int] 'Z' [('+'|'-') int]           e.g. 2Z+1, Z, 3Z-1
    blocks  := 'blocks' '(' 'j' '=' int '..' (int|'inf') ':' arith ',' arith ')'
    call    := ('union'|'inter') '(' set (',' set)+ ')'
             | 'compl' '(' set ')'
             | 'shift' '(' set ',' int ')'
    arith   := term (('+'|'-') term)*
    term    := power ('*' power)*
    power   := atom ['^' power]
    atom    := int | name | '(' arith ')' | '-' atom
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .group import Window
from .sets import (
    BlockUnion,
    Complement,
    Explicit,
    Intersection,
    Periodic,
    Shift,
    SubsetDesc,
    Union,
    normalize,
)


class DSLSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, expected: tuple = ()):
        self.pos = pos
        self.expected = tuple(expected)
        detail = f" (expected {' or '.join(expected)})" if expected else ""
        super().__init__(f"{message} at position {pos}{detail}")


class UnsupportedConstruct(ValueError):
    pass


# --- integer expressions ----------------------------------------------------


@dataclass(frozen=True)
class Expr:
    op: str
    args: tuple

    def __call__(self, j: int) -> int:
        return self.evaluate({"j": j, "n": j})

    def evaluate(self, env: dict) -> int:
        op, a = self.op, self.args
        if op == "int":
            return a[0]
        if op == "var":
            if a[0] not in env:
                raise UnsupportedConstruct(f"unbound variable {a[0]!r}")
            return env[a[0]]
        if op == "neg":
            return -a[0].evaluate(env)
        x, y = a[0].evaluate(env), a[1].evaluate(env)
        if op == "+":
            return x + y
        if op == "-":
            return x - y
        if op == "*":
            return x * y
        if op == "^":
            if y < 0:
                raise UnsupportedConstruct("negative exponent")
            if y > 4096:
                raise UnsupportedConstruct("exponent too large")
            return x**y
        raise AssertionError(op)

    def text(self) -> str:
        op, a = self.op, self.args
        if op == "int":
            return str(a[0])
        if op == "var":
            return a[0]
        if op == "neg":
            return f"-{a[0]._wrapped(10)}"
        prec = {"+": 1, "-": 1, "*": 2, "^": 3}[op]
        left = a[0]._wrapped(prec if op != "^" else prec + 1)
        right = a[1]._wrapped(prec + (0 if op in "+*" else 1) if op != "^" else prec)
        return f"{left}{op}{right}"

    def _wrapped(self, outer: int) -> str:
        mine = {"+": 1, "-": 1, "*": 2, "^": 3}.get(self.op, 10)
        t = self.text()
        return f"({t})" if mine < outer else t


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\.\.)|(.))")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(0).strip() == "":
            pos = m.end()
            continue
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        elif m.group(3):
            toks.append(("op", "..", start))
        else:
            toks.append(("op", m.group(4), start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str):
        kind, val, pos = self.tok
        if kind != "op" or val != op:
            raise DSLSyntaxError(f"unexpected {self._describe()}", pos, (repr(op),))
        self.advance()

    def _describe(self):
        kind, val, _ = self.tok
        return "end of input" if kind == "end" else repr(val)

    def is_op(self, op):
        kind, val, _ = self.tok
        return kind == "op" and val == op

    def integer(self) -> int:
        sign = 1
        if self.is_op("-"):
            self.advance()
            sign = -1
        elif self.is_op("+"):
            self.advance()
        kind, val, pos = self.tok
        if kind != "int":
            raise DSLSyntaxError(f"unexpected {self._describe()}", pos, ("integer",))
        self.advance()
        return sign * val

    # arithmetic
    def arith(self) -> Expr:
        e = self.term()
        while self.is_op("+") or self.is_op("-"):
            op = self.advance()[1]
            e = Expr(op, (e, self.term()))
        return e

    def term(self) -> Expr:
        e = self.power()
        while self.is_op("*"):
            self.advance()
            e = Expr("*", (e, self.power()))
        return e

    def power(self) -> Expr:
        base = self.atom()
        if self.is_op("^"):
            self.advance()
            return Expr("^", (base, self.power()))
        return base

    def atom(self) -> Expr:
        kind, val, pos = self.tok
        if kind == "int":
            self.advance()
            return Expr("int", (val,))
        if kind == "name":
            self.advance()
            return Expr("var", (val,))
        if self.is_op("("):
            self.advance()
            e = self.arith()
            self.expect_op(")")
            return e
        if self.is_op("-"):
            self.advance()
            return Expr("neg", (self.atom(),))
        raise DSLSyntaxError(f"unexpected {self._describe()}", pos, ("integer", "variable", "'('"))

    # sets
    def set_expr(self) -> SubsetDesc:
        kind, val, pos = self.tok
        if kind == "op" and val == "{":
            return self.explicit()
        if kind == "name" and val in ("union", "inter", "compl", "shift", "blocks"):
            self.advance()
            return getattr(self, "call_" + val)()
        if kind == "int" or (kind == "name" and val == "Z"):
            return self.progression()
        raise DSLSyntaxError(
            f"unexpected {self._describe()}", pos,
            ("progression like 2Z+1", "'{'", "union", "inter", "compl", "shift", "blocks"),
        )

    def progression(self) -> Periodic:
        a = 1
        if self.tok[0] == "int":
            a = self.advance()[1]
        kind, val, pos = self.tok
        if kind != "name" or val != "Z":
            raise DSLSyntaxError(f"unexpected {self._describe()}", pos, ("'Z'",))
        self.advance()
        b = 0
        if self.is_op("+") or self.is_op("-"):
            sign = 1 if self.advance()[1] == "+" else -1
            b = sign * self.integer()
        if a == 0:
            raise UnsupportedConstruct("0Z is not a progression; use {b}")
        return Periodic.progression(a, b)

    def explicit(self) -> Explicit:
        self.expect_op("{")
        pts = []
        if not self.is_op("}"):
            pts.append(self.integer())
            while self.is_op(","):
                self.advance()
                pts.append(self.integer())
        self.expect_op("}")
        return Explicit(Window.of(pts, 1) if pts else Window(()))

    def _args(self, n_min: int):
        self.expect_op("(")
        items = [self.set_expr()]
        while self.is_op(","):
            self.advance()
            items.append(self.set_expr())
        self.expect_op(")")
        if len(items) < n_min:
            raise DSLSyntaxError("too few arguments", self.tok[2], ("','",))
        return tuple(items)

    def call_union(self):
        return Union(self._args(2))

    def call_inter(self):
        return Intersection(self._args(2))

    def call_compl(self):
        self.expect_op("(")
        e = self.set_expr()
        self.expect_op(")")
        return Complement(e)

    def call_shift(self):
        self.expect_op("(")
        e = self.set_expr()
        self.expect_op(",")
        s = self.integer()
        self.expect_op(")")
        return Shift(e, (s,))

    def call_blocks(self):
        self.expect_op("(")
        kind, val, pos = self.tok
        if kind != "name" or val != "j":
            raise DSLSyntaxError(f"unexpected {self._describe()}", pos, ("'j'",))
        self.advance()
        self.expect_op("=")
        j0 = self.integer()
        self.expect_op("..")
        kind, val, pos = self.tok
        if kind == "name" and val == "inf":
            self.advance()
            j1 = None
        else:
            j1 = self.integer()
        self.expect_op(":")
        start = self.arith()
        self.expect_op(",")
        length = self.arith()
        self.expect_op(")")
        for e in (start, length):
            _check_vars(e, {"j"})
        return BlockUnion(start, length, j0, j1)

    def finish(self):
        kind, val, pos = self.tok
        if kind != "end":
            raise DSLSyntaxError(f"trailing {self._describe()}", pos, ("end of input",))


def _check_vars(e: Expr, allowed: set):
    if e.op == "var" and e.args[0] not in allowed:
        raise UnsupportedConstruct(f"unknown variable {e.args[0]!r} in block rule")
    if e.op not in ("int", "var"):
        for a in e.args:
            _check_vars(a, allowed)


def parse_set(text: str, normalize_result: bool = True) -> SubsetDesc:
    """Parse a set expression; periodic results are reduced to canonical form."""
    if not text or not text.strip():
        raise DSLSyntaxError("empty expression", 0, ("set expression",))
    p = _Parser(text)
    e = p.set_expr()
    p.finish()
    return normalize(e) if normalize_result else e


def parse_int_expr(text: str) -> Expr:
    p = _Parser(text)
    e = p.arith()
    p.finish()
    return e


def eval_int_expr(text: str, env: dict) -> int:
    return parse_int_expr(text).evaluate(env)


def to_text(E: SubsetDesc) -> str:
    """Canonical text for a description; ``parse_set(to_text(E))`` describes the same set."""
    if isinstance(E, Periodic):
        if E.dim != 1:
            raise UnsupportedConstruct("the text DSL covers subsets of Z only")
        E = E.reduced()
        (m,) = E.modulus
        res = sorted(r for (r,) in E.residues)
        if not res:
            return "{}"
        if len(res) == m:
            return "Z"
        parts = [_prog(m, r) for r in res]
        return parts[0] if len(parts) == 1 else f"union({', '.join(parts)})"
    if isinstance(E, Explicit):
        if E.universe is not None:
            raise UnsupportedConstruct("explicit sets with a universe have no text form")
        return "{" + ",".join(str(c) for (c,) in E.window) + "}"
    if isinstance(E, BlockUnion):
        if not isinstance(E.start, Expr) or not isinstance(E.length, Expr):
            raise UnsupportedConstruct("block rule is not a DSL expression")
        j1 = "inf" if E.j1 is None else str(E.j1)
        return f"blocks(j={E.j0}..{j1}: {E.start.text()}, {E.length.text()})"
    if isinstance(E, Shift):
        return f"shift({to_text(E.base)}, {E.s[0]})"
    if isinstance(E, Complement):
        return f"compl({to_text(E.base)})"
    if isinstance(E, Union):
        return f"union({', '.join(to_text(e) for e in E.items)})"
    if isinstance(E, Intersection):
        return f"inter({', '.join(to_text(e) for e in E.items)})"
    raise UnsupportedConstruct(f"no text form for {type(E).__name__}")


def _prog(m: int, r: int) -> str:
    head = "Z" if m == 1 else f"{m}Z"
    return head if r == 0 else f"{head}+{r}"


def subset_to_json(E: SubsetDesc) -> Optional[str]:
    try:
        return to_text(E)
    except UnsupportedConstruct:
        return None

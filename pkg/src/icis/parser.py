"""Polynomial expressions and the problem-file format.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' exponent)?
    atom   := NUMBER | NUMBER '/' NUMBER | IDENT | '(' expr ')'

Exponents are non-negative integers (optionally parenthesised).  Juxtaposition
is an error, so ``2x`` must be written ``2*x``.

A problem file has ``[ring]``, ``[germ]``, and optional ``[smoothing]`` and
``[options]`` sections; ``#`` starts a comment::

    [ring]
    vars = x, y, z

    [germ]
    z^2 - x*y
    x^2 + y^2 + z^2

    [smoothing]
    alpha = generic

    [options]
    seed = 0
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .polyforms import Poly


class ParseError(ValueError):
    code = "PARSE"

    def __init__(self, msg: str, line: int = 1, col: int = 1, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{col}: {msg}")
        self.line, self.col, self.source = line, col, source


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokens(text: str):
    pos = 0
    out = []
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos and not m.group(0):
            break
        if m.group(1):
            out.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("id", m.group(2), m.start(2)))
        elif m.group(3):
            out.append(("op", m.group(3), m.start(3)))
        else:
            break
        pos = m.end()
    out.append(("end", "", len(text.rstrip()) if text.strip() else 0))
    return out


class _Parser:
    def __init__(self, text: str, gens: Sequence[str], line: int, col0: int, source: str):
        self.toks = _tokens(text)
        self.i = 0
        self.gens = tuple(gens)
        self.line, self.col0, self.source = line, col0, source

    def err(self, msg, tok=None):
        tok = tok or self.toks[self.i]
        raise ParseError(msg, self.line, self.col0 + tok[2] + 1, self.source)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            self.err(f"expected '{op}'", t)

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            self.err("empty expression")
        p = self.expr()
        t = self.peek()
        if t[0] != "end":
            if t[0] in ("num", "id") or t[1] == "(":
                self.err("implicit multiplication is not allowed; use '*'")
            self.err(f"unexpected '{t[1]}'")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            p = p * self.unary()
        return p

    def unary(self) -> Poly:
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            p = self.unary()
            return -p if t[1] == "-" else p
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            base = base ** self.exponent()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.err("chained '^' is ambiguous; use parentheses")
        return base

    def exponent(self) -> int:
        t = self.take()
        if t[0] == "num":
            return int(t[1])
        if t[0] == "op" and t[1] == "(":
            neg = False
            s = self.take()
            if s[0] == "op" and s[1] == "-":
                neg = True
                s = self.take()
            if s[0] != "num":
                self.err("exponent must be an integer", s)
            if neg:
                self.err("negative exponent", s)
            self.expect(")")
            return int(s[1])
        if t[0] == "op" and t[1] == "-":
            self.err("negative exponent", t)
        self.err("exponent must be a non-negative integer", t)

    def atom(self) -> Poly:
        t = self.take()
        if t[0] == "num":
            val = mpq(int(t[1]))
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.take()
                d = self.take()
                if d[0] != "num":
                    self.err("expected a denominator", d)
                if int(d[1]) == 0:
                    self.err("division by zero", d)
                val = val / int(d[1])
            return Poly.const(self.gens, val)
        if t[0] == "id":
            if t[1] not in self.gens:
                self.err(f"unknown identifier '{t[1]}'", t)
            return Poly.var(self.gens, self.gens.index(t[1]))
        if t[0] == "op" and t[1] == "(":
            p = self.expr()
            self.expect(")")
            return p
        if t[0] == "end":
            self.err("unexpected end of expression", t)
        self.err(f"unexpected '{t[1]}'", t)


def parse_poly(text: str, gens: Sequence[str], line: int = 1, col: int = 0,
               source: str = "<input>") -> Poly:
    return _Parser(text, gens, line, col, source).parse()


def parse_rational(text: str) -> mpq:
    m = re.fullmatch(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*", text)
    if not m:
        raise ValueError(f"not a rational number: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2) or 1)
    if den == 0:
        raise ValueError("zero denominator")
    return mpq(num, den)


@dataclass
class ProblemFile:
    gens: Tuple[str, ...]
    germ: Tuple[Poly, ...]
    alpha: Optional[Tuple[mpq, ...]] = None  # None means generic
    smoothing_total: Optional[Tuple[Poly, ...]] = None
    smoothing_function: Optional[Poly] = None
    smoothing_gens: Optional[Tuple[str, ...]] = None
    options: Dict[str, int] = field(default_factory=dict)
    source: str = "<input>"


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")
_INT_OPTIONS = ("jet_order", "t_order", "trials", "seed", "max_refinements")


def parse_problem(text: str, source: str = "<input>") -> ProblemFile:
    sections: Dict[str, List[Tuple[int, int, str]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        stripped = body.strip()
        if stripped.startswith("["):
            m = re.fullmatch(r"\[\s*([A-Za-z_]+)\s*\]", stripped)
            if not m:
                raise ParseError("malformed section header", lineno, body.index("[") + 1, source)
            current = m.group(1).lower()
            if current not in ("ring", "germ", "smoothing", "options"):
                raise ParseError(f"unknown section [{current}]", lineno, 1, source)
            if current in sections:
                raise ParseError(f"duplicate section [{current}]", lineno, 1, source)
            sections[current] = []
            continue
        if current is None:
            raise ParseError("content before the first section", lineno, 1, source)
        col = len(body) - len(body.lstrip())
        sections[current].append((lineno, col, body.rstrip()))

    def keyvals(name):
        out = {}
        for ln, col, body in sections.get(name, []):
            if "=" not in body:
                raise ParseError("expected 'key = value'", ln, col + 1, source)
            k, v = body.split("=", 1)
            key = k.strip().lower()
            if key in out:
                raise ParseError(f"duplicate key '{key}'", ln, col + 1, source)
            out[key] = (ln, body.index("=") + 1, v)
        return out

    if "ring" not in sections:
        raise ParseError("missing [ring] section", 1, 1, source)
    ring = keyvals("ring")
    if "vars" not in ring:
        raise ParseError("[ring] needs 'vars = ...'", 1, 1, source)
    ln, col, v = ring["vars"]
    names = [x.strip() for x in v.split(",")]
    for x in names:
        if not _IDENT.match(x):
            raise ParseError(f"bad variable name {x!r}", ln, col + 1, source)
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable names", ln, col + 1, source)
    gens = tuple(names)
    if "dim" in ring:
        ln2, c2, dv = ring["dim"]
        if dv.strip() != str(len(gens)):
            raise ParseError(f"dim = {dv.strip()} but {len(gens)} variables declared", ln2, c2 + 1, source)

    if "germ" not in sections or not sections["germ"]:
        raise ParseError("missing or empty [germ] section", 1, 1, source)
    germ = []
    for ln, col, body in sections["germ"]:
        p = parse_poly(body, gens, ln, 0, source)
        if p.constant_term() != 0:
            raise ParseError("germ generators must vanish at the origin", ln, col + 1, source)
        germ.append(p)

    prob = ProblemFile(gens, tuple(germ), source=source)
    if "smoothing" in sections:
        sm = keyvals("smoothing")
        unknown = set(sm) - {"alpha", "vars", "total", "function"}
        if unknown:
            k = sorted(unknown)[0]
            raise ParseError(f"unknown smoothing key '{k}'", sm[k][0], 1, source)
        if "function" in sm:
            sgens = gens
            if "vars" in sm:
                ln, col, v = sm["vars"]
                extra = [x.strip() for x in v.split(",") if x.strip()]
                sgens = gens + tuple(x for x in extra if x not in gens)
            ln, col, v = sm["function"]
            prob.smoothing_function = parse_poly(v, sgens, ln, col, source)
            total = []
            if "total" in sm:
                ln, col, v = sm["total"]
                off = col
                for piece in v.split(";"):
                    if piece.strip():
                        total.append(parse_poly(piece, sgens, ln, off, source))
                    off += len(piece) + 1
            prob.smoothing_total = tuple(total)
            prob.smoothing_gens = sgens
        elif "alpha" in sm:
            ln, col, v = sm["alpha"]
            if v.strip().lower() != "generic":
                try:
                    prob.alpha = tuple(parse_rational(x) for x in v.split(","))
                except ValueError as exc:
                    raise ParseError(str(exc), ln, col + 1, source) from None
    if "options" in sections:
        for k, (ln, col, v) in keyvals("options").items():
            if k not in _INT_OPTIONS:
                raise ParseError(f"unknown option '{k}'", ln, 1, source)
            try:
                prob.options[k] = int(v.strip())
            except ValueError:
                raise ParseError(f"option '{k}' needs an integer", ln, col + 1, source) from None
    return prob

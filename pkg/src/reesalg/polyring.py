"""Exact sparse polynomials in k[x1..xd, T1..Tm].

Monomials are plain tuples of exponents, x-block first then T-block.
Coefficients are Python ints reduced mod p for a prime field, or
``fractions.Fraction`` for the rationals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

MAX_EXPONENT = (1 << 15) - 1


class ParseError(ValueError):
    """Raised on malformed polynomial text; ``pos`` is the 0-based offset."""

    def __init__(self, message: str, pos: int = 0, text: str = ""):
        self.pos = pos
        self.text = text
        self.reason = message
        super().__init__(f"{message} (at column {pos + 1})")


class RingMismatch(ValueError):
    pass


class ExponentOverflow(OverflowError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (covers every 64-bit input)."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    r, s = n - 1, 0
    while r % 2 == 0:
        r //= 2
        s += 1
    for a in small:
        x = pow(a, r, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: ``p`` is a prime, or None for the rationals."""

    p: int | None = 32003

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise ValueError(f"field characteristic {self.p} is not prime")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(p)

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(None)

    @property
    def kind(self) -> str:
        return "rational" if self.p is None else "prime"

    def coerce(self, c):
        if self.p is None:
            return Fraction(c)
        if isinstance(c, Fraction):
            return c.numerator * pow(c.denominator, -1, self.p) % self.p
        return int(c) % self.p

    def inv(self, c):
        if self.p is None:
            return 1 / Fraction(c)
        return pow(c, -1, self.p)

    def signed(self, c) -> int | Fraction:
        """Representative in (-p/2, p/2] for display."""
        if self.p is None:
            return c
        return c - self.p if c > self.p // 2 else c

    def __str__(self):
        return "QQ" if self.p is None else str(self.p)

    @classmethod
    def from_string(cls, s: str) -> "FieldSpec":
        s = s.strip()
        if s.upper() in ("QQ", "Q"):
            return cls.rational()
        return cls.prime(int(s))


@dataclass(frozen=True)
class RingSpec:
    """S = k[x1..xd, T1..Tm]."""

    d: int
    m: int
    field: FieldSpec = field(default_factory=FieldSpec)

    def __post_init__(self):
        if self.d < 1 or self.m < 1:
            raise ValueError("need d >= 1 and m >= 1")

    @property
    def nvars(self) -> int:
        return self.d + self.m

    @property
    def names(self) -> list[str]:
        return [f"x{i}" for i in range(1, self.d + 1)] + [f"T{i}" for i in range(1, self.m + 1)]

    def var_index(self, name: str) -> int:
        block, idx = name[0], int(name[1:])
        if block == "x" and 1 <= idx <= self.d:
            return idx - 1
        if block == "T" and 1 <= idx <= self.m:
            return self.d + idx - 1
        raise KeyError(name)

    def x(self, i: int) -> "Polynomial":
        return Polynomial.monomial(self, self._unit_exp(i - 1))

    def T(self, i: int) -> "Polynomial":
        return Polynomial.monomial(self, self._unit_exp(self.d + i - 1))

    def xs(self) -> list["Polynomial"]:
        return [self.x(i) for i in range(1, self.d + 1)]

    def Ts(self) -> list["Polynomial"]:
        return [self.T(i) for i in range(1, self.m + 1)]

    def _unit_exp(self, k: int) -> tuple[int, ...]:
        e = [0] * self.nvars
        e[k] = 1
        return tuple(e)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def parse(self, text: str) -> "Polynomial":
        return poly_parse(text, self)


# --- monomial orders ---------------------------------------------------------


@dataclass(frozen=True)
class MonomialOrder:
    """A block order; degrevlex inside each block, blocks compared left to right.

    ``blocks`` lists variable indices.  Within a block the *last* listed
    variable is the cheapest one for reverse-lex tie breaking.  ``lex`` is
    the special case of singleton blocks.
    """

    kind: str
    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def degrevlex(cls, nvars: int, var_order: Iterable[int] | None = None) -> "MonomialOrder":
        vo = tuple(range(nvars)) if var_order is None else tuple(var_order)
        if sorted(vo) != list(range(nvars)):
            raise ValueError("var_order must be a permutation")
        return cls("degrevlex", (vo,))

    @classmethod
    def lex(cls, nvars: int) -> "MonomialOrder":
        return cls("lex", tuple((i,) for i in range(nvars)))

    @classmethod
    def block_elim(cls, nvars: int, first_block: Iterable[int]) -> "MonomialOrder":
        first = tuple(sorted(set(first_block)))
        rest = tuple(i for i in range(nvars) if i not in first)
        if not first or not rest:
            raise ValueError("both blocks of an elimination order must be nonempty")
        return cls("block_elim", (first, rest))

    @property
    def nvars(self) -> int:
        return sum(len(b) for b in self.blocks)

    def key(self, exps: tuple[int, ...]) -> tuple[int, ...]:
        """Sort key: larger key means larger monomial."""
        out = []
        for block in self.blocks:
            acc = sum(exps[i] for i in block)
            out.append(acc)
            for i in reversed(block[1:]):
                acc -= exps[i]
                out.append(acc)
        return tuple(out)

    def eliminates(self) -> tuple[int, ...]:
        return self.blocks[0] if self.kind == "block_elim" else ()


def monomial_bidegree(exps: tuple[int, ...], d: int) -> tuple[int, int]:
    return sum(exps[:d]), sum(exps[d:])


def monomial_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = tuple(i + j for i, j in zip(a, b))
    if out and max(out) > MAX_EXPONENT:
        raise ExponentOverflow(f"exponent exceeds {MAX_EXPONENT}")
    return out


# --- polynomials -------------------------------------------------------------


class Polynomial:
    """Immutable sparse polynomial; terms kept as {exponent tuple: coefficient}."""

    __slots__ = ("ring", "_terms", "_sorted", "_hash")

    def __init__(self, ring: RingSpec, terms: dict, _normalized: bool = False):
        self.ring = ring
        if not _normalized:
            fld = ring.field
            clean = {}
            for e, c in terms.items():
                c = fld.coerce(c)
                if c:
                    if len(e) != ring.nvars:
                        raise ValueError("monomial length does not match ring")
                    clean[tuple(e)] = c
            terms = clean
        self._terms = terms
        self._sorted = None
        self._hash = None

    @classmethod
    def monomial(cls, ring: RingSpec, exps: tuple[int, ...], coeff=1) -> "Polynomial":
        return cls(ring, {tuple(exps): coeff})

    # structure

    def terms(self, order: MonomialOrder | None = None) -> list[tuple[tuple[int, ...], object]]:
        """Terms in strictly descending order (degrevlex unless ``order`` given)."""
        if order is not None:
            return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)
        if self._sorted is None:
            order = MonomialOrder.degrevlex(self.ring.nvars)
            self._sorted = sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)
        return self._sorted

    def as_dict(self) -> dict:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], object]]:
        return iter(self.terms())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def leading_term(self, order: MonomialOrder | None = None):
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        if order is None:
            return self.terms()[0]
        return max(self._terms.items(), key=lambda t: order.key(t[0]))

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def bidegrees(self) -> set[tuple[int, int]]:
        d = self.ring.d
        return {monomial_bidegree(e, d) for e in self._terms}

    def bidegree(self) -> tuple[int, int] | None:
        bd = self.bidegrees()
        return bd.pop() if len(bd) == 1 else None

    def is_bihomogeneous(self) -> bool:
        return self.bidegree() is not None

    def is_homogeneous(self, weights: Iterable[int] | None = None) -> bool:
        if weights is None:
            degs = {sum(e) for e in self._terms}
        else:
            w = tuple(weights)
            degs = {sum(a * b for a, b in zip(w, e)) for e in self._terms}
        return len(degs) <= 1

    def x_degree(self) -> int:
        d = self.ring.d
        return max((sum(e[:d]) for e in self._terms), default=-1)

    def T_degree(self) -> int:
        d = self.ring.d
        return max((sum(e[d:]) for e in self._terms), default=-1)

    def support(self) -> set[int]:
        return {i for e in self._terms for i, a in enumerate(e) if a}

    # arithmetic

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.p
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if p is not None:
                v %= p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out, _normalized=True)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.field.p
        if p is None:
            return Polynomial(self.ring, {e: -c for e, c in self._terms.items()}, _normalized=True)
        return Polynomial(self.ring, {e: p - c for e, c in self._terms.items()}, _normalized=True)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        p = self.ring.field.p
        out: dict = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = tuple(i + j for i, j in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        top = max((max(e) for e in out), default=0)
        if top > MAX_EXPONENT:
            raise ExponentOverflow(f"exponent exceeds {MAX_EXPONENT}")
        if p is not None:
            out = {e: c % p for e, c in out.items() if c % p}
        else:
            out = {e: c for e, c in out.items() if c}
        return Polynomial(self.ring, out, _normalized=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def scale(self, c) -> "Polynomial":
        return self * self.ring.const(c)

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self._terms:
            return self
        _, lc = self.leading_term(order)
        return self.scale(self.ring.field.inv(lc))

    def mul_monomial(self, exps: tuple[int, ...], coeff=1) -> "Polynomial":
        return self * Polynomial.monomial(self.ring, exps, coeff)

    def divide_monomial(self, exps: tuple[int, ...]) -> "Polynomial":
        out = {}
        for e, c in self._terms.items():
            q = tuple(a - b for a, b in zip(e, exps))
            if min(q) < 0:
                raise ArithmeticError("monomial does not divide polynomial")
            out[q] = c
        return Polynomial(self.ring, out, _normalized=True)

    def exact_divide(self, g: "Polynomial") -> "Polynomial":
        """Exact quotient self / g; raises ArithmeticError when g does not divide."""
        self._check(g)
        if not g:
            raise ZeroDivisionError("division by zero polynomial")
        order = MonomialOrder.degrevlex(self.ring.nvars)
        key = order.key
        fld = self.ring.field
        ge, gc = g.leading_term(order)
        ginv = fld.inv(gc)
        rem = dict(self._terms)
        quot: dict = {}
        p = fld.p
        while rem:
            e, c = max(rem.items(), key=lambda t: key(t[0]))
            q = tuple(a - b for a, b in zip(e, ge))
            if min(q) < 0:
                raise ArithmeticError("inexact polynomial division")
            qc = c * ginv
            if p is not None:
                qc %= p
            quot[q] = qc
            for eb, cb in g._terms.items():
                m = tuple(a + b for a, b in zip(q, eb))
                v = rem.get(m, 0) - qc * cb
                if p is not None:
                    v %= p
                if v:
                    rem[m] = v
                else:
                    rem.pop(m, None)
        return Polynomial(self.ring, quot, _normalized=True)

    def substitute_zero(self, variables: Iterable[int]) -> "Polynomial":
        vs = tuple(variables)
        return Polynomial(
            self.ring,
            {e: c for e, c in self._terms.items() if not any(e[i] for i in vs)},
            _normalized=True,
        )

    def homogeneous_part(self, bideg: tuple[int, int]) -> "Polynomial":
        d = self.ring.d
        return Polynomial(
            self.ring,
            {e: c for e, c in self._terms.items() if monomial_bidegree(e, d) == bideg},
            _normalized=True,
        )

    # comparison / display

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __str__(self):
        return poly_format(self)

    def __repr__(self):
        return f"Polynomial({poly_format(self)!r})"


# --- text I/O ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[xT]\d+)|(?P<op>[-+*^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        mo = _TOKEN.match(text, pos)
        if mo is None or mo.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = mo.lastgroup
        start = mo.start(kind)
        out.append((kind, mo.group(kind), start))
        pos = mo.end()
    return out


def poly_parse(text: str, ring: RingSpec) -> Polynomial:
    """Parse ``[coeff][*]var^exp[*var^exp...]`` terms joined by ``+``/``-``.

    Parenthesized factors are also accepted, e.g. ``(x1+T1)^2``.
    """
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty polynomial", 0, text)
    parser = _Parser(toks, ring, text)
    out = parser.expr()
    if parser.i != len(toks):
        raise ParseError(f"unexpected token {toks[parser.i][1]!r}", toks[parser.i][2], text)
    return out


class _Parser:
    def __init__(self, toks, ring: RingSpec, text: str):
        self.toks = toks
        self.ring = ring
        self.text = text
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expr(self) -> Polynomial:
        acc = self.ring.zero()
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term().scale(sign)
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                t = self.term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            elif kind in ("var", "num") or (kind == "op" and val == "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> Polynomial:
        kind, val, pos = self.take()
        if kind == "num":
            if self.ring.field.p is not None and "/" in val:
                num, den = val.split("/")
                if int(den) % self.ring.field.p == 0:
                    raise ParseError("denominator vanishes in the field", pos, self.text)
            try:
                base = self.ring.const(Fraction(val))
            except ZeroDivisionError:
                raise ParseError("zero denominator", pos, self.text) from None
            return self._power(base, allow=False)
        if kind == "var":
            try:
                idx = self.ring.var_index(val)
            except KeyError:
                raise ParseError(f"unknown variable {val!r}", pos, self.text) from None
            return self._power(Polynomial.monomial(self.ring, self.ring._unit_exp(idx)))
        if kind == "op" and val == "(":
            inner = self.expr()
            k2, v2, p2 = self.take()
            if v2 != ")":
                raise ParseError("expected ')'", p2, self.text)
            return self._power(inner)
        raise ParseError(f"unexpected token {val!r}" if val else "unexpected end of input", pos, self.text)

    def _power(self, base: Polynomial, allow: bool = True) -> Polynomial:
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            if not allow:
                raise ParseError("exponent on a coefficient", pos, self.text)
            self.take()
            k2, v2, p2 = self.take()
            if k2 != "num" or "/" in v2:
                raise ParseError("expected integer exponent", p2, self.text)
            k = int(v2)
            if k > MAX_EXPONENT:
                raise ParseError(f"exponent overflow ({k} > {MAX_EXPONENT})", p2, self.text)
            try:
                return base**k
            except ExponentOverflow as exc:
                raise ParseError(str(exc), p2, self.text) from None
        return base


def _format_monomial(exps: tuple[int, ...], names: list[str]) -> str:
    parts = []
    for name, a in zip(names, exps):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts)


def poly_format(f: Polynomial) -> str:
    if not f:
        return "0"
    names = f.ring.names
    fld = f.ring.field
    out = []
    for e, c in f.terms():
        c = fld.signed(c)
        neg = c < 0
        a = -c if neg else c
        mono = _format_monomial(e, names)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def bidegree(f: Polynomial) -> tuple[int, int] | None:
    """Shared bidegree of a nonzero bihomogeneous polynomial, else None."""
    return f.bidegree()

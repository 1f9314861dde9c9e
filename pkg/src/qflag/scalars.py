"""Exact arithmetic in the coefficient field Q(q^(1/l0)).

A scalar is a quotient of two Laurent polynomials in the formal variable
q^(1/l0) with integer coefficients.  Exponents are stored as integers in
units of 1/l0, so ``{2: 1}`` with ``l0 == 2`` is the monomial q.  The
representation is canonical after every operation: numerator and
denominator share no polynomial factor, the pair of integer contents is
coprime, and the lowest term of the denominator has a positive
coefficient.  Equality of values is therefore equality of
representations.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Tuple

from .errors import ParseError, ScalarDivisionError, ScalarMixError

Lp = Dict[int, int]  # sparse Laurent polynomial, exponent (1/l0 units) -> coeff


# ---------------------------------------------------------------------------
# Laurent polynomial helpers (plain dicts, integer coefficients)
# ---------------------------------------------------------------------------

def lp_zero() -> Lp:
    return {}


def lp_const(c: int) -> Lp:
    return {0: c} if c else {}


def lp_monomial(exp: int, c: int = 1) -> Lp:
    return {exp: c} if c else {}


def lp_add(a: Lp, b: Lp) -> Lp:
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def lp_neg(a: Lp) -> Lp:
    return {e: -c for e, c in a.items()}


def lp_mul(a: Lp, b: Lp) -> Lp:
    if not a or not b:
        return {}
    out: Lp = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            s = out.get(e, 0) + c1 * c2
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def lp_scale(a: Lp, c: int) -> Lp:
    if c == 0:
        return {}
    return {e: k * c for e, k in a.items()}


def lp_content(a: Lp) -> int:
    g = 0
    for c in a.values():
        g = gcd(g, abs(c))
    return g


def lp_min_exp(a: Lp) -> int:
    return min(a)


def lp_shift(a: Lp, s: int) -> Lp:
    return {e + s: c for e, c in a.items()}


def _lp_divmod_poly(a: Lp, b: Lp) -> Tuple[Lp, Lp]:
    """Polynomial division with Fraction arithmetic; inputs must have
    nonnegative exponents and b nonzero."""
    rem: Dict[int, Fraction] = {e: Fraction(c) for e, c in a.items()}
    quo: Dict[int, Fraction] = {}
    db = max(b)
    lb = Fraction(b[db])
    while rem:
        dr = max(rem)
        if dr < db:
            break
        coeff = rem[dr] / lb
        quo[dr - db] = quo.get(dr - db, Fraction(0)) + coeff
        for e, c in b.items():
            k = dr - db + e
            v = rem.get(k, Fraction(0)) - coeff * c
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return ({e: c for e, c in quo.items() if c},
            {e: c for e, c in rem.items() if c})


def _lp_primitive(a: Lp) -> Lp:
    """Divide out integer content and normalize lowest exponent to 0."""
    if not a:
        return {}
    g = lp_content(a)
    m = lp_min_exp(a)
    return {e - m: c // g for e, c in a.items()}


def lp_gcd(a: Lp, b: Lp) -> Lp:
    """Monic-free gcd of Laurent polynomials: a primitive ordinary
    polynomial with constant term, positive lowest coefficient."""
    if not a:
        return _lp_positive_lowest(_lp_primitive(b))
    if not b:
        return _lp_positive_lowest(_lp_primitive(a))
    x = _lp_primitive(a)
    y = _lp_primitive(b)
    while y:
        _, r = _lp_divmod_poly(x, y)
        # clear Fraction denominators back to integers
        if r:
            den = 1
            for c in r.values():
                den = den * c.denominator // gcd(den, c.denominator)
            ri: Lp = {e: int(c * den) for e, c in r.items()}
            ri = _lp_primitive(ri)
        else:
            ri = {}
        x, y = y, ri
    return _lp_positive_lowest(x)


def _lp_positive_lowest(a: Lp) -> Lp:
    if a and a[lp_min_exp(a)] < 0:
        return lp_neg(a)
    return a


def lp_exact_div(a: Lp, b: Lp) -> Lp:
    """Exact division a/b; raises if not exact (internal use)."""
    if not a:
        return {}
    ma, mb = lp_min_exp(a), lp_min_exp(b)
    q, r = _lp_divmod_poly(lp_shift(a, -ma), lp_shift(b, -mb))
    if r:
        raise ArithmeticError("inexact Laurent division")
    out: Lp = {}
    for e, c in q.items():
        if c.denominator != 1:
            raise ArithmeticError("inexact Laurent division")
        out[e + ma - mb] = int(c)
    return out


# ---------------------------------------------------------------------------
# QScalar
# ---------------------------------------------------------------------------

class QScalar:
    """An element of Q(q^(1/l0)) in canonical form."""

    __slots__ = ("num", "den", "l0", "_hash")

    def __init__(self, num: Lp, den: Lp, l0: int, _canonical: bool = False):
        if l0 <= 0:
            raise ValueError("l0 must be a positive integer")
        if not den:
            raise ScalarDivisionError("zero denominator")
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den
        self.l0 = l0
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, l0: int) -> "QScalar":
        return cls({}, {0: 1}, l0, _canonical=True)

    @classmethod
    def one(cls, l0: int) -> "QScalar":
        return cls({0: 1}, {0: 1}, l0, _canonical=True)

    @classmethod
    def integer(cls, n: int, l0: int) -> "QScalar":
        return cls(lp_const(n), {0: 1}, l0, _canonical=True)

    @classmethod
    def q_power(cls, exp, l0: int) -> "QScalar":
        """q**exp with exp an int or Fraction whose denominator divides l0."""
        f = Fraction(exp)
        scaled = f * l0
        if scaled.denominator != 1:
            raise ValueError(f"exponent {f} not in (1/{l0})Z")
        return cls({int(scaled): 1}, {0: 1}, l0, _canonical=True)

    @classmethod
    def from_poly(cls, num: Lp, l0: int) -> "QScalar":
        return cls(dict(num), {0: 1}, l0)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == {0: 1} and self.den == {0: 1}

    def is_polynomial(self) -> bool:
        return self.den == {0: 1}

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "QScalar") -> None:
        if self.l0 != other.l0:
            raise ScalarMixError(f"l0 mismatch: {self.l0} vs {other.l0}")

    def __add__(self, other: "QScalar") -> "QScalar":
        self._check(other)
        if self.den == other.den:
            return QScalar(lp_add(self.num, other.num), dict(self.den), self.l0)
        num = lp_add(lp_mul(self.num, other.den), lp_mul(other.num, self.den))
        return QScalar(num, lp_mul(self.den, other.den), self.l0)

    def __sub__(self, other: "QScalar") -> "QScalar":
        return self + (-other)

    def __neg__(self) -> "QScalar":
        return QScalar(lp_neg(self.num), dict(self.den), self.l0, _canonical=True)

    def __mul__(self, other: "QScalar") -> "QScalar":
        self._check(other)
        if not self.num or not other.num:
            return QScalar.zero(self.l0)
        if self.is_polynomial() and other.is_polynomial():
            return QScalar(lp_mul(self.num, other.num), {0: 1}, self.l0,
                           _canonical=True)
        return QScalar(lp_mul(self.num, other.num),
                       lp_mul(self.den, other.den), self.l0)

    def inverse(self) -> "QScalar":
        if not self.num:
            raise ScalarDivisionError("inverting zero")
        return QScalar(dict(self.den), dict(self.num), self.l0)

    def __truediv__(self, other: "QScalar") -> "QScalar":
        self._check(other)
        if not other.num:
            raise ScalarDivisionError("division by zero")
        return QScalar(lp_mul(self.num, other.den),
                       lp_mul(self.den, other.num), self.l0)

    def __pow__(self, n: int) -> "QScalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = QScalar.one(self.l0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def bar(self) -> "QScalar":
        """The field automorphism q -> q**-1."""
        return QScalar({-e: c for e, c in self.num.items()},
                       {-e: c for e, c in self.den.items()}, self.l0)

    # -- comparison ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QScalar):
            return NotImplemented
        return (self.l0 == other.l0 and self.num == other.num
                and self.den == other.den)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.l0,
                               tuple(sorted(self.num.items())),
                               tuple(sorted(self.den.items()))))
        return self._hash

    # -- rendering / parsing ---------------------------------------------------

    def __repr__(self) -> str:
        return f"QScalar({self.to_str()!r}, l0={self.l0})"

    def __str__(self) -> str:
        return self.to_str()

    def to_str(self) -> str:
        num = _poly_str(self.num, self.l0)
        if self.den == {0: 1}:
            return num
        den = _poly_str(self.den, self.l0)
        return f"({num})/({den})"

    @classmethod
    def parse(cls, text: str, l0: int) -> "QScalar":
        return _parse_scalar(text, l0)


def _canonicalize(num: Lp, den: Lp) -> Tuple[Lp, Lp]:
    if not num:
        return {}, {0: 1}
    g = lp_gcd(num, den)
    if g != {0: 1}:
        num = lp_exact_div(num, g)
        den = lp_exact_div(den, g)
    # exponent normalization: pull q-power out of den so its lowest exp is 0
    md = lp_min_exp(den)
    if md:
        den = lp_shift(den, -md)
        num = lp_shift(num, -md)
    cn, cd = lp_content(num), lp_content(den)
    g2 = gcd(cn, cd)
    if g2 > 1:
        num = {e: c // g2 for e, c in num.items()}
        den = {e: c // g2 for e, c in den.items()}
    if den[lp_min_exp(den)] < 0:
        num = lp_neg(num)
        den = lp_neg(den)
    return num, den


# ---------------------------------------------------------------------------
# quantum combinatorial scalars
# ---------------------------------------------------------------------------

def quantum_integer(n: int, d: int, l0: int) -> QScalar:
    """[n] at t = q**d: the Laurent polynomial q^(d(n-1)) + ... + q^(-d(n-1))."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    poly: Lp = {}
    for k in range(n):
        e = d * (n - 1 - 2 * k) * l0
        poly[e] = poly.get(e, 0) + 1
    return QScalar.from_poly(poly, l0)


def quantum_factorial(n: int, d: int, l0: int) -> QScalar:
    out = QScalar.one(l0)
    for k in range(1, n + 1):
        out = out * quantum_integer(k, d, l0)
    return out


def exp_t_coefficient(n: int, d: int, l0: int, inverse: bool = False) -> QScalar:
    """Coefficient of x**n in exp_t(x) with t = q**d, or in its inverse
    series exp_{t^-1}(-x) when ``inverse`` is set."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if d == 0:
        raise ValueError("exp coefficient requires a nonzero scale d")
    t_exp = -d if inverse else d
    tw = QScalar.q_power(Fraction(t_exp * n * (n - 1), 2), l0)
    # [n]_t! is invariant under t -> 1/t, so the factorial may use |d|
    coeff = tw / quantum_factorial(n, abs(d), l0)
    if inverse and n % 2:
        coeff = -coeff
    return coeff


# ---------------------------------------------------------------------------
# text grammar
# ---------------------------------------------------------------------------

def _poly_str(p: Lp, l0: int) -> str:
    if not p:
        return "0"
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        if e == 0:
            term = str(abs(c))
        else:
            if e % l0 == 0:
                ex = e // l0
                base = "q" if ex == 1 else f"q^{ex}"
            else:
                f = Fraction(e, l0)
                base = f"q^({f.numerator}/{f.denominator})"
            if abs(c) == 1:
                term = base
            else:
                term = f"{abs(c)}*{base}"
        if not parts:
            parts.append(term if c > 0 else f"-{term}")
        else:
            parts.append(f" + {term}" if c > 0 else f" - {term}")
    return "".join(parts)


class _Tok:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        c = self.peek()
        self.pos += 1
        return c

    def expect(self, c: str) -> None:
        got = self.take()
        if got != c:
            raise ParseError(f"expected {c!r} at {self.pos} in {self.text!r}")

    def number(self) -> int:
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError(f"expected integer at {start} in {self.text!r}")
        return int(self.text[start:self.pos])


def _parse_scalar(text: str, l0: int) -> QScalar:
    tok = _Tok(text)
    val = _parse_sum(tok, l0)
    if tok.peek():
        raise ParseError(f"trailing input at {tok.pos} in {text!r}")
    return val


def _parse_sum(tok: _Tok, l0: int) -> QScalar:
    out = _parse_product(tok, l0)
    while tok.peek() in ("+", "-"):
        op = tok.take()
        term = _parse_product(tok, l0)
        out = out + term if op == "+" else out - term
    return out


def _parse_product(tok: _Tok, l0: int) -> QScalar:
    out = _parse_atom(tok, l0)
    while tok.peek() in ("*", "/"):
        op = tok.take()
        rhs = _parse_atom(tok, l0)
        out = out * rhs if op == "*" else out / rhs
    return out


def _parse_atom(tok: _Tok, l0: int) -> QScalar:
    c = tok.peek()
    if c == "(":
        tok.take()
        val = _parse_sum(tok, l0)
        tok.expect(")")
        return _maybe_power(tok, val, l0)
    if c == "-":
        tok.take()
        return -_parse_atom(tok, l0)
    if c == "q":
        tok.take()
        return _maybe_power(tok, QScalar.q_power(1, l0), l0)
    if c.isdigit():
        n = tok.number()
        return _maybe_power(tok, QScalar.integer(n, l0), l0)
    raise ParseError(f"unexpected {c!r} at {tok.pos} in {tok.text!r}")


def _maybe_power(tok: _Tok, base: QScalar, l0: int) -> QScalar:
    if tok.peek() != "^":
        return base
    tok.take()
    neg = False
    if tok.peek() == "(":
        tok.take()
        if tok.peek() == "-":
            tok.take()
            neg = True
        a = tok.number()
        if tok.peek() == "/":
            tok.take()
            b = tok.number()
            tok.expect(")")
            exp = Fraction(-a if neg else a, b)
            if base.num == {l0: 1} and base.is_polynomial() and len(base.num) == 1:
                return QScalar.q_power(exp, l0)
            raise ParseError("fractional exponent only allowed on q")
        tok.expect(")")
        return base ** (-a if neg else a)
    if tok.peek() == "-":
        tok.take()
        neg = True
    n = tok.number()
    return base ** (-n if neg else n)


def scalar_matrix_str(rows) -> list:
    """Render a matrix of QScalars as nested lists of grammar strings."""
    return [[s.to_str() for s in row] for row in rows]

"""Exact arithmetic in Q and in the rational function field Q(q).

A :class:`Poly` is a univariate polynomial in ``q`` with :class:`Fraction`
coefficients.  A :class:`Scalar` is a reduced quotient of two polys with a
monic denominator, so two scalars are equal exactly when their
representations are equal.

The text grammar accepted by :func:`parse_scalar` is::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' ['-' | '+'] INT)?
    atom   := INT | 'q' | '(' expr ')'
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Union

__all__ = [
    "Poly",
    "Scalar",
    "ScalarSyntaxError",
    "PoleError",
    "parse_scalar",
    "evaluate_at",
    "as_scalar",
    "Q",
    "ZERO",
    "ONE",
]


class ScalarSyntaxError(ValueError):
    """Raised when scalar text does not follow the grammar."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at column {position + 1}\n  {text}\n  {pointer}")


class PoleError(ZeroDivisionError):
    """Raised when a scalar is evaluated at a root of its denominator."""


_ZERO_F = Fraction(0)
_ONE_F = Fraction(1)


def _trim(coeffs: list) -> tuple:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Polynomial in ``q`` over Q; coefficients stored lowest degree first."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _trim([Fraction(c) for c in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        p = object.__new__(cls)
        p.coeffs = coeffs
        p._hash = None
        return p

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> "Poly":
        c = Fraction(coeff)
        if not c:
            return _PZERO
        return cls._raw((_ZERO_F,) * degree + (c,))

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else _ZERO_F

    def valuation(self) -> int:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monomial(self) -> bool:
        return bool(self.coeffs) and self.valuation() == self.degree

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _trim([Fraction(other)])
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def __neg__(self) -> "Poly":
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Poly._raw(_trim(out))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _PZERO
        if len(b) == 1:
            c = b[0]
            return Poly._raw(tuple(x * c for x in a))
        if len(a) == 1:
            c = a[0]
            return Poly._raw(tuple(c * x for x in b))
        out = [_ZERO_F] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return Poly._raw(_trim(out))

    def scale(self, c: Fraction) -> "Poly":
        if not c:
            return _PZERO
        return Poly._raw(tuple(x * c for x in self.coeffs))

    def shift(self, k: int) -> "Poly":
        """Multiply by q^k (k may be negative when the low terms vanish)."""
        if not self.coeffs or k == 0:
            return self
        if k > 0:
            return Poly._raw((_ZERO_F,) * k + self.coeffs)
        assert all(not c for c in self.coeffs[:-k]), "shift would drop terms"
        return Poly._raw(self.coeffs[-k:])

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dd = other.degree
        if len(rem) - 1 < dd:
            return _PZERO, self
        inv_lead = 1 / other.coeffs[-1]
        quot = [_ZERO_F] * (len(rem) - dd)
        dcoeffs = other.coeffs
        for k in range(len(rem) - 1 - dd, -1, -1):
            c = rem[k + dd] * inv_lead
            if c:
                quot[k] = c
                for j, y in enumerate(dcoeffs):
                    rem[k + j] -= c * y
        return Poly._raw(_trim(quot)), Poly._raw(_trim(rem[:dd]))

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        return self.scale(1 / self.coeffs[-1])

    def gcd(self, other: "Poly") -> "Poly":
        """Monic greatest common divisor (zero only when both are zero)."""
        a, b = self, other
        while b.coeffs:
            a, b = b, a % b
        return a.monic()

    def __call__(self, x):
        acc = _ZERO_F if isinstance(x, (int, Fraction)) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        return f"Poly({_format_terms([(k, c) for k, c in enumerate(self.coeffs) if c])!r})"

    def __str__(self) -> str:
        return _format_terms([(k, c) for k, c in enumerate(self.coeffs) if c])


_PZERO = Poly._raw(())
_PONE = Poly._raw((_ONE_F,))
_PQ = Poly._raw((_ZERO_F, _ONE_F))


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_terms(terms: list[tuple[int, Fraction]]) -> str:
    """Render ``sum c*q^k`` with descending exponents."""
    if not terms:
        return "0"
    parts = []
    for k, c in sorted(terms, key=lambda t: -t[0]):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if k == 0:
            body = _format_coeff(mag)
        else:
            qpart = "q" if k == 1 else f"q^{k}"
            body = qpart if mag == 1 else f"{_format_coeff(mag)}*{qpart}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


ScalarLike = Union["Scalar", int, Fraction, str]


class Scalar:
    """Element of Q(q) in reduced form ``num/den`` with ``den`` monic.

    Instances are immutable; equality and hashing are structural.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        num = num if isinstance(num, Poly) else Poly([num])
        den = den if isinstance(den, Poly) else Poly([den])
        n, d = _normalize(num, den)
        self.num = n
        self.den = d
        self._hash = None

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "Scalar":
        s = object.__new__(cls)
        s.num = num
        s.den = den
        s._hash = None
        return s

    @classmethod
    def from_fraction(cls, value) -> "Scalar":
        f = Fraction(value)
        if not f:
            return ZERO
        return cls._raw(Poly._raw((f,)), _PONE)

    @classmethod
    def from_poly(cls, p: Poly) -> "Scalar":
        return cls._raw(p, _PONE)

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num.coeffs

    def __bool__(self) -> bool:
        return bool(self.num.coeffs)

    def is_constant(self) -> bool:
        return len(self.num.coeffs) <= 1 and len(self.den.coeffs) == 1

    def is_laurent(self) -> bool:
        """True when the denominator is a power of q."""
        return self.den.is_monomial()

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        return self.num.coeffs[0] if self.num.coeffs else _ZERO_F

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        if not o.num.coeffs:
            return self
        if not self.num.coeffs:
            return o
        d1, d2 = self.den, o.den
        if len(d1.coeffs) == 1 and len(d2.coeffs) == 1:
            return _poly_scalar(self.num + o.num)
        if d1 == d2:
            return _make(self.num + o.num, d1)
        if d1.is_monomial() and d2.is_monomial():
            k1, k2 = d1.degree, d2.degree
            k = max(k1, k2)
            return _make(self.num.shift(k - k1) + o.num.shift(k - k2), d1 if k1 >= k2 else d2)
        return _make(self.num * d2 + o.num * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(-self.num, self.den)

    def __sub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        if not self.num.coeffs or not o.num.coeffs:
            return ZERO
        if len(self.den.coeffs) == 1 and len(o.den.coeffs) == 1:
            return _poly_scalar(self.num * o.num)
        if self.is_constant():
            return Scalar._raw(o.num.scale(self.num.coeffs[0]), o.den)
        if o.is_constant():
            return Scalar._raw(self.num.scale(o.num.coeffs[0]), self.den)
        return _make(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.num.coeffs:
            raise ZeroDivisionError("inverse of the zero scalar")
        return _make(self.den, self.num)

    def __truediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        if not o.num.coeffs:
            raise ZeroDivisionError("division by the zero scalar")
        if o.is_constant():
            return Scalar._raw(self.num.scale(1 / o.num.coeffs[0]), self.den)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparison -------------------------------------------------------

    def __eq__(self, other) -> bool:
        o = _coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num.coeffs == o.num.coeffs and self.den.coeffs == o.den.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.to_fraction())
            else:
                self._hash = hash((self.num.coeffs, self.den.coeffs))
        return self._hash

    # -- substitution and printing ---------------------------------------

    def evaluate_at(self, q0) -> Fraction:
        return evaluate_at(self, q0)

    def __str__(self) -> str:
        return _format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar('{self}')"


def _poly_scalar(p: Poly) -> Scalar:
    return Scalar._raw(p, _PONE) if p.coeffs else ZERO


def _normalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if not den.coeffs:
        raise ZeroDivisionError("division by the zero scalar")
    if not num.coeffs:
        return _PZERO, _PONE
    if len(den.coeffs) == 1:
        c = den.coeffs[0]
        return (num if c == 1 else num.scale(1 / c)), _PONE
    if den.is_monomial():
        k = min(den.degree, num.valuation())
        num, den = num.shift(-k), den.shift(-k)
    else:
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num // g, den // g
    lead = den.coeffs[-1]
    if lead != 1:
        inv = 1 / lead
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def _make(num: Poly, den: Poly) -> Scalar:
    n, d = _normalize(num, den)
    return Scalar._raw(n, d)


ZERO = Scalar._raw(_PZERO, _PONE)
ONE = Scalar._raw(_PONE, _PONE)
Q = Scalar._raw(_PQ, _PONE)


def _coerce(value):
    if isinstance(value, Scalar):
        return value
    if isinstance(value, bool):
        return NotImplemented
    if isinstance(value, (int, Fraction)) or isinstance(value, _RationalABC):
        return Scalar.from_fraction(value)
    if isinstance(value, Poly):
        return Scalar.from_poly(value)
    return NotImplemented


def as_scalar(value: ScalarLike) -> Scalar:
    """Coerce ints, Fractions, polys and scalar text to a :class:`Scalar`."""
    if isinstance(value, str):
        return parse_scalar(value)
    s = _coerce(value)
    if s is NotImplemented:
        raise TypeError(f"cannot interpret {value!r} as a scalar")
    return s


def _format_scalar(s: Scalar) -> str:
    num, den = s.num, s.den
    if len(den.coeffs) == 1:
        return str(num)
    if den.is_monomial():
        k = den.degree
        return _format_terms([(e - k, c) for e, c in enumerate(num.coeffs) if c])
    top = str(num)
    if len(num.coeffs) > 1 and sum(1 for c in num.coeffs if c) > 1:
        top = f"({top})"
    elif top.startswith("-"):
        top = f"({top})"
    bottom = str(den)
    if sum(1 for c in den.coeffs if c) > 1 or "*" in bottom or "^" in bottom:
        bottom = f"({bottom})"
    return f"{top}/{bottom}"


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(q)|([-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ScalarSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("q", "q", m.start(2)))
        else:
            tokens.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, tok=None):
        tok = tok or self.peek()
        raise ScalarSyntaxError(message, self.text, tok[2])

    def parse(self) -> Scalar:
        if self.peek()[0] == "end":
            self.fail("empty expression")
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return value

    def expr(self) -> Scalar:
        value = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Scalar:
        value = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ZeroDivisionError(
                        f"division by the zero scalar at column {tok[2] + 1} in {self.text!r}"
                    )
                value = value / rhs
        return value

    def unary(self) -> Scalar:
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            inner = self.unary()
            return -inner if tok[1] == "-" else inner
        return self.power()

    def power(self) -> Scalar:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            sign = 1
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                sign = -1 if tok[1] == "-" else 1
            tok = self.take()
            if tok[0] != "int":
                self.fail("exponent must be an integer", tok)
            k = sign * int(tok[1])
            if k < 0 and base.is_zero():
                raise ZeroDivisionError(f"negative power of zero at column {tok[2] + 1}")
            return base ** k
        return base

    def atom(self) -> Scalar:
        tok = self.take()
        kind, val = tok[0], tok[1]
        if kind == "int":
            return Scalar.from_fraction(int(val))
        if kind == "q":
            return Q
        if kind == "op" and val == "(":
            inner = self.expr()
            close = self.take()
            if close[:2] != ("op", ")"):
                self.fail("expected ')'", close)
            return inner
        if kind == "end":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected token {val!r}", tok)


def parse_scalar(text: str) -> Scalar:
    """Parse scalar text into its canonical reduced form.

    >>> str(parse_scalar("q - q^-1"))
    'q - q^-1'
    >>> parse_scalar("(q^2 - 1)/(q^2 + q)")
    Scalar('1 - q^-1')
    """
    return _Parser(text).parse()


def evaluate_at(s: Scalar, q0) -> Fraction:
    """Substitute the rational value ``q0`` for ``q``."""
    q0 = Fraction(q0)
    d = s.den(q0)
    if not d:
        raise PoleError(f"{s} has a pole at q = {q0}")
    return s.num(q0) / d

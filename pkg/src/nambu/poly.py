"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial on an ``m``-dimensional chart is a finite map from exponent
vectors (tuples of ``m`` non-negative ints) to nonzero ``Fraction``
coefficients.  The zero polynomial is the empty map.  All operations
normalize their result (no stored zero coefficient), so two polynomials are
equal iff their stored representations are identical.

Rational scalars are ``fractions.Fraction`` values: the stdlib type already
enforces the contract this package needs (lowest terms, positive
denominator, zero is 0/1).  It is re-exported as ``Rational``.

Variables are positional and 1-based: ``x1`` .. ``xm``.  A chart context
fixes ``m`` for every object participating in a computation.

Text grammar (used for both parsing and canonical printing)::

    expr   :=  ['-'] term (('+' | '-') term)*
    term   :=  factor (('*' | '/') factor)*
    factor :=  base ('^' INT)?
    base   :=  INT | VAR | '(' expr ')'
    VAR    :=  'x' INT          (1-based index, 'x1' .. 'x9', 'x10', ...)

Division is restricted to nonzero constant divisors, which is enough for
rational literals like ``3/4`` or ``(x1+1)/2``.  Canonical printing orders
terms by graded lexicographic order, highest first (``x1`` dominates).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence, Union

from .errors import ChartMismatchError, ParseError

Rational = Fraction

_Scalar = Union[int, Fraction]


def _grlex_key(exponents: tuple[int, ...]) -> tuple:
    # Ascending order: constants first, x1 before x2, x1^2 before x1*x2.
    return (sum(exponents), tuple(-e for e in exponents))


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("num_vars", "terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping[tuple[int, ...], _Scalar] | None = None):
        if num_vars < 1:
            raise ValueError(f"num_vars must be positive, got {num_vars}")
        normalized: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in (terms or {}).items():
            if len(exps) != num_vars:
                raise ChartMismatchError(
                    f"exponent vector {exps} has length {len(exps)}, expected {num_vars}"
                )
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            value = Fraction(coeff)
            if value:
                normalized[tuple(exps)] = value
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "terms", normalized)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int) -> Polynomial:
        return cls(num_vars)

    @classmethod
    def constant(cls, num_vars: int, value: _Scalar) -> Polynomial:
        return cls(num_vars, {(0,) * num_vars: Fraction(value)})

    @classmethod
    def one(cls, num_vars: int) -> Polynomial:
        return cls.constant(num_vars, 1)

    @classmethod
    def variable(cls, num_vars: int, index: int) -> Polynomial:
        """The coordinate function ``x<index>`` (1-based)."""
        if not 1 <= index <= num_vars:
            raise ChartMismatchError(f"variable index {index} outside 1..{num_vars}")
        exps = [0] * num_vars
        exps[index - 1] = 1
        return cls(num_vars, {tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff: _Scalar = 1) -> Polynomial:
        return cls(len(exponents), {tuple(exponents): Fraction(coeff)})

    # -- ring operations ---------------------------------------------------

    def _check_chart(self, other: Polynomial) -> None:
        if self.num_vars != other.num_vars:
            raise ChartMismatchError(
                f"chart dimension mismatch: {self.num_vars} vs {other.num_vars}"
            )

    def __add__(self, other: Polynomial | _Scalar) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.num_vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_chart(other)
        result = dict(self.terms)
        for exps, coeff in other.terms.items():
            acc = result.get(exps)
            if acc is None:
                result[exps] = coeff
            else:
                acc = acc + coeff
                if acc:
                    result[exps] = acc
                else:
                    del result[exps]
        return self._wrap(result)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return self._wrap({exps: -coeff for exps, coeff in self.terms.items()})

    def __sub__(self, other: Polynomial | _Scalar) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.num_vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: _Scalar) -> Polynomial:
        return (-self) + other

    def __mul__(self, other: Polynomial | _Scalar) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            scalar = Fraction(other)
            if not scalar:
                return Polynomial.zero(self.num_vars)
            return self._wrap({e: c * scalar for e, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_chart(other)
        result: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                acc = result.get(key)
                if acc is None:
                    result[key] = ca * cb
                else:
                    acc = acc + ca * cb
                    if acc:
                        result[key] = acc
                    else:
                        del result[key]
        return self._wrap(result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Polynomial:
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.one(self.num_vars)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def _wrap(self, terms: dict[tuple[int, ...], Fraction]) -> Polynomial:
        # Internal fast path: ``terms`` is already normalized.
        poly = Polynomial.__new__(Polynomial)
        object.__setattr__(poly, "num_vars", self.num_vars)
        object.__setattr__(poly, "terms", terms)
        object.__setattr__(poly, "_hash", None)
        return poly

    # -- calculus ----------------------------------------------------------

    def diff(self, index: int) -> Polynomial:
        """Formal partial derivative with respect to ``x<index>`` (1-based)."""
        if not 1 <= index <= self.num_vars:
            raise ChartMismatchError(f"variable index {index} outside 1..{self.num_vars}")
        i = index - 1
        result: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in self.terms.items():
            e = exps[i]
            if e:
                key = exps[:i] + (e - 1,) + exps[i + 1 :]
                result[key] = coeff * e
        return self._wrap(result)

    def evaluate(self, point: Sequence[_Scalar]) -> Fraction:
        """Exact evaluation at a rational point."""
        if len(point) != self.num_vars:
            raise ChartMismatchError(
                f"point has {len(point)} coordinates, expected {self.num_vars}"
            )
        values = [Fraction(v) for v in point]
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            term = coeff
            for value, e in zip(values, exps):
                if e:
                    term *= value**e
            total += term
        return total

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(exps) for exps in self.terms)

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial."""
        if not self.terms:
            return Fraction(0)
        [(exps, coeff)] = self.terms.items()
        if any(exps):
            raise ValueError(f"{self} is not constant")
        return coeff

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(exps) for exps in self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.num_vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.num_vars, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"Polynomial({self.num_vars}, {self})"

    def __str__(self) -> str:
        return format_polynomial(self)


# -- canonical printing ------------------------------------------------------


def _format_monomial(exponents: tuple[int, ...]) -> str:
    parts = []
    for i, e in enumerate(exponents, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def _format_coefficient(coeff: Fraction) -> str:
    return str(coeff)  # Fraction prints "a/b" or "a", already in lowest terms


def format_polynomial(poly: Polynomial) -> str:
    """Canonical text form, graded-lexicographic order, highest term first."""
    if not poly.terms:
        return "0"
    ordered = sorted(
        poly.terms.items(),
        key=lambda item: (-sum(item[0]), tuple(-e for e in item[0])),
    )
    pieces: list[str] = []
    for exps, coeff in ordered:
        monomial = _format_monomial(exps)
        magnitude = abs(coeff)
        if monomial and magnitude == 1:
            body = monomial
        elif monomial:
            body = f"{_format_coefficient(magnitude)}*{monomial}"
        else:
            body = _format_coefficient(magnitude)
        if not pieces:
            pieces.append(body if coeff > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(pieces)


# -- parsing -----------------------------------------------------------------


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(message, location=f"column {self.pos + 1}")

    def peek(self) -> str | None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def take_int(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer")
        return int(self.text[start : self.pos])


def parse_polynomial(text: str, num_vars: int) -> Polynomial:
    """Parse ``text`` in the expression grammar on an ``num_vars``-dim chart."""
    tokens = _Tokenizer(text)
    result = _parse_expr(tokens, num_vars)
    if tokens.peek() is not None:
        raise tokens.error(f"unexpected character {tokens.text[tokens.pos]!r}")
    return result


def _parse_expr(tok: _Tokenizer, num_vars: int) -> Polynomial:
    ch = tok.peek()
    negate = False
    if ch == "-":
        tok.pos += 1
        negate = True
    elif ch == "+":
        tok.pos += 1
    result = _parse_term(tok, num_vars)
    if negate:
        result = -result
    while True:
        ch = tok.peek()
        if ch == "+":
            tok.pos += 1
            result = result + _parse_term(tok, num_vars)
        elif ch == "-":
            tok.pos += 1
            result = result - _parse_term(tok, num_vars)
        else:
            return result


def _parse_term(tok: _Tokenizer, num_vars: int) -> Polynomial:
    result = _parse_factor(tok, num_vars)
    while True:
        ch = tok.peek()
        if ch == "*":
            tok.pos += 1
            result = result * _parse_factor(tok, num_vars)
        elif ch == "/":
            tok.pos += 1
            divisor = _parse_factor(tok, num_vars)
            if not divisor.is_constant():
                raise tok.error("division is only defined by nonzero constants")
            value = divisor.constant_value()
            if not value:
                raise tok.error("division by zero")
            result = result * (1 / value)
        else:
            return result


def _parse_factor(tok: _Tokenizer, num_vars: int) -> Polynomial:
    base = _parse_base(tok, num_vars)
    if tok.peek() == "^":
        tok.pos += 1
        if tok.peek() is None or not tok.text[tok.pos].isdigit():
            raise tok.error("exponent must be a non-negative integer")
        return base ** tok.take_int()
    return base


def _parse_base(tok: _Tokenizer, num_vars: int) -> Polynomial:
    ch = tok.peek()
    if ch is None:
        raise tok.error("unexpected end of expression")
    if ch == "(":
        tok.pos += 1
        inner = _parse_expr(tok, num_vars)
        if tok.peek() != ")":
            raise tok.error("expected ')'")
        tok.pos += 1
        return inner
    if ch == "-":
        tok.pos += 1
        return -_parse_base(tok, num_vars)
    if ch == "x":
        tok.pos += 1
        index = tok.take_int()
        if not 1 <= index <= num_vars:
            raise tok.error(f"variable x{index} outside chart of dimension {num_vars}")
        return Polynomial.variable(num_vars, index)
    if ch.isdigit():
        return Polynomial.constant(num_vars, tok.take_int())
    raise tok.error(f"unexpected character {ch!r}")


def jet_exponents(num_vars: int, max_degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= max_degree, ascending grlex order.

    This is the pinned enumeration order for all verifier sweeps: the
    constant monomial first, then x1, x2, ..., then x1^2, x1*x2, ...
    """
    if max_degree < 0:
        return []
    out: list[tuple[int, ...]] = []

    def extend(prefix: list[int], budget: int, slots: int) -> None:
        if slots == 0:
            out.append(tuple(prefix))
            return
        for e in range(budget + 1):
            prefix.append(e)
            extend(prefix, budget - e, slots - 1)
            prefix.pop()

    extend([], max_degree, num_vars)
    return sorted(out, key=_grlex_key)


def jet_monomials(num_vars: int, max_degree: int) -> list[Polynomial]:
    """Monomial test functions x^gamma with |gamma| <= max_degree."""
    return [Polynomial.monomial(exps) for exps in jet_exponents(num_vars, max_degree)]

"""Exact arithmetic kernel: sparse polynomials in (lambda, y, x) over the
rationals, truncated power series with polynomial coefficients, and the
composition/multinomial counting helpers everything else is built on.

All values are immutable after construction and every operation is a pure
function, so results can be shared freely across concurrent workers.
Polynomials are always kept in canonical form (no stored zero coefficients),
which makes structural equality coincide with mathematical equality.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator, Mapping, Sequence, Union

# The ground ring.  fractions.Fraction already guarantees lowest terms and a
# positive denominator, which is exactly the Rational contract we need.
Rational = Fraction

Scalar = Union[Rational, int]

#: Variable order is fixed: exponent triples are (lambda, y, x).
VARIABLES = ("lambda", "y", "x")
_VAR_INDEX = {"lambda": 0, "y": 1, "x": 2}
_GLYPH = ("λ", "y", "x")

Exponent = tuple[int, int, int]


class OrderMismatchError(ValueError):
    """Two truncated series of different orders were combined."""


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected a rational scalar, got {type(value).__name__}")


class MPoly:
    """Sparse polynomial in lambda (degeneracy parameter), y (Bell variable)
    and x (falling-factorial base) with exact rational coefficients.

    The term map goes from exponent triples to nonzero Fraction coefficients;
    two MPoly values are equal iff they are structurally identical.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Scalar] | None = None):
        cleaned: dict[Exponent, Fraction] = {}
        if terms:
            for expo, coeff in terms.items():
                frac = _as_fraction(coeff)
                if frac:
                    cleaned[expo] = frac
        self._terms = cleaned
        self._hash: int | None = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def const(cls, value: Scalar) -> "MPoly":
        return cls({(0, 0, 0): _as_fraction(value)})

    @classmethod
    def variable(cls, name: str) -> "MPoly":
        if name not in _VAR_INDEX:
            raise ValueError(f"unknown variable {name!r}; expected one of {VARIABLES}")
        expo = [0, 0, 0]
        expo[_VAR_INDEX[name]] = 1
        return cls({tuple(expo): Fraction(1)})

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> Mapping[Exponent, Fraction]:
        return self._terms

    def degree(self, name: str) -> int:
        """Highest power of one variable (0 for the zero polynomial)."""
        idx = _VAR_INDEX[name]
        return max((e[idx] for e in self._terms), default=0)

    def coeff_of(self, name: str, power: int) -> "MPoly":
        """Coefficient of name**power, as a polynomial in the other variables."""
        idx = _VAR_INDEX[name]
        picked: dict[Exponent, Fraction] = {}
        for expo, coeff in self._terms.items():
            if expo[idx] == power:
                reduced = list(expo)
                reduced[idx] = 0
                picked[tuple(reduced)] = coeff
        return MPoly(picked)

    def constant(self) -> Fraction:
        """The value of a constant polynomial; raises if any variable occurs."""
        for expo in self._terms:
            if expo != (0, 0, 0):
                raise ValueError(f"polynomial is not constant: {self}")
        return self._terms.get((0, 0, 0), Fraction(0))

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other: "MPoly | Scalar") -> "MPoly | None":
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly({(0, 0, 0): other})
        return None

    def __add__(self, other: "MPoly | Scalar") -> "MPoly":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        out = dict(self._terms)
        for expo, coeff in rhs._terms.items():
            acc = out.get(expo, Fraction(0)) + coeff
            if acc:
                out[expo] = acc
            else:
                out.pop(expo, None)
        result = MPoly.__new__(MPoly)
        result._terms = out
        result._hash = None
        return result

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        result = MPoly.__new__(MPoly)
        result._terms = {e: -c for e, c in self._terms.items()}
        result._hash = None
        return result

    def __sub__(self, other: "MPoly | Scalar") -> "MPoly":
        rhs = self._coerce(other)
        if rhs is None:
            return NotImplemented
        return self + (-rhs)

    def __rsub__(self, other: "MPoly | Scalar") -> "MPoly":
        return -(self - other)

    def __mul__(self, other: "MPoly | Scalar") -> "MPoly":
        if isinstance(other, (int, Fraction)):
            frac = _as_fraction(other)
            if not frac:
                return ZERO
            result = MPoly.__new__(MPoly)
            result._terms = {e: c * frac for e, c in self._terms.items()}
            result._hash = None
            return result
        if not isinstance(other, MPoly):
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                expo = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
                acc = out.get(expo, Fraction(0)) + ca * cb
                if acc:
                    out[expo] = acc
                else:
                    del out[expo]
        result = MPoly.__new__(MPoly)
        result._terms = out
        result._hash = None
        return result

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> "MPoly":
        return self * (Fraction(1) / _as_fraction(scalar))

    def __pow__(self, n: int) -> "MPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def substitute(self, bindings: Mapping[str, "MPoly | Scalar"]) -> "MPoly":
        """Simultaneous substitution of variables by polynomials or scalars."""
        for name in bindings:
            if name not in _VAR_INDEX:
                raise ValueError(f"unknown variable {name!r} in substitution")
        images: dict[int, MPoly] = {
            _VAR_INDEX[name]: (val if isinstance(val, MPoly) else MPoly.const(val))
            for name, val in bindings.items()
        }
        total = ZERO
        for expo, coeff in self._terms.items():
            residual = [0, 0, 0]
            factor = MPoly({(0, 0, 0): coeff})
            for idx in range(3):
                if expo[idx] == 0:
                    continue
                if idx in images:
                    factor = factor * images[idx] ** expo[idx]
                else:
                    residual[idx] = expo[idx]
            if residual != [0, 0, 0]:
                factor = factor * MPoly({tuple(residual): Fraction(1)})
            total = total + factor
        return total

    # -- equality / hashing --------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == MPoly._coerce(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- rendering -----------------------------------------------------------

    def __str__(self) -> str:
        return render_poly(self)

    def __repr__(self) -> str:
        return f"MPoly({render_poly(self)!r})"


ZERO = MPoly()
ONE = MPoly.const(1)
LAM = MPoly.variable("lambda")
Y = MPoly.variable("y")
X = MPoly.variable("x")


def _fmt_scalar(value: Fraction) -> str:
    return str(value)  # "a" or "a/b"; Fraction guarantees lowest terms


def _fmt_lambda_term(coeff: Fraction, power: int) -> str:
    if power == 0:
        return _fmt_scalar(coeff)
    glyph = "λ" if power == 1 else f"λ^{power}"
    if coeff == 1:
        return glyph
    if coeff == -1:
        return "-" + glyph
    return f"{_fmt_scalar(coeff)}·{glyph}"


def _join_signed(pieces: Sequence[str]) -> str:
    out = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


def _fmt_lambda_poly(coeffs: dict[int, Fraction]) -> str:
    return _join_signed([_fmt_lambda_term(coeffs[p], p) for p in sorted(coeffs)])


def render_poly(poly: MPoly) -> str:
    """Canonical text form used in reports, JSON output and golden files.

    Monomials in (y, x) are listed in descending degree order; the rational
    coefficient of each monomial is a polynomial in λ, written ascending in λ
    and parenthesized when it has more than one term, e.g. "y^2 + (1 - λ)·y".
    """
    if poly.is_zero:
        return "0"
    groups: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (el, ey, ex), coeff in poly.terms().items():
        groups.setdefault((ey, ex), {})[el] = coeff
    pieces = []
    for ey, ex in sorted(groups, reverse=True):
        lam_poly = groups[(ey, ex)]
        mono_parts = []
        if ey:
            mono_parts.append("y" if ey == 1 else f"y^{ey}")
        if ex:
            mono_parts.append("x" if ex == 1 else f"x^{ex}")
        mono = "·".join(mono_parts)
        if not mono:
            pieces.append(_fmt_lambda_poly(lam_poly))
        elif len(lam_poly) == 1:
            ((power, coeff),) = lam_poly.items()
            if power == 0 and coeff == 1:
                pieces.append(mono)
            elif power == 0 and coeff == -1:
                pieces.append("-" + mono)
            else:
                pieces.append(f"{_fmt_lambda_term(coeff, power)}·{mono}")
        else:
            pieces.append(f"({_fmt_lambda_poly(lam_poly)})·{mono}")
    return _join_signed(pieces)


class TruncSeries:
    """Power series in a formal variable truncated at a fixed order, with
    MPoly coefficients: represents sum_{n=0..order} coeffs[n] t^n.

    All arithmetic truncates consistently at the common order; combining two
    series of different orders raises OrderMismatchError.  Reading a
    coefficient beyond the truncation order is a programming error and is
    rejected outright.
    """

    __slots__ = ("order", "_coeffs")

    def __init__(self, order: int, coeffs: Sequence[MPoly | Scalar] = ()):
        if order < 0:
            raise ValueError("series order must be nonnegative")
        if len(coeffs) > order + 1:
            raise ValueError(f"got {len(coeffs)} coefficients for order {order}")
        padded = [c if isinstance(c, MPoly) else MPoly.const(c) for c in coeffs]
        padded.extend([ZERO] * (order + 1 - len(padded)))
        self.order = order
        self._coeffs = padded

    @classmethod
    def one(cls, order: int) -> "TruncSeries":
        return cls(order, [ONE])

    def coeff(self, n: int) -> MPoly:
        if not 0 <= n <= self.order:
            raise IndexError(f"coefficient {n} outside truncation order {self.order}")
        return self._coeffs[n]

    def _check_order(self, other: "TruncSeries") -> None:
        if self.order != other.order:
            raise OrderMismatchError(
                f"cannot mix series of orders {self.order} and {other.order}"
            )

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._check_order(other)
        return TruncSeries(
            self.order, [a + b for a, b in zip(self._coeffs, other._coeffs)]
        )

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._check_order(other)
        return TruncSeries(
            self.order, [a - b for a, b in zip(self._coeffs, other._coeffs)]
        )

    def __mul__(self, other: "TruncSeries | MPoly | Scalar") -> "TruncSeries":
        if isinstance(other, (MPoly, int, Fraction)):
            return TruncSeries(self.order, [c * other for c in self._coeffs])
        if not isinstance(other, TruncSeries):
            return NotImplemented
        self._check_order(other)
        out = [ZERO] * (self.order + 1)
        for i, a in enumerate(self._coeffs):
            if a.is_zero:
                continue
            for j in range(self.order + 1 - i):
                b = other._coeffs[j]
                if not b.is_zero:
                    out[i + j] = out[i + j] + a * b
        return TruncSeries(self.order, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TruncSeries":
        if not isinstance(n, int) or n < 0:
            raise ValueError("series powers must be nonnegative integers")
        result = TruncSeries.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exp(self) -> "TruncSeries":
        """exp of a series with zero constant term, computed exactly as
        sum_k self**k / k! (only k <= order contributes)."""
        if not self.coeff(0).is_zero:
            raise ValueError("series exp requires a zero constant term")
        acc = TruncSeries.one(self.order)
        term = TruncSeries.one(self.order)
        for k in range(1, self.order + 1):
            term = term * self * Fraction(1, k)
            acc = acc + term
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self.order == other.order and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self.order, tuple(self._coeffs)))

    def __repr__(self) -> str:
        inner = " + ".join(
            f"({c}){'' if n == 0 else f'·t^{n}'}"
            for n, c in enumerate(self._coeffs)
            if not c.is_zero
        )
        return f"TruncSeries[{self.order}]({inner or '0'})"


# -- combinatorial counting --------------------------------------------------


def compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Ordered k-tuples of positive integers summing to n, in lexicographic
    order.  For k=0 yields the empty tuple iff n=0."""
    if n < 0 or k < 0:
        raise ValueError("compositions requires nonnegative n and k")
    if k == 0:
        if n == 0:
            yield ()
        return
    if k == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in compositions(n - first, k - 1):
            yield (first,) + rest


def binomial(n: int, k: int) -> int:
    """Generalized binomial coefficient: n may be any integer, k >= 0."""
    if k < 0:
        raise ValueError("binomial requires k >= 0")
    num = 1
    for i in range(k):
        num *= n - i
    quot, rem = divmod(num, math.factorial(k))
    assert rem == 0
    return quot


def multinomial(n: int, parts: Sequence[int]) -> int:
    """Multinomial coefficient n! / (l_1! ... l_k!); parts must sum to n."""
    if n < 0 or any(p < 0 for p in parts):
        raise ValueError("multinomial requires nonnegative arguments")
    if sum(parts) != n:
        raise ValueError(f"multinomial parts {tuple(parts)} do not sum to {n}")
    out = math.factorial(n)
    for p in parts:
        out //= math.factorial(p)
    return out

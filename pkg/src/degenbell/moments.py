"""Discrete random-variable models with exact rational raw moments, and the
derived degenerate moments E[(Y)_{n,λ}] and truncated EGF E[e_λ^Y(t)].

Supported models (mini-grammar used by the CLI and config files):

    point:1    point:3/2    bernoulli:1/2    binomial:5:1/3
    poisson:2/3    geometric:1/4    finite:{1:1/3,2:2/3}

Geometric is supported on {1, 2, ...} (number of trials up to and including
the first success); the shifted variant on {0, 1, ...} is deliberately not
offered to avoid ambiguity.  All moments are exact rationals of every order;
memoization is per-model and write-once, so models behave as pure values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Iterable

from .algebra import MPoly, Scalar, TruncSeries, X
from .bell import deg_falling
from .classical import stirling2


class RVParseError(ValueError):
    """A random-variable spec string failed to parse; names the bad token."""


_KINDS = ("point", "finite", "bernoulli", "binomial", "poisson", "geometric")


@dataclass(frozen=True)
class RandomVariable:
    """A named discrete distribution with exact rational raw moments.

    `params` holds the kind-specific scalars; `atoms` is the (value, prob)
    support of a finite model, sorted by value.  Instances are immutable and
    hashable, which is what makes the write-once moment caches safe.
    """

    kind: str
    params: tuple[Fraction, ...] = ()
    atoms: tuple[tuple[Fraction, Fraction], ...] = ()

    # -- constructors (validate the spec invariants) ------------------------

    @classmethod
    def point(cls, c: Scalar) -> "RandomVariable":
        return cls("point", (Fraction(c),))

    @classmethod
    def finite(cls, atoms: Iterable[tuple[Scalar, Scalar]]) -> "RandomVariable":
        pairs = sorted((Fraction(v), Fraction(p)) for v, p in atoms)
        if not pairs:
            raise ValueError("finite model needs at least one atom")
        if len({v for v, _ in pairs}) != len(pairs):
            raise ValueError("finite model atoms must have distinct values")
        if any(p <= 0 for _, p in pairs):
            raise ValueError("finite model probabilities must be positive")
        if sum(p for _, p in pairs) != 1:
            raise ValueError("finite model probabilities must sum to 1")
        return cls("finite", (), tuple(pairs))

    @classmethod
    def bernoulli(cls, p: Scalar) -> "RandomVariable":
        p = Fraction(p)
        if not 0 < p <= 1:
            raise ValueError("bernoulli requires 0 < p <= 1")
        return cls("bernoulli", (p,))

    @classmethod
    def binomial(cls, n: int, p: Scalar) -> "RandomVariable":
        p = Fraction(p)
        if not isinstance(n, int) or n < 0:
            raise ValueError("binomial requires an integer trial count n >= 0")
        if not 0 <= p <= 1:
            raise ValueError("binomial requires 0 <= p <= 1")
        return cls("binomial", (Fraction(n), p))

    @classmethod
    def poisson(cls, alpha: Scalar) -> "RandomVariable":
        alpha = Fraction(alpha)
        if alpha <= 0:
            raise ValueError("poisson requires alpha > 0")
        return cls("poisson", (alpha,))

    @classmethod
    def geometric(cls, p: Scalar) -> "RandomVariable":
        p = Fraction(p)
        if not 0 < p <= 1:
            raise ValueError("geometric requires 0 < p <= 1")
        return cls("geometric", (p,))

    # -- presentation --------------------------------------------------------

    def spec(self) -> str:
        """Round-trippable mini-grammar form, e.g. "binomial:5:1/3"."""
        if self.kind == "finite":
            inner = ",".join(f"{v}:{p}" for v, p in self.atoms)
            return "finite:{" + inner + "}"
        if self.kind == "binomial":
            n, p = self.params
            return f"binomial:{n.numerator}:{p}"
        return f"{self.kind}:{self.params[0]}"

    @property
    def has_negative_support(self) -> bool:
        """True for models carrying negative atoms; the paper's worked cases
        are all nonnegative, so reports flag these."""
        if self.kind == "point":
            return self.params[0] < 0
        if self.kind == "finite":
            return any(v < 0 for v, _ in self.atoms)
        return False

    def __str__(self) -> str:
        return self.spec()


def _parse_fraction(token: str) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise RVParseError(f"bad rational {token!r}") from None


def parse_rv(text: str) -> RandomVariable:
    """Parse the RV mini-grammar; errors name the offending token."""
    kind, sep, rest = text.partition(":")
    if not sep:
        raise RVParseError(f"bad rv spec {text!r}: expected kind:params")
    if kind not in _KINDS:
        raise RVParseError(f"unknown rv kind {kind!r}")
    try:
        if kind == "finite":
            if not (rest.startswith("{") and rest.endswith("}")):
                raise RVParseError(f"bad finite support {rest!r}: expected {{v:p,...}}")
            atoms = []
            for item in rest[1:-1].split(","):
                value, sep, prob = item.partition(":")
                if not sep:
                    raise RVParseError(f"bad finite atom {item!r}: expected value:prob")
                atoms.append((_parse_fraction(value), _parse_fraction(prob)))
            return RandomVariable.finite(atoms)
        if kind == "binomial":
            n_str, sep, p_str = rest.partition(":")
            if not sep:
                raise RVParseError(f"bad binomial params {rest!r}: expected N:p")
            if not n_str.isdigit():
                raise RVParseError(f"bad binomial trial count {n_str!r}")
            return RandomVariable.binomial(int(n_str), _parse_fraction(p_str))
        value = _parse_fraction(rest)
        return getattr(RandomVariable, kind)(value)
    except ValueError as exc:
        if isinstance(exc, RVParseError):
            raise
        raise RVParseError(f"invalid parameters in {text!r}: {exc}") from None


# -- raw moments ---------------------------------------------------------------


@cache
def raw_moment(rv: RandomVariable, m: int) -> Fraction:
    """E[Y^m], exactly.

    Finite-support models use the direct sum.  Poisson uses the Touchard
    expansion E[Y^m] = sum_k S(m,k) alpha^k; geometric converts its factorial
    moments m! (1-p)^(m-1) / p^m through the same classical Stirling numbers.
    """
    if m < 0:
        raise ValueError("moment order must be nonnegative")
    if m == 0:
        return Fraction(1)
    if rv.kind == "point":
        return rv.params[0] ** m
    if rv.kind == "finite":
        return sum((p * v**m for v, p in rv.atoms), Fraction(0))
    if rv.kind == "bernoulli":
        return rv.params[0]
    if rv.kind == "binomial":
        n, p = rv.params
        n = int(n)
        q = 1 - p
        return sum(
            (math.comb(n, j) * p**j * q ** (n - j) * Fraction(j) ** m for j in range(n + 1)),
            Fraction(0),
        )
    if rv.kind == "poisson":
        alpha = rv.params[0]
        return sum((stirling2(m, k) * alpha**k for k in range(1, m + 1)), Fraction(0))
    if rv.kind == "geometric":
        p = rv.params[0]
        q = 1 - p

        def factorial_moment(k: int) -> Fraction:
            # E[(Y)_k] for Y on {1,2,...}
            if k == 0:
                return Fraction(1)
            return math.factorial(k) * q ** (k - 1) / p**k

        return sum(
            (stirling2(m, k) * factorial_moment(k) for k in range(1, m + 1)),
            Fraction(0),
        )
    raise ValueError(f"unknown rv kind {rv.kind!r}")


def _reduce_x_powers(poly: MPoly, rv: RandomVariable) -> MPoly:
    """Apply E[·] termwise to a polynomial in x (and λ): x^j -> E[Y^j]."""
    out = MPoly()
    for j in range(poly.degree("x") + 1):
        c = poly.coeff_of("x", j)
        if not c.is_zero:
            out = out + c * raw_moment(rv, j)
    return out


@cache
def deg_moment(rv: RandomVariable, n: int) -> MPoly:
    """E[(Y)_{n,λ}]: expand the degenerate falling factorial in powers of x
    and reduce via raw moments.  Exact polynomial in λ."""
    return _reduce_x_powers(deg_falling(X, n), rv)


@cache
def joint_deg_moment(rv: RandomVariable, j: int, l: int) -> MPoly:
    """E[(Y)_{j,λ} (Y)_{l,λ}]: the per-copy factor of the mixed expectations."""
    return _reduce_x_powers(deg_falling(X, j) * deg_falling(X, l), rv)


@cache
def power_deg_moment(rv: RandomVariable, a: int, l: int) -> MPoly:
    """E[Y^a (Y)_{l,λ}], used by the direct-expansion oracle."""
    return _reduce_x_powers(X**a * deg_falling(X, l), rv)


def egf_truncated(rv: RandomVariable, order: int) -> TruncSeries:
    """Truncation of E[e_λ^Y(t)]: coefficient of t^n is E[(Y)_{n,λ}] / n!."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    coeffs = [deg_moment(rv, n) / math.factorial(n) for n in range(order + 1)]
    return TruncSeries(order, coeffs)


#: The rv suite every identity is verified against by default.
STANDARD_SUITE_SPECS = (
    "point:1",
    "point:3/2",
    "bernoulli:1/2",
    "finite:{1:1/3,2:2/3}",
    "poisson:1",
    "geometric:1/2",
)


def standard_suite() -> tuple[RandomVariable, ...]:
    return tuple(parse_rv(s) for s in STANDARD_SUITE_SPECS)

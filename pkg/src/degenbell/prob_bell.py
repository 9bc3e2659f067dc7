"""The probabilistic degenerate family associated with a random variable Y:
Stirling numbers, Bell and r-Bell polynomials, and the mixed expectations over
partial sums S_k = Y_1 + ... + Y_k that power the Spivey-type relations.

Independence of the copies Y_i is exploited structurally throughout: every
expectation factors into per-copy moments, so no joint distribution object
ever exists.  Each quantity that matters comes in two independently derived
routes (a generating-series route and a direct expansion), which the test
suite and the identity verifier hold against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Iterator

from .algebra import LAM, MPoly, TruncSeries, X, Y, ZERO, binomial, multinomial
from .bell import deg_exp_series, deg_falling
from .moments import (
    RandomVariable,
    deg_moment,
    egf_truncated,
    joint_deg_moment,
    power_deg_moment,
)


@dataclass(frozen=True)
class MixedExpectationSpec:
    """Parameters of the bracketed expectation E[(S_k - nλ)_{j,λ} Π (Y_i)_{l_i,λ}].

    `parts` are the k positive falling-factorial orders attached to the k
    independent copies; `shift_n` is the n in the -nλ shift; `j` is the order
    of the outer degenerate falling factorial.
    """

    rv: RandomVariable
    k: int
    parts: tuple[int, ...]
    shift_n: int
    j: int

    def __post_init__(self):
        if len(self.parts) != self.k:
            raise ValueError(f"expected {self.k} parts, got {len(self.parts)}")
        if any(p < 1 for p in self.parts):
            raise ValueError("parts must be positive integers")
        if self.k < 0 or self.shift_n < 0 or self.j < 0:
            raise ValueError("k, shift_n and j must be nonnegative")


@cache
def _sk_mixed(rv: RandomVariable, parts: tuple[int, ...], shift_n: int, j: int) -> MPoly:
    # Generating series in x:  Π_i A_{l_i}(x) · (1+λx)^{-n}, where
    # A_l(x) = Σ_m E[(Y)_{m,λ}(Y)_{l,λ}] x^m/m! and the last factor is the
    # generalized-binomial expansion of e_λ^{-nλ}(x).  The answer is j!·[x^j].
    prod = TruncSeries(
        j, [LAM**i * Fraction(binomial(-shift_n, i)) for i in range(j + 1)]
    )
    for l in parts:
        factor = TruncSeries(
            j, [joint_deg_moment(rv, m, l) / math.factorial(m) for m in range(j + 1)]
        )
        prod = prod * factor
    return prod.coeff(j) * math.factorial(j)


def sk_mixed_expectation(spec: MixedExpectationSpec) -> MPoly:
    """E[(S_k - nλ)_{j,λ} Π_i (Y_i)_{l_i,λ}] by the EGF-product route."""
    # The value only depends on the multiset of parts, so cache on sorted parts.
    return _sk_mixed(spec.rv, tuple(sorted(spec.parts)), spec.shift_n, spec.j)


def _weak_compositions(total: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _weak_compositions(total - first, k - 1):
            yield (first,) + rest


def sk_mixed_expectation_direct(spec: MixedExpectationSpec) -> MPoly:
    """Independent oracle: expand (x - nλ)_{j,λ} in powers of x, expand S_k^p
    by the multinomial theorem, and reduce through per-copy mixed moments."""
    expanded = deg_falling(X - LAM * spec.shift_n, spec.j)
    total = ZERO
    for p in range(expanded.degree("x") + 1):
        c = expanded.coeff_of("x", p)
        if c.is_zero:
            continue
        inner = ZERO
        for powers in _weak_compositions(p, spec.k):
            term = MPoly.const(multinomial(p, powers))
            for a, l in zip(powers, spec.parts):
                term = term * power_deg_moment(spec.rv, a, l)
            inner = inner + term
        total = total + c * inner
    return total


@cache
def _prob_stirling_row(rv: RandomVariable, n: int) -> tuple[MPoly, ...]:
    # {n k}_{Y,λ} = (n!/k!) [t^n] (E[e_λ^Y(t)] - 1)^k, all k at once.
    g = egf_truncated(rv, n) - TruncSeries.one(n)
    row = []
    power = TruncSeries.one(n)
    for k in range(n + 1):
        if k:
            power = power * g
        row.append(power.coeff(n) * Fraction(math.factorial(n), math.factorial(k)))
    return tuple(row)


def prob_stirling2_deg(rv: RandomVariable, n: int, k: int) -> MPoly:
    """Probabilistic degenerate Stirling number associated with Y (poly in λ)."""
    if n < 0 or k < 0:
        raise ValueError("prob_stirling2_deg requires nonnegative indices")
    if k > n:
        return ZERO
    return _prob_stirling_row(rv, n)[k]


def prob_stirling2_deg_alternating(rv: RandomVariable, n: int, k: int) -> MPoly:
    """Oracle route: (1/k!) sum_l C(k,l) (-1)^(k-l) E[(S_l)_{n,λ}], where
    E[(S_l)_{n,λ}] = n! [t^n] E[e_λ^Y(t)]^l by independence."""
    if k > n:
        return ZERO
    egf = egf_truncated(rv, n)
    total = ZERO
    power = TruncSeries.one(n)
    for l in range(k + 1):
        if l:
            power = power * egf
        total = total + power.coeff(n) * ((-1) ** (k - l) * math.comb(k, l))
    return total * Fraction(math.factorial(n), math.factorial(k))


@cache
def prob_bell_deg(rv: RandomVariable, n: int) -> MPoly:
    """Probabilistic degenerate Bell polynomial sum_k {n k}_{Y,λ} y^k."""
    row = _prob_stirling_row(rv, n)
    out = ZERO
    for k in range(n + 1):
        if not row[k].is_zero:
            out = out + row[k] * Y**k
    return out


def prob_bell_series(rv: RandomVariable, order: int) -> TruncSeries:
    """The EGF exp(y·(E[e_λ^Y(t)] - 1)) truncated at `order`; coefficient n
    is φ^Y_{n,λ}(y)/n!.  This is the fresh-extraction route."""
    g = (egf_truncated(rv, order) - TruncSeries.one(order)) * Y
    return g.exp()


def prob_bell_deg_via_egf(rv: RandomVariable, n: int) -> MPoly:
    """Direct series extraction of φ^Y_{n,λ}(y); no table reuse."""
    return prob_bell_series(rv, n).coeff(n) * math.factorial(n)


@cache
def _prob_r_row(rv: RandomVariable, n: int, r: int) -> tuple[MPoly, ...]:
    g = egf_truncated(rv, n) - TruncSeries.one(n)
    e_r = deg_exp_series(r, n)
    row = []
    power = e_r
    for k in range(n + 1):
        if k:
            power = power * g
        row.append(power.coeff(n) * Fraction(math.factorial(n), math.factorial(k)))
    return tuple(row)


def prob_stirling2_r_deg(rv: RandomVariable, n: int, k: int, r: int) -> MPoly:
    """Probabilistic degenerate r-Stirling number: (n!/k!) [t^n] of
    (E[e_λ^Y(t)] - 1)^k e_λ^r(t)."""
    if not isinstance(r, int) or r < 1:
        raise ValueError("r must be a positive integer")
    if n < 0 or k < 0:
        raise ValueError("prob_stirling2_r_deg requires nonnegative indices")
    if k > n:
        return ZERO
    return _prob_r_row(rv, n, r)[k]


@cache
def prob_bell_r_deg(rv: RandomVariable, n: int, r: int) -> MPoly:
    """Probabilistic degenerate r-Bell polynomial: n! [t^n] of
    exp(y·(E[e_λ^Y(t)] - 1)) e_λ^r(t)."""
    if not isinstance(r, int) or r < 1:
        raise ValueError("r must be a positive integer")
    series = prob_bell_series(rv, n) * deg_exp_series(r, n)
    return series.coeff(n) * math.factorial(n)


def prob_bell_recurrence_check(rv: RandomVariable, n: int) -> bool:
    """Exact check of φ^Y_{n+1,λ}(y) = y sum_k C(n,k) E[(Y)_{k+1,λ}] φ^Y_{n-k,λ}(y)."""
    rhs = ZERO
    for k in range(n + 1):
        rhs = rhs + (
            deg_moment(rv, k + 1) * prob_bell_deg(rv, n - k) * math.comb(n, k)
        )
    return prob_bell_deg(rv, n + 1) == rhs * Y

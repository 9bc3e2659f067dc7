"""The deterministic degenerate family: degenerate falling factorials,
degenerate Stirling numbers of the second kind, degenerate Bell polynomials,
and their r-generalizations.

The primary Stirling algorithm is basis conversion (rewrite the degenerate
falling factorial in the classical falling-factorial basis, a triangular
reduction); the composition-sum closed form is kept alongside as an
independent oracle, as is basis conversion of the r-shifted base for the
r-family.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cache

from .algebra import (
    LAM,
    MPoly,
    ONE,
    Scalar,
    TruncSeries,
    X,
    Y,
    ZERO,
    compositions,
    binomial,
    multinomial,
)
import math


def deg_falling(base: MPoly | Scalar, n: int) -> MPoly:
    """Degenerate falling factorial: the product of base - i·λ for i < n.

    n = 0 gives 1.  The base may be symbolic (x) or any constant polynomial
    (e.g. r, k - n·λ).
    """
    if n < 0:
        raise ValueError("degenerate falling factorial requires n >= 0")
    if not isinstance(base, MPoly):
        base = MPoly.const(base)
    out = ONE
    for i in range(n):
        out = out * (base - LAM * i)
    return out


def classical_falling(base: MPoly | Scalar, n: int) -> MPoly:
    """Classical falling factorial base·(base-1)···(base-n+1)."""
    if n < 0:
        raise ValueError("falling factorial requires n >= 0")
    if not isinstance(base, MPoly):
        base = MPoly.const(base)
    out = ONE
    for i in range(n):
        out = out * (base - i)
    return out


def falling_basis_coeffs(poly: MPoly) -> dict[int, MPoly]:
    """Rewrite a polynomial in x as sum_k c_k (x)_k and return {k: c_k}.

    Triangular reduction: (x)_k is monic of degree k, so peeling leading
    x-coefficients top-down terminates with remainder zero.
    """
    if poly.degree("y"):
        raise ValueError("basis conversion expects a polynomial in lambda and x only")
    coeffs: dict[int, MPoly] = {}
    remainder = poly
    for j in range(poly.degree("x"), -1, -1):
        c = remainder.coeff_of("x", j)
        if not c.is_zero:
            coeffs[j] = c
            remainder = remainder - c * classical_falling(X, j)
    assert remainder.is_zero
    return coeffs


@cache
def _stirling_row(n: int) -> tuple[MPoly, ...]:
    coeffs = falling_basis_coeffs(deg_falling(X, n))
    return tuple(coeffs.get(k, ZERO) for k in range(n + 1))


def stirling2_deg(n: int, k: int) -> MPoly:
    """Degenerate Stirling number of the second kind, a polynomial in λ.

    Defined by the basis change (x)_{n,λ} = sum_k {n k}_λ (x)_k; returns 0
    for k > n.
    """
    if n < 0 or k < 0:
        raise ValueError("stirling2_deg requires nonnegative indices")
    if k > n:
        return ZERO
    return _stirling_row(n)[k]


def stirling2_deg_via_compositions(n: int, k: int) -> MPoly:
    """Composition-sum oracle: (1/k!) sum over compositions of n into k
    positive parts of multinomial(n; parts) · prod_i (1)_{l_i,λ}."""
    if n < 0 or k < 0:
        raise ValueError("stirling2_deg_via_compositions requires nonnegative indices")
    total = ZERO
    for parts in compositions(n, k):
        term = MPoly.const(multinomial(n, parts))
        for l in parts:
            term = term * deg_falling(1, l)
        total = total + term
    return total / math.factorial(k)


@cache
def bell_deg(n: int) -> MPoly:
    """Degenerate Bell polynomial sum_k {n k}_λ y^k (in λ and y)."""
    row = _stirling_row(n)
    out = ZERO
    for k in range(n + 1):
        if not row[k].is_zero:
            out = out + row[k] * Y**k
    return out


def _require_r(r: int) -> None:
    if not isinstance(r, int) or r < 1:
        raise ValueError("r must be a positive integer")


@cache
def _stirling_r_row(n: int, r: int) -> tuple[MPoly, ...]:
    # {n+r k+r}_{r,λ} = sum_{l=k..n} C(n,l) {l k}_λ (r)_{n-l,λ}
    row = []
    for k in range(n + 1):
        total = ZERO
        for l in range(k, n + 1):
            total = total + (
                stirling2_deg(l, k) * deg_falling(r, n - l) * binomial(n, l)
            )
        row.append(total)
    return tuple(row)


def stirling2_r_deg(n: int, k: int, r: int) -> MPoly:
    """Degenerate r-Stirling number {n+r k+r}_{r,λ} via the decomposition
    through plain degenerate Stirling numbers."""
    _require_r(r)
    if n < 0 or k < 0:
        raise ValueError("stirling2_r_deg requires nonnegative indices")
    if k > n:
        return ZERO
    return _stirling_r_row(n, r)[k]


def stirling2_r_deg_via_basis(n: int, k: int, r: int) -> MPoly:
    """Cross-check route: expand (x+r)_{n,λ} in the classical falling-factorial
    basis; the coefficient of (x)_k is {n+r k+r}_{r,λ}."""
    _require_r(r)
    if k > n:
        return ZERO
    coeffs = falling_basis_coeffs(deg_falling(X + r, n))
    return coeffs.get(k, ZERO)


@cache
def bell_r_deg(n: int, r: int) -> MPoly:
    """Degenerate r-Bell polynomial sum_k {n+r k+r}_{r,λ} y^k."""
    _require_r(r)
    row = _stirling_r_row(n, r)
    out = ZERO
    for k in range(n + 1):
        if not row[k].is_zero:
            out = out + row[k] * Y**k
    return out


def deg_exp_series(base: MPoly | Scalar, order: int) -> TruncSeries:
    """Truncation of the degenerate exponential: coefficient of t^n is
    (base)_{n,λ} / n!."""
    coeffs = [deg_falling(base, n) / math.factorial(n) for n in range(order + 1)]
    return TruncSeries(order, coeffs)

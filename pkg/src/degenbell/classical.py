"""Classical Stirling numbers of the second kind and Bell numbers/polynomials.

Two independent routes are provided: the usual triangle recurrence (used by
the moment formulas) and direct set-partition enumeration (used as the
cross-check oracle when degenerate quantities are specialized at lambda = 0).
"""

from __future__ import annotations

from fractions import Fraction
from functools import cache
from typing import Iterator

from .algebra import MPoly, Y, ZERO


@cache
def stirling2(n: int, k: int) -> int:
    """S(n, k) by the triangle recurrence S(n,k) = k S(n-1,k) + S(n-1,k-1)."""
    if n == 0 and k == 0:
        return 1
    if n == 0 or k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@cache
def bell_number(n: int) -> int:
    return sum(stirling2(n, k) for k in range(n + 1))


def set_partitions(n: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All partitions of {0, .., n-1} into nonempty blocks, by inserting each
    element into every existing block or a fresh singleton."""
    if n == 0:
        yield ()
        return
    last = (n - 1,)
    for smaller in set_partitions(n - 1):
        yield smaller + (last,)
        for i, block in enumerate(smaller):
            yield smaller[:i] + (block + last,) + smaller[i + 1 :]


@cache
def stirling2_enum(n: int, k: int) -> int:
    """S(n, k) by brute-force partition enumeration (independent oracle)."""
    return sum(1 for parts in set_partitions(n) if len(parts) == k)


@cache
def bell_number_enum(n: int) -> int:
    return sum(1 for _ in set_partitions(n))


@cache
def bell_poly_enum(n: int) -> MPoly:
    """The Bell polynomial sum_k S(n,k) y^k with enumeration-based S(n,k)."""
    out = ZERO
    for k in range(n + 1):
        count = stirling2_enum(n, k)
        if count:
            out = out + Y**k * Fraction(count)
    return out

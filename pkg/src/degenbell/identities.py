"""Mechanical verification of the Spivey-type identities as exact polynomial
equalities in λ and y, over configurable grids of indices and random-variable
models.

Every check compares canonical polynomial renderings; equality is exact,
never numeric.  Reports carry both sides' canonical strings so a failing cell
is diagnosable from the JSON artifact alone.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    MPoly,
    Y,
    ZERO,
    compositions,
    multinomial,
    render_poly,
)
from .bell import bell_deg, bell_r_deg, deg_falling, stirling2_deg, stirling2_r_deg
from .bell import stirling2_deg_via_compositions, stirling2_r_deg_via_basis
from .classical import bell_number_enum, bell_poly_enum, stirling2_enum
from .moments import RandomVariable, deg_moment, parse_rv, standard_suite
from .prob_bell import (
    MixedExpectationSpec,
    prob_bell_deg,
    prob_bell_r_deg,
    sk_mixed_expectation,
)

IDENTITY_IDS = (
    "THM21",
    "COR22",
    "THM23",
    "COR24",
    "EQ1",
    "GOULD_QUAINTANCE",
    "SPIVEY",
    "EQ27",
    "COMPOSITION_FORMULA",
    "RECURRENCE_14",
)

_NEGATIVE_SUPPORT_NOTE = "rv has negative support: outside the paper's worked cases"


@dataclass
class VerificationReport:
    identity_id: str
    params: dict
    lhs: str
    rhs: str
    equal: bool
    elapsed: float
    note: str | None = None

    def to_row(self) -> dict:
        # elapsed stays out of the data row: report files must be
        # byte-deterministic; timings belong to the bench CSV only.
        row = {
            "identity_id": self.identity_id,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "equal": self.equal,
        }
        if self.note:
            row["note"] = self.note
        return row


def report_sort_key(report: VerificationReport) -> tuple[str, str]:
    return (report.identity_id, json.dumps(report.params, sort_keys=True))


def _finish(
    identity_id: str,
    params: dict,
    lhs: MPoly | str,
    rhs: MPoly | str,
    started: float,
    extra_ok: bool = True,
    note: str | None = None,
) -> VerificationReport:
    lhs_s = lhs if isinstance(lhs, str) else render_poly(lhs)
    rhs_s = rhs if isinstance(rhs, str) else render_poly(rhs)
    return VerificationReport(
        identity_id=identity_id,
        params=params,
        lhs=lhs_s,
        rhs=rhs_s,
        equal=(lhs_s == rhs_s) and extra_ok,
        elapsed=time.perf_counter() - started,
        note=note,
    )


def _rv_note(rv: RandomVariable) -> str | None:
    return _NEGATIVE_SUPPORT_NOTE if rv.has_negative_support else None


# -- the two probabilistic Spivey sums ----------------------------------------


def spivey_rhs_prob(
    rv: RandomVariable, n: int, l: int, at_y: MPoly | int | None = None
) -> MPoly:
    """Right-hand side of the probabilistic Spivey relation for φ^Y_{l+n,λ}.

    With `at_y` given, the Bell variable is substituted before summation
    (used by the Bell-number corollary and its commutation check).
    """
    total = ZERO
    for k in range(n + 1):
        y_pow = Y**k if at_y is None else MPoly._coerce(at_y) ** k
        inv_kfac = Fraction(1, math.factorial(k))
        for parts in compositions(n, k):
            weight = multinomial(n, parts)
            for m in range(l + 1):
                mixed = sk_mixed_expectation(
                    MixedExpectationSpec(rv, k, parts, shift_n=n, j=l - m)
                )
                phi_m = prob_bell_deg(rv, m)
                if at_y is not None:
                    phi_m = phi_m.substitute({"y": at_y})
                total = total + (
                    mixed * phi_m * y_pow * (math.comb(l, m) * weight * inv_kfac)
                )
    return total


def spivey_rhs_prob_r(rv: RandomVariable, n: int, j: int, r: int) -> MPoly:
    """Right-hand side of the r-extended relation for φ^{(r,Y)}_{j+n,λ}.

    The shift inside the mixed expectation is the outer index n, not the
    split index l, because the -lλ and -(n-l)λ shifts combine.
    """
    total = ZERO
    for l in range(n + 1):
        outer = deg_falling(r, n - l) * math.comb(n, l)
        for k in range(l + 1):
            y_pow = Y**k
            inv_kfac = Fraction(1, math.factorial(k))
            for parts in compositions(l, k):
                weight = multinomial(l, parts)
                for m in range(j + 1):
                    mixed = sk_mixed_expectation(
                        MixedExpectationSpec(rv, k, parts, shift_n=n, j=j - m)
                    )
                    total = total + (
                        outer
                        * mixed
                        * prob_bell_r_deg(rv, m, r)
                        * y_pow
                        * (math.comb(j, m) * weight * inv_kfac)
                    )
    return total


# -- individual identity checks ------------------------------------------------


def verify_thm_2_1(rv: RandomVariable, n: int, l: int) -> VerificationReport:
    started = time.perf_counter()
    lhs = prob_bell_deg(rv, l + n)
    rhs = spivey_rhs_prob(rv, n, l)
    params = {"n": n, "l": l, "rv": rv.spec()}
    return _finish("THM21", params, lhs, rhs, started, note=_rv_note(rv))


def verify_cor_2_2(rv: RandomVariable, n: int, l: int) -> VerificationReport:
    started = time.perf_counter()
    lhs = prob_bell_deg(rv, l + n).substitute({"y": 1})
    rhs = spivey_rhs_prob(rv, n, l, at_y=1)
    params = {"n": n, "l": l, "rv": rv.spec()}
    return _finish("COR22", params, lhs, rhs, started, note=_rv_note(rv))


def verify_thm_2_3(rv: RandomVariable, n: int, j: int, r: int) -> VerificationReport:
    started = time.perf_counter()
    lhs = prob_bell_r_deg(rv, j + n, r)
    rhs = spivey_rhs_prob_r(rv, n, j, r)
    params = {"n": n, "j": j, "r": r, "rv": rv.spec()}
    return _finish("THM23", params, lhs, rhs, started, note=_rv_note(rv))


def verify_cor_2_4(n: int, j: int, r: int) -> VerificationReport:
    """Deterministic r-family Spivey relation, built from module bell only."""
    started = time.perf_counter()
    lhs = bell_r_deg(j + n, r)
    rhs = ZERO
    for k in range(n + 1):
        for m in range(j + 1):
            rhs = rhs + (
                stirling2_r_deg(n, k, r)
                * deg_falling(MPoly.const(k) - MPoly.variable("lambda") * n, j - m)
                * bell_r_deg(m, r)
                * Y**k
                * math.comb(j, m)
            )
    params = {"n": n, "j": j, "r": r}
    return _finish("COR24", params, lhs, rhs, started)


def _eq1_rhs(n: int, l: int) -> MPoly:
    rhs = ZERO
    for k in range(n + 1):
        for m in range(l + 1):
            rhs = rhs + (
                stirling2_deg(n, k)
                * deg_falling(MPoly.const(k) - MPoly.variable("lambda") * n, l - m)
                * bell_deg(m)
                * Y**k
                * math.comb(l, m)
            )
    return rhs


def verify_eq1(n: int, l: int) -> VerificationReport:
    """The deterministic degenerate Spivey relation, checked two ways: as a
    whole, and termwise against the Y=1 reduction of the probabilistic sum."""
    started = time.perf_counter()
    point1 = RandomVariable.point(1)
    lhs = bell_deg(l + n)
    rhs = _eq1_rhs(n, l)
    termwise_ok = True
    for k in range(n + 1):
        for m in range(l + 1):
            prob_summand = ZERO
            for parts in compositions(n, k):
                prob_summand = prob_summand + (
                    sk_mixed_expectation(
                        MixedExpectationSpec(point1, k, parts, shift_n=n, j=l - m)
                    )
                    * multinomial(n, parts)
                )
            prob_summand = (
                prob_summand
                * prob_bell_deg(point1, m)
                * Y**k
                * Fraction(math.comb(l, m), math.factorial(k))
            )
            deg_summand = (
                stirling2_deg(n, k)
                * deg_falling(MPoly.const(k) - MPoly.variable("lambda") * n, l - m)
                * bell_deg(m)
                * Y**k
                * math.comb(l, m)
            )
            if prob_summand != deg_summand:
                termwise_ok = False
    params = {"n": n, "l": l}
    return _finish("EQ1", params, lhs, rhs, started, extra_ok=termwise_ok)


def verify_gould_quaintance(n: int, l: int) -> VerificationReport:
    """λ→0 limit of the Y=1 instance against set-partition-enumeration oracles."""
    started = time.perf_counter()
    point1 = RandomVariable.point(1)
    engine_lhs = bell_deg(l + n).substitute({"lambda": 0})
    engine_rhs = spivey_rhs_prob(point1, n, l).substitute({"lambda": 0})
    oracle_lhs = bell_poly_enum(l + n)
    oracle_rhs = ZERO
    for k in range(n + 1):
        for m in range(l + 1):
            count = stirling2_enum(n, k)
            if not count:
                continue
            # 0**0 == 1 covers the k=0, m=l survivor of the limit.
            oracle_rhs = oracle_rhs + (
                bell_poly_enum(m)
                * Y**k
                * (math.comb(l, m) * count * k ** (l - m))
            )
    ok = engine_rhs == oracle_rhs and oracle_lhs == oracle_rhs
    params = {"n": n, "l": l}
    return _finish(
        "GOULD_QUAINTANCE", params, engine_lhs, oracle_lhs, started, extra_ok=ok
    )


def verify_spivey(n: int, l: int) -> VerificationReport:
    """λ→0, y=1 limit: Spivey's Bell-number recurrence against enumeration."""
    started = time.perf_counter()
    engine = bell_deg(l + n).substitute({"lambda": 0, "y": 1})
    oracle_sum = ZERO
    for k in range(n + 1):
        for m in range(l + 1):
            oracle_sum = oracle_sum + MPoly.const(
                math.comb(l, m) * stirling2_enum(n, k) * k ** (l - m) * bell_number_enum(m)
            )
    ok = oracle_sum.constant() == bell_number_enum(l + n)
    params = {"n": n, "l": l}
    return _finish("SPIVEY", params, engine, oracle_sum, started, extra_ok=ok)


def verify_classical_limits(n: int, l: int) -> list[VerificationReport]:
    return [verify_gould_quaintance(n, l), verify_spivey(n, l)]


def verify_eq27(n: int, k: int, r: int) -> VerificationReport:
    started = time.perf_counter()
    lhs = stirling2_r_deg(n, k, r)
    rhs = stirling2_r_deg_via_basis(n, k, r)
    return _finish("EQ27", {"n": n, "k": k, "r": r}, lhs, rhs, started)


def verify_composition_formula(n: int, k: int) -> VerificationReport:
    started = time.perf_counter()
    lhs = stirling2_deg(n, k)
    rhs = stirling2_deg_via_compositions(n, k)
    return _finish("COMPOSITION_FORMULA", {"n": n, "k": k}, lhs, rhs, started)


def verify_recurrence_14(rv: RandomVariable, n: int) -> VerificationReport:
    started = time.perf_counter()
    lhs = prob_bell_deg(rv, n + 1)
    rhs = ZERO
    for k in range(n + 1):
        rhs = rhs + (
            # E[(Y)_{k+1,λ}] weight on the lower-index Bell polynomial
            _deg_moment(rv, k + 1) * prob_bell_deg(rv, n - k) * math.comb(n, k)
        )
    rhs = rhs * Y
    params = {"n": n, "rv": rv.spec()}
    return _finish("RECURRENCE_14", params, lhs, rhs, started, note=_rv_note(rv))


def _deg_moment(rv: RandomVariable, n: int) -> MPoly:
    from .moments import deg_moment

    return deg_moment(rv, n)


def verify_structural(
    n_max: int,
    r_max: int,
    rvs: tuple[RandomVariable, ...] | None = None,
    recurrence_n_max: int = 5,
) -> list[VerificationReport]:
    """Batch check of the structural identities: the r-Stirling decomposition,
    the composition closed form, and the one-step Bell recurrence."""
    if n_max < 0 or r_max < 0:
        raise ValueError("bounds must be nonnegative")
    reports: list[VerificationReport] = []
    for n in range(n_max + 1):
        for k in range(n + 1):
            reports.append(verify_composition_formula(n, k))
            for r in range(1, r_max + 1):
                reports.append(verify_eq27(n, k, r))
    for rv in rvs or standard_suite():
        for n in range(recurrence_n_max + 1):
            reports.append(verify_recurrence_14(rv, n))
    return reports


# -- grid construction (shared by the CLI and the acceptance suite) ------------

#: Default grid bounds: chosen so the full default run finishes within the
#: documented time budget on commodity hardware.
DEFAULT_SUM_MAX = {
    "thm21": 6,
    "cor22": 5,
    "thm23": 5,
    "cor24": 5,
    "eq1": 5,
    "classical": 7,
}
DEFAULT_R_VALUES = (1, 2, 3)
DEFAULT_STRUCTURAL_N_MAX = 6

IDENTITY_CHOICES = (
    "thm21",
    "cor22",
    "thm23",
    "cor24",
    "eq1",
    "classical",
    "structural",
    "all",
)

Cell = tuple[str, dict]


def grid_cells(
    identity: str,
    rv_specs: tuple[str, ...] | None = None,
    sum_max: int | None = None,
    r_values: tuple[int, ...] = DEFAULT_R_VALUES,
    n_max: int | None = None,
) -> list[Cell]:
    """Expand one identity selector into concrete (identity_id, params) cells."""
    if identity == "all":
        cells: list[Cell] = []
        for name in IDENTITY_CHOICES[:-1]:
            cells.extend(grid_cells(name, rv_specs, sum_max, r_values, n_max))
        return cells
    rvs = rv_specs if rv_specs else tuple(s for s in _suite_specs())
    cells = []
    if identity in ("thm21", "cor22"):
        bound = sum_max if sum_max is not None else DEFAULT_SUM_MAX[identity]
        ident = identity.upper()
        for spec in rvs:
            for n in range(bound + 1):
                for l in range(bound + 1 - n):
                    cells.append((ident, {"n": n, "l": l, "rv": spec}))
    elif identity == "thm23":
        bound = sum_max if sum_max is not None else DEFAULT_SUM_MAX[identity]
        for spec in rvs:
            for r in r_values:
                for n in range(bound + 1):
                    for j in range(bound + 1 - n):
                        cells.append(("THM23", {"n": n, "j": j, "r": r, "rv": spec}))
    elif identity == "cor24":
        bound = sum_max if sum_max is not None else DEFAULT_SUM_MAX[identity]
        for r in r_values:
            for n in range(bound + 1):
                for j in range(bound + 1 - n):
                    cells.append(("COR24", {"n": n, "j": j, "r": r}))
    elif identity == "eq1":
        bound = sum_max if sum_max is not None else DEFAULT_SUM_MAX[identity]
        for n in range(bound + 1):
            for l in range(bound + 1 - n):
                cells.append(("EQ1", {"n": n, "l": l}))
    elif identity == "classical":
        bound = sum_max if sum_max is not None else DEFAULT_SUM_MAX[identity]
        for n in range(bound + 1):
            for l in range(bound + 1 - n):
                cells.append(("GOULD_QUAINTANCE", {"n": n, "l": l}))
                cells.append(("SPIVEY", {"n": n, "l": l}))
    elif identity == "structural":
        bound = n_max if n_max is not None else DEFAULT_STRUCTURAL_N_MAX
        for n in range(bound + 1):
            for k in range(n + 1):
                cells.append(("COMPOSITION_FORMULA", {"n": n, "k": k}))
                for r in r_values:
                    cells.append(("EQ27", {"n": n, "k": k, "r": r}))
        for spec in rvs:
            for n in range(min(bound, 5) + 1):
                cells.append(("RECURRENCE_14", {"n": n, "rv": spec}))
    else:
        raise ValueError(f"unknown identity selector {identity!r}")
    return cells


def _suite_specs() -> tuple[str, ...]:
    from .moments import STANDARD_SUITE_SPECS

    return STANDARD_SUITE_SPECS


def evaluate_cell(cell: Cell) -> VerificationReport:
    """Evaluate one (identity_id, params) grid cell.  Top-level and picklable,
    so worker pools can fan cells out."""
    identity_id, params = cell
    if identity_id == "THM21":
        return verify_thm_2_1(parse_rv(params["rv"]), params["n"], params["l"])
    if identity_id == "COR22":
        return verify_cor_2_2(parse_rv(params["rv"]), params["n"], params["l"])
    if identity_id == "THM23":
        return verify_thm_2_3(
            parse_rv(params["rv"]), params["n"], params["j"], params["r"]
        )
    if identity_id == "COR24":
        return verify_cor_2_4(params["n"], params["j"], params["r"])
    if identity_id == "EQ1":
        return verify_eq1(params["n"], params["l"])
    if identity_id == "GOULD_QUAINTANCE":
        return verify_gould_quaintance(params["n"], params["l"])
    if identity_id == "SPIVEY":
        return verify_spivey(params["n"], params["l"])
    if identity_id == "EQ27":
        return verify_eq27(params["n"], params["k"], params["r"])
    if identity_id == "COMPOSITION_FORMULA":
        return verify_composition_formula(params["n"], params["k"])
    if identity_id == "RECURRENCE_14":
        return verify_recurrence_14(parse_rv(params["rv"]), params["n"])
    raise ValueError(f"unknown identity id {identity_id!r}")

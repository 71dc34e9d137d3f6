"""Functional-inequality checkers over tables and unit-bet curves.

Each checker scans its full index range in lexicographic order, counts every
violation exactly, and keeps the first ``max_witnesses`` violating indices
with both sides of the comparison (see :mod:`redblack.reports`).  Index
combinations that would touch the undefined stake pair ``(0, 0)`` are
skipped and counted; combinations that only involve entries unreachable in
play (stakes summing past the total money) are evaluated and flagged.

The checks and what passing them buys:

* ``bold-inequality`` + nondecreasing curve implies ``product-bound``;
* ``product-bound`` implies the bold player's values are excessive against
  a timid opponent (see :func:`redblack.solver.check_bold_excessive`);
* ``supermultiplicative`` implies the timid player's values are excessive
  against a bold opponent, and transports exactly to the ``sincov``
  composition law of the pair-of-fortunes form.
"""

from __future__ import annotations

from typing import Iterator

from .families import ExtendedTable, SincovTable
from .game import UnitBetCurve, WinProbTable, unit_bet_curve
from .reports import (
    DEFAULT_TOL,
    DEFAULT_WITNESS_CAP,
    CheckReport,
    Witness,
    evaluate_inequality,
)

_Term = tuple[tuple[int, ...], float, float, str]


def bold_inequality_terms(curve: UnitBetCurve) -> Iterator[_Term]:
    """Terms of the bold-play inequality, then of curve monotonicity.

    Difference part, for ``0 <= y <= x <= M``:
    ``curve(y) - curve(x) <= curve(x - y) * (curve(y) - 1)``.
    Monotonicity part, for ``0 <= x < M``: ``curve(x) <= curve(x + 1)``.
    """
    phi = curve.values
    for x in range(curve.M + 1):
        for y in range(x + 1):
            yield (x, y), phi[y] - phi[x], phi[x - y] * (phi[y] - 1.0), "difference"
    for x in range(curve.M):
        yield (x, x + 1), phi[x], phi[x + 1], "nondecreasing"


def check_bold_inequality(
    curve: UnitBetCurve,
    *,
    tol: float = DEFAULT_TOL,
    max_witnesses: int | None = DEFAULT_WITNESS_CAP,
) -> CheckReport:
    """The one-variable inequality behind bold play, plus monotonicity.

    Witnesses are lexicographic within each constraint tag, with all
    ``difference`` terms scanned before the ``nondecreasing`` ones.
    """
    return evaluate_inequality(
        "bold-inequality", bold_inequality_terms(curve), tol=tol, max_witnesses=max_witnesses
    )


def product_bound_terms(curve: UnitBetCurve) -> Iterator[_Term]:
    """For ``0 <= a <= x <= M``:
    ``(1 - curve(a)) * prod_{i=0..a} curve(x - i) <= curve(x) - curve(a)``.
    """
    phi = curve.values
    for x in range(curve.M + 1):
        running = 1.0
        for a in range(x + 1):
            running *= phi[x - a]  # after this line: prod of phi(x), ..., phi(x - a)
            yield (x, a), (1.0 - phi[a]) * running, phi[x] - phi[a], "product-bound"


def check_product_bound(
    curve: UnitBetCurve,
    *,
    tol: float = DEFAULT_TOL,
    max_witnesses: int | None = DEFAULT_WITNESS_CAP,
) -> CheckReport:
    """The product form of the bold-play condition (implied by
    ``bold-inequality`` whenever the curve is nondecreasing)."""
    return evaluate_inequality(
        "product-bound", product_bound_terms(curve), tol=tol, max_witnesses=max_witnesses
    )


def supermultiplicative_terms(
    table: WinProbTable,
) -> tuple[Iterator[_Term], int, int]:
    """Terms of ``P(x, a) * P(x + a, b) <= P(x, a + b)`` with skip/flag counts.

    Ranges: ``0 <= x <= M``, ``0 <= a <= M - x``, ``0 <= b <= M - a``; every
    index touched stays inside ``0..M``.  Triples evaluating the undefined
    pair ``(0, 0)`` — exactly those with ``x = a = 0`` — are skipped.
    Triples with ``x + a + b > M`` involve entries unreachable in play and
    are flagged (but still checked, since the table stores those entries).
    """
    M = table.M
    skipped = M + 1  # (0, 0, b) for each b in 0..M evaluates P(0, 0)
    flagged = sum(
        1
        for x in range(M + 1)
        for a in range(M - x + 1)
        for b in range(M - a + 1)
        if x + a + b > M and (x, a) != (0, 0)
    )

    def terms() -> Iterator[_Term]:
        for x in range(M + 1):
            for a in range(M - x + 1):
                if x == 0 and a == 0:
                    continue
                for b in range(M - a + 1):
                    yield (
                        (x, a, b),
                        table.prob(x, a) * table.prob(x + a, b),
                        table.prob(x, a + b),
                        "supermultiplicative",
                    )

    return terms(), skipped, flagged


def check_supermultiplicative(
    table: WinProbTable,
    *,
    tol: float = DEFAULT_TOL,
    max_witnesses: int | None = DEFAULT_WITNESS_CAP,
) -> CheckReport:
    """Winning two stages in a row is never better than staking the sum at once."""
    terms, skipped, flagged = supermultiplicative_terms(table)
    return evaluate_inequality(
        "supermultiplicative",
        terms,
        tol=tol,
        max_witnesses=max_witnesses,
        skipped=skipped,
        flagged=flagged,
    )


def check_supermultiplicative_extended(
    extended: ExtendedTable,
    *,
    span: int = 3,
    tol: float = DEFAULT_TOL,
    max_witnesses: int | None = DEFAULT_WITNESS_CAP,
) -> CheckReport:
    """The composition inequality for the whole-plane evaluator.

    Scans all integer triples with each of ``x``, ``a``, ``b`` in
    ``[-span, M + span]``, skipping exactly the triples that would evaluate
    the undefined pair ``(0, 0)``.
    """
    M = extended.M
    lo, hi = -span, M + span

    def hits_undefined(x: int, a: int, b: int) -> bool:
        return (x, a) == (0, 0) or (x + a, b) == (0, 0) or (x, a + b) == (0, 0)

    skipped = 0

    def terms() -> Iterator[_Term]:
        nonlocal skipped
        for x in range(lo, hi + 1):
            for a in range(lo, hi + 1):
                for b in range(lo, hi + 1):
                    if hits_undefined(x, a, b):
                        skipped += 1
                        continue
                    yield (
                        (x, a, b),
                        extended.value(x, a) * extended.value(x + a, b),
                        extended.value(x, a + b),
                        "supermultiplicative-extended",
                    )

    # Materialize so the skipped count is final before the report is built.
    collected = list(terms())
    return evaluate_inequality(
        "supermultiplicative-extended",
        collected,
        tol=tol,
        max_witnesses=max_witnesses,
        skipped=skipped,
    )


def check_sincov(
    F: SincovTable,
    *,
    tol: float = DEFAULT_TOL,
    max_witnesses: int | None = DEFAULT_WITNESS_CAP,
) -> CheckReport:
    """Composition law of the pair-of-fortunes form:
    ``F(x, a) * F(a, b) <= F(x, b)`` for ``0 <= x <= a <= b <= M``.

    Triples evaluating the undefined entry ``(0, 0)`` — exactly those with
    ``x = a = 0`` — are skipped.  Restricted to playable stakes this is the
    same comparison, term for term, as ``supermultiplicative`` under the
    substitution ``a -> x + a, b -> x + a + b``.
    """
    M = F.M
    skipped = 0

    def terms() -> Iterator[_Term]:
        nonlocal skipped
        for x in range(M + 1):
            for a in range(x, M + 1):
                for b in range(a, M + 1):
                    if x == 0 and a == 0:
                        skipped += 1
                        continue
                    yield (
                        (x, a, b),
                        F.value(x, a) * F.value(a, b),
                        F.value(x, b),
                        "sincov",
                    )

    collected = list(terms())
    return evaluate_inequality(
        "sincov", collected, tol=tol, max_witnesses=max_witnesses, skipped=skipped
    )


def check_uniqueness_conditions(
    table: WinProbTable,
    *,
    eps_strict: float = 1e-12,
    max_witnesses: int | None = DEFAULT_WITNESS_CAP,
) -> CheckReport:
    """Strictness conditions under which the certified profile is the only
    equilibrium candidate of its kind.

    Two parts: the unit-bet curve must be strictly increasing
    (``curve(x + 1) > curve(x) + eps_strict`` for ``0 <= x < M``), and the
    smallest stake must keep a live chance (``P(1, y) > eps_strict`` for
    ``1 <= y <= M``).  For these witnesses ``margin`` is the shortfall of
    the required strict gap.
    """
    curve = unit_bet_curve(table)
    phi = curve.values
    witnesses: list[Witness] = []
    violations = 0
    counts: dict[str, int] = {}

    def record(index: tuple[int, ...], lhs: float, rhs: float, constraint: str) -> None:
        nonlocal violations
        violations += 1
        counts[constraint] = counts.get(constraint, 0) + 1
        if max_witnesses is None or len(witnesses) < max_witnesses:
            witnesses.append(Witness(index, lhs, rhs, rhs + eps_strict - lhs, constraint))

    for x in range(table.M):
        if not phi[x + 1] > phi[x] + eps_strict:
            record((x, x + 1), phi[x + 1], phi[x], "strictly-increasing")
    for y in range(1, table.M + 1):
        if not table.prob(1, y) > eps_strict:
            record((1, y), table.prob(1, y), 0.0, "unit-stake-positivity")

    return CheckReport(
        name="uniqueness-conditions",
        passed=violations == 0,
        violations=violations,
        witnesses=tuple(witnesses),
        skipped=0,
        tolerance=eps_strict,
        constraint_counts=tuple(sorted(counts.items())),
    )

"""Counterexample witnesses and verdict reports shared by every checker.

All inequality scans in this package funnel through :func:`evaluate_inequality`
so that the semantics are uniform:

* a term ``lhs <= rhs`` counts as violated exactly when ``lhs > rhs + tol``;
* the exact number of violations is always counted, even past the witness cap;
* the retained witnesses are the first violations in the scan order, which
  every caller arranges to be lexicographic in the reported index.

Reports are plain frozen dataclasses with deterministic JSON dict forms, so
artifacts serialized from them are byte-identical across runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Iterable

DEFAULT_TOL = 1e-12
DEFAULT_WITNESS_CAP = 16


@dataclass(frozen=True, order=True)
class Witness:
    """One violating index, with both sides of the failed comparison.

    ``margin`` measures how badly the comparison failed (``lhs - rhs`` for
    one-sided checks; always positive for a genuine violation).  ``constraint``
    tags which sub-inequality of a multi-part check produced the witness.
    """

    index: tuple[int, ...]
    lhs: float
    rhs: float
    margin: float
    constraint: str = ""

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "index": list(self.index),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "constraint": self.constraint,
        }


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one inequality scan.

    ``violations`` is the exact total count; ``witnesses`` holds at most the
    cap requested by the caller (``None`` cap keeps every violation).
    ``skipped`` counts index combinations excluded because they would touch
    an undefined table entry.  ``flagged`` counts combinations that were
    evaluated but only involve entries unreachable in actual play; their
    violations still count.
    """

    name: str
    passed: bool
    violations: int
    witnesses: tuple[Witness, ...]
    skipped: int
    tolerance: float
    flagged: int = 0
    constraint_counts: tuple[tuple[str, int], ...] = ()

    def witnesses_for(self, constraint: str) -> tuple[Witness, ...]:
        return tuple(w for w in self.witnesses if w.constraint == constraint)

    def merge(
        self, other: "CheckReport", *, max_witnesses: int | None = None
    ) -> "CheckReport":
        """Combine reports over disjoint slices of one index range.

        Witnesses of both inputs are pooled and re-sorted; pass reports built
        with an unlimited cap if the merged result must preserve the
        first-``max_witnesses`` contract of a single full scan.
        """
        if other.name != self.name or other.tolerance != self.tolerance:
            raise ValueError("only reports of the same check can be merged")
        counts: dict[str, int] = {}
        for label, n in self.constraint_counts + other.constraint_counts:
            counts[label] = counts.get(label, 0) + n
        merged = tuple(sorted(self.witnesses + other.witnesses))
        if max_witnesses is not None:
            merged = merged[:max_witnesses]
        return CheckReport(
            name=self.name,
            passed=self.passed and other.passed,
            violations=self.violations + other.violations,
            witnesses=merged,
            skipped=self.skipped + other.skipped,
            tolerance=self.tolerance,
            flagged=self.flagged + other.flagged,
            constraint_counts=tuple(sorted(counts.items())),
        )

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "check": self.name,
            "pass": self.passed,
            "violations": self.violations,
            "witnesses": [w.to_json_dict() for w in self.witnesses],
            "skipped": self.skipped,
            "flagged": self.flagged,
            "tolerance": self.tolerance,
            "constraints": {label: n for label, n in self.constraint_counts},
        }


def evaluate_inequality(
    name: str,
    terms: Iterable[tuple[tuple[int, ...], float, float, str]],
    *,
    tol: float = DEFAULT_TOL,
    max_witnesses: int | None = DEFAULT_WITNESS_CAP,
    skipped: int = 0,
    flagged: int = 0,
) -> CheckReport:
    """Scan ``(index, lhs, rhs, constraint)`` terms for ``lhs <= rhs + tol``.

    ``terms`` must already be in the order witnesses should be reported in.
    """
    violations = 0
    witnesses: list[Witness] = []
    counts: dict[str, int] = {}
    for index, lhs, rhs, constraint in terms:
        if lhs > rhs + tol:
            violations += 1
            counts[constraint] = counts.get(constraint, 0) + 1
            if max_witnesses is None or len(witnesses) < max_witnesses:
                witnesses.append(Witness(tuple(index), lhs, rhs, lhs - rhs, constraint))
    return CheckReport(
        name=name,
        passed=violations == 0,
        violations=violations,
        witnesses=tuple(witnesses),
        skipped=skipped,
        tolerance=tol,
        flagged=flagged,
        constraint_counts=tuple(sorted(counts.items())),
    )


@dataclass(frozen=True)
class FairnessReport:
    """Classification of a table against the even-odds benchmark a/(a+b).

    Quantified over stake pairs that can actually occur in play
    (``0 < a + b <= M``).  ``above`` are entries strictly above the
    benchmark (they break the sub-fair direction), ``below`` strictly under
    it (they break the super-fair direction); both lists are lexicographic
    and capped, with exact counts alongside.
    """

    verdict: str
    above: tuple[Witness, ...]
    below: tuple[Witness, ...]
    above_count: int
    below_count: int
    unreachable_entries: int
    tolerance: float

    @property
    def is_subfair(self) -> bool:
        """No playable entry exceeds the even-odds benchmark."""
        return self.verdict in ("fair", "subfair")

    @property
    def is_superfair(self) -> bool:
        """No playable entry falls under the even-odds benchmark."""
        return self.verdict in ("fair", "superfair")

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "above": [w.to_json_dict() for w in self.above],
            "below": [w.to_json_dict() for w in self.below],
            "above_count": self.above_count,
            "below_count": self.below_count,
            "unreachable_entries": self.unreachable_entries,
            "tolerance": self.tolerance,
        }


def _sanitize(value: Any) -> Any:
    """Coerce numpy scalars and containers into plain JSON-ready Python."""
    if hasattr(value, "item") and not isinstance(value, (bool, int, float, str)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"non-finite float {value!r} cannot be serialized")
    if isinstance(value, dict):
        return {str(k): _sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return value


def canonical_json(payload: Any) -> str:
    """Serialize deterministically: sorted keys, two-space indent, repr floats."""
    return json.dumps(_sanitize(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"

"""Exact values, best responses and equilibrium certificates.

State space and indexing
------------------------

Every vector in this module is indexed by player I's fortune
``x in {0..M}``.  Player II's winning probabilities are tracked separately:
when the induced chain can cycle forever (possible for hand-built tables
with exact-one entries), the two players' values need not sum to one, so
neither is derived from the other.

Values are *minimal* fixed points of the one-stage recursion: a fortune
from which absorption never happens is worth zero to both players, which
matches play (nobody is ever paid).  The linear solve is used only when the
chain provably absorbs from every fortune; otherwise a monotone iteration
from zero converges to the minimal fixed point from below.

Equilibrium certification is two-tier:

* the bold-versus-timid profile is certified against *all* strategies when
  both excessivity conditions hold (:func:`check_bold_excessive` for player
  I against a timid opponent, :func:`check_timid_excessive` for player II
  against a bold one);
* otherwise the profile is checked against every stationary deterministic
  deviation by exhaustive enumeration, a weaker but unconditional coverage.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterator

import numpy as np

from .game import (
    GameError,
    Player,
    Profile,
    StationaryStrategy,
    UnitBetCurve,
    WinProbTable,
    unit_bet_curve,
)
from .reports import (
    DEFAULT_TOL,
    DEFAULT_WITNESS_CAP,
    CheckReport,
    evaluate_inequality,
)

DEFAULT_VI_TOL = 1e-13
DEFAULT_MAX_SWEEPS = 10**6
DEFAULT_ENUM_CAP = 8
DEFAULT_TIE_TOL = 1e-9


class EnumerationLimitError(GameError):
    """Raised when exhaustive enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class ValueVector:
    """Both players' winning probabilities, indexed by player I's fortune.

    ``q[x]`` is player I's chance of reaching ``M``; ``t[x]`` is player II's
    chance of driving the chain to ``0``.  ``q[x] + t[x] <= 1``, with strict
    inequality exactly on fortunes from which the chain can cycle forever.
    """

    M: int
    q: tuple[float, ...]
    t: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.q) != self.M + 1 or len(self.t) != self.M + 1:
            raise ValueError(f"expected {self.M + 1} values per player")
        if self.q[0] != 0.0 or self.q[-1] != 1.0:
            raise ValueError("player I's values must be 0 at fortune 0 and 1 at M")
        if self.t[0] != 1.0 or self.t[-1] != 0.0:
            raise ValueError("player II's values must be 1 at fortune 0 and 0 at M")
        for x in range(self.M + 1):
            for v in (self.q[x], self.t[x]):
                if not (0.0 <= v <= 1.0):
                    raise ValueError(f"value at fortune {x} outside [0, 1]: {v!r}")

    def to_json_dict(self) -> dict[str, Any]:
        return {"M": self.M, "player_I": list(self.q), "player_II": list(self.t)}


def bold_timid_values(curve: UnitBetCurve) -> ValueVector:
    """Closed-form values of bold player I versus timid player II.

    From ``x`` the chain climbs to ``x + 1`` with probability ``curve(x)``
    and otherwise drops straight to ``0``, so player I's value is the
    product of ``curve`` over ``x .. M - 1``; absorption is certain, hence
    player II's value is the complement.
    """
    if curve[0] != 0.0:
        raise ValueError("the unit-bet curve must vanish at fortune 0")
    q = [0.0] * (curve.M + 1)
    q[curve.M] = 1.0
    for x in range(curve.M - 1, 0, -1):
        q[x] = curve[x] * q[x + 1]
    t = tuple(1.0 - v for v in q)
    return ValueVector(curve.M, tuple(q), t)


def _chain_arrays(
    table: WinProbTable, profile: Profile
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per interior fortune ``x = 1..M-1``: up-probability, up and down targets."""
    M = table.M
    xs = np.arange(1, M)
    stakes_first = np.array(profile.first.bets, dtype=np.int64)[xs]
    stakes_second = np.array(profile.second.bets, dtype=np.int64)[M - xs]
    p = table.array[stakes_first, stakes_second]
    return p, xs + stakes_second, xs - stakes_first


def absorption_certain(table: WinProbTable, profile: Profile) -> bool:
    """Whether the induced chain reaches a boundary from every fortune.

    For a finite chain this is exactly absorption with probability one:
    backward reachability from ``{0, M}`` along positive-probability steps
    must cover the interior.
    """
    M = table.M
    p, up, dn = _chain_arrays(table, profile)
    reached = [False] * (M + 1)
    reached[0] = reached[M] = True
    changed = True
    while changed:
        changed = False
        for i in range(M - 1):
            if reached[i + 1]:
                continue
            if (p[i] > 0.0 and reached[up[i]]) or (p[i] < 1.0 and reached[dn[i]]):
                reached[i + 1] = True
                changed = True
    return all(reached)


def _solve_linear(
    M: int, p: np.ndarray, up: np.ndarray, dn: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Exact interior values of both players for an absorbing chain."""
    n = M - 1
    A = np.zeros((n, n))
    cI = np.zeros(n)
    cII = np.zeros(n)
    for i in range(n):
        for prob, target in ((p[i], up[i]), (1.0 - p[i], dn[i])):
            if 0 < target < M:
                A[i, target - 1] += prob
            elif target == M:
                cI[i] += prob
            else:
                cII[i] += prob
    solution = np.linalg.solve(np.eye(n) - A, np.stack([cI, cII], axis=1))
    return np.clip(solution[:, 0], 0.0, 1.0), np.clip(solution[:, 1], 0.0, 1.0)


def _iterate_chain(
    M: int,
    p: np.ndarray,
    up: np.ndarray,
    dn: np.ndarray,
    goal: int,
    *,
    tol_vi: float = DEFAULT_VI_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> tuple[np.ndarray, int, bool]:
    """Monotone iteration from zero toward the minimal fixed point.

    Returns the full value vector (boundary included), the sweep count and
    whether every sweep was numerically monotone (it should be: all updates
    are convex combinations, which round monotonically).
    """
    u = np.zeros(M + 1)
    u[goal] = 1.0
    monotone = True
    for sweep in range(1, max_sweeps + 1):
        fresh = p * u[up] + (1.0 - p) * u[dn]
        delta = float(np.max(np.abs(fresh - u[1:M]))) if M > 1 else 0.0
        if np.min(fresh - u[1:M]) < 0.0:
            monotone = False
        u[1:M] = fresh
        if delta < tol_vi:
            return u, sweep, monotone
    raise RuntimeError(
        f"value iteration did not settle within {max_sweeps} sweeps"
    )


def _hitting_raw(
    table: WinProbTable,
    profile: Profile,
    *,
    method: str = "auto",
    tol_vi: float = DEFAULT_VI_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> tuple[tuple[float, ...], tuple[float, ...], str]:
    M = table.M
    p, up, dn = _chain_arrays(table, profile)
    if method == "auto":
        method = "solve" if absorption_certain(table, profile) else "iterate"
    if method == "solve":
        uI, uII = _solve_linear(M, p, up, dn)
        q = (0.0, *(float(v) for v in uI), 1.0)
        t = (1.0, *(float(v) for v in uII), 0.0)
    elif method == "iterate":
        vI, _, _ = _iterate_chain(M, p, up, dn, M, tol_vi=tol_vi, max_sweeps=max_sweeps)
        vII, _, _ = _iterate_chain(M, p, up, dn, 0, tol_vi=tol_vi, max_sweeps=max_sweeps)
        q = (0.0, *(float(v) for v in vI[1:M]), 1.0)
        t = (1.0, *(float(v) for v in vII[1:M]), 0.0)
    else:
        raise ValueError(f"unknown method {method!r}; use 'auto', 'solve' or 'iterate'")
    return q, t, method


def hitting_values(
    table: WinProbTable,
    profile: Profile,
    *,
    method: str = "auto",
    tol_vi: float = DEFAULT_VI_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> ValueVector:
    """Both players' winning probabilities under a fixed profile.

    ``method='auto'`` solves the interior linear system when the chain
    provably absorbs from everywhere and otherwise falls back to monotone
    iteration from zero, which converges to the minimal fixed point (cycling
    fortunes are worth zero to both players).
    """
    q, t, _ = _hitting_raw(
        table, profile, method=method, tol_vi=tol_vi, max_sweeps=max_sweeps
    )
    return ValueVector(table.M, q, t)


def all_strategies(owner: Player, M: int) -> Iterator[StationaryStrategy]:
    """Every stationary deterministic strategy, in lexicographic stake order."""
    interiors = itertools.product(*(range(1, t + 1) for t in range(1, M)))
    for stakes in interiors:
        yield StationaryStrategy(owner, (0, *stakes, 0))


def strategy_count(M: int) -> int:
    return math.factorial(M - 1)


def _require_enumerable(M: int, cap: int) -> None:
    if M > cap:
        raise EnumerationLimitError(
            f"enumeration over {strategy_count(M)} strategies per player needs "
            f"M <= {cap}; raise the cap explicitly to force it"
        )


@dataclass(frozen=True)
class BestResponse:
    """A value-iteration best response against a fixed opponent strategy.

    ``values[x]`` is the responder's own winning probability when player
    I's fortune is ``x`` (for player II that is the chance of driving the
    chain to ``0``), induced exactly by the extracted strategy.
    """

    player: Player
    strategy: StationaryStrategy
    values: tuple[float, ...]


def _response_actions(
    table: WinProbTable, opponent: StationaryStrategy, x: int
) -> list[tuple[int, float, int, int]]:
    """Feasible (stake, up-probability, up, down) moves of the responder at ``x``."""
    M = table.M
    if opponent.owner is Player.TWO:
        b = opponent.bets[M - x]
        return [(a, table.prob(a, b), x + b, x - a) for a in range(1, x + 1)]
    a = opponent.bets[x]
    return [(b, table.prob(a, b), x + b, x - a) for b in range(1, M - x + 1)]


def best_response(
    table: WinProbTable,
    opponent: StationaryStrategy,
    *,
    tie_tol: float = DEFAULT_TIE_TOL,
    tol_vi: float = DEFAULT_VI_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> BestResponse:
    """Optimal stationary response by value iteration from zero.

    The extracted strategy prefers, among stakes whose one-stage value ties
    the optimum within ``tie_tol``, those making ranked progress toward the
    responder's goal (breaking remaining ties toward the smallest stake).
    The progress rule matters when the table holds exact zeros and ones: a
    merely greedy stake can stall in a cycle whose value the iteration
    already priced as if the goal were reached.
    """
    M = table.M
    responder = opponent.owner.other
    goal = M if responder is Player.ONE else 0
    moves = {x: _response_actions(table, opponent, x) for x in range(1, M)}

    values = [0.0] * (M + 1)
    values[goal] = 1.0
    for _ in range(max_sweeps):
        delta = 0.0
        for x in range(1, M):
            best = max(p * values[u] + (1.0 - p) * values[d] for _, p, u, d in moves[x])
            delta = max(delta, abs(best - values[x]))
            values[x] = best
        if delta < tol_vi:
            break
    else:
        raise RuntimeError(f"value iteration did not settle within {max_sweeps} sweeps")

    greedy = {
        x: [
            (stake, p, u, d)
            for stake, p, u, d in moves[x]
            if p * values[u] + (1.0 - p) * values[d] >= values[x] - tie_tol
        ]
        for x in range(1, M)
    }
    ranked = {goal}
    choice: dict[int, int] = {}
    progressed = True
    while progressed:
        progressed = False
        for x in range(1, M):
            if x in choice:
                continue
            qualifying = [
                stake
                for stake, p, u, d in greedy[x]
                if (p > 0.0 and u in ranked) or (p < 1.0 and d in ranked)
            ]
            if qualifying:
                choice[x] = min(qualifying)
                progressed = True
        ranked.update(choice.keys())
    for x in range(1, M):
        # No greedy stake makes progress: the fortune is worth 0, any stake does.
        choice.setdefault(x, min(stake for stake, _, _, _ in greedy[x]))

    if responder is Player.ONE:
        bets = tuple(0 if t in (0, M) else choice[t] for t in range(M + 1))
        strategy = StationaryStrategy(Player.ONE, bets)
        exact = hitting_values(table, Profile(strategy, opponent)).q
    else:
        bets = tuple(0 if t in (0, M) else choice[M - t] for t in range(M + 1))
        strategy = StationaryStrategy(Player.TWO, bets)
        exact = hitting_values(table, Profile(opponent, strategy)).t
    return BestResponse(responder, strategy, exact)


@dataclass(frozen=True)
class EnumeratedBestResponse:
    """Statewise maxima over every stationary deterministic response.

    ``values[x]`` is the best achievable winning probability at player I's
    fortune ``x``; ``per_state[x]`` lists indices (into ``strategies``) of
    the responses attaining it within the tie tolerance; ``optimal`` lists
    the responses attaining the maximum at every fortune simultaneously.
    """

    player: Player
    strategies: tuple[StationaryStrategy, ...]
    values: tuple[float, ...]
    per_state: tuple[tuple[int, ...], ...]
    optimal: tuple[StationaryStrategy, ...]


def enumerate_best_response(
    table: WinProbTable,
    opponent: StationaryStrategy,
    *,
    cap: int = DEFAULT_ENUM_CAP,
    tie_tol: float = DEFAULT_TIE_TOL,
) -> EnumeratedBestResponse:
    """Exhaustive oracle for :func:`best_response` (factorial cost in ``M``)."""
    M = table.M
    _require_enumerable(M, cap)
    responder = opponent.owner.other
    strategies = tuple(all_strategies(responder, M))
    rows = np.empty((len(strategies), M + 1))
    for i, strategy in enumerate(strategies):
        if responder is Player.ONE:
            rows[i] = _hitting_raw(table, Profile(strategy, opponent))[0]
        else:
            rows[i] = _hitting_raw(table, Profile(opponent, strategy))[1]
    maxima = rows.max(axis=0)
    per_state = tuple(
        tuple(int(i) for i in np.nonzero(rows[:, x] >= maxima[x] - tie_tol)[0])
        for x in range(M + 1)
    )
    simultaneous = np.nonzero((rows >= maxima - tie_tol).all(axis=1))[0]
    return EnumeratedBestResponse(
        player=responder,
        strategies=strategies,
        values=tuple(float(v) for v in maxima),
        per_state=per_state,
        optimal=tuple(strategies[int(i)] for i in simultaneous),
    )


def check_bold_excessive(
    curve: UnitBetCurve,
    values: ValueVector | None = None,
    *,
    tol: float = DEFAULT_TOL,
    max_witnesses: int | None = DEFAULT_WITNESS_CAP,
) -> CheckReport:
    """No single stake beats the bold one against a timid opponent.

    For ``1 <= x <= M - 1`` and ``0 <= a <= x``:
    ``curve(a) * q(x + 1) + (1 - curve(a)) * q(x - a) <= q(x)``
    where ``q`` are the bold-versus-timid values.  Passing makes those
    values excessive for player I, which certifies bold play optimal
    against the timid opponent over all strategies.
    """
    if values is None:
        values = bold_timid_values(curve)
    q = values.q

    def terms() -> Iterator[tuple[tuple[int, ...], float, float, str]]:
        for x in range(1, curve.M):
            for a in range(x + 1):
                lhs = curve[a] * q[x + 1] + (1.0 - curve[a]) * q[x - a]
                yield (x, a), lhs, q[x], "bold-excessive"

    return evaluate_inequality(
        "bold-excessive", terms(), tol=tol, max_witnesses=max_witnesses
    )


def check_timid_excessive(
    table: WinProbTable,
    values: ValueVector | None = None,
    *,
    tol: float = DEFAULT_TOL,
    max_witnesses: int | None = DEFAULT_WITNESS_CAP,
) -> CheckReport:
    """No single stake helps player II against a bold opponent.

    For ``0 <= x <= M - 1`` and ``1 <= b <= M - x``:
    ``q(x) <= P(x, b) * q(x + b)`` where ``q`` are the bold-versus-timid
    values.  Passing makes ``1 - q`` excessive for player II, certifying
    timid play optimal against the bold opponent over all strategies.
    """
    if values is None:
        values = bold_timid_values(unit_bet_curve(table))
    q = values.q

    def terms() -> Iterator[tuple[tuple[int, ...], float, float, str]]:
        for x in range(table.M):
            for b in range(1, table.M - x + 1):
                yield (x, b), q[x], table.prob(x, b) * q[x + b], "timid-excessive"

    return evaluate_inequality(
        "timid-excessive", terms(), tol=tol, max_witnesses=max_witnesses
    )


@dataclass(frozen=True)
class Deviation:
    """A unilateral improvement refuting an equilibrium claim."""

    player: Player
    strategy: StationaryStrategy
    value: float
    baseline: float

    @property
    def gain(self) -> float:
        return self.value - self.baseline

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "player": self.player.value,
            "strategy": self.strategy.to_json_dict(),
            "value": self.value,
            "baseline": self.baseline,
            "gain": self.gain,
        }


@dataclass(frozen=True)
class EquilibriumCertificate:
    """Verdict on a profile at an initial fortune, with its evidence.

    ``method`` is ``'excessivity'`` (both excessivity checks passed;
    coverage is all strategies) or ``'enumeration'`` (no stationary
    deterministic deviation improves; coverage is labeled accordingly).
    A refutation carries the improving deviation.
    """

    profile: Profile
    x0: int
    value_I: float
    value_II: float
    equilibrium: bool
    method: str
    coverage: str
    deviation: Deviation | None = None
    reports: tuple[CheckReport, ...] = field(default=(), repr=False)

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "profile": self.profile.to_json_dict(),
            "x0": self.x0,
            "value_I": self.value_I,
            "value_II": self.value_II,
            "equilibrium": self.equilibrium,
            "method": self.method,
            "coverage": self.coverage,
            "deviation": None if self.deviation is None else self.deviation.to_json_dict(),
            "reports": [r.to_json_dict() for r in self.reports],
        }


def verify_nash(
    table: WinProbTable,
    profile: Profile,
    x0: int,
    *,
    tol: float = DEFAULT_TOL,
    cap: int = DEFAULT_ENUM_CAP,
    tie_tol: float = DEFAULT_TIE_TOL,
) -> EquilibriumCertificate:
    """Certify or refute a profile as an equilibrium at fortune ``x0``.

    The bold-versus-timid profile is first tried via the two excessivity
    checks, which certify it against all strategies.  Any other profile —
    or a bold-versus-timid one failing an excessivity check — is compared
    against every stationary deterministic deviation of either player
    (player I checked first); a strict improvement at ``x0`` refutes.
    """
    M = table.M
    if not 0 <= x0 <= M:
        raise ValueError(f"initial fortune {x0} outside 0..{M}")
    values = hitting_values(table, profile)
    vI, vII = values.q[x0], values.t[x0]
    reports: tuple[CheckReport, ...] = ()

    curve = unit_bet_curve(table)
    if profile.first.is_bold and profile.second.is_timid and curve[0] == 0.0:
        exact = bold_timid_values(curve)
        exc = check_bold_excessive(curve, exact, tol=tol)
        star = check_timid_excessive(table, exact, tol=tol)
        reports = (exc, star)
        if exc.passed and star.passed:
            return EquilibriumCertificate(
                profile, x0, vI, vII, True, "excessivity", "all-strategies", None, reports
            )

    _require_enumerable(M, cap)
    against_I = enumerate_best_response(table, profile.second, cap=cap, tie_tol=tie_tol)
    if against_I.values[x0] > vI + tol:
        best = against_I.strategies[against_I.per_state[x0][0]]
        deviation = Deviation(Player.ONE, best, against_I.values[x0], vI)
        return EquilibriumCertificate(
            profile, x0, vI, vII, False, "enumeration",
            "stationary-deterministic", deviation, reports,
        )
    against_II = enumerate_best_response(table, profile.first, cap=cap, tie_tol=tie_tol)
    if against_II.values[x0] > vII + tol:
        best = against_II.strategies[against_II.per_state[x0][0]]
        deviation = Deviation(Player.TWO, best, against_II.values[x0], vII)
        return EquilibriumCertificate(
            profile, x0, vI, vII, False, "enumeration",
            "stationary-deterministic", deviation, reports,
        )
    return EquilibriumCertificate(
        profile, x0, vI, vII, True, "enumeration",
        "stationary-deterministic", None, reports,
    )


@lru_cache(maxsize=8)
def _pairwise_value_tensors(
    table: WinProbTable,
) -> tuple[tuple[StationaryStrategy, ...], tuple[StationaryStrategy, ...], np.ndarray, np.ndarray]:
    """Value tensors ``[i, j, x]`` over all profile pairs, cached per table."""
    M = table.M
    firsts = tuple(all_strategies(Player.ONE, M))
    seconds = tuple(all_strategies(Player.TWO, M))
    VI = np.empty((len(firsts), len(seconds), M + 1))
    VII = np.empty_like(VI)
    for i, si in enumerate(firsts):
        for j, sj in enumerate(seconds):
            q, t, _ = _hitting_raw(table, Profile(si, sj))
            VI[i, j] = q
            VII[i, j] = t
    VI.setflags(write=False)
    VII.setflags(write=False)
    return firsts, seconds, VI, VII


def enumerate_equilibria(
    table: WinProbTable,
    x0: int,
    *,
    tol: float = DEFAULT_TOL,
    cap: int = DEFAULT_ENUM_CAP,
) -> tuple[EquilibriumCertificate, ...]:
    """All stationary deterministic equilibria at fortune ``x0``.

    A profile qualifies when neither player has a strictly improving
    (by more than ``tol``) unilateral stationary deterministic deviation.
    Results are ordered lexicographically by both players' stakes.
    """
    M = table.M
    if not 0 <= x0 <= M:
        raise ValueError(f"initial fortune {x0} outside 0..{M}")
    _require_enumerable(M, cap)
    firsts, seconds, VI, VII = _pairwise_value_tensors(table)
    best_I = VI[:, :, x0].max(axis=0)  # per opponent column
    best_II = VII[:, :, x0].max(axis=1)  # per opponent row
    out: list[EquilibriumCertificate] = []
    for i in range(len(firsts)):
        for j in range(len(seconds)):
            if VI[i, j, x0] >= best_I[j] - tol and VII[i, j, x0] >= best_II[i] - tol:
                out.append(
                    EquilibriumCertificate(
                        Profile(firsts[i], seconds[j]),
                        x0,
                        float(VI[i, j, x0]),
                        float(VII[i, j, x0]),
                        True,
                        "enumeration",
                        "stationary-deterministic",
                    )
                )
    return tuple(out)

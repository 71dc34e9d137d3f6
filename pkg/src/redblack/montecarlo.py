"""Seeded Monte Carlo play of a fixed profile, with exact cross-checks.

Determinism contract
--------------------

Every uniform draw is a pure function of ``(seed, trial, step)``: trial
keys and per-step draws come from the SplitMix64 output permutation applied
to counter sequences.  Consequently results are byte-identical across runs,
independent of chunking (``jobs``), and any single trial can be replayed
in isolation (:func:`replay_trial`) to audit the vectorized stepping.

A trial walks player I's fortune until absorption at ``0`` or ``M``, or
until the step horizon is hit (such trials are reported as truncated, never
as wins).  :func:`compare_exact` scores the empirical win frequency against
an exact value vector with a z-statistic, and refuses to judge when too
many trials were truncated.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any

import numpy as np

from .game import Profile, WinProbTable
from .solver import ValueVector

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_U64_GOLDEN = np.uint64(_GOLDEN)


def _mix64_int(z: int) -> int:
    """SplitMix64 output permutation on python integers (mod 2**64)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    """SplitMix64 output permutation, vectorized over uint64 (wraps mod 2**64)."""
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def trial_key(seed: int, trial: int) -> int:
    """The per-trial RNG key; a pure function of seed and trial index."""
    return _mix64_int(seed + (trial + 1) * _GOLDEN)


def step_uniform(seed: int, trial: int, step: int) -> float:
    """The uniform in [0, 1) consumed at one step of one trial."""
    draw = _mix64_int(trial_key(seed, trial) + (step + 1) * _GOLDEN)
    return (draw >> 11) * 2.0**-53


@dataclass(frozen=True)
class SimConfig:
    """Initial fortune, trial count, master seed and optional step horizon.

    ``horizon=None`` defaults to ``64 * M`` at run time.
    """

    x0: int
    trials: int
    seed: int
    horizon: int | None = None

    def __post_init__(self) -> None:
        if not (isinstance(self.x0, int) and self.x0 >= 0):
            raise ValueError(f"initial fortune must be a nonnegative integer, got {self.x0!r}")
        if not (isinstance(self.trials, int) and self.trials >= 1):
            raise ValueError(f"trial count must be a positive integer, got {self.trials!r}")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if self.horizon is not None and not (
            isinstance(self.horizon, int) and self.horizon >= 1
        ):
            raise ValueError(f"horizon must be a positive integer, got {self.horizon!r}")


@dataclass(frozen=True)
class SimResult:
    """Aggregate outcome of a batch of trials."""

    M: int
    x0: int
    trials: int
    seed: int
    horizon: int
    wins_I: int
    wins_II: int
    truncated: int
    total_steps: int
    max_steps: int

    @property
    def freq_I(self) -> float:
        return self.wins_I / self.trials

    @property
    def freq_II(self) -> float:
        return self.wins_II / self.trials

    @property
    def truncated_fraction(self) -> float:
        return self.truncated / self.trials

    @property
    def mean_steps(self) -> float:
        return self.total_steps / self.trials

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "M": self.M,
            "x0": self.x0,
            "trials": self.trials,
            "seed": self.seed,
            "horizon": self.horizon,
            "wins_I": self.wins_I,
            "wins_II": self.wins_II,
            "truncated": self.truncated,
            "freq_I": self.freq_I,
            "freq_II": self.freq_II,
            "truncated_fraction": self.truncated_fraction,
            "total_steps": self.total_steps,
            "mean_steps": self.mean_steps,
            "max_steps": self.max_steps,
        }


def _profile_step_tables(
    table: WinProbTable, profile: Profile
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-fortune up-probability and both targets (boundaries self-loop)."""
    M = table.M
    p = np.zeros(M + 1)
    up = np.arange(M + 1, dtype=np.int64)
    dn = np.arange(M + 1, dtype=np.int64)
    for x in range(1, M):
        a = profile.first.bets[x]
        b = profile.second.bets[M - x]
        p[x] = table.prob(a, b)
        up[x] = x + b
        dn[x] = x - a
    return p, up, dn


def _run_chunk(
    p: np.ndarray,
    up: np.ndarray,
    dn: np.ndarray,
    M: int,
    x0: int,
    seed: int,
    start: int,
    stop: int,
    horizon: int,
) -> tuple[int, int, int, int, int]:
    """Simulate trials ``start..stop-1``; chunk boundaries cannot affect draws."""
    count = stop - start
    indices = np.arange(start, stop, dtype=np.uint64)
    with np.errstate(over="ignore"):
        keys = _mix64_array(np.uint64(seed) + (indices + np.uint64(1)) * _U64_GOLDEN)
    states = np.full(count, x0, dtype=np.int64)
    steps = np.zeros(count, dtype=np.int64)
    for k in range(horizon):
        active = np.nonzero((states != 0) & (states != M))[0]
        if active.size == 0:
            break
        with np.errstate(over="ignore"):
            draws = _mix64_array(keys[active] + np.uint64(k + 1) * _U64_GOLDEN)
        uniforms = (draws >> np.uint64(11)) * 2.0**-53
        here = states[active]
        goes_up = uniforms < p[here]
        states[active] = np.where(goes_up, up[here], dn[here])
        steps[active] += 1
    wins_i = int(np.count_nonzero(states == M))
    wins_ii = int(np.count_nonzero(states == 0))
    truncated = count - wins_i - wins_ii
    return wins_i, wins_ii, truncated, int(steps.sum()), int(steps.max(initial=0))


def simulate(
    table: WinProbTable, profile: Profile, config: SimConfig, *, jobs: int = 1
) -> SimResult:
    """Play ``config.trials`` independent trials of the profile.

    ``jobs`` only chunks the trial range across worker threads; the draws
    are keyed by absolute trial index, so the result is identical for every
    chunking.
    """
    M = table.M
    if profile.M != M:
        raise ValueError("profile and table disagree on the total money")
    if not 0 <= config.x0 <= M:
        raise ValueError(f"initial fortune {config.x0} outside 0..{M}")
    if jobs < 1:
        raise ValueError(f"jobs must be a positive integer, got {jobs!r}")
    horizon = config.horizon if config.horizon is not None else 64 * M
    p, up, dn = _profile_step_tables(table, profile)

    chunk = -(-config.trials // jobs)  # ceil division
    bounds = [
        (lo, min(lo + chunk, config.trials))
        for lo in range(0, config.trials, chunk)
    ]
    if len(bounds) == 1:
        parts = [_run_chunk(p, up, dn, M, config.x0, config.seed, 0, config.trials, horizon)]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(
                pool.map(
                    lambda span: _run_chunk(
                        p, up, dn, M, config.x0, config.seed, span[0], span[1], horizon
                    ),
                    bounds,
                )
            )
    wins_i = sum(part[0] for part in parts)
    wins_ii = sum(part[1] for part in parts)
    truncated = sum(part[2] for part in parts)
    total_steps = sum(part[3] for part in parts)
    max_steps = max(part[4] for part in parts)
    return SimResult(
        M=M,
        x0=config.x0,
        trials=config.trials,
        seed=config.seed,
        horizon=horizon,
        wins_I=wins_i,
        wins_II=wins_ii,
        truncated=truncated,
        total_steps=total_steps,
        max_steps=max_steps,
    )


@dataclass(frozen=True)
class TrialPath:
    """One replayed trial: the stakes actually played, stage by stage.

    ``stages[n] = (n, x, a, b)`` records the fortune and both stakes at
    stage ``n``; ``final_state`` is the fortune after the last recorded
    stage (absorbing unless the trial was truncated).
    """

    trial: int
    stages: tuple[tuple[int, int, int, int], ...]
    final_state: int
    truncated: bool


def replay_trial(
    table: WinProbTable, profile: Profile, config: SimConfig, trial: int
) -> TrialPath:
    """Re-walk one trial with scalar arithmetic; bit-identical to the batch."""
    M = table.M
    if not 0 <= trial < config.trials:
        raise ValueError(f"trial {trial} outside 0..{config.trials - 1}")
    horizon = config.horizon if config.horizon is not None else 64 * M
    x = config.x0
    stages: list[tuple[int, int, int, int]] = []
    for step in range(horizon):
        if x in (0, M):
            break
        a = profile.first.bets[x]
        b = profile.second.bets[M - x]
        stages.append((step, x, a, b))
        if step_uniform(config.seed, trial, step) < table.prob(a, b):
            x += b
        else:
            x -= a
    return TrialPath(
        trial=trial,
        stages=tuple(stages),
        final_state=x,
        truncated=x not in (0, M),
    )


@dataclass(frozen=True)
class AgreementReport:
    """Empirical-versus-exact verdict for one starting fortune.

    ``valid`` is withdrawn (and ``passed`` forced false) when the truncated
    fraction exceeds its bound, since truncation biases the frequency.  For
    degenerate exact values (0 or 1) the z-score is undefined and the win
    count must match exactly.
    """

    empirical: float
    exact: float
    trials: int
    z: float | None
    truncated_fraction: float
    valid: bool
    passed: bool
    reason: str

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "empirical": self.empirical,
            "exact": self.exact,
            "trials": self.trials,
            "z": self.z,
            "truncated_fraction": self.truncated_fraction,
            "valid": self.valid,
            "passed": self.passed,
            "reason": self.reason,
        }


def compare_exact(
    result: SimResult,
    values: ValueVector,
    *,
    z_max: float = 4.0,
    max_truncated_fraction: float = 0.01,
) -> AgreementReport:
    """Score the empirical frequency of player I's wins against exact values."""
    if values.M != result.M:
        raise ValueError("value vector and simulation disagree on the total money")
    exact = values.q[result.x0]
    frac = result.truncated_fraction
    if frac > max_truncated_fraction:
        return AgreementReport(
            empirical=result.freq_I,
            exact=exact,
            trials=result.trials,
            z=None,
            truncated_fraction=frac,
            valid=False,
            passed=False,
            reason=(
                f"truncated fraction {frac:.6g} exceeds {max_truncated_fraction:.6g}; "
                "raise the horizon"
            ),
        )
    if exact in (0.0, 1.0):
        expected = int(round(exact)) * result.trials
        ok = result.wins_I == expected
        return AgreementReport(
            empirical=result.freq_I,
            exact=exact,
            trials=result.trials,
            z=None,
            truncated_fraction=frac,
            valid=True,
            passed=ok,
            reason="degenerate exact value: win count must match exactly"
            if ok
            else f"expected exactly {expected} wins for player I, got {result.wins_I}",
        )
    z = (result.freq_I - exact) / np.sqrt(exact * (1.0 - exact) / result.trials)
    z = float(z)
    ok = abs(z) <= z_max
    return AgreementReport(
        empirical=result.freq_I,
        exact=exact,
        trials=result.trials,
        z=z,
        truncated_fraction=frac,
        valid=True,
        passed=ok,
        reason=f"|z| = {abs(z):.4g} vs bound {z_max:g}",
    )

"""Shared fixtures: the preset tables exercised across the suite."""

from __future__ import annotations

import pytest

import redblack as rb


@pytest.fixture(scope="session")
def pow1_m4() -> rb.WinProbTable:
    return rb.power_family(4, 1)


@pytest.fixture(scope="session")
def pow2_m3() -> rb.WinProbTable:
    return rb.power_family(3, 2)


@pytest.fixture(scope="session")
def pow2_m4() -> rb.WinProbTable:
    return rb.power_family(4, 2)


@pytest.fixture(scope="session")
def min_exp_m4() -> rb.WinProbTable:
    return rb.min_exp_table(4, 1.0)


@pytest.fixture(scope="session")
def el_m4() -> rb.WinProbTable:
    return rb.exp_difference_table(4)


@pytest.fixture(scope="session")
def cycle_m4() -> rb.WinProbTable:
    """Fair linear table with two entries forced deterministic.

    With both players staking (1, 1, 2) the induced chain cycles
    1 -> 3 -> 1 forever: from fortune 1 the stakes are (1, 2) and the entry
    forces a sure climb to 3; from fortune 3 they are (2, 1) and the entry
    forces a sure drop back to 1.
    """
    return rb.power_family(4, 1).with_entry(1, 2, 1.0).with_entry(2, 1, 0.0)


@pytest.fixture(scope="session")
def cycle_profile() -> rb.Profile:
    return rb.Profile(
        rb.StationaryStrategy(rb.Player.ONE, (0, 1, 1, 2, 0)),
        rb.StationaryStrategy(rb.Player.TWO, (0, 1, 1, 2, 0)),
    )

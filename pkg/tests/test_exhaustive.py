import math

import numpy as np
import pytest

import oracles
from swapchain.chain import critical_n
from swapchain.chain.exhaustive import (
    enumerate_window,
    exhaustive_search,
    make_window,
    wing_window,
    windows,
)
from swapchain.errors import DomainError
from swapchain.qstate import BellOutcome, ChainParams

A45 = 0.45 * math.pi


def test_window_geometry():
    w = make_window(2, 1)
    assert w.links == ("L", "L", "1", "R")
    assert w.ends == (-3, 2)
    assert w.measuring == (-2, -1, 1)
    assert w.label == "P-3..P2"
    assert wing_window("R", 3).measuring == (2, 3)
    assert wing_window("L", 3).measuring == (-3, -2)
    with pytest.raises(DomainError):
        wing_window("X", 2)


def test_window_count():
    # s + 1 placements of the central link plus two pure-wing runs per size
    assert len(windows(3)) == sum(s + 3 for s in range(1, 4))
    assert {w.links for w in windows(1)} == {("1", "R"), ("L", "1"), ("L", "L"), ("R", "R")}


@pytest.mark.parametrize("m", [0, 8])
def test_bounds(m):
    with pytest.raises(DomainError):
        exhaustive_search(ChainParams(0.75, A45, 0.3), m)


def test_two_party_activation_is_exactly_the_psi_pairs():
    params = ChainParams(0.75, A45, 0.3)
    assert critical_n(params) == 2
    single = exhaustive_search(params, 1)
    assert not single.violating
    report = exhaustive_search(params, 2)
    hits = report.violating
    assert {w.label for w, _ in hits} == {"P-2..P2"}
    assert sorted(tuple(map(str, b.outcomes)) for _, b in hits) == [
        ("psi+", "psi+"), ("psi+", "psi-"), ("psi-", "psi+"), ("psi-", "psi-")
    ]
    symmetric = next(w for w in report.windows if w.window.label == "P-2..P2")
    assert len(symmetric.branches) == 16


def test_branch_probabilities_sum_to_one():
    params = ChainParams(0.6, 1.1, 0.45)
    report = exhaustive_search(params, 3)
    for w in report.windows:
        assert len(w.branches) == 4 ** len(w.window.measuring)
        assert w.total_probability == pytest.approx(1.0, abs=1e-9)


def test_branch_matches_oracle():
    params = ChainParams(0.75, A45, 0.3)
    w = enumerate_window(params, make_window(1, 0))
    links = [oracles.rho_L(params.p, params.alpha), oracles.rho_1(params.p1)]
    for branch in w.branches:
        prob, state = oracles.swap(links[0], links[1], branch.outcomes[0].value)
        assert branch.probability == pytest.approx(prob, abs=1e-14)
        assert branch.m_value == pytest.approx(oracles.horodecki_m(state), abs=1e-10)
        assert branch.min_pt_eigenvalue == pytest.approx(oracles.min_pt_eigenvalue(state), abs=1e-10)


def test_zero_probability_subtrees_are_filled():
    params = ChainParams(0.0, 1.0, 0.0)
    w = enumerate_window(params, make_window(1, 1))
    assert len(w.branches) == 16
    assert w.total_probability == pytest.approx(1.0)
    dead = [b for b in w.branches if b.m_value is None]
    assert dead and all(b.probability == 0.0 and not b.violates for b in dead)


def test_psi_rule_at_activating_and_non_activating_points():
    for params in (ChainParams(0.75, A45, 0.3), ChainParams(0.75, A45, 0.01), ChainParams(0.7, 0.48 * math.pi, 0.2)):
        assert exhaustive_search(params, 4).psi_rule_holds()


def test_phi_branches_separable_below_boundary():
    # p below both Phi boundaries at this angle (0.866 and 0.971)
    params = ChainParams(0.75, A45, 0.3)
    report = exhaustive_search(params, 3)
    for w in report.windows:
        for b in w.branches:
            if b.has_phi and b.m_value is not None:
                assert b.min_pt_eigenvalue >= -1e-10
                assert not b.violates


def test_workers_do_not_change_results():
    params = ChainParams(0.75, A45, 0.3)
    one = exhaustive_search(params, 2, workers=1)
    two = exhaustive_search(params, 2, workers=2)
    for a, b in zip(one.windows, two.windows):
        assert a.window == b.window
        assert [x.probability for x in a.branches] == [x.probability for x in b.branches]
        assert [x.outcomes for x in a.branches] == [x.outcomes for x in b.branches]


def test_outcomes_enumerated_in_fixed_order():
    w = enumerate_window(ChainParams(0.5, 1.0, 0.5), make_window(0, 1))
    assert [b.outcomes[0] for b in w.branches] == list(BellOutcome)
    assert np.isclose(sum(b.probability for b in w.branches), 1.0)

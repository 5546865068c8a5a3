import math

import numpy as np
import pytest

import oracles
from swapchain.chain import p_k_closed
from swapchain.errors import DomainError, ZeroProbabilityBranch
from swapchain.qstate import (
    KET_00,
    PSI_MINUS,
    PSI_PLUS,
    BellOutcome,
    ChainParams,
    make_rho_1,
    make_rho_L,
    make_rho_R,
    projector,
    purity,
    validate_state,
)
from swapchain.swap import SwapResult, bell_swap, chain_step, phase_correct, swap_chain
from swapchain.verify import random_params, random_state

PSI = BellOutcome.PSI_PLUS
BELL_STATES = [projector(o.vector) for o in BellOutcome]


def test_standard_swapping():
    res = bell_swap(projector(PSI_PLUS), projector(PSI_PLUS), PSI)
    assert res.probability == pytest.approx(0.25)
    np.testing.assert_allclose(res.post_state, projector(PSI_PLUS), atol=1e-15)


def test_product_inputs():
    res = bell_swap(projector(KET_00), projector(KET_00), BellOutcome.PHI_PLUS)
    assert res.probability == pytest.approx(0.5)
    np.testing.assert_allclose(res.post_state, projector(KET_00), atol=1e-15)


def test_zero_probability_branch():
    res = bell_swap(projector(KET_00), projector(KET_00), PSI)
    assert res.probability == 0.0
    assert not res.defined
    with pytest.raises(ZeroProbabilityBranch):
        res.post_state


def test_frozen_oracle_values():
    # from the straight-line oracle in tests/oracles.py
    res = bell_swap(make_rho_L(0.75, 0.45 * math.pi), make_rho_1(0.3), PSI)
    assert res.probability == pytest.approx(0.08142383223626107, abs=1e-14)
    expected = np.zeros((4, 4))
    expected[0, 0] = 0.3091703196088361
    expected[1, 1] = 0.01690580560252461
    expected[2, 2] = 0.6739238747886392
    expected[1, 2] = expected[2, 1] = 0.10673905572974152
    np.testing.assert_allclose(res.post_state, expected, atol=1e-14)


def test_matches_oracle_on_random_inputs(rng):
    for _ in range(30):
        left, right = random_state(rng), random_state(rng)
        for outcome in BellOutcome:
            prob, state = oracles.swap(left.tolist(), right.tolist(), outcome.value)
            res = bell_swap(left, right, outcome)
            assert res.probability == pytest.approx(prob, abs=1e-13)
            np.testing.assert_allclose(res.post_state, state, atol=1e-12)


def test_completeness_and_validity(rng):
    for _ in range(100):
        left, right = random_state(rng), random_state(rng)
        results = [bell_swap(left, right, o) for o in BellOutcome]
        assert sum(r.probability for r in results) == pytest.approx(1.0, abs=1e-12)
        for r in results:
            assert -1e-12 <= r.probability <= 1 + 1e-12
            if r.probability > 1e-12:
                validate_state(r.post_state)


def test_linearity(rng):
    for _ in range(50):
        a, b, c = random_state(rng), random_state(rng), random_state(rng)
        w = rng.uniform()
        for outcome in BellOutcome:
            mixed = bell_swap(w * a + (1 - w) * b, c, outcome)
            ra, rb = bell_swap(a, c, outcome), bell_swap(b, c, outcome)
            unnorm = w * ra.probability * ra.post_state + (1 - w) * rb.probability * rb.post_state
            assert np.max(np.abs(mixed.probability * mixed.post_state - unnorm)) <= 1e-12
            mixed = bell_swap(c, w * a + (1 - w) * b, outcome)
            ra, rb = bell_swap(c, a, outcome), bell_swap(c, b, outcome)
            unnorm = w * ra.probability * ra.post_state + (1 - w) * rb.probability * rb.post_state
            assert np.max(np.abs(mixed.probability * mixed.post_state - unnorm)) <= 1e-12


def test_pure_bell_inputs_give_pure_outputs():
    for left in BELL_STATES:
        for right in BELL_STATES:
            for outcome in BellOutcome:
                res = bell_swap(left, right, outcome)
                assert res.probability == pytest.approx(0.25)
                assert purity(res.post_state) == pytest.approx(1.0, abs=1e-10)


def test_rejects_wrong_shapes():
    with pytest.raises(DomainError):
        bell_swap(np.eye(2) / 2, make_rho_1(0.5), PSI)


def test_phase_correct():
    np.testing.assert_allclose(phase_correct(projector(PSI_MINUS), BellOutcome.PSI_MINUS), projector(PSI_PLUS),
                               atol=1e-15)
    rho = make_rho_L(0.4, 0.3)
    assert phase_correct(rho, PSI) is rho
    for outcome in BellOutcome:
        np.testing.assert_allclose(phase_correct(projector(KET_00), outcome), projector(KET_00), atol=0)


def test_chain_step_reproduces_two_step_closed_form():
    params = ChainParams(0.75, 0.45 * math.pi, 0.3)
    res = chain_step(make_rho_1(0.3), params, PSI, PSI)
    w = p_k_closed(2, params)
    expected = w * projector(PSI_PLUS) + (1 - w) * projector(KET_00)
    assert np.max(np.abs(res.post_state - expected)) <= 1e-10


def test_all_psi_outcome_pairs_agree_after_correction():
    params = ChainParams(0.75, 0.45 * math.pi, 0.3)
    ref = chain_step(make_rho_1(0.3), params, PSI, PSI)
    for a in (BellOutcome.PSI_PLUS, BellOutcome.PSI_MINUS):
        for b in (BellOutcome.PSI_PLUS, BellOutcome.PSI_MINUS):
            res = chain_step(make_rho_1(0.3), params, a, b)
            assert res.probability == pytest.approx(ref.probability, abs=1e-15)
            np.testing.assert_allclose(res.post_state, ref.post_state, atol=1e-14)


def test_chain_step_separable_wings(rng):
    for alpha in (0.3, 1.2, 2.5):
        params = ChainParams(0.0, alpha, 0.5)
        middle = random_state(rng)
        for a in BellOutcome:
            for b in BellOutcome:
                res = chain_step(middle, params, a, b)
                if res.defined:
                    np.testing.assert_allclose(res.post_state, projector(KET_00), atol=1e-12)


def test_chain_step_order_independence(rng):
    for _ in range(50):
        params = random_params(rng)
        middle = random_state(rng)
        for a in BellOutcome:
            for b in BellOutcome:
                lf = chain_step(middle, params, a, b, left_first=True)
                rf = chain_step(middle, params, a, b, left_first=False)
                assert lf.probability == pytest.approx(rf.probability, abs=1e-14)
                if lf.defined:
                    assert np.max(np.abs(lf.post_state - rf.post_state)) <= 1e-12


def test_chain_step_completeness(rng):
    worst = 0.0
    for _ in range(1000):
        params = random_params(rng)
        middle = random_state(rng) if rng.uniform() < 0.5 else make_rho_1(params.p1)
        total = sum(chain_step(middle, params, a, b).probability for a in BellOutcome for b in BellOutcome)
        worst = max(worst, abs(total - 1))
    assert worst <= 1e-10


def test_swap_chain_matches_nested_swaps():
    p, a = 0.75, 0.45 * math.pi
    rho_r = make_rho_R(p, a)
    res = swap_chain([rho_r, rho_r, rho_r], [PSI, PSI])
    prob1, mid = oracles.swap(oracles.rho_R(p, a), oracles.rho_R(p, a))
    prob2, end = oracles.swap(mid.tolist(), oracles.rho_R(p, a))
    assert res.probability == pytest.approx(prob1 * prob2, abs=1e-14)
    np.testing.assert_allclose(res.post_state, end, atol=1e-12)
    with pytest.raises(DomainError):
        swap_chain([rho_r, rho_r], [])


def test_swap_result_is_frozen():
    res = SwapResult(0.5, make_rho_1(0.1))
    with pytest.raises(AttributeError):
        res.probability = 1.0

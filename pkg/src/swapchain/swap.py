"""Bell measurement on the two inner qubits of a pair of links."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from swapchain.errors import DomainError, ZeroProbabilityBranch
from swapchain.qstate import (
    I2,
    SIGMA_Z,
    BellOutcome,
    ChainParams,
    bell_projector,
    make_rho_L,
    make_rho_R,
    partial_trace,
    tensor,
)

ZERO_PROBABILITY = 1e-12
_Z_ON_SECOND = np.kron(I2, SIGMA_Z)


@dataclass(frozen=True)
class SwapResult:
    probability: float
    _post_state: np.ndarray | None

    @property
    def defined(self) -> bool:
        return self._post_state is not None

    @property
    def post_state(self) -> np.ndarray:
        if self._post_state is None:
            raise ZeroProbabilityBranch(
                f"outcome has probability {self.probability:.3g}; post-measurement state is undefined"
            )
        return self._post_state


@lru_cache(maxsize=None)
def _middle_projector(outcome: BellOutcome) -> np.ndarray:
    op = np.kron(np.kron(I2, bell_projector(outcome)), I2)
    op.setflags(write=False)
    return op


def bell_swap(left: np.ndarray, right: np.ndarray, outcome: BellOutcome) -> SwapResult:
    """Project qubit 1 of ``left`` and qubit 0 of ``right`` onto a Bell state.

    Returns the Born probability and the renormalized state of the two outer
    qubits (left's qubit 0, right's qubit 1).
    """
    left = np.asarray(left, dtype=complex)
    right = np.asarray(right, dtype=complex)
    if left.shape != (4, 4) or right.shape != (4, 4):
        raise DomainError("bell_swap needs two two-qubit states")
    proj = _middle_projector(BellOutcome(outcome))
    projected = proj @ tensor(left, right) @ proj
    outer = partial_trace(projected, keep=(0, 3))
    prob = float(np.trace(outer).real)
    if prob <= ZERO_PROBABILITY:
        return SwapResult(prob, None)
    outer = outer / prob
    return SwapResult(prob, 0.5 * (outer + outer.conj().T))


def phase_correct(state: np.ndarray, outcome: BellOutcome) -> np.ndarray:
    """Apply sigma_z to the right qubit after a minus-type outcome."""
    if BellOutcome(outcome).is_minus:
        return _Z_ON_SECOND @ state @ _Z_ON_SECOND
    return state


def chain_step(
    middle: np.ndarray,
    params: ChainParams,
    left_outcome: BellOutcome,
    right_outcome: BellOutcome,
    *,
    left_first: bool = True,
) -> SwapResult:
    """Extend ``middle`` by one left and one right wing link.

    Both end parties of ``middle`` perform a Bell measurement; the joint
    probability is the product of the two conditional probabilities.
    """
    rho_l = make_rho_L(params.p, params.alpha)
    rho_r = make_rho_R(params.p, params.alpha)
    if left_first:
        first = bell_swap(rho_l, middle, left_outcome)
        if not first.defined:
            return first
        second = bell_swap(first.post_state, rho_r, right_outcome)
    else:
        first = bell_swap(middle, rho_r, right_outcome)
        if not first.defined:
            return first
        second = bell_swap(rho_l, first.post_state, left_outcome)
    prob = first.probability * second.probability
    if not second.defined:
        return SwapResult(prob, None)
    state = phase_correct(phase_correct(second.post_state, left_outcome), right_outcome)
    return SwapResult(prob, state)


def swap_chain(links, outcomes, *, correct: bool = True) -> SwapResult:
    """Contract a sequence of links left to right, one Bell outcome per
    interior party, and return the end-to-end probability and state."""
    links = list(links)
    outcomes = list(outcomes)
    if len(outcomes) != len(links) - 1:
        raise DomainError("need exactly one outcome per interior party")
    state = links[0]
    prob = 1.0
    for link, outcome in zip(links[1:], outcomes):
        res = bell_swap(state, link, outcome)
        prob *= res.probability
        if not res.defined:
            return SwapResult(prob, None)
        state = phase_correct(res.post_state, outcome) if correct else res.post_state
    return SwapResult(prob, state)



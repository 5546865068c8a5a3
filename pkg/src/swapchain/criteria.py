"""CHSH violation (Horodecki criterion) and PPT separability for two qubits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from swapchain.errors import DomainError
from swapchain.qstate import (
    ChainParams,
    correlation_matrix,
    hermitian_eigenvalues,
    make_rho_1,
    make_rho_L,
    make_rho_R,
    validate_state,
)

CHSH_TOL = 1e-9
PPT_TOL = 1e-10


@dataclass(frozen=True)
class ChshReport:
    lambdas: tuple[float, float, float]  # eigenvalues of T^T T, descending
    m_value: float
    violates: bool

    @property
    def max_chsh(self) -> float:
        """Largest attainable CHSH expectation, ``2 sqrt(m_value)``."""
        return 2.0 * math.sqrt(max(self.m_value, 0.0))


@dataclass(frozen=True)
class SeparabilityReport:
    min_pt_eigenvalue: float
    separable: bool


def chsh_report(rho: np.ndarray, tol: float = CHSH_TOL, *, check: bool = True) -> ChshReport:
    """Horodecki criterion: ``rho`` violates CHSH iff the two largest
    eigenvalues of ``T^T T`` sum to more than one.

    The verdict uses ``m_value > 1 + tol`` so boundary states count as
    non-violating.
    """
    if check:
        rho = validate_state(rho)
        if rho.shape != (4, 4):
            raise DomainError("CHSH report needs a two-qubit state")
    t = correlation_matrix(rho)
    lam = hermitian_eigenvalues(t.T @ t)[::-1]
    lambdas = (float(lam[0]), float(lam[1]), float(lam[2]))
    m_value = lambdas[0] + lambdas[1]
    return ChshReport(lambdas, m_value, m_value > 1.0 + tol)


def partial_transpose(rho: np.ndarray, subsystem: int = 1) -> np.ndarray:
    """Partial transpose of a two-qubit state over qubit ``subsystem``."""
    r = np.asarray(rho).reshape(2, 2, 2, 2)
    if subsystem == 1:
        return r.transpose(0, 3, 2, 1).reshape(4, 4)
    if subsystem == 0:
        return r.transpose(2, 1, 0, 3).reshape(4, 4)
    raise ValueError("subsystem must be 0 or 1")


def ppt_report(rho: np.ndarray, tol: float = PPT_TOL, *, check: bool = True) -> SeparabilityReport:
    """Peres-Horodecki test; for two qubits PPT is equivalent to separability."""
    if check:
        rho = validate_state(rho)
    min_eig = float(hermitian_eigenvalues(partial_transpose(rho))[0])
    return SeparabilityReport(min_eig, min_eig >= -tol)


def initial_gate(params: ChainParams, tol: float = CHSH_TOL) -> bool:
    """True iff none of the three link states violates CHSH."""
    states = (
        make_rho_L(params.p, params.alpha),
        make_rho_R(params.p, params.alpha),
        make_rho_1(params.p1),
    )
    return not any(chsh_report(rho, tol).violates for rho in states)


def wing_m_closed(p: float, alpha: float) -> float:
    """Analytic Horodecki value of a wing link.

    ``T = diag(p sin 2a, p sin 2a, 1 - 2p)``, so the two largest squared
    entries give ``max(2 p^2 sin^2 2a, 1 - 4p + p^2 (9 - cos 4a) / 2)``.
    """
    s2 = (p * math.sin(2 * alpha)) ** 2
    return max(2 * s2, s2 + (1 - 2 * p) ** 2)


def wing_gate_unsquared(p: float, alpha: float) -> bool:
    """Wing condition with an unsquared first term ``2 p^2 sin 2a``."""
    first = 2 * p * p * math.sin(2 * alpha)
    second = 1 - 4 * p + 0.5 * p * p * (9 - math.cos(4 * alpha))
    return max(first, second) <= 1.0


def gate_crosscheck(p_values, alpha_values, tol: float = CHSH_TOL) -> dict:
    """Compare the eigenvalue verdict for the wings with the unsquared condition
    and with its squared-sine reading, returning disagreement counts and the
    points where the unsquared form disagrees."""
    disagreements = []
    squared_mismatch = 0
    total = 0
    for alpha in alpha_values:
        for p in p_values:
            total += 1
            eig = not (
                chsh_report(make_rho_L(p, alpha), tol, check=False).violates
                or chsh_report(make_rho_R(p, alpha), tol, check=False).violates
            )
            if (wing_m_closed(p, alpha) <= 1.0 + tol) != eig:
                squared_mismatch += 1
            if wing_gate_unsquared(p, alpha) != eig:
                disagreements.append((float(alpha), float(p)))
    return {
        "points": total,
        "squared_form_mismatches": squared_mismatch,
        "unsquared_form_mismatches": len(disagreements),
        "unsquared_disagreements": disagreements,
    }

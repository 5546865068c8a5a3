"""Randomized cross-checks of the closed forms against brute-force
contraction, plus the invariant suites of each module."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from swapchain.chain import (
    p_k_closed,
    p_Rnk_closed,
    p_Rnk_alternative,
    rho_k_closed,
    rho_Rn_closed,
    rho_Rnk_closed,
    simulate_all_psi,
)
from swapchain.criteria import (
    chsh_report,
    gate_crosscheck,
    partial_transpose,
)
from swapchain.qstate import (
    BellOutcome,
    ChainParams,
    correlation_matrix,
    hermitian_eigenvalues,
    make_rho_1,
    make_rho_L,
    make_rho_R,
)
from swapchain.swap import bell_swap, chain_step, swap_chain


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float | None  # None marks an informational entry
    passed: bool

    def line(self) -> str:
        status = "info" if self.tol is None else ("PASS" if self.passed else "FAIL")
        bound = "" if self.tol is None else f" (tol {self.tol:.0e})"
        return f"[{status}] {self.name}: {self.value:.3e}{bound}"


def _check(name, value, tol):
    return Check(name, float(value), tol, bool(value <= tol))


def random_params(rng: np.random.Generator, margin: float = 1e-3) -> ChainParams:
    """Uniform draw away from the closed-form singularities."""
    while True:
        alpha = rng.uniform(0, math.pi)
        if abs(math.sin(alpha)) > margin and abs(math.cos(2 * alpha)) > margin:
            return ChainParams(rng.uniform(margin, 1.0), alpha, rng.uniform(0.0, 1.0))


def random_state(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def check_all_psi_oracle(rng, trials: int, k_max: int = 8) -> list[Check]:
    worst_state = worst_weight = 0.0
    for _ in range(trials):
        params = random_params(rng)
        state = make_rho_1(params.p1)
        for k in range(2, k_max + 1):
            res = chain_step(state, params, BellOutcome.PSI_PLUS, BellOutcome.PSI_PLUS)
            if not res.defined:
                break
            state = res.post_state
            worst_state = max(worst_state, np.max(np.abs(state - rho_k_closed(k, params))))
            worst_weight = max(worst_weight, abs(1.0 - state[0, 0].real - p_k_closed(k, params)))
    return [
        _check(f"rho_k closed form vs brute force (k<={k_max})", worst_state, 1e-10),
        _check("p_k closed form vs brute-force weight", worst_weight, 1e-10),
    ]


def check_asymmetric_oracle(rng, trials: int, n_max: int = 6, k_max: int = 6) -> list[Check]:
    worst_rn = worst_rnk = worst_alt = 0.0
    for _ in range(trials):
        params = random_params(rng)
        n = int(rng.integers(1, n_max + 1))
        k = int(rng.integers(1, k_max + 1))
        rho_r = make_rho_R(params.p, params.alpha)
        brute = swap_chain([rho_r] * n, [BellOutcome.PSI_PLUS] * (n - 1))
        _, _, closed = rho_Rn_closed(n, params.p, params.alpha)
        worst_rn = max(worst_rn, np.max(np.abs(brute.post_state - closed)))
        res = bell_swap(rho_k_closed(k, params), closed, BellOutcome.PSI_PLUS)
        if res.defined:
            _, _, closed_nk = rho_Rnk_closed(n, k, params)
            worst_rnk = max(worst_rnk, np.max(np.abs(res.post_state - closed_nk)))
            if p_k_closed(k, params) > 0:
                worst_alt = max(worst_alt, abs(p_Rnk_alternative(n, k, params) - p_Rnk_closed(n, k, params)))
    return [
        _check("rho_{R,n} closed form vs brute force", worst_rn, 1e-10),
        _check("rho_{R,n,k} closed form vs brute force", worst_rnk, 1e-10),
        Check("alternative p_{R,n,k} form deviation from brute force", worst_alt, None, True),
    ]


def check_completeness(rng, trials: int) -> list[Check]:
    worst = 0.0
    for _ in range(trials):
        params = random_params(rng)
        middle = random_state(rng)
        total = sum(chain_step(middle, params, a, b).probability for a in BellOutcome for b in BellOutcome)
        worst = max(worst, abs(total - 1.0))
    return [_check("chain_step Born-rule completeness", worst, 1e-10)]


def check_criteria(rng, trials: int) -> list[Check]:
    worst_lu = worst_routes = worst_pt = 0.0
    for _ in range(trials):
        rho = random_state(rng)
        u = np.kron(random_unitary(rng), random_unitary(rng))
        worst_lu = max(worst_lu, abs(chsh_report(rho).m_value - chsh_report(u @ rho @ u.conj().T).m_value))
        t = correlation_matrix(rho)
        sv = np.sort(np.linalg.svd(t, compute_uv=False) ** 2)[::-1]
        worst_routes = max(worst_routes, np.max(np.abs(np.array(chsh_report(rho).lambdas) - sv)))
        a = hermitian_eigenvalues(partial_transpose(rho, 1))
        b = hermitian_eigenvalues(partial_transpose(rho, 0))
        worst_pt = max(worst_pt, np.max(np.abs(a - b)))
    worst_rho1 = 0.0
    for p1 in np.linspace(0, 1, 101):
        expected = sorted([p1 * p1, p1 * p1, (1 - 2 * p1) ** 2], reverse=True)
        worst_rho1 = max(worst_rho1, np.max(np.abs(np.array(chsh_report(make_rho_1(p1)).lambdas) - expected)))
    return [
        _check("local-unitary invariance of M", worst_lu, 1e-8),
        _check("T^T T eigenvalues vs squared singular values", worst_routes, 1e-10),
        _check("partial transpose convention independence", worst_pt, 1e-12),
        _check("rho_1 analytic eigenvalues", worst_rho1, 1e-12),
    ]


def threshold_flip(tol: float = 1e-15) -> float:
    """Bisect the p1 at which rho_1 starts violating CHSH."""
    lo, hi = 0.5, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if chsh_report(make_rho_1(mid)).violates:
            hi = mid
        else:
            lo = mid
    return hi


def check_states(rng, trials: int) -> list[Check]:
    worst = 0.0
    for _ in range(trials):
        params = random_params(rng, margin=0.0)
        for rho in (make_rho_L(params.p, params.alpha), make_rho_R(params.p, params.alpha), make_rho_1(params.p1)):
            herm = np.max(np.abs(rho - rho.conj().T))
            tr = abs(np.trace(rho) - 1)
            neg = max(0.0, -hermitian_eigenvalues(rho)[0])
            worst = max(worst, herm, tr, neg)
    flip = abs(threshold_flip() - 1 / math.sqrt(2))
    return [
        _check("constructor state invariants", worst, 1e-10),
        _check("rho_1 CHSH verdict flips at 1/sqrt(2)", flip, 1e-9),
    ]


def check_gate_forms(steps: int = 101) -> list[Check]:
    ps = np.linspace(0, 1, steps)
    alphas = np.linspace(0, math.pi, steps)
    report = gate_crosscheck(ps, alphas)
    return [
        _check("squared-sine wing condition vs eigenvalues (mismatches)", report["squared_form_mismatches"], 0),
        Check(
            f"unsquared wing condition vs eigenvalues (mismatches of {report['points']})",
            report["unsquared_form_mismatches"],
            None,
            True,
        ),
    ]


def run_verification(seed: int = 0, trials: int = 1000) -> list[Check]:
    rng = np.random.default_rng(seed)
    checks = []
    checks += check_all_psi_oracle(rng, trials)
    checks += check_asymmetric_oracle(rng, trials)
    checks += check_completeness(rng, trials)
    checks += check_criteria(rng, trials)
    checks += check_states(rng, trials)
    checks += check_gate_forms()
    return checks

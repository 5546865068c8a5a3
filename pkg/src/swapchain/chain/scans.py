"""Parameter-plane scans: the non-violating region, activation regions per
number of swaps, separability boundaries of Phi outcomes, and critical-number
curves."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from swapchain.chain.closed_form import (
    ACTIVATION_WEIGHT,
    critical_search,
    in_model,
    k_from_swaps,
    p_k_closed,
    p_k_limit,
    simulate_all_psi,
)
from swapchain.swap import chain_step
from swapchain.criteria import CHSH_TOL, PPT_TOL, chsh_report, ppt_report
from swapchain.errors import DomainError
from swapchain.qstate import BellOutcome, ChainParams, make_rho_1, make_rho_L, make_rho_R
from swapchain.swap import bell_swap
from swapchain.table import Table

DEFAULT_N_LIST = tuple(range(2, 21, 2))
REFERENCE_ALPHA_LABELS = (20 / 25, 21 / 25, 22 / 25)
ALPHA_UNITS = {"rad": 1.0, "pi": math.pi, "half-pi": math.pi / 2}


@dataclass(frozen=True)
class ScanGrid:
    alpha_min: float
    alpha_max: float
    p_min: float
    p_max: float
    steps: int
    p1: float = 0.01

    def __post_init__(self):
        if not self.alpha_min < self.alpha_max:
            raise DomainError("alpha_min must be below alpha_max")
        if not self.p_min < self.p_max:
            raise DomainError("p_min must be below p_max")
        if self.steps < 2:
            raise DomainError("need at least 2 steps per axis")
        if not (0 <= self.alpha_min and self.alpha_max <= math.pi + 1e-12):
            raise DomainError("alpha range must lie within [0, pi]")
        if not (0 <= self.p_min and self.p_max <= 1):
            raise DomainError("p range must lie within [0, 1]")
        ChainParams(self.p_min, self.alpha_min, self.p1)

    @property
    def alphas(self) -> np.ndarray:
        return np.linspace(self.alpha_min, self.alpha_max, self.steps)

    @property
    def ps(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.steps)


DEFAULT_GRID = ScanGrid(math.pi / 4, 3 * math.pi / 4, 0.0, 1.0, 400, 0.01)


def _map_columns(func, grid: ScanGrid, extra, workers: int) -> list:
    jobs = [(float(a), grid, extra) for a in grid.alphas]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(func, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        chunks = [func(job) for job in jobs]
    return [row for chunk in chunks for row in chunk]


def _initial_column(job):
    alpha, grid, rho1_ok = job
    rows = []
    for p in grid.ps:
        p = float(p)
        left = chsh_report(make_rho_L(p, alpha), check=False)
        right = chsh_report(make_rho_R(p, alpha), check=False)
        ok = rho1_ok and not left.violates and not right.violates
        rows.append((alpha, p, left.m_value, right.m_value, ok))
    return rows


def scan_initial_region(grid: ScanGrid, workers: int = 1) -> Table:
    """Per grid point, the Horodecki values of both wings and whether all
    three link states are CHSH-local."""
    rho1_ok = not chsh_report(make_rho_1(grid.p1)).violates
    table = Table(("alpha", "p", "m_rhoL", "m_rhoR", "nonviolating"))
    table.rows = _map_columns(_initial_column, grid, rho1_ok, workers)
    return table


def wing_gate_boundary(alpha: float, tol: float = CHSH_TOL, iterations: int = 60) -> float:
    """Largest p for which neither wing violates CHSH at this alpha.

    The local set in p is an interval starting at 0, so plain bisection works.
    """

    def local(p):
        return not (
            chsh_report(make_rho_L(p, alpha), tol, check=False).violates
            or chsh_report(make_rho_R(p, alpha), tol, check=False).violates
        )

    if local(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if local(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _oracle_verdicts(params: ChainParams, ks) -> dict[int, bool]:
    """Violation verdicts for all-Psi rho_k computed by brute force in one
    pass along the chain."""
    wanted = set(ks)
    out = {}
    state = make_rho_1(params.p1)
    for k in range(1, max(wanted) + 1):
        if k > 1 and state is not None:
            res = chain_step(state, params, BellOutcome.PSI_PLUS, BellOutcome.PSI_PLUS)
            state = res.post_state if res.defined else None
        if k in wanted:
            out[k] = state is not None and chsh_report(state, check=False).violates
    return out


def activation_verdicts(params: ChainParams, n_list) -> tuple[dict[int, bool], bool]:
    """Per listed n, whether the all-Psi state after n swaps violates CHSH,
    plus the k -> infinity verdict.  Singular or out-of-model closed-form
    points are decided by the brute-force chain instead."""
    verdicts = {}
    fallback = []
    for n in n_list:
        k = k_from_swaps(n)
        try:
            w = p_k_closed(k, params)
        except DomainError:
            fallback.append(n)
            continue
        if in_model(w):
            verdicts[n] = w > ACTIVATION_WEIGHT
        else:
            fallback.append(n)
    if fallback:
        oracle = _oracle_verdicts(params, [k_from_swaps(n) for n in fallback])
        verdicts.update({n: oracle[k_from_swaps(n)] for n in fallback})
    try:
        limit = p_k_limit(params) > ACTIVATION_WEIGHT
    except DomainError:
        # alpha = pi/4 (weight decays like 1/k) or p = 0 (all links |00>): no limit activation
        limit = False
    return verdicts, limit


def _activation_column(job):
    alpha, grid, (n_list, rho1_ok) = job
    rows = []
    for p in grid.ps:
        p = float(p)
        params = ChainParams(p, alpha, grid.p1)
        gate = rho1_ok and not (
            chsh_report(make_rho_L(p, alpha), check=False).violates
            or chsh_report(make_rho_R(p, alpha), check=False).violates
        )
        if gate:
            verdicts, limit = activation_verdicts(params, n_list)
            acts = [verdicts[n] for n in n_list]
        else:
            acts, limit = [False] * len(n_list), False
        first = next((n for n, a in zip(n_list, acts) if a), None)
        if first is None and limit:
            first = math.inf
        rows.append((alpha, p, gate, *acts, limit, first))
    return rows


@dataclass(frozen=True)
class ActivationRegion:
    table: Table
    boundaries: Table


def scan_activation_region(
    grid: ScanGrid, n_list=DEFAULT_N_LIST, workers: int = 1, boundary_p1: float = 1 / math.sqrt(2)
) -> ActivationRegion:
    """Activation verdict for every listed even n at each grid point, plus
    the Phi-outcome separability boundaries over the same alpha axis.

    Activation is only reported where the initial gate holds.
    """
    n_list = tuple(int(n) for n in n_list)
    for n in n_list:
        if n < 2:
            raise DomainError("listed swap counts must be even and >= 2")
        k_from_swaps(n)
    rho1_ok = not chsh_report(make_rho_1(grid.p1)).violates
    cols = ("alpha", "p", "gate") + tuple(f"act_{n}" for n in n_list) + ("act_inf", "n_min")
    table = Table(cols)
    table.rows = _map_columns(_activation_column, grid, (n_list, rho1_ok), workers)
    return ActivationRegion(table, phi_boundary_curves(grid.alphas, boundary_p1))


def phi_branch_min_pt(left: np.ndarray, right: np.ndarray) -> float:
    """Smallest partial-transpose eigenvalue over the Phi+ and Phi- outcomes
    of a swap; +inf if both outcomes are impossible."""
    worst = math.inf
    for outcome in (BellOutcome.PHI_PLUS, BellOutcome.PHI_MINUS):
        res = bell_swap(left, right, outcome)
        if res.defined:
            worst = min(worst, ppt_report(res.post_state, check=False).min_pt_eigenvalue)
    return worst


def _phi_separable(kind: str, p: float, alpha: float, p1: float, tol: float = PPT_TOL) -> bool:
    right = make_rho_R(p, alpha)
    left = right if kind == "RR" else make_rho_1(p1)
    return phi_branch_min_pt(left, right) >= -tol


def phi_separability_boundary(kind: str, alpha: float, p1: float = 1 / math.sqrt(2), iterations: int = 40) -> float:
    """Largest p at which the Phi-outcome state of rho_R (x) rho_R (``"RR"``)
    or rho_1 (x) rho_R (``"1R"``) is still PPT."""
    if kind not in ("RR", "1R"):
        raise DomainError(f"unknown boundary kind {kind!r}")
    if _phi_separable(kind, 1.0, alpha, p1):
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        # bisect on the sign itself so the edge is not shifted by the tolerance
        if _phi_separable(kind, mid, alpha, p1, tol=0.0):
            lo = mid
        else:
            hi = mid
    return lo


def phi_boundary_curves(alphas, p1: float = 1 / math.sqrt(2)) -> Table:
    table = Table(("alpha", "p_sep_RR", "p_sep_1R"))
    for alpha in alphas:
        alpha = float(alpha)
        table.append(alpha, phi_separability_boundary("RR", alpha, p1), phi_separability_boundary("1R", alpha, p1))
    return table


def scan_critical_number(p: float, alphas, p1_min: float, p1_max: float, steps: int, k_max: int = 512) -> Table:
    """Critical swap number as a function of p1 for each alpha.

    Points where the initial gate fails are left out; ``n_c`` is None when
    activation never happens.
    """
    if steps < 2 or not 0 <= p1_min < p1_max <= 1:
        raise DomainError("need 0 <= p1_min < p1_max <= 1 and at least 2 steps")
    table = Table(("alpha", "p1", "n_c"))
    for alpha in alphas:
        alpha = float(alpha)
        wings_ok = not (
            chsh_report(make_rho_L(p, alpha)).violates or chsh_report(make_rho_R(p, alpha)).violates
        )
        if not wings_ok:
            continue
        for p1 in np.linspace(p1_min, p1_max, steps):
            p1 = float(p1)
            if chsh_report(make_rho_1(p1), check=False).violates:
                continue
            res = critical_search(ChainParams(p, alpha, p1), k_max)
            table.append(alpha, p1, res.n_c)
    return table


def _limit_margin(p: float, alpha: float) -> float:
    return p_k_limit(ChainParams(p, alpha, 0.5)) - ACTIVATION_WEIGHT


def activating_alpha_window(p: float, iterations: int = 60) -> tuple[float, float] | None:
    """Open alpha interval around pi/2 in which the all-Psi chain eventually
    violates CHSH, or None if it is empty for this p."""
    mid = math.pi / 2
    if p == 0 or _limit_margin(p, mid) <= 0:
        return None

    def edge(inside, outside):
        for _ in range(iterations):
            m = 0.5 * (inside + outside)
            try:
                ok = _limit_margin(p, m) > 0
            except DomainError:
                ok = False
            if ok:
                inside = m
            else:
                outside = m
        return inside

    return edge(mid, math.pi / 4), edge(mid, 3 * math.pi / 4)


def confirm_window(p: float, window: tuple[float, float], p1: float = 0.7, delta: float = 1e-3, k_probe: int = 400) -> bool:
    """Check the window edges with the brute-force chain: just inside, the
    critical state found by the closed form violates CHSH in simulation;
    just outside, a long all-Psi chain still does not."""
    lo, hi = window
    for alpha in (lo + delta, hi - delta):
        params = ChainParams(p, alpha, p1)
        res = critical_search(params)
        if res.n_c is None:
            return False
        sim = simulate_all_psi(res.k, params)
        if not (sim.defined and chsh_report(sim.post_state, check=False).violates):
            return False
    for alpha in (lo - delta, hi + delta):
        sim = simulate_all_psi(k_probe, ChainParams(p, alpha, p1))
        if sim.defined and chsh_report(sim.post_state, check=False).violates:
            return False
    return True


def alpha_label_probe(p: float = 0.75, p1: float = 0.5, labels=REFERENCE_ALPHA_LABELS) -> list[dict]:
    """Where a set of reference alpha labels lands under each angle unit,
    relative to the activating window."""
    window = activating_alpha_window(p)
    out = []
    for label in labels:
        for unit in ("pi", "half-pi"):
            alpha = label * ALPHA_UNITS[unit]
            inside = window is not None and window[0] < alpha < window[1]
            n_c = critical_search(ChainParams(p, alpha, p1)).n_c if inside else None
            out.append({"label": label, "unit": unit, "alpha": alpha, "in_window": inside, "n_c_at_p1": n_c})
    return out

"""Closed-form chain states and the brute-force all-Psi simulation they are
checked against."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from swapchain.criteria import CHSH_TOL, chsh_report
from swapchain.errors import DomainError
from swapchain.qstate import BellOutcome, ChainParams, make_rho_1, make_rho_R, werner_like, PSI_PLUS
from swapchain.swap import SwapResult, chain_step

SINGULAR_TOL = 1e-12
# a Werner-like |Psi+> mixture violates CHSH iff 2 w^2 > 1 + tol
ACTIVATION_WEIGHT = math.sqrt((1.0 + CHSH_TOL) / 2.0)


def n_swaps(k: int) -> int:
    """Bell measurements performed before P_-k and P_k share rho_k."""
    return 2 * (k - 1)


def k_from_swaps(n: int) -> int:
    if n < 0 or n % 2:
        raise DomainError(f"number of swaps must be a non-negative even integer, got {n}")
    return n // 2 + 1


def _ratio_and_noise(params: ChainParams) -> tuple[float, float]:
    """``cot^2(alpha)`` and ``X = 1 + (p - 1) / (p cos 2alpha)``."""
    s = math.sin(params.alpha)
    c2 = math.cos(2 * params.alpha)
    if abs(s) < SINGULAR_TOL:
        raise DomainError(f"cot(alpha) is undefined at alpha={params.alpha!r}")
    if abs(c2) < SINGULAR_TOL:
        raise DomainError(f"cos(2 alpha) vanishes at alpha={params.alpha!r}")
    if params.p == 0:
        raise DomainError("p = 0 makes the closed form singular")
    cot = math.cos(params.alpha) / s
    return cot * cot, 1.0 + (params.p - 1.0) / (params.p * c2)


def p_k_closed(k: int, params: ChainParams) -> float:
    """Weight of |Psi+> in rho_k after all-Psi outcomes.

    Values outside [0, 1] are returned as computed; see :func:`in_model`.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if k == 1:
        return params.p1
    r, x = _ratio_and_noise(params)
    if params.p1 == 0:
        return 0.0
    # bracket = cot^(2m)/p1 + (1 - cot^(2m)) X, regrouped so cot^(2m) may overflow
    coeff = 1.0 / params.p1 - x
    if coeff == 0:
        return 1.0 / x
    try:
        rm = math.pow(r, k - 1)
    except OverflowError:
        rm = math.inf
    return 1.0 / (rm * coeff + x)


def in_model(weight: float, tol: float = 1e-12) -> bool:
    return -tol <= weight <= 1.0 + tol


def p_k_limit(params: ChainParams) -> float:
    """``lim p_k`` for k -> infinity: ``1/X`` when |cot alpha| < 1, else 0."""
    r, x = _ratio_and_noise(params)
    if params.p1 == 0:
        return 0.0
    if r < 1.0:
        return 1.0 / x
    if r == 1.0:
        return params.p1
    return 0.0


def rho_k_closed(k: int, params: ChainParams) -> np.ndarray:
    weight = p_k_closed(k, params)
    if not in_model(weight):
        raise DomainError(f"p_k = {weight!r} lies outside [0, 1]")
    return werner_like(min(max(weight, 0.0), 1.0), PSI_PLUS)


def iterate_all_psi(params: ChainParams, k_max: int):
    """Yield ``(k, SwapResult)`` for k = 1..k_max along one brute-force
    all-Psi+ chain; stops early on a zero-probability step."""
    state = make_rho_1(params.p1)
    prob = 1.0
    yield 1, SwapResult(prob, state)
    for k in range(2, k_max + 1):
        res = chain_step(state, params, BellOutcome.PSI_PLUS, BellOutcome.PSI_PLUS)
        prob *= res.probability
        if not res.defined:
            yield k, SwapResult(prob, None)
            return
        state = res.post_state
        yield k, SwapResult(prob, state)


def simulate_all_psi(k: int, params: ChainParams) -> SwapResult:
    """Brute-force rho_k: grow the chain from rho_1 with Psi+ outcomes on
    both sides, k - 1 times.  Returns the joint post-selection probability
    and the final state."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    last = None
    for _, last in iterate_all_psi(params, k):
        pass
    return last


@dataclass(frozen=True)
class CriticalResult:
    n_c: int | None
    k: int | None
    p_k: float | None
    status: str  # "activated", "never" or "out_of_model"
    detail: str = ""


def critical_search(params: ChainParams, k_max: int = 512) -> CriticalResult:
    """Smallest even number of swaps after which rho_k violates CHSH.

    Scans k = 2..k_max; past k_max the k -> infinity limit decides between
    "not yet" and "never", and in the former case the crossing index is
    solved for directly.
    """
    if k_max < 2:
        raise DomainError("k_max must be at least 2")
    try:
        _ratio_and_noise(params)
    except DomainError as exc:
        return _brute_force_search(params, k_max, str(exc))
    for k in range(2, k_max + 1):
        w = p_k_closed(k, params)
        if not in_model(w):
            return CriticalResult(None, k, w, "out_of_model", f"p_k={w!r} at k={k}")
        if w > ACTIVATION_WEIGHT:
            return _confirmed(k, params, "")
    limit = p_k_limit(params)
    if limit <= ACTIVATION_WEIGHT:
        return CriticalResult(None, None, limit, "never", f"limit p_k -> {limit!r}")
    # p_k rises monotonically towards 1/X: cot^(2m) (1/p1 - X) + X < 1/threshold
    r, x = _ratio_and_noise(params)
    ratio = (1.0 / ACTIVATION_WEIGHT - x) / (1.0 / params.p1 - x)
    k = max(k_max, int(math.log(ratio) / math.log(r)) + 1)
    while p_k_closed(k, params) <= ACTIVATION_WEIGHT:
        k += 1
    while k > 2 and p_k_closed(k - 1, params) > ACTIVATION_WEIGHT:
        k -= 1
    return _confirmed(k, params, "beyond k_max, located analytically")


def _brute_force_search(params: ChainParams, k_max: int, reason: str) -> CriticalResult:
    detail = f"closed form singular ({reason}); brute-force search up to k={k_max}"
    for k, res in iterate_all_psi(params, k_max):
        if k == 1:
            continue
        if not res.defined:
            return CriticalResult(None, None, None, "never", detail + f"; zero-probability branch at k={k}")
        if chsh_report(res.post_state, check=False).violates:
            return CriticalResult(n_swaps(k), k, 1.0 - res.post_state[0, 0].real, "activated", detail)
    return CriticalResult(None, None, None, "never", detail)


def _confirmed(k: int, params: ChainParams, detail: str) -> CriticalResult:
    rho = rho_k_closed(k, params)
    if not chsh_report(rho, check=False).violates:  # pragma: no cover - guards the threshold shortcut
        raise AssertionError("closed-form threshold disagrees with the Horodecki criterion")
    return CriticalResult(n_swaps(k), k, p_k_closed(k, params), "activated", detail)


def critical_n(params: ChainParams, k_max: int = 512) -> int | None:
    """Critical (even) number of swaps, or None if activation never occurs."""
    return critical_search(params, k_max).n_c


def rho_Rn_closed(n: int, p: float, alpha: float) -> tuple[float, float, np.ndarray]:
    """State shared across ``n`` right-wing links after Psi+ outcomes at the
    ``n - 1`` interior parties.

    Returns ``(p_Rn, alpha_n, state)``; ``alpha_n`` follows the signs of
    ``(sin^n alpha, cos^n alpha)``.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    ChainParams(p, alpha, 0.0)
    c2 = math.cos(2 * alpha)
    if abs(c2) < SINGULAR_TOL:
        raise DomainError(f"cos(2 alpha) vanishes at alpha={alpha!r}")
    sn = math.sin(alpha) ** n
    cn = math.cos(alpha) ** n
    norm = sn * sn + cn * cn
    # 1 / (1 + tan^(2n)) written without overflow near alpha = pi/2
    inv = cn * cn / norm
    p_rn = -p * c2 / (1.0 - p - p * c2 + 2.0 * (p - 1.0) * inv)
    alpha_n = math.atan2(sn, cn)
    return p_rn, alpha_n, make_rho_R(p_rn, alpha_n)


def p_Rnk_closed(n: int, k: int, params: ChainParams) -> float:
    """Weight of ``|Psi_{R,n}>`` after P_k swaps rho_k with rho_{R,n} (Psi+).

    Direct contraction gives ``q / (1 + 2 (1/p_k - 1) q cos^2 alpha_n)`` with
    ``q = p_{R,n}``; the normalization of ``cos alpha_n`` matters here.
    """
    q, alpha_n, _ = rho_Rn_closed(n, params.p, params.alpha)
    pk = p_k_closed(k, params)
    leak = q * math.cos(alpha_n) ** 2
    if pk == 0:
        if leak == 0:
            raise DomainError("swap outcome has zero probability")
        return 0.0
    # dividing q by a factor >= 1 keeps p_{R,n,k} <= p_{R,n} in floating point too
    return q / (1.0 + 2.0 * (1.0 / pk - 1.0) * leak)


def p_Rnk_alternative(n: int, k: int, params: ChainParams) -> float:
    """A competing closed form for the same weight, kept for comparison only;
    it does not agree with direct contraction."""
    q, _, _ = rho_Rn_closed(n, params.p, params.alpha)
    pk = p_k_closed(k, params)
    s, c = math.sin(params.alpha), math.cos(params.alpha)
    num = q * (s ** (2 * (n + 1)) + c ** (2 * (n + 1)))
    return num / (1.0 + 2.0 * (1.0 / pk - 1.0) * q * c ** (2 * n))


def rho_Rnk_closed(n: int, k: int, params: ChainParams) -> tuple[float, float, np.ndarray]:
    w = p_Rnk_closed(n, k, params)
    _, alpha_n, _ = rho_Rn_closed(n, params.p, params.alpha)
    return w, alpha_n, make_rho_R(w, alpha_n)

"""Enumerate every Bell-outcome configuration over contiguous sets of
measuring parties.

A window is a run of consecutive links.  Its interior parties measure and its
two end parties keep the output state.  Up to translation along a uniform
wing, the windows with ``s`` measuring parties are the ``s + 1`` placements
that contain the central link plus one pure left-wing and one pure
right-wing run.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from swapchain.criteria import chsh_report, ppt_report
from swapchain.errors import DomainError
from swapchain.qstate import BellOutcome, ChainParams, make_rho_1, make_rho_L, make_rho_R
from swapchain.swap import bell_swap, phase_correct

MAX_PARTIES = 7
OUTCOMES = tuple(BellOutcome)


@dataclass(frozen=True)
class Window:
    links: tuple[str, ...]  # "L", "1" or "R", left to right
    parties: tuple[int, ...]  # party labels P_i at every link junction

    @property
    def measuring(self) -> tuple[int, ...]:
        return self.parties[1:-1]

    @property
    def ends(self) -> tuple[int, int]:
        return self.parties[0], self.parties[-1]

    @property
    def label(self) -> str:
        a, b = self.ends
        return f"P{a}..P{b}"


def make_window(n_left: int, n_right: int) -> Window:
    """Window with ``n_left`` rho_L links, the central link, ``n_right`` rho_R links."""
    links = ("L",) * n_left + ("1",) + ("R",) * n_right
    parties = tuple(range(-(n_left + 1), 0)) + tuple(range(1, n_right + 2))
    return Window(links, parties)


def wing_window(side: str, n_links: int) -> Window:
    if side == "R":
        return Window(("R",) * n_links, tuple(range(1, n_links + 2)))
    if side == "L":
        return Window(("L",) * n_links, tuple(range(-(n_links + 1), 0)))
    raise DomainError(f"unknown wing {side!r}")


def windows(m_parties: int) -> list[Window]:
    out = []
    for s in range(1, m_parties + 1):
        out.extend(make_window(j, s - j) for j in range(s, -1, -1))
        out.append(wing_window("L", s + 1))
        out.append(wing_window("R", s + 1))
    return out


@dataclass(frozen=True)
class Branch:
    outcomes: tuple[BellOutcome, ...]
    probability: float
    m_value: float | None  # None on zero-probability branches
    violates: bool
    min_pt_eigenvalue: float | None

    @property
    def has_phi(self) -> bool:
        return any(not o.is_psi for o in self.outcomes)

    @property
    def all_psi(self) -> bool:
        return all(o.is_psi for o in self.outcomes)


@dataclass(frozen=True)
class WindowReport:
    window: Window
    branches: tuple[Branch, ...]

    @property
    def total_probability(self) -> float:
        return float(sum(b.probability for b in self.branches))

    @property
    def violating(self) -> list[Branch]:
        return [b for b in self.branches if b.violates]

    @property
    def all_psi_violates(self) -> bool:
        return any(b.violates for b in self.branches if b.all_psi)


@dataclass(frozen=True)
class ExhaustiveReport:
    params: ChainParams
    m_parties: int
    windows: tuple[WindowReport, ...]

    @property
    def violating(self) -> list[tuple[Window, Branch]]:
        return [(w.window, b) for w in self.windows for b in w.violating]

    @property
    def n_branches(self) -> int:
        return sum(len(w.branches) for w in self.windows)

    def psi_rule_holds(self) -> bool:
        """True if every window whose all-Psi branches fail to violate has no
        violating branch at all."""
        return all(w.all_psi_violates or not w.violating for w in self.windows)


def _link_states(params: ChainParams) -> dict[str, np.ndarray]:
    return {
        "L": make_rho_L(params.p, params.alpha),
        "1": make_rho_1(params.p1),
        "R": make_rho_R(params.p, params.alpha),
    }


def enumerate_window(params: ChainParams, window: Window) -> WindowReport:
    """All ``4^s`` branches of one window, contracted left to right with
    shared prefixes."""
    states = _link_states(params)
    links = [states[name] for name in window.links]
    depth = len(links) - 1
    branches: list[Branch] = []

    def descend(state, prob, prefix):
        if len(prefix) == depth:
            chsh = chsh_report(state, check=False)
            ppt = ppt_report(state, check=False)
            branches.append(Branch(prefix, prob, chsh.m_value, chsh.violates, ppt.min_pt_eigenvalue))
            return
        nxt = links[len(prefix) + 1]
        for outcome in OUTCOMES:
            res = bell_swap(state, nxt, outcome)
            if res.defined:
                descend(phase_correct(res.post_state, outcome), prob * res.probability, prefix + (outcome,))
            else:
                rest = depth - len(prefix) - 1
                for tail in itertools.product(OUTCOMES, repeat=rest):
                    branches.append(Branch(prefix + (outcome,) + tail, 0.0, None, False, None))

    descend(links[0], 1.0, ())
    return WindowReport(window, tuple(branches))


def _enumerate_job(args):
    return enumerate_window(*args)


def exhaustive_search(params: ChainParams, m_parties: int, workers: int = 1) -> ExhaustiveReport:
    """Enumerate every outcome configuration for every window of up to
    ``m_parties`` measuring parties."""
    if not 1 <= m_parties <= MAX_PARTIES:
        raise DomainError(f"m_parties must lie in 1..{MAX_PARTIES}, got {m_parties}")
    jobs = [(params, w) for w in windows(m_parties)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = tuple(pool.map(_enumerate_job, jobs))
    else:
        reports = tuple(map(_enumerate_job, jobs))
    return ExhaustiveReport(params, m_parties, reports)

"""Entanglement swapping chains of noisy two-qubit states and the CHSH
nonlocality they activate under post-selection."""

from swapchain.errors import DomainError, ZeroProbabilityBranch
from swapchain.qstate import BellOutcome, ChainParams

__all__ = ["BellOutcome", "ChainParams", "DomainError", "ZeroProbabilityBranch"]
__version__ = "0.1.0"

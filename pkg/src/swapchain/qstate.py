"""Dense 1-4 qubit states, Bell projectors and the chain state families.

States are plain ``numpy`` complex arrays.  Qubit 0 is the most significant
bit of the basis index, so a two-qubit basis reads ``|00>, |01>, |10>, |11>``
and in ``kron(rho_AB, rho_CD)`` the factors are ordered ``A, B, C, D``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from swapchain.errors import DomainError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = -1e-10
JACOBI_TOL = 1e-13
_ALLOWED_DIMS = (2, 4, 16)

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# _PAULI_PAIRS[i, j] = sigma_i (x) sigma_j
_PAULI_PAIRS = np.array([[np.kron(a, b) for b in PAULIS] for a in PAULIS])


def ket(*bits: int) -> np.ndarray:
    """Computational basis vector, e.g. ``ket(0, 1)`` is ``|01>``."""
    vec = np.zeros(2 ** len(bits), dtype=complex)
    vec[int("".join(str(b) for b in bits), 2)] = 1.0
    return vec


def projector(vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=complex)
    return np.outer(vec, vec.conj())


_S = 1 / math.sqrt(2)
KET_00 = ket(0, 0)
PSI_PLUS = _S * (ket(0, 1) + ket(1, 0))
PSI_MINUS = _S * (ket(0, 1) - ket(1, 0))
PHI_PLUS = _S * (ket(0, 0) + ket(1, 1))
PHI_MINUS = _S * (ket(0, 0) - ket(1, 1))


class BellOutcome(enum.Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"

    @property
    def vector(self) -> np.ndarray:
        return _BELL_VECTORS[self]

    @property
    def is_psi(self) -> bool:
        return self in (BellOutcome.PSI_PLUS, BellOutcome.PSI_MINUS)

    @property
    def is_minus(self) -> bool:
        return self in (BellOutcome.PSI_MINUS, BellOutcome.PHI_MINUS)

    def __str__(self) -> str:
        return self.value


_BELL_VECTORS = {
    BellOutcome.PHI_PLUS: PHI_PLUS,
    BellOutcome.PHI_MINUS: PHI_MINUS,
    BellOutcome.PSI_PLUS: PSI_PLUS,
    BellOutcome.PSI_MINUS: PSI_MINUS,
}


@dataclass(frozen=True)
class ChainParams:
    """Parameters of the chain: wing mixing weight ``p``, wing angle ``alpha``
    (radians, in ``[0, pi]``) and central-link mixing weight ``p1``."""

    p: float
    alpha: float
    p1: float

    def __post_init__(self):
        _check_weight("p", self.p)
        _check_weight("p1", self.p1)
        if not (0.0 <= self.alpha <= math.pi + 1e-12):
            raise DomainError(f"alpha must lie in [0, pi], got {self.alpha!r}")


def _check_weight(name: str, value: float) -> None:
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


def werner_like(weight: float, vec: np.ndarray) -> np.ndarray:
    """``weight |vec><vec| + (1 - weight) |00><00|`` on two qubits."""
    _check_weight("weight", weight)
    return weight * projector(vec) + (1.0 - weight) * projector(KET_00)


def make_rho_L(p: float, alpha: float) -> np.ndarray:
    """Left-wing link: noisy ``cos(alpha)|01> + sin(alpha)|10>``."""
    return werner_like(p, math.cos(alpha) * ket(0, 1) + math.sin(alpha) * ket(1, 0))


def make_rho_R(p: float, alpha: float) -> np.ndarray:
    """Right-wing link: noisy ``sin(alpha)|01> + cos(alpha)|10>``."""
    return werner_like(p, math.sin(alpha) * ket(0, 1) + math.cos(alpha) * ket(1, 0))


def make_rho_1(p1: float) -> np.ndarray:
    """Central link: noisy ``|Psi+>``."""
    return werner_like(p1, PSI_PLUS)


def bell_projector(outcome: BellOutcome) -> np.ndarray:
    return projector(BellOutcome(outcome).vector)


def _n_qubits(rho: np.ndarray) -> int:
    dim = rho.shape[0]
    if rho.ndim != 2 or rho.shape[1] != dim or dim not in _ALLOWED_DIMS:
        raise DomainError(f"expected a square matrix of dimension 2, 4 or 16, got shape {rho.shape}")
    return dim.bit_length() - 1


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[0] * b.shape[0] > 16:
        raise DomainError("composite dimension above 16 (4 qubits) is not supported")
    return np.kron(a, b)


def partial_trace(rho: np.ndarray, keep) -> np.ndarray:
    """Trace out every qubit not listed in ``keep``.

    The result is not renormalized; kept qubits stay in ascending order.
    """
    rho = np.asarray(rho, dtype=complex)
    n = _n_qubits(rho)
    keep = sorted(keep)
    if len(set(keep)) != len(keep) or any(not 0 <= q < n for q in keep):
        raise DomainError(f"invalid qubit indices {keep} for a {n}-qubit state")
    letters = "abcdefghijklmnopqrstuvwxyz"
    rows = list(letters[:n])
    cols = [rows[q] if q not in keep else letters[n + q] for q in range(n)]
    out = [rows[q] for q in keep] + [letters[n + q] for q in keep]
    expr = "".join(rows) + "".join(cols) + "->" + "".join(out)
    reduced = np.einsum(expr, rho.reshape([2] * (2 * n)))
    d = 2 ** len(keep)
    return reduced.reshape(d, d)


def correlation_matrix(rho: np.ndarray) -> np.ndarray:
    """Real 3x3 matrix ``T[i, j] = Tr[(sigma_i (x) sigma_j) rho]``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DomainError(f"correlation matrix needs a two-qubit state, got shape {rho.shape}")
    return np.einsum("ijab,ba->ij", _PAULI_PAIRS, rho).real


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def hermitian_eigh(m: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = 64):
    """Eigen-decomposition of a small Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot ``m[p, q]`` with a
    diagonal unitary, then zeroes it with a real Givens rotation.  Sweeps stop
    once the off-diagonal Frobenius norm drops below ``tol`` (scaled by the
    matrix norm when that exceeds one).

    Returns ascending eigenvalues and the matching eigenvectors as columns.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise DomainError(f"expected a square matrix, got shape {a.shape}")
    if not is_hermitian(a, 1e-10):
        raise DomainError("matrix is not Hermitian within 1e-10")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    offdiag = ~np.eye(n, dtype=bool)

    for _ in range(max_sweeps):
        if math.sqrt(float(np.sum(np.abs(a[offdiag]) ** 2))) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                theta = 0.5 * math.atan2(2.0 * mag, a[q, q].real - a[p, p].real)
                c, s = math.cos(theta), math.sin(theta)
                u = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ u
                a[idx, :] = u.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ u
    else:
        raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    vals = a.diagonal().real
    order = np.argsort(vals, kind="stable")
    return vals[order], v[:, order]


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    return hermitian_eigh(m)[0]


def validate_state(rho: np.ndarray, *, psd: bool = True) -> np.ndarray:
    """Return ``rho`` as a complex array after checking the density-matrix
    invariants (Hermitian, unit trace, positive semidefinite)."""
    rho = np.asarray(rho, dtype=complex)
    _n_qubits(rho)
    if not is_hermitian(rho):
        raise DomainError("state is not Hermitian")
    if abs(np.trace(rho) - 1.0) > TRACE_TOL:
        raise DomainError(f"state trace {np.trace(rho).real!r} differs from 1")
    if psd and hermitian_eigenvalues(rho)[0] < PSD_TOL:
        raise DomainError("state has a negative eigenvalue")
    return rho


def purity(rho: np.ndarray) -> float:
    return float(np.real(np.trace(rho @ rho)))

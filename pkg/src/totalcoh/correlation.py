"""Converting total coherence into total correlation, and related identities.

The conversion protocol rotates rho so its diagonal is uniform (Fourier
after diagonalization), attaches a maximally mixed ancilla of dimension m,
and applies the generalized CNOT |i>|j> -> |i>|i+j mod m>. For m >= n the
mutual information of the output equals the total coherence of rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coherence import MixedUnitaryChannel, apply_channel_matrix, total_coherence
from .matrixlab import (
    BipartiteState,
    DensityMatrix,
    ValidationError,
    eigh_desc,
    entropy_of_matrix,
    partial_trace,
    reduce_matrix,
    trace_norm_distance,
    von_neumann_entropy,
)

IDENTITY_TOL = 1e-9
STATE_TOL = 1e-10

_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


@dataclass(frozen=True)
class TripartiteState:
    dims: tuple[int, int, int]
    state: DensityMatrix

    def __post_init__(self):
        if len(self.dims) != 3 or min(self.dims) < 1 or math.prod(self.dims) != self.state.dim:
            raise ValidationError(f"factorization {self.dims} does not match dim {self.state.dim}")

    def marginal(self, keep: str) -> np.ndarray:
        """Reduced matrix on any subset of "ABC", e.g. "AB" or "B"."""
        return reduce_matrix(self.state.matrix, self.dims, ["ABC".index(c) for c in keep])


@dataclass(frozen=True)
class ConversionReport:
    input_coherence: float
    output_mutual_information: float
    reduced_S: DensityMatrix
    reduced_A: DensityMatrix
    equality_slack: float
    unitary_used: np.ndarray
    output_state: BipartiteState
    # equality is only claimed when the ancilla is at least as large as the system
    equality_checked: bool

    @property
    def marginal_distance_S(self) -> float:
        return trace_norm_distance(self.reduced_S, DensityMatrix.maximally_mixed(self.reduced_S.dim))

    @property
    def marginal_distance_A(self) -> float:
        return trace_norm_distance(self.reduced_A, DensityMatrix.maximally_mixed(self.reduced_A.dim))

    @property
    def saturated(self) -> bool:
        return (
            self.equality_slack <= IDENTITY_TOL
            and self.marginal_distance_S <= STATE_TOL
            and self.marginal_distance_A <= STATE_TOL
        )


def _mutual_information_matrix(m: np.ndarray, dims) -> float:
    s_a = entropy_of_matrix(reduce_matrix(m, dims, [0]))
    s_b = entropy_of_matrix(reduce_matrix(m, dims, [1]))
    return s_a + s_b - entropy_of_matrix(m)


def mutual_information(s: BipartiteState) -> float:
    """S(A) + S(B) - S(AB) in bits."""
    return _mutual_information_matrix(s.state.matrix, s.dims)


def fourier_matrix(dim: int) -> np.ndarray:
    j = np.arange(dim)
    return np.exp(2j * np.pi * np.outer(j, j) / dim) / math.sqrt(dim)


def uniform_diagonal_rotation(rho: DensityMatrix) -> np.ndarray:
    """Unitary F V^dagger; every diagonal entry of the rotated state is 1/dim."""
    _, v = eigh_desc(rho.matrix)
    return fourier_matrix(rho.dim) @ v.conj().T


def generalized_cnot(n: int, m: int) -> np.ndarray:
    """Permutation |i>|j> -> |i>|i+j mod m> on an n x m system."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    i, j = np.divmod(np.arange(n * m), m)
    u = np.zeros((n * m, n * m), dtype=np.complex128)
    u[i * m + (i + j) % m, i * m + j] = 1.0
    return u


def coherence_to_correlation(rho: DensityMatrix, m: int) -> ConversionReport:
    n = rho.dim
    rot = uniform_diagonal_rotation(rho)
    cnot = generalized_cnot(n, m)
    u_total = cnot @ np.kron(rot, np.eye(m))
    start = np.kron(rho.matrix, np.eye(m) / m)
    out = u_total @ start @ u_total.conj().T
    out = (out + out.conj().T) / 2
    state = BipartiteState(n, m, DensityMatrix(out))
    c = total_coherence(rho)
    info = mutual_information(state)
    return ConversionReport(
        input_coherence=c,
        output_mutual_information=info,
        reduced_S=partial_trace(state, "A"),
        reduced_A=partial_trace(state, "B"),
        equality_slack=c - info,
        unitary_used=u_total,
        output_state=state,
        equality_checked=m >= n,
    )


def correlation_bound_fuzz(rho: DensityMatrix, m: int, ch: MixedUnitaryChannel) -> float:
    """C_R(rho) - I(ch[rho (x) I_m/m]); never below zero up to rounding."""
    if ch.dim != rho.dim * m:
        raise ValueError(f"channel acts on dim {ch.dim}, expected {rho.dim * m}")
    out = apply_channel_matrix(ch, np.kron(rho.matrix, np.eye(m) / m))
    return total_coherence(rho) - _mutual_information_matrix(out, (rho.dim, m))


def residual_coherence_identity(s: BipartiteState) -> tuple[float, float]:
    """(I(AB), C_R(AB) - C_R(A) - C_R(B)); equal for every state."""
    lhs = mutual_information(s)
    rhs = (
        total_coherence(s.state)
        - total_coherence(partial_trace(s, "A"))
        - total_coherence(partial_trace(s, "B"))
    )
    return lhs, rhs


def _coherence_of_matrix(m: np.ndarray) -> float:
    return math.log2(m.shape[0]) - entropy_of_matrix(m)


def strong_subadditivity_slack(t: TripartiteState) -> float:
    """C_R(ABC) - C_R(AB) - C_R(BC) + C_R(B)."""
    return (
        _coherence_of_matrix(t.state.matrix)
        - _coherence_of_matrix(t.marginal("AB"))
        - _coherence_of_matrix(t.marginal("BC"))
        + _coherence_of_matrix(t.marginal("B"))
    )


def pure_entanglement_gap(psi: BipartiteState) -> tuple[float, float]:
    """(S(rho_A), log2 dimA - C_R(rho_A)) for a pure bipartite state."""
    top = np.linalg.eigvalsh(psi.state.matrix)[-1]
    if top < 1 - 1e-9:
        raise ValidationError(f"state is not pure (largest eigenvalue {top:.12g})")
    rho_a = partial_trace(psi, "A")
    return von_neumann_entropy(rho_a), math.log2(psi.dimA) - total_coherence(rho_a)


def concurrence(rho: DensityMatrix) -> float:
    """Two-qubit concurrence max(0, mu1 - mu2 - mu3 - mu4).

    The mu_i are square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y),
    read off as eigenvalues of the Hermitian sqrt(rho) rho_tilde sqrt(rho).
    """
    if rho.dim != 4:
        raise ValidationError("concurrence needs a 2x2 state")
    w, v = np.linalg.eigh(rho.matrix)
    root = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
    tilde = _YY @ rho.matrix.conj() @ _YY
    r = root @ tilde @ root
    mu = np.sqrt(np.clip(np.linalg.eigvalsh((r + r.conj().T) / 2), 0, None))[::-1]
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


def binary_entropy(x: float) -> float:
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def entanglement_of_formation_2x2(rho: DensityMatrix) -> float:
    c = concurrence(rho)
    return binary_entropy((1 + math.sqrt(max(0.0, 1 - c * c))) / 2)


def mixed_entanglement_bound_2x2(s: BipartiteState) -> tuple[float, float]:
    """(EoF, log2 2 - C_R(rho_A)) for a two-qubit state; EoF never exceeds the bound."""
    if s.dims != (2, 2):
        raise ValidationError(f"two-qubit state required, got dims {s.dims}")
    return entanglement_of_formation_2x2(s.state), 1.0 - total_coherence(partial_trace(s, "A"))

"""Total coherence measure and the mixed-unitary free operations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matrixlab import (
    DensityMatrix,
    Rng,
    ValidationError,
    random_unitary,
    trace_norm_distance,
    von_neumann_entropy,
)

UNITARY_TOL = 1e-9


@dataclass(frozen=True)
class MixedUnitaryChannel:
    """rho -> sum_i p_i U_i rho U_i^dagger."""

    weights: tuple[float, ...]
    unitaries: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.weights) == 0 or len(self.weights) != len(self.unitaries):
            raise ValidationError("channel needs a nonempty, matching list of weights and unitaries")
        w = tuple(float(x) for x in self.weights)
        if any(not (0.0 < x <= 1.0) for x in w):
            raise ValidationError("channel weights must lie in (0, 1]")
        if abs(math.fsum(w) - 1.0) > 1e-10:
            raise ValidationError(f"channel weights sum to {math.fsum(w):.12g}, expected 1")
        us = []
        dim = np.asarray(self.unitaries[0]).shape[0]
        for u in self.unitaries:
            u = np.array(u, dtype=np.complex128)
            if u.shape != (dim, dim):
                raise ValidationError("all unitaries must share one square shape")
            err = np.max(np.abs(u.conj().T @ u - np.eye(dim)))
            if err > UNITARY_TOL:
                raise ValidationError(f"term is not unitary (deviation {err:.3e})")
            u.setflags(write=False)
            us.append(u)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "unitaries", tuple(us))

    @classmethod
    def from_terms(cls, terms: Sequence[tuple[float, np.ndarray]]) -> "MixedUnitaryChannel":
        return cls(tuple(p for p, _ in terms), tuple(u for _, u in terms))

    @property
    def terms(self) -> list[tuple[float, np.ndarray]]:
        return list(zip(self.weights, self.unitaries))

    @property
    def dim(self) -> int:
        return self.unitaries[0].shape[0]

    def __len__(self) -> int:
        return len(self.weights)


def total_coherence(rho: DensityMatrix) -> float:
    """log2 n - S(rho), clipped into [0, log2 n]."""
    cap = math.log2(rho.dim)
    return min(cap, max(0.0, cap - von_neumann_entropy(rho)))


def apply_channel_matrix(ch: MixedUnitaryChannel, m: np.ndarray) -> np.ndarray:
    """Channel action on a raw matrix, without output validation."""
    if ch.dim != m.shape[0]:
        raise ValueError(f"dimension mismatch: channel {ch.dim} vs state {m.shape[0]}")
    u = np.stack(ch.unitaries)
    p = np.asarray(ch.weights)
    out = np.einsum("k,kij,jl,kml->im", p, u, m, u.conj(), optimize=True)
    return (out + out.conj().T) / 2


def apply_channel(ch: MixedUnitaryChannel, rho: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(apply_channel_matrix(ch, rho.matrix))


def weyl_heisenberg_unitaries(dim: int) -> list[np.ndarray]:
    """The dim^2 operators X^a Z^b, a outer index."""
    shift = np.roll(np.eye(dim, dtype=np.complex128), 1, axis=0)
    clock = np.diag(np.exp(2j * np.pi * np.arange(dim) / dim))
    out = []
    xa = np.eye(dim, dtype=np.complex128)
    for _ in range(dim):
        zb = np.eye(dim, dtype=np.complex128)
        for _ in range(dim):
            out.append(xa @ zb)
            zb = zb @ clock
        xa = xa @ shift
    return out


def complete_decoherence_channel(dim: int) -> MixedUnitaryChannel:
    """Uniform Weyl-Heisenberg twirl; sends every state to I/dim."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    us = weyl_heisenberg_unitaries(dim)
    return MixedUnitaryChannel(tuple([1.0 / len(us)] * len(us)), tuple(us))


def identity_channel(dim: int) -> MixedUnitaryChannel:
    return MixedUnitaryChannel((1.0,), (np.eye(dim, dtype=np.complex128),))


def random_channel(dim: int, terms: int, rng: Rng) -> MixedUnitaryChannel:
    """Haar unitaries with flat-Dirichlet weights."""
    w = rng.simplex(terms)
    # renormalize after the floor so no weight is exactly zero
    w = np.maximum(w, 1e-300)
    w = w / math.fsum(w)
    return MixedUnitaryChannel(tuple(w.tolist()), tuple(random_unitary(dim, rng) for _ in range(terms)))


def is_incoherent_state(rho: DensityMatrix, tol: float = 1e-9) -> bool:
    return trace_norm_distance(rho, DensityMatrix.maximally_mixed(rho.dim)) <= tol


def coherence_of_formation(dim: int) -> float:
    """Pure-state-decomposition formation measure; every pure state has log2 dim."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    return math.log2(dim)

"""Single-copy convertibility by majorization, with explicit channel synthesis.

A state converts to another under mixed-unitary channels exactly when its
spectrum majorizes the target's. The synthesizer builds the channel in three
steps: a chain of T-transforms giving a doubly stochastic D with q = D p, a
greedy Birkhoff decomposition of D into permutations, and conjugation of each
permutation by the two eigenbases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coherence import MixedUnitaryChannel, apply_channel
from .matrixlab import DensityMatrix, Spectrum, ValidationError, eigen_spectrum, eigh_desc, trace_norm_distance

MAJORIZATION_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-8


class NotConvertibleError(ValueError):
    pass


class DegeneracyError(ArithmeticError):
    """Birkhoff extraction stalled with residual mass left over."""


@dataclass(frozen=True)
class DoublyStochasticMatrix:
    entries: np.ndarray

    def __post_init__(self):
        d = np.array(self.entries, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValidationError("doubly stochastic matrix must be square")
        if np.any(d < -1e-12):
            raise ValidationError("negative entry in doubly stochastic matrix")
        if np.max(np.abs(d.sum(axis=0) - 1)) > 1e-9 or np.max(np.abs(d.sum(axis=1) - 1)) > 1e-9:
            raise ValidationError("row or column sums differ from 1")
        d.setflags(write=False)
        object.__setattr__(self, "entries", d)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class BirkhoffDecomposition:
    weights: tuple[float, ...]
    permutations: tuple[tuple[int, ...], ...]

    @property
    def terms(self) -> list[tuple[float, tuple[int, ...]]]:
        return list(zip(self.weights, self.permutations))

    def matrix(self) -> np.ndarray:
        d = len(self.permutations[0])
        out = np.zeros((d, d))
        for w, perm in self.terms:
            out[np.arange(d), perm] += w
        return out


def permutation_matrix(perm) -> np.ndarray:
    """P with P[i, perm[i]] = 1, so (P x)_i = x[perm[i]]."""
    d = len(perm)
    p = np.zeros((d, d))
    p[np.arange(d), list(perm)] = 1.0
    return p


def _as_probs(p) -> np.ndarray:
    return p.probs if isinstance(p, Spectrum) else np.sort(np.asarray(p, dtype=np.float64))[::-1]


def majorizes(p: Spectrum, q: Spectrum) -> bool:
    """True when every prefix sum of p dominates that of q and totals agree."""
    a, b = _as_probs(p), _as_probs(q)
    if a.size != b.size:
        raise ValueError("spectra must have equal length; zero-pad the shorter one")
    if abs(math.fsum(a) - math.fsum(b)) > 1e-9:
        return False
    return bool(np.all(np.cumsum(a) >= np.cumsum(b) - MAJORIZATION_TOL))


def can_convert(rho: DensityMatrix, sigma: DensityMatrix) -> bool:
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    return majorizes(eigen_spectrum(rho), eigen_spectrum(sigma))


def t_transform_chain(p: Spectrum, q: Spectrum) -> list[tuple[int, int, float]]:
    """T-transforms (j, k, lam) mapping p to q, applied in order.

    Each transform replaces (x_j, x_k) by (lam x_j + (1-lam) x_k, (1-lam) x_j + lam x_k).
    """
    if not majorizes(p, q):
        raise NotConvertibleError("p does not majorize q")
    x = _as_probs(p).copy()
    y = _as_probs(q)
    d = x.size
    chain = []
    for _ in range(d):
        diff = x - y
        short = np.flatnonzero(diff < -1e-15)
        if short.size == 0:
            break
        k = int(short[0])
        over = np.flatnonzero(diff[:k] > 0)
        if over.size == 0:
            # shortfall below tolerance of the majorization test
            if y[k] - x[k] <= 1e-9:
                break
            raise NotConvertibleError("majorization chain stalled")
        j = int(over[-1])
        delta = min(x[j] - y[j], y[k] - x[k])
        lam = 1.0 - delta / (x[j] - x[k])
        chain.append((j, k, lam))
        if x[j] - y[j] <= y[k] - x[k]:
            x[k] += x[j] - y[j]
            x[j] = y[j]
        else:
            x[j] -= y[k] - x[k]
            x[k] = y[k]
    return chain


def doubly_stochastic_from_majorization(p: Spectrum, q: Spectrum) -> DoublyStochasticMatrix:
    """D with q = D p, a product of at most dim-1 T-transforms."""
    d = len(_as_probs(p))
    out = np.eye(d)
    for j, k, lam in t_transform_chain(p, q):
        t = np.eye(d)
        t[j, j] = t[k, k] = lam
        t[j, k] = t[k, j] = 1.0 - lam
        out = t @ out
    return DoublyStochasticMatrix(out)


def _perfect_matching(support: np.ndarray) -> list[int] | None:
    """Kuhn's augmenting-path matching on a boolean row x column support."""
    d = support.shape[0]
    match_col = [-1] * d

    def augment(r: int, seen: list[bool]) -> bool:
        for c in np.flatnonzero(support[r]):
            if seen[c]:
                continue
            seen[c] = True
            if match_col[c] < 0 or augment(match_col[c], seen):
                match_col[c] = r
                return True
        return False

    for r in range(d):
        if not augment(r, [False] * d):
            return None
    perm = [0] * d
    for c, r in enumerate(match_col):
        perm[r] = c
    return perm


def birkhoff_decompose(D: DoublyStochasticMatrix, tol: float = 1e-12) -> BirkhoffDecomposition:
    """Greedy Birkhoff-von Neumann decomposition; at most (d-1)^2 + 1 terms."""
    r = np.array(D.entries, dtype=np.float64)
    d = r.shape[0]
    rows = np.arange(d)
    weights: list[float] = []
    perms: list[tuple[int, ...]] = []
    for _ in range((d - 1) ** 2 + 1):
        residual = r.sum() / d
        if residual < 1e-9:
            break
        perm = _perfect_matching(r > tol)
        if perm is None:
            raise DegeneracyError(f"no perfect matching with residual mass {residual:.3e}")
        vals = r[rows, perm]
        w = float(vals.min())
        r[rows, perm] -= w
        r[rows[np.argmin(vals)], perm[int(np.argmin(vals))]] = 0.0
        weights.append(w)
        perms.append(tuple(perm))
    else:
        if r.sum() / d >= 1e-9:
            raise DegeneracyError("Birkhoff extraction did not terminate within the term bound")
    total = math.fsum(weights)
    return BirkhoffDecomposition(tuple(w / total for w in weights), tuple(perms))


def synthesize_channel(rho: DensityMatrix, sigma: DensityMatrix) -> MixedUnitaryChannel:
    """Explicit mixed-unitary channel with channel(rho) = sigma.

    Terms are (w_k, V_sigma P_k V_rho^dagger) for the Birkhoff terms of D.
    The result is checked against sigma before it is returned.
    """
    if not can_convert(rho, sigma):
        raise NotConvertibleError("rho does not majorize sigma")
    p, v_rho = eigh_desc(rho.matrix)
    q, v_sigma = eigh_desc(sigma.matrix)
    ps = Spectrum(np.clip(p, 0.0, 1.0))
    qs = Spectrum(np.clip(q, 0.0, 1.0))
    bd = birkhoff_decompose(doubly_stochastic_from_majorization(ps, qs))
    unitaries = tuple(v_sigma @ permutation_matrix(perm) @ v_rho.conj().T for perm in bd.permutations)
    ch = MixedUnitaryChannel(bd.weights, unitaries)
    err = trace_norm_distance(apply_channel(ch, rho), sigma)
    if err > RECONSTRUCTION_TOL:
        raise ArithmeticError(f"synthesized channel misses target by {err:.3e} in trace norm")
    return ch

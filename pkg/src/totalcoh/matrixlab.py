"""Dense linear algebra, entropies and seeded sampling shared by every other module.

All entropies are in bits. States are immutable numpy-backed dataclasses;
arrays handed out are read-only views.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import gammaln

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
CLAMP_TOL = 1e-12
SUPPORT_TOL = 1e-10

_LN2 = math.log(2.0)


class ValidationError(ValueError):
    """Raised when an input violates a state or spectrum invariant."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValidationError(f"density matrix must be square, got shape {m.shape}")
        herm_err = np.max(np.abs(m - m.conj().T))
        if herm_err > HERMITIAN_TOL:
            raise ValidationError(f"matrix is not Hermitian (deviation {herm_err:.3e})")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace is {tr.real:.12g}, expected 1")
        lo = np.linalg.eigvalsh(m)[0]
        if lo < -PSD_TOL:
            raise ValidationError(f"matrix is not positive semidefinite (min eigenvalue {lo:.3e})")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=np.complex128) / dim)

    @classmethod
    def diagonal(cls, probs: Sequence[float]) -> "DensityMatrix":
        return cls(np.diag(np.asarray(probs, dtype=np.complex128)))

    @classmethod
    def from_ket(cls, ket: Sequence[complex]) -> "DensityMatrix":
        v = np.asarray(ket, dtype=np.complex128).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted descending, clamped to [0, 1], summing to one."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=np.float64).ravel()
        if p.size == 0:
            raise ValidationError("empty spectrum")
        if np.any(p < -CLAMP_TOL) or np.any(p > 1 + CLAMP_TOL):
            raise ValidationError("spectrum entries must lie in [0, 1]")
        p = np.clip(p, 0.0, 1.0)
        if abs(math.fsum(p) - 1.0) > 1e-9:
            raise ValidationError(f"spectrum sums to {math.fsum(p):.12g}, expected 1")
        object.__setattr__(self, "probs", _frozen(np.sort(p)[::-1]))

    def __len__(self) -> int:
        return self.probs.size

    def padded(self, length: int) -> "Spectrum":
        if length < len(self):
            raise ValueError("cannot pad to a shorter length")
        return Spectrum(np.concatenate([self.probs, np.zeros(length - len(self))]))


@dataclass(frozen=True)
class WeightedSpectrum:
    """Spectrum of a tensor power, stored as (log2 value, log2 multiplicity) atoms.

    Atoms are sorted by value, strictly decreasing.
    """

    log2_values: np.ndarray
    log2_multiplicities: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.log2_values, dtype=np.float64)
        mu = np.asarray(self.log2_multiplicities, dtype=np.float64)
        if v.shape != mu.shape or v.ndim != 1:
            raise ValidationError("atom arrays must be 1-d and of equal length")
        if v.size > 1 and np.any(np.diff(v) >= 0):
            raise ValidationError("atom values must be strictly decreasing")
        object.__setattr__(self, "log2_values", _frozen(v))
        object.__setattr__(self, "log2_multiplicities", _frozen(mu))

    def __len__(self) -> int:
        return self.log2_values.size

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.log2_values.tolist(), self.log2_multiplicities.tolist()))

    def atom_weights(self) -> np.ndarray:
        """Linear-domain mass of every atom (multiplicity times value)."""
        return np.exp2(self.log2_values + self.log2_multiplicities)

    def total_weight(self) -> float:
        return math.fsum(self.atom_weights())

    def entropy(self) -> float:
        w = self.atom_weights()
        return -math.fsum(w * self.log2_values)

    def log2_count(self) -> float:
        """log2 of the number of eigenvalues represented."""
        return float(np.logaddexp2.reduce(self.log2_multiplicities))


@dataclass(frozen=True)
class BipartiteState:
    dimA: int
    dimB: int
    state: DensityMatrix

    def __post_init__(self):
        if self.dimA < 1 or self.dimB < 1 or self.dimA * self.dimB != self.state.dim:
            raise ValidationError(
                f"factorization {self.dimA}x{self.dimB} does not match dim {self.state.dim}"
            )

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, dimA: int, dimB: int) -> "BipartiteState":
        return cls(dimA, dimB, DensityMatrix(matrix))

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dimA, self.dimB)


# ---------------------------------------------------------------------------
# spectra and entropies
# ---------------------------------------------------------------------------


def eigh_desc(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix with eigenvalues descending.

    Each eigenvector's phase is fixed so its largest-magnitude entry is real
    and positive; diagonal inputs therefore give (permuted) identity columns.
    """
    w, v = np.linalg.eigh(m)
    w = w[::-1]
    v = v[:, ::-1].copy()
    idx = np.argmax(np.abs(v), axis=0)
    pivots = v[idx, np.arange(v.shape[1])]
    v *= (np.abs(pivots) / pivots)[None, :]
    return w, v


def eigen_spectrum(rho: DensityMatrix) -> Spectrum:
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho)
    w = np.linalg.eigvalsh(rho.matrix)
    return Spectrum(np.clip(w, 0.0, 1.0))


def _entropy_of_probs(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(max(0.0, -math.fsum(p * np.log2(p))))


def von_neumann_entropy(spec: Spectrum | DensityMatrix) -> float:
    """-sum p log2 p, with 0 log 0 = 0."""
    if isinstance(spec, DensityMatrix):
        spec = eigen_spectrum(spec)
    return _entropy_of_probs(spec.probs)


def entropy_of_matrix(m: np.ndarray) -> float:
    """Entropy of a raw Hermitian matrix, skipping DensityMatrix validation."""
    return _entropy_of_probs(np.clip(np.linalg.eigvalsh(m), 0.0, 1.0))


def _check_same_dim(rho: DensityMatrix, sigma: DensityMatrix):
    if rho.dim != sigma.dim:
        raise ValueError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")


def relative_entropy(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Tr rho (log2 rho - log2 sigma); +inf when supp rho is not inside supp sigma."""
    _check_same_dim(rho, sigma)
    pr, vr = np.linalg.eigh(rho.matrix)
    ps, vs = np.linalg.eigh(sigma.matrix)
    keep_r = pr > SUPPORT_TOL
    keep_s = ps > SUPPORT_TOL
    # overlap[i, j] = |<r_i|s_j>|^2
    overlap = np.abs(vr[:, keep_r].conj().T @ vs) ** 2
    pr = pr[keep_r]
    leak = overlap[:, ~keep_s].sum(axis=1)
    if np.any(pr * leak > SUPPORT_TOL):
        return math.inf
    log_s = np.log2(ps[keep_s])
    cross = math.fsum((pr[:, None] * overlap[:, keep_s] * log_s[None, :]).ravel())
    self_term = math.fsum(pr * np.log2(pr))
    return max(0.0, self_term - cross)


def trace_norm_distance(rho: DensityMatrix | np.ndarray, sigma: DensityMatrix | np.ndarray) -> float:
    """Unnormalized trace norm ||rho - sigma||_tr (sum of singular values)."""
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    b = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    d = a - b
    return float(np.sum(np.abs(np.linalg.eigvalsh((d + d.conj().T) / 2))))


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------


def tensor(rho: DensityMatrix, sigma: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(np.kron(rho.matrix, sigma.matrix))


def reduce_matrix(m: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of ``m`` over every factor not listed in ``keep``."""
    dims = list(dims)
    k = len(dims)
    if int(np.prod(dims)) != m.shape[0]:
        raise ValidationError(f"factorization {dims} does not match dim {m.shape[0]}")
    keep = sorted(keep)
    t = m.reshape(dims + dims)
    letters = "abcdefghijklmnop"
    rows = list(letters[:k])
    cols = [rows[i] if i not in keep else letters[k + i] for i in range(k)]
    out = "".join(rows[i] for i in keep) + "".join(cols[i] for i in keep)
    t = np.einsum("".join(rows) + "".join(cols) + "->" + out, t)
    d = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(d, d)


def partial_trace(s: BipartiteState, keep: str) -> DensityMatrix:
    """Reduced state on factor ``keep`` ("A" or "B")."""
    if keep not in ("A", "B"):
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    r = reduce_matrix(s.state.matrix, s.dims, [0] if keep == "A" else [1])
    return DensityMatrix((r + r.conj().T) / 2)


# ---------------------------------------------------------------------------
# tensor-power spectra
# ---------------------------------------------------------------------------


def _compositions(n: int, parts: int) -> np.ndarray:
    """All compositions of n into ``parts`` nonnegative integers, shape (N, parts)."""
    if parts == 1:
        return np.array([[n]], dtype=np.int64)
    if parts == 2:
        k = np.arange(n, -1, -1, dtype=np.int64)
        return np.stack([k, n - k], axis=1)
    blocks = []
    for k in range(n, -1, -1):
        rest = _compositions(n - k, parts - 1)
        blocks.append(np.concatenate([np.full((rest.shape[0], 1), k, dtype=np.int64), rest], axis=1))
    return np.concatenate(blocks, axis=0)


def _merge_sorted_atoms(v: np.ndarray, mu: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(-v, kind="stable")
    v, mu = v[order], mu[order]
    if v.size <= 1:
        return v, mu
    scale = np.maximum(1.0, np.abs(v))
    new_group = np.empty(v.size, dtype=bool)
    new_group[0] = True
    new_group[1:] = (v[:-1] - v[1:]) > tol * scale[1:]
    starts = np.flatnonzero(new_group)
    if starts.size == v.size:
        return v, mu
    merged_mu = np.array([np.logaddexp2.reduce(seg) for seg in np.split(mu, starts[1:])])
    return v[starts], merged_mu


def tensor_power_spectrum(base: Spectrum, n: int) -> WeightedSpectrum:
    """Spectrum of rho^{(x)n} grouped by type class, never materialized.

    Equal base eigenvalues are pooled first so that each atom carries the
    exact multinomial multiplicity times the pooled counts.
    """
    if n < 1:
        raise ValueError("n must be positive")
    p = base.probs[base.probs > 0]
    # pool equal eigenvalues: distinct values with their counts
    vals: list[float] = []
    counts: list[int] = []
    for x in p:
        if vals and abs(vals[-1] - x) <= CLAMP_TOL:
            counts[-1] += 1
        else:
            vals.append(float(x))
            counts.append(1)
    if len(vals) > 8:
        raise ValueError("tensor_power_spectrum supports at most 8 distinct eigenvalues")
    log_vals = np.log2(np.asarray(vals))
    log_counts = np.log2(np.asarray(counts, dtype=np.float64))
    comp = _compositions(n, len(vals))
    log2_value = comp @ log_vals
    log2_mult = (gammaln(n + 1) - gammaln(comp + 1).sum(axis=1)) / _LN2 + comp @ log_counts
    v, mu = _merge_sorted_atoms(log2_value, log2_mult, 1e-12)
    return WeightedSpectrum(v, mu)


# ---------------------------------------------------------------------------
# seeded sampling
# ---------------------------------------------------------------------------


@dataclass
class Rng:
    """Philox-4x64 counter-based stream with Box-Muller normals.

    Uniforms take the top 53 bits of each raw 64-bit word. Normals pair
    uniforms (u1, u2) into sqrt(-2 ln(1-u1)) * (cos, sin)(2 pi u2).
    Instances are not thread-safe; use :meth:`split` for independent streams.
    """

    seed: int
    _bitgen: np.random.Philox = field(init=False, repr=False)

    def __post_init__(self):
        self.seed = int(self.seed) & 0xFFFFFFFFFFFFFFFF
        self._bitgen = np.random.Philox(key=self.seed)

    def split(self, index: int) -> "Rng":
        """Independent child stream keyed by (seed, index)."""
        ss = np.random.SeedSequence([self.seed & 0xFFFFFFFF, self.seed >> 32, int(index)])
        return Rng(int(ss.generate_state(1, np.uint64)[0]))

    def uniform(self, size: int | tuple = ()) -> np.ndarray | float:
        count = int(np.prod(size)) if size != () else 1
        raw = self._bitgen.random_raw(count)
        u = (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)
        return float(u[0]) if size == () else u.reshape(size)

    def normal(self, size: int | tuple = ()) -> np.ndarray | float:
        count = int(np.prod(size)) if size != () else 1
        half = (count + 1) // 2
        u1 = 1.0 - self.uniform(half)
        u2 = self.uniform(half)
        r = np.sqrt(-2.0 * np.log(u1))
        z = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])[:count]
        return float(z[0]) if size == () else z.reshape(size)

    def integer(self, low: int, high: int) -> int:
        """Uniform integer in [low, high]."""
        return low + min(int(self.uniform() * (high - low + 1)), high - low)

    def simplex(self, k: int) -> np.ndarray:
        """Uniform (flat Dirichlet) point on the k-simplex via normalized exponentials."""
        e = -np.log(1.0 - self.uniform(k))
        return e / e.sum()

    def ginibre(self, rows: int, cols: int) -> np.ndarray:
        z = self.normal((rows, cols, 2))
        return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)


def random_unitary(dim: int, rng: Rng) -> np.ndarray:
    """Haar unitary: QR of a Ginibre matrix with the R-diagonal phases divided out."""
    q, r = np.linalg.qr(rng.ginibre(dim, dim))
    d = np.diagonal(r)
    return q * (d / np.abs(d))[None, :]


def random_density(dim: int, rank: int, rng: Rng) -> DensityMatrix:
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    g = rng.ginibre(dim, rank)
    m = g @ g.conj().T
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real)


def random_pure(dim: int, rng: Rng) -> DensityMatrix:
    return DensityMatrix.from_ket(rng.ginibre(dim, 1).ravel())


def random_product(dimA: int, dimB: int, rng: Rng) -> BipartiteState:
    a = random_density(dimA, rng.integer(1, dimA), rng)
    b = random_density(dimB, rng.integer(1, dimB), rng)
    return BipartiteState(dimA, dimB, tensor(a, b))

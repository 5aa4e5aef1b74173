"""Distillable total coherence, total coherence cost, and finite-n rate oracles.

Both asymptotic rates equal the total coherence. The finite-n oracles make
the limit observable. They work on the type-class spectrum of rho^{(x)n}
and keep every count in log2 domain, so n in the thousands is cheap.

distill: largest m such that the top K = floor(d^n / 2^m) eigenvalues of
    rho^{(x)n} carry mass >= 1 - eps.
cost: smallest m such that clipping the spectrum at t = 2^m / d^n removes
    at most eps of mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np

from .coherence import total_coherence
from .matrixlab import DensityMatrix, Spectrum, WeightedSpectrum, tensor_power_spectrum

Mode = Literal["distill", "cost"]
MASS_TOL = 1e-9


@dataclass(frozen=True)
class RateQuery:
    base: Spectrum
    n: int
    epsilon: float
    mode: Mode = "distill"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0.0 < self.epsilon <= 0.5:
            raise ValueError("epsilon must lie in (0, 0.5]")
        if self.mode not in ("distill", "cost"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def dim(self) -> int:
        return len(self.base)


@dataclass(frozen=True)
class RateRow:
    n: int
    m: int
    rate: float
    epsilon: float


@dataclass
class RateTable:
    mode: Mode
    rows: list[RateRow] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["n,m,rate,epsilon,mode"]
        for r in self.rows:
            lines.append(f"{r.n},{r.m},{r.rate!r},{r.epsilon!r},{self.mode}")
        return "\n".join(lines) + "\n"


def distillable_total_coherence(rho: DensityMatrix) -> float:
    return total_coherence(rho)


def total_coherence_cost(rho: DensityMatrix) -> float:
    return total_coherence(rho)


def _log2_sub(a: float, b: float) -> float:
    """log2(2^a - 2^b) for a >= b."""
    if b == -math.inf:
        return a
    gap = b - a
    if gap >= 0:
        return -math.inf
    return a + math.log1p(-2.0**gap) / math.log(2.0)


class _Atoms:
    """Prefix structure over a WeightedSpectrum for repeated oracle queries."""

    def __init__(self, ws: WeightedSpectrum):
        self.v = np.asarray(ws.log2_values)
        self.mu = np.asarray(ws.log2_multiplicities)
        # log2 of cumulative eigenvalue counts
        self.log_count = np.logaddexp2.accumulate(self.mu)
        # cumulative mass, shifted sums stay in [0, 1] so linear domain is safe
        w = np.exp2(self.v + self.mu)
        self.mass = np.concatenate([[0.0], _compensated_cumsum(w)])

    def top_mass(self, log2_k: float) -> float:
        """Mass of the K largest eigenvalues, K = 2^log2_k."""
        j = int(np.searchsorted(self.log_count, log2_k, side="left"))
        if j >= self.v.size:
            return float(self.mass[-1])
        before = self.log_count[j - 1] if j > 0 else -math.inf
        rest = _log2_sub(log2_k, before)
        return float(self.mass[j] + 2.0 ** (self.v[j] + rest))

    def clip_excess(self, log2_t: float) -> float:
        """sum_i max(lambda_i - t, 0) for t = 2^log2_t."""
        j = int(np.searchsorted(-self.v, -log2_t, side="left"))
        if j == 0:
            return 0.0
        above = float(self.mass[j])
        return max(0.0, above - 2.0 ** (log2_t + self.log_count[j - 1]))


def _compensated_cumsum(w: np.ndarray) -> np.ndarray:
    out = np.empty_like(w)
    s = 0.0
    c = 0.0
    for i, x in enumerate(w.tolist()):
        y = x - c
        t = s + y
        c = (t - s) - y
        s = t
        out[i] = s
    return out


def _power_and_atoms(q: RateQuery) -> tuple[int, _Atoms]:
    return q.dim**q.n, _Atoms(tensor_power_spectrum(q.base, q.n))


def _distill_m(total: int, atoms: _Atoms, eps: float) -> int:
    def feasible(m: int) -> bool:
        k = total >> m if m else total
        return atoms.top_mass(math.log2(k)) >= 1.0 - eps - MASS_TOL

    lo, hi = 0, total.bit_length() - 1  # lo feasible, K >= 1 up to hi
    if feasible(hi):
        return hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if feasible(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _cost_m(total: int, atoms: _Atoms, eps: float) -> int:
    log2_total = math.log2(total)

    def feasible(m: int) -> bool:
        return atoms.clip_excess(m - log2_total) <= eps + MASS_TOL

    lo, hi = 0, math.ceil(log2_total)  # hi feasible: t >= 1
    if (1 << hi) < total:
        hi += 1
    if feasible(lo):
        return lo
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def one_shot_distill_m(q: RateQuery) -> int:
    total, atoms = _power_and_atoms(q)
    return _distill_m(total, atoms, q.epsilon)


def one_shot_cost_m(q: RateQuery) -> int:
    total, atoms = _power_and_atoms(q)
    return _cost_m(total, atoms, q.epsilon)


def one_shot_m(q: RateQuery) -> int:
    return one_shot_distill_m(q) if q.mode == "distill" else one_shot_cost_m(q)


def rate_sweep(base: Spectrum, epsilon: float, n_list: Iterable[int], mode: Mode) -> RateTable:
    table = RateTable(mode)
    for n in sorted(set(int(n) for n in n_list)):
        m = one_shot_m(RateQuery(base, n, epsilon, mode))
        table.rows.append(RateRow(n, m, m / n, epsilon))
    return table

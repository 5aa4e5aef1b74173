"""Seeded invariant suites.

Each suite draws one random instance from an Rng and returns the slack of
the inequality it checks (negative means violated) plus the arrays that
define the instance. Trial i always uses ``Rng(seed).split(i)``, so any
failure can be replayed on its own.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .coherence import apply_channel, random_channel, total_coherence
from .correlation import (
    TripartiteState,
    correlation_bound_fuzz,
    mixed_entanglement_bound_2x2,
    pure_entanglement_gap,
    residual_coherence_identity,
    strong_subadditivity_slack,
)
from .matrixlab import (
    BipartiteState,
    DensityMatrix,
    Rng,
    partial_trace,
    random_density,
    random_pure,
    random_unitary,
    relative_entropy,
)

TOLERANCE = 1e-9

Instance = tuple[float, list[np.ndarray]]


def _state(rng: Rng, lo: int = 2, hi: int = 4) -> DensityMatrix:
    d = rng.integer(lo, hi)
    return random_density(d, rng.integer(1, d), rng)


def monotone_trial(rng: Rng) -> Instance:
    rho = _state(rng)
    ch = random_channel(rho.dim, rng.integer(1, 8), rng)
    out = apply_channel(ch, rho)
    return total_coherence(rho) - total_coherence(out), [rho.matrix, *ch.unitaries]


def dpi_trial(rng: Rng) -> Instance:
    d = rng.integer(2, 4)
    rho = random_density(d, rng.integer(1, d), rng)
    sigma = random_density(d, d, rng)
    ch = random_channel(d, rng.integer(1, 8), rng)
    before = relative_entropy(rho, sigma)
    after = relative_entropy(apply_channel(ch, rho), apply_channel(ch, sigma))
    slack = math.inf if math.isinf(before) else before - after
    return slack, [rho.matrix, sigma.matrix, *ch.unitaries]


def bound11_trial(rng: Rng) -> Instance:
    rho = _state(rng)
    m = rng.integer(2, 4)
    ch = random_channel(rho.dim * m, rng.integer(1, 8), rng)
    return correlation_bound_fuzz(rho, m, ch), [rho.matrix, *ch.unitaries]


def ssa_trial(rng: Rng) -> Instance:
    rho = random_density(8, rng.integer(1, 8), rng)
    return strong_subadditivity_slack(TripartiteState((2, 2, 2), rho)), [rho.matrix]


def _bipartite(rng: Rng) -> BipartiteState:
    da, db = rng.integer(2, 4), rng.integer(2, 4)
    return BipartiteState(da, db, random_density(da * db, rng.integer(1, da * db), rng))


def identity14_trial(rng: Rng) -> Instance:
    s = _bipartite(rng)
    lhs, rhs = residual_coherence_identity(s)
    return -abs(lhs - rhs), [s.state.matrix]


def subadditivity_trial(rng: Rng) -> Instance:
    s = _bipartite(rng)
    slack = (
        total_coherence(s.state)
        - total_coherence(partial_trace(s, "A"))
        - total_coherence(partial_trace(s, "B"))
    )
    return slack, [s.state.matrix]


def pure15_trial(rng: Rng) -> Instance:
    da, db = rng.integer(2, 4), rng.integer(2, 4)
    s = BipartiteState(da, db, random_pure(da * db, rng))
    e, gap = pure_entanglement_gap(s)
    return -abs(e - gap), [s.state.matrix]


def random_two_qubit_mixed(rng: Rng) -> DensityMatrix:
    """Alternates Ginibre states with locally rotated Werner mixtures."""
    if rng.uniform() < 0.5:
        return random_density(4, rng.integer(2, 4), rng)
    p = rng.uniform()
    bell = np.zeros(4, dtype=np.complex128)
    bell[[0, 3]] = 1 / math.sqrt(2)
    w = p * np.outer(bell, bell.conj()) + (1 - p) * np.eye(4) / 4
    local = np.kron(random_unitary(2, rng), random_unitary(2, rng))
    m = local @ w @ local.conj().T
    return DensityMatrix((m + m.conj().T) / 2)


def eof16_trial(rng: Rng) -> Instance:
    rho = random_two_qubit_mixed(rng)
    eof, bound = mixed_entanglement_bound_2x2(BipartiteState(2, 2, rho))
    return bound - eof, [rho.matrix]


def convexity_trial(rng: Rng) -> Instance:
    d = rng.integer(2, 4)
    k = rng.integer(2, 5)
    w = rng.simplex(k)
    parts = [random_density(d, rng.integer(1, d), rng) for _ in range(k)]
    mix = sum(p * r.matrix for p, r in zip(w, parts))
    slack = sum(p * total_coherence(r) for p, r in zip(w, parts)) - total_coherence(DensityMatrix(mix))
    return float(slack), [r.matrix for r in parts]


def selective_trial(rng: Rng) -> Instance:
    rho = _state(rng)
    ch = random_channel(rho.dim, rng.integer(1, 8), rng)
    c = total_coherence(rho)
    worst = 0.0
    for u in ch.unitaries:
        out = u @ rho.matrix @ u.conj().T
        worst = max(worst, abs(total_coherence(DensityMatrix((out + out.conj().T) / 2)) - c))
    return -worst, [rho.matrix, *ch.unitaries]


SUITES: dict[str, Callable[[Rng], Instance]] = {
    "monotone": monotone_trial,
    "dpi": dpi_trial,
    "bound11": bound11_trial,
    "ssa": ssa_trial,
    "identity14": identity14_trial,
    "eof16": eof16_trial,
    "subadditivity": subadditivity_trial,
    "pure15": pure15_trial,
    "convexity": convexity_trial,
    "selective": selective_trial,
}


@dataclass
class Failure:
    seed: int
    digest: str
    slack: float


@dataclass
class FuzzReport:
    suite: str
    trials: int
    seed: int
    tolerance: float = TOLERANCE
    failures: list[Failure] = field(default_factory=list)
    worst_slack: float = math.inf

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "trials": self.trials,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "worst_slack": self.worst_slack if math.isfinite(self.worst_slack) else None,
            "failures": [{"seed": f.seed, "digest": f.digest, "slack": f.slack} for f in self.failures],
        }


def digest(arrays: list[np.ndarray]) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a, dtype="<c16").tobytes())
    return h.hexdigest()[:16]


def run_suite(name: str, trials: int, seed: int, tolerance: float = TOLERANCE) -> FuzzReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    trial = SUITES[name]
    master = Rng(seed)
    report = FuzzReport(name, trials, master.seed, tolerance)
    for i in range(trials):
        rng = master.split(i)
        slack, inputs = trial(rng)
        report.worst_slack = min(report.worst_slack, slack)
        if slack < -tolerance:
            report.failures.append(Failure(rng.seed, digest(inputs), slack))
    return report

"""Closed-form limiting fitness distributions and Markov-chain machinery.

Long random CCNOT circuits drive the bus toward a uniform random reachable
permutation, so single-wire Hamming fitness against a balanced target tends
to Binomial(m*2^n, 1/2).  With no spare wires the all-zero bus state is
fixed by every gate, which shifts the law onto even values with mean 32.5
(six-multiplexor case).  The gate-averaged transition matrix on bus states
makes the convergence argument exactly checkable at small wire counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .core import enumerate_gates

__all__ = [
    "LimitModel",
    "TransitionMatrix",
    "binomial_limit",
    "parity_shifted_limit",
    "normalized_limit",
    "rms_limit",
    "gate_transition_matrix",
    "total_variation_distance",
]

# Materializing a binomial pmf beyond this many outcomes is pointless for
# plotting and risks large allocations.
PMF_SIZE_GUARD = 1 << 20


@dataclass(frozen=True)
class LimitModel:
    """A limiting fitness distribution with exact moments.

    `pmf`, when materialized, is indexed by raw fitness 0..m*2^n.
    `solution_probability` is the limit mass on perfect fitness.
    """

    kind: str
    n: int
    m: int
    mean: float
    sd: float
    solution_probability: float
    pmf: np.ndarray | None = None

    @property
    def max_fitness(self) -> int:
        return self.m * (1 << self.n)

    def csv_rows(self) -> list[tuple[int, float]]:
        if self.pmf is None:
            raise ValueError(f"{self.kind} model has no materialized pmf")
        return [(f, float(p)) for f, p in enumerate(self.pmf)]


def binomial_limit(n: int, m: int = 1) -> LimitModel:
    """Limit law with spare wires: every output bit is an independent fair
    coin on every case, so raw fitness ~ Binomial(m*2^n, 1/2)."""
    M = m * (1 << n)
    mean = M / 2
    sd = math.sqrt(M) / 2
    sol = math.exp(-M * math.log(2)) if M * math.log(2) < 745 else 0.0
    pmf = None
    if M + 1 <= PMF_SIZE_GUARD:
        pmf = stats.binom(M, 0.5).pmf(np.arange(M + 1))
    return LimitModel("binomial-hamming", n, m, mean, sd, sol, pmf)


def parity_shifted_limit() -> LimitModel:
    """Six-multiplexor limit with no spare wires: even fitness only, mean 32.5.

    Every gate fixes the all-zero bus state (controls cannot both read 1),
    so the limiting permutation fixes case 0 — whose desired output is 0 and
    always matches — and scatters a balanced 0/1 row uniformly over the
    remaining 63 cases.  Matching 32 assigned ones against the 32 target
    ones among 63 positions gives matches = 2k with
    k ~ Hypergeometric(63; 32, 32):

        P(fitness = 2k) = C(32,k) * C(31,32-k) / C(63,32),  k = 1..32

    Mean = 2*32*32/63 = 32.5079..., the "mean 32.5" this model is usually
    quoted by.  Perfect fitness has probability 1/C(63,32), about
    1.1e-18 — far above the binomial 2^-64 but still negligible.
    """
    hg = stats.hypergeom(63, 32, 32)
    k = np.arange(0, 33)
    pk = hg.pmf(k)
    pmf = np.zeros(65)
    pmf[2 * k] = pk
    mean = 2 * hg.mean()
    sd = 2 * hg.std()
    return LimitModel(
        "parity-shifted-hamming", 6, 1, float(mean), float(sd), float(pk[32]), pmf
    )


def normalized_limit(n: int, m: int = 1) -> tuple[float, float]:
    """Mean and sd of normalized fitness (raw / m*2^n) in the limit:
    (0.5, 2^(-n/2) / (2*sqrt(m)))."""
    return 0.5, 2 ** (-n / 2) / (2 * math.sqrt(m))


def rms_limit(m: int, regime: str) -> tuple[float, float]:
    """Limiting mean and sd of RMS error for m-bit integer answers.

    'small-T': few test cases with fixed answers; each case's error is a
    uniform random m-bit value against a constant, giving mean 2^m/2 and
    sd 2^m/(2*sqrt(3)) (the standard deviation of a uniform value).

    'exhaustive-uniform': all cases tested against answers that are
    themselves uniformly spread; quoted values 7/(12*sqrt(3)) * 2^m for the
    mean (~0.337*2^m) and 0.23*2^m for the sd.
    """
    scale = float(1 << m)
    if regime == "small-T":
        return scale / 2, scale / (2 * math.sqrt(3))
    if regime == "exhaustive-uniform":
        return 7 * scale / (12 * math.sqrt(3)), 0.23 * scale
    raise ValueError(f"unknown RMS regime {regime!r} (use 'small-T' or 'exhaustive-uniform')")


@dataclass(frozen=True)
class TransitionMatrix:
    """One-gate Markov transition matrix on bus states.

    entry[s, s'] is the probability a uniformly drawn gate maps state s to
    s'.  Each gate is a permutation of bus states, so the average is doubly
    stochastic and the uniform distribution is stationary.
    """

    matrix: np.ndarray
    states: np.ndarray  # bus-state labels for each row/column

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def row_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=1)

    def col_sums(self) -> np.ndarray:
        return self.matrix.sum(axis=0)

    def is_doubly_stochastic(self, tol: float = 1e-12) -> bool:
        return bool(
            np.all(np.abs(self.row_sums() - 1) <= tol)
            and np.all(np.abs(self.col_sums() - 1) <= tol)
            and np.all(self.matrix >= -tol)
        )

    def power(self, k: int) -> np.ndarray:
        return np.linalg.matrix_power(self.matrix, k)

    def restricted_to_nonzero(self) -> "TransitionMatrix":
        """The chain on nonzero bus states.

        The all-zero state is fixed by every gate (documented in
        parity_shifted_limit), so the full chain is reducible and its zero
        row never mixes.  Dropping state 0 leaves a closed, doubly
        stochastic chain on the 2^N - 1 reachable-from-anywhere states; this
        is the chain whose powers converge to uniform.
        """
        keep = self.states != 0
        return TransitionMatrix(self.matrix[np.ix_(keep, keep)], self.states[keep])

    def row_tvds_to_uniform(self, k: int) -> np.ndarray:
        """TVD of every row of matrix^k to the uniform distribution."""
        p = self.power(k)
        return 0.5 * np.abs(p - 1.0 / self.size).sum(axis=1)


# gate_transition_matrix materializes 2^N x 2^N entries.
TRANSITION_WIRE_GUARD = 4


def gate_transition_matrix(wires: int) -> TransitionMatrix:
    """Average of the per-gate permutation matrices on all 2^N bus states."""
    if wires > TRANSITION_WIRE_GUARD:
        raise ValueError(
            f"wires={wires} exceeds the transition-matrix guard "
            f"({TRANSITION_WIRE_GUARD}); the state space doubles per wire"
        )
    gates = enumerate_gates(wires)
    size = 1 << wires
    states = np.arange(size, dtype=np.int64)
    matrix = np.zeros((size, size))
    w = 1.0 / len(gates)
    for g in gates:
        both = ((states >> g.control_a) & (states >> g.control_b)) & 1
        image = states ^ (both << g.target)
        matrix[states, image] += w
    return TransitionMatrix(matrix, states)


def total_variation_distance(p, q) -> float:
    """Half the L1 distance between two distributions on the same support."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError(f"support mismatch: {p.shape} vs {q.shape}")
    for name, d in (("p", p), ("q", q)):
        s = d.sum()
        if abs(s - 1.0) > 1e-9:
            raise ValueError(f"{name} sums to {s}, not 1")
        if (d < 0).any():
            raise ValueError(f"{name} has negative mass")
    return float(0.5 * np.abs(p - q).sum())

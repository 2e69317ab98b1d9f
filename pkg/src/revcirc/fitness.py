"""Target functions and fitness measures for reversible circuits.

Fitness is Hamming agreement: how many of the 2^n fitness cases produce the
desired output bits on the designated output wires.  The six-multiplexor
(two address bits select one of four data bits) is the built-in benchmark;
arbitrary truth tables are supported through TargetTable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import Circuit, evaluate, to_permutation

__all__ = [
    "TargetTable",
    "OutputMap",
    "FitnessValue",
    "six_multiplexor_target",
    "hamming_fitness",
    "hamming_fitness_scalar",
    "best_wire_fitness",
    "parity_of_reachable_fitness",
    "rms_error",
]


@dataclass(frozen=True)
class TargetTable:
    """Desired outputs for every fitness case.

    `rows[j]` is a packed bit-vector: bit t is the desired value of output
    bit j on fitness case t.  Output bit 0 is the least significant bit of
    the integer answer.
    """

    n_inputs: int
    m_outputs: int
    rows: tuple[int, ...]

    def __init__(self, n_inputs: int, m_outputs: int, rows: Sequence[int]):
        rows = tuple(int(r) for r in rows)
        if len(rows) != m_outputs:
            raise ValueError(f"expected {m_outputs} output rows, got {len(rows)}")
        cases = 1 << n_inputs
        for j, r in enumerate(rows):
            if r < 0 or r >> cases:
                raise ValueError(f"output row {j} has bits beyond the {cases} cases")
        object.__setattr__(self, "n_inputs", n_inputs)
        object.__setattr__(self, "m_outputs", m_outputs)
        object.__setattr__(self, "rows", rows)

    @property
    def case_count(self) -> int:
        return 1 << self.n_inputs

    @property
    def max_fitness(self) -> int:
        return self.m_outputs * self.case_count

    def answer(self, case: int) -> int:
        """The desired m-bit integer answer for one fitness case."""
        return sum(((self.rows[j] >> case) & 1) << j for j in range(self.m_outputs))

    @classmethod
    def from_function(
        cls, n_inputs: int, m_outputs: int, fn: Callable[[int], int]
    ) -> "TargetTable":
        rows = [0] * m_outputs
        for t in range(1 << n_inputs):
            v = fn(t)
            for j in range(m_outputs):
                rows[j] |= ((v >> j) & 1) << t
        return cls(n_inputs, m_outputs, rows)

    def to_text(self) -> str:
        """File format: header 'n m', then 2^n lines of m space-separated bits
        (output bit 0 first), case index ascending."""
        lines = [f"{self.n_inputs} {self.m_outputs}"]
        for t in range(self.case_count):
            v = self.answer(t)
            lines.append(" ".join(str((v >> j) & 1) for j in range(self.m_outputs)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "TargetTable":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty target table")
        try:
            n, m = (int(x) for x in lines[0].split())
        except ValueError:
            raise ValueError("target table header must be 'n m'") from None
        cases = 1 << n
        if len(lines) - 1 != cases:
            raise ValueError(f"expected {cases} case lines, got {len(lines) - 1}")
        rows = [0] * m
        for t, ln in enumerate(lines[1:]):
            bits = ln.split()
            if len(bits) != m:
                raise ValueError(f"case line {t}: expected {m} bits, got {len(bits)}")
            for j, b in enumerate(bits):
                if b not in ("0", "1"):
                    raise ValueError(f"case line {t}: bit must be 0 or 1, got {b!r}")
                rows[j] |= int(b) << t
        return cls(n, m, rows)


@dataclass(frozen=True)
class OutputMap:
    """Which wire each output bit is read from (bit j from wire_of_output[j])."""

    wire_of_output: tuple[int, ...]

    def __init__(self, wire_of_output: Sequence[int]):
        wires = tuple(int(w) for w in wire_of_output)
        if len(set(wires)) != len(wires):
            raise ValueError("output wires must be distinct")
        if any(w < 0 for w in wires):
            raise ValueError("output wires must be non-negative")
        object.__setattr__(self, "wire_of_output", wires)

    def __len__(self) -> int:
        return len(self.wire_of_output)


DEFAULT_OUTPUT = OutputMap((0,))


@dataclass(frozen=True)
class FitnessValue:
    """Raw Hamming matches (0 .. m*2^n) plus the normalized score in [0,1]."""

    raw: int
    max_raw: int

    @property
    def normalized(self) -> float:
        return self.raw / self.max_raw

    @property
    def solved(self) -> bool:
        return self.raw == self.max_raw


def six_multiplexor_target() -> TargetTable:
    """The six-multiplexor: inputs D0..D3 on wires 0..3, A0 on wire 4, A1 on
    wire 5; the desired output is D[2*A1 + A0].  Exactly 32 of the 64 cases
    want output 1."""
    def mux(t: int) -> int:
        sel = 2 * ((t >> 5) & 1) + ((t >> 4) & 1)
        return (t >> sel) & 1

    return TargetTable.from_function(6, 1, mux)


def _check_compatible(circuit: Circuit, target: TargetTable, outputs: OutputMap):
    if circuit.n_inputs != target.n_inputs:
        raise ValueError(
            f"circuit reads {circuit.n_inputs} input bits but target defines "
            f"{target.n_inputs}"
        )
    if len(outputs) != target.m_outputs:
        raise ValueError(
            f"output map has {len(outputs)} wires but target has "
            f"{target.m_outputs} output bits"
        )
    for w in outputs.wire_of_output:
        if w >= circuit.wires:
            raise ValueError(f"output wire {w} >= circuit wire count {circuit.wires}")


def hamming_fitness(
    circuit: Circuit,
    target: TargetTable,
    outputs: OutputMap = DEFAULT_OUTPUT,
) -> FitnessValue:
    """Bit-parallel Hamming fitness: matches between realized and desired
    outputs, summed over all cases and output bits."""
    _check_compatible(circuit, target, outputs)
    trace = evaluate(circuit)
    cases = target.case_count
    raw = 0
    for j, w in enumerate(outputs.wire_of_output):
        raw += cases - (trace.wire_rows[w] ^ target.rows[j]).bit_count()
    return FitnessValue(raw, target.max_fitness)


def hamming_fitness_scalar(
    circuit: Circuit,
    target: TargetTable,
    outputs: OutputMap = DEFAULT_OUTPUT,
) -> FitnessValue:
    """Independent case-by-case reference evaluation (no bit-parallel tricks).

    Runs every fitness case through the circuit one state at a time; used as
    an oracle for the bit-parallel path and to re-verify search solutions.
    """
    _check_compatible(circuit, target, outputs)
    fill_bits = 0
    if circuit.constant_fill:
        for w in range(circuit.n_inputs, circuit.wires):
            fill_bits |= 1 << w
    raw = 0
    for t in range(target.case_count):
        state = t | fill_bits
        for g in circuit.gates:
            state = g.apply_to_state(state)
        want = target.answer(t)
        for j, w in enumerate(outputs.wire_of_output):
            raw += ((state >> w) & 1) == ((want >> j) & 1)
    return FitnessValue(raw, target.max_fitness)


def best_wire_fitness(
    circuit: Circuit, target: TargetTable
) -> tuple[FitnessValue, int]:
    """Fitness of the best single output wire (m=1 targets only).

    Returns (fitness, wire).  Complements nothing: a wire carrying the exact
    complement of the target scores 0, not 2^n.
    """
    if target.m_outputs != 1:
        raise ValueError("best_wire_fitness applies to single-output targets")
    trace = evaluate(circuit)
    cases = target.case_count
    best_raw, best_wire = -1, -1
    for w in range(circuit.wires):
        raw = cases - (trace.wire_rows[w] ^ target.rows[0]).bit_count()
        if raw > best_raw:
            best_raw, best_wire = raw, w
    return FitnessValue(best_raw, target.max_fitness), best_wire


def parity_of_reachable_fitness(wires: int, n: int = 6) -> str:
    """Which six-multiplexor fitness values circuits can reach: 'even-only'
    when there are no spare wires (wires == n), 'all' once spares exist.

    With no spares the reachable bus permutations fix the all-zero state and
    realize balanced output rows, which forces even Hamming agreement; one
    spare wire already frees every value.
    """
    if wires < n:
        raise ValueError(f"need at least {n} wires to house {n} inputs")
    return "even-only" if wires == n else "all"


def rms_error(
    circuit: Circuit,
    cases: Sequence[tuple[int, int]],
    outputs: OutputMap,
) -> float:
    """Root-mean-square error of the circuit's m-bit integer answers.

    `cases` lists (input, desired_answer) pairs; the m output wires are read
    as an m-bit integer (output bit 0 least significant).
    """
    if len(cases) == 0:
        raise ValueError("rms_error needs at least one case")
    trace = evaluate(circuit)
    m = len(outputs)
    total = 0.0
    for inp, answer in cases:
        if not 0 <= inp < trace.case_count:
            raise ValueError(f"case input {inp} outside 0..2^n-1")
        if not 0 <= answer < (1 << m):
            raise ValueError(f"case answer {answer} needs more than {m} bits")
        value = 0
        for j, w in enumerate(outputs.wire_of_output):
            value |= ((trace.wire_rows[w] >> inp) & 1) << j
        total += (value - answer) ** 2
    return math.sqrt(total / len(cases))

"""Reversible circuit representation and exact evaluation.

A circuit is an ordered list of CCNOT (Toffoli) gates on a fixed bus of N
wires.  Each gate flips its target wire exactly when both control wires
carry 1; since every gate is its own inverse, any circuit denotes a
permutation of the 2^N bus states.

Evaluation is bit-parallel: each wire is represented by a packed bit-vector
holding that wire's value on every fitness case simultaneously, so one pass
through the gate list evaluates the circuit on all 2^n input combinations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Gate",
    "Circuit",
    "TruthTableTrace",
    "BusPermutation",
    "enumerate_gates",
    "random_circuit",
    "parse_circuit",
    "parse_circuits",
    "format_circuit",
    "wire_patterns",
]

# to_permutation materializes 2^N states; past this the table would not fit.
PERMUTATION_WIRE_LIMIT = 24


@dataclass(frozen=True, order=True)
class Gate:
    """One CCNOT placement: flip `target` iff both controls carry 1.

    Controls are unordered and may share a wire (the gate then degrades to a
    CNOT).  The target must differ from both controls: writing a wire that
    is also read would not be a bijection on bus states.  Instances are kept
    in canonical form (control_a <= control_b) so equal gates compare equal.
    """

    target: int
    control_a: int
    control_b: int

    def __init__(self, target: int, control_a: int, control_b: int):
        if control_a > control_b:
            control_a, control_b = control_b, control_a
        if target == control_a or target == control_b:
            raise ValueError(
                f"gate target {target} may not share a wire with its controls "
                f"({control_a}, {control_b})"
            )
        if min(target, control_a) < 0:
            raise ValueError("wire indices must be non-negative")
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "control_a", control_a)
        object.__setattr__(self, "control_b", control_b)

    def max_wire(self) -> int:
        return max(self.target, self.control_b)

    def apply_to_state(self, state: int) -> int:
        """Apply the gate to a single bus state (integer, wire 0 = LSB)."""
        if (state >> self.control_a) & 1 and (state >> self.control_b) & 1:
            return state ^ (1 << self.target)
        return state

    def __repr__(self) -> str:
        return f"Gate(target={self.target}, controls=({self.control_a}, {self.control_b}))"


@dataclass(frozen=True)
class Circuit:
    """An ordered CCNOT gate sequence over a fixed wire count.

    `n_inputs` wires (0 .. n-1) carry the fitness-case input bits; the
    remaining wires are fed the constant `constant_fill`.  `m_outputs` only
    declares how many output bits a target comparison will read; it does not
    constrain the gates.  The empty circuit is the identity permutation.
    """

    wires: int
    gates: tuple[Gate, ...]
    n_inputs: int
    m_outputs: int = 1
    constant_fill: int = 1

    def __init__(
        self,
        wires: int,
        gates: Iterable[Gate] = (),
        n_inputs: int | None = None,
        m_outputs: int = 1,
        constant_fill: int = 1,
    ):
        gates = tuple(gates)
        if n_inputs is None:
            n_inputs = wires
        if wires < 1:
            raise ValueError("a circuit needs at least one wire")
        if not 0 <= n_inputs <= wires:
            raise ValueError(f"n_inputs {n_inputs} must lie in 0..wires ({wires})")
        if not 0 <= m_outputs <= wires:
            raise ValueError(f"m_outputs {m_outputs} must lie in 0..wires ({wires})")
        if constant_fill not in (0, 1):
            raise ValueError("constant_fill must be 0 or 1")
        for g in gates:
            if g.max_wire() >= wires:
                raise ValueError(f"{g} references a wire >= wire count {wires}")
        object.__setattr__(self, "wires", wires)
        object.__setattr__(self, "gates", gates)
        object.__setattr__(self, "n_inputs", n_inputs)
        object.__setattr__(self, "m_outputs", m_outputs)
        object.__setattr__(self, "constant_fill", constant_fill)

    def __len__(self) -> int:
        return len(self.gates)

    def replace_gate(self, index: int, gate: Gate) -> "Circuit":
        gates = list(self.gates)
        gates[index] = gate
        return Circuit(self.wires, gates, self.n_inputs, self.m_outputs, self.constant_fill)

    def concat(self, other: "Circuit") -> "Circuit":
        if other.wires != self.wires:
            raise ValueError("cannot concatenate circuits with different wire counts")
        return Circuit(
            self.wires,
            self.gates + other.gates,
            self.n_inputs,
            self.m_outputs,
            self.constant_fill,
        )

    def reversed(self) -> "Circuit":
        """Gates in reverse order: the inverse circuit (CCNOT is self-inverse)."""
        return Circuit(
            self.wires,
            self.gates[::-1],
            self.n_inputs,
            self.m_outputs,
            self.constant_fill,
        )


@dataclass
class TruthTableTrace:
    """Per-wire bit-vectors over the 2^n fitness cases.

    Bit t of `wire_rows[w]` is the value wire w carries on fitness case t.
    Rows are Python integers so any n works; for n <= 6 a row fits one
    machine word (the batch engine in `sampling` exploits that).
    """

    wire_rows: list[int]
    case_count: int

    def row(self, wire: int) -> int:
        return self.wire_rows[wire]

    def row_bits(self, wire: int) -> np.ndarray:
        r = self.wire_rows[wire]
        return np.array([(r >> t) & 1 for t in range(self.case_count)], dtype=np.uint8)


@dataclass(frozen=True)
class BusPermutation:
    """The permutation of 2^N bus states a circuit denotes."""

    mapping: np.ndarray  # mapping[s] = image of state s

    def __post_init__(self):
        m = np.asarray(self.mapping, dtype=np.int64)
        object.__setattr__(self, "mapping", m)
        assert m.ndim == 1

    @property
    def size(self) -> int:
        return len(self.mapping)

    def is_bijection(self) -> bool:
        return bool(np.array_equal(np.sort(self.mapping), np.arange(self.size)))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.mapping, np.arange(self.size)))

    def compose(self, then: "BusPermutation") -> "BusPermutation":
        """The permutation 'apply self, then apply `then`'."""
        if then.size != self.size:
            raise ValueError("permutation sizes differ")
        return BusPermutation(then.mapping[self.mapping])

    def __eq__(self, other) -> bool:
        return isinstance(other, BusPermutation) and np.array_equal(
            self.mapping, other.mapping
        )


def enumerate_gates(wires: int) -> list[Gate]:
    """All distinct canonical CCNOT gates on `wires` wires.

    Count is wires * ((wires-1)(wires-2)/2 + (wires-1)): for each target,
    unordered control pairs (shared wire allowed) drawn from the rest.
    """
    if wires < 3:
        raise ValueError(f"no legal CCNOT exists on {wires} wires (need >= 3)")
    gates = []
    for target in range(wires):
        others = [w for w in range(wires) if w != target]
        for i, a in enumerate(others):
            for b in others[i:]:
                gates.append(Gate(target, a, b))
    return gates


_GATE_ARRAY_CACHE: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def gate_arrays(wires: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(targets, controls_a, controls_b) of enumerate_gates as uint8 arrays."""
    if wires not in _GATE_ARRAY_CACHE:
        gates = enumerate_gates(wires)
        tg = np.array([g.target for g in gates], dtype=np.uint8)
        ca = np.array([g.control_a for g in gates], dtype=np.uint8)
        cb = np.array([g.control_b for g in gates], dtype=np.uint8)
        _GATE_ARRAY_CACHE[wires] = (tg, ca, cb)
    return _GATE_ARRAY_CACHE[wires]


def wire_patterns(wires: int, n_inputs: int, constant_fill: int = 1) -> list[int]:
    """Initial trace rows: input wire w enumerates bit w of the case index,
    non-input wires are constant."""
    if n_inputs > wires:
        raise ValueError(f"{n_inputs} inputs will not fit on {wires} wires")
    if constant_fill not in (0, 1):
        raise ValueError("constant_fill must be 0 or 1")
    cases = 1 << n_inputs
    full = (1 << cases) - 1
    rows = []
    for w in range(wires):
        if w < n_inputs:
            rows.append(sum(1 << t for t in range(cases) if (t >> w) & 1))
        else:
            rows.append(full if constant_fill else 0)
    return rows


def evaluate(circuit: Circuit) -> TruthTableTrace:
    """Run the circuit bit-parallel over all 2^n fitness cases.

    Each gate update is row_target ^= row_control_a & row_control_b applied
    to whole bit-vectors, so one pass covers every case at once.
    """
    rows = wire_patterns(circuit.wires, circuit.n_inputs, circuit.constant_fill)
    for g in circuit.gates:
        rows[g.target] ^= rows[g.control_a] & rows[g.control_b]
    return TruthTableTrace(rows, 1 << circuit.n_inputs)


def to_permutation(circuit: Circuit) -> BusPermutation:
    """The exact permutation of full bus states (wire 0 = LSB of the state).

    Evaluates all 2^N states in one vectorized pass per gate.
    """
    if circuit.wires > PERMUTATION_WIRE_LIMIT:
        raise ValueError(
            f"wires={circuit.wires} exceeds the 2^N state-table guard "
            f"({PERMUTATION_WIRE_LIMIT})"
        )
    states = np.arange(1 << circuit.wires, dtype=np.int64)
    for g in circuit.gates:
        both = ((states >> g.control_a) & (states >> g.control_b)) & 1
        states = states ^ (both << g.target)
    return BusPermutation(states)


def random_circuit(
    wires: int,
    length: int,
    rng: np.random.Generator,
    n_inputs: int | None = None,
    m_outputs: int = 1,
    constant_fill: int = 1,
) -> Circuit:
    """A circuit of `length` gates drawn independently and uniformly from
    enumerate_gates(wires)."""
    if length < 0:
        raise ValueError("length must be >= 0")
    gates = enumerate_gates(wires)
    idx = rng.integers(0, len(gates), size=length)
    return Circuit(wires, [gates[i] for i in idx], n_inputs, m_outputs, constant_fill)


# Circuit text format, one circuit per line:
#   N:<wires> n:<inputs> fill:<0|1> ; T(a,b)>t T(a,b)>t ...
_HEADER_RE = re.compile(r"N:(\d+)\s+n:(\d+)\s+fill:([01])\s*(?:;|$)")
_GATE_RE = re.compile(r"T\((\d+),(\d+)\)>(\d+)")


def format_circuit(circuit: Circuit) -> str:
    head = f"N:{circuit.wires} n:{circuit.n_inputs} fill:{circuit.constant_fill} ;"
    body = " ".join(
        f"T({g.control_a},{g.control_b})>{g.target}" for g in circuit.gates
    )
    return f"{head} {body}".rstrip()


def parse_circuit(line: str, line_number: int = 1) -> Circuit:
    """Parse one circuit line; errors carry line/column positions.

    The format does not record output arity; parsed circuits default to
    m_outputs=1 (callers reading wider outputs set it explicitly).
    """
    m = _HEADER_RE.match(line.strip())
    if not m:
        raise ValueError(
            f"line {line_number}: expected header 'N:<wires> n:<inputs> fill:<0|1> ;'"
        )
    wires, n_inputs, fill = int(m.group(1)), int(m.group(2)), int(m.group(3))
    rest = line.strip()[m.end():]
    gates = []
    pos = 0
    for token in rest.split():
        col = line.find(token, pos) + 1
        pos = line.find(token, pos) + len(token)
        gm = _GATE_RE.fullmatch(token)
        if not gm:
            raise ValueError(
                f"line {line_number}, column {col}: bad gate token {token!r}, "
                f"expected 'T(a,b)>t'"
            )
        a, b, t = int(gm.group(1)), int(gm.group(2)), int(gm.group(3))
        try:
            gate = Gate(t, a, b)
        except ValueError as e:
            raise ValueError(f"line {line_number}, column {col}: {e}") from None
        if gate.max_wire() >= wires:
            raise ValueError(
                f"line {line_number}, column {col}: gate {token} references a wire "
                f">= wire count {wires}"
            )
        gates.append(gate)
    try:
        return Circuit(wires, gates, n_inputs, 1, fill)
    except ValueError as e:
        raise ValueError(f"line {line_number}: {e}") from None


def parse_circuits(text: str) -> list[Circuit]:
    """Parse a multi-line circuit file; blank lines and #-comments skipped."""
    out = []
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        out.append(parse_circuit(line, i))
    return out

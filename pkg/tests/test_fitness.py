"""Targets, Hamming fitness (bit-parallel vs case-by-case), RMS error."""

import math

import numpy as np
import pytest

from revcirc.core import Circuit, Gate, random_circuit
from revcirc.fitness import (
    DEFAULT_OUTPUT,
    FitnessValue,
    OutputMap,
    TargetTable,
    best_wire_fitness,
    hamming_fitness,
    hamming_fitness_scalar,
    parity_of_reachable_fitness,
    rms_error,
    six_multiplexor_target,
)


def reference_mux(t):
    """Independently coded six-multiplexor: explicit address decode."""
    d0, d1, d2, d3 = (t >> 0) & 1, (t >> 1) & 1, (t >> 2) & 1, (t >> 3) & 1
    a0, a1 = (t >> 4) & 1, (t >> 5) & 1
    if a1 == 0 and a0 == 0:
        return d0
    if a1 == 0 and a0 == 1:
        return d1
    if a1 == 1 and a0 == 0:
        return d2
    return d3


def test_six_multiplexor_truth_table():
    target = six_multiplexor_target()
    assert (target.n_inputs, target.m_outputs) == (6, 1)
    assert target.case_count == 64 and target.max_fitness == 64
    for t in range(64):
        assert target.answer(t) == reference_mux(t)
    assert bin(target.rows[0]).count("1") == 32


def test_empty_circuit_fitness_is_forty():
    # Wire 0 of the identity circuit carries D0; count agreements directly.
    expected = sum((t & 1) == reference_mux(t) for t in range(64))
    assert expected == 40
    fv = hamming_fitness(Circuit(6), six_multiplexor_target())
    assert fv.raw == expected
    assert not fv.solved
    assert fv.normalized == pytest.approx(40 / 64)


def test_complement_target_identity():
    """A wire matches the complement target on exactly the cases it misses
    the target, so the two fitness values always sum to the case count."""
    target = six_multiplexor_target()
    complement = TargetTable(6, 1, ((1 << 64) - 1 ^ target.rows[0],))
    rng = np.random.default_rng(21)
    for _ in range(100):
        w = int(rng.integers(6, 10))
        c = random_circuit(w, int(rng.integers(0, 20)), rng, n_inputs=6)
        f = hamming_fitness(c, target).raw
        g = hamming_fitness(c, complement).raw
        assert f + g == 64


def test_scalar_oracle_matches_bit_parallel():
    target = six_multiplexor_target()
    rng = np.random.default_rng(22)
    for _ in range(150):
        w = int(rng.integers(6, 13))
        c = random_circuit(w, int(rng.integers(0, 30)), rng, n_inputs=6)
        out = OutputMap((int(rng.integers(0, w)),))
        fast = hamming_fitness(c, target, out)
        slow = hamming_fitness_scalar(c, target, out)
        assert fast.raw == slow.raw


def test_scalar_oracle_multi_output():
    rng = np.random.default_rng(23)
    # Small 3-input, 2-output target exercises multi-bit answers.
    target = TargetTable.from_function(3, 2, lambda t: (t * 5 + 1) % 4)
    for _ in range(60):
        c = random_circuit(5, int(rng.integers(0, 12)), rng, n_inputs=3)
        out = OutputMap((0, 2))
        assert hamming_fitness(c, target, out).raw == \
            hamming_fitness_scalar(c, target, out).raw


def test_best_wire_is_max_over_wires():
    target = six_multiplexor_target()
    rng = np.random.default_rng(24)
    for _ in range(80):
        w = int(rng.integers(6, 13))
        c = random_circuit(w, int(rng.integers(0, 25)), rng, n_inputs=6)
        fv, wire = best_wire_fitness(c, target)
        per_wire = [hamming_fitness(c, target, OutputMap((k,))).raw for k in range(w)]
        assert fv.raw == max(per_wire)
        assert per_wire[wire] == fv.raw


def test_output_map_validation():
    with pytest.raises(ValueError):
        OutputMap((1, 1))
    with pytest.raises(ValueError):
        OutputMap((-1,))
    assert len(DEFAULT_OUTPUT) == 1


def test_fitness_checks_compatibility():
    target = six_multiplexor_target()
    with pytest.raises(ValueError):
        hamming_fitness(Circuit(6, n_inputs=5), target)  # wrong input count
    with pytest.raises(ValueError):
        hamming_fitness(Circuit(6), target, OutputMap((6,)))  # wire off bus
    with pytest.raises(ValueError):
        hamming_fitness(Circuit(6), target, OutputMap((0, 1)))  # arity mismatch


def test_parity_of_reachable_fitness():
    assert parity_of_reachable_fitness(6) == "even-only"
    assert parity_of_reachable_fitness(7) == "all"
    assert parity_of_reachable_fitness(12) == "all"


def test_no_spare_fitness_is_always_even():
    target = six_multiplexor_target()
    rng = np.random.default_rng(25)
    for _ in range(300):
        c = random_circuit(6, int(rng.integers(0, 40)), rng)
        w = int(rng.integers(0, 6))
        assert hamming_fitness(c, target, OutputMap((w,))).raw % 2 == 0


def test_one_spare_frees_odd_values():
    # Odd values appear only once circuits are deep enough for the output's
    # algebraic normal form to reach full degree; by length 60 they are
    # common (roughly 45% of draws).
    target = six_multiplexor_target()
    rng = np.random.default_rng(26)
    odd = sum(
        hamming_fitness(random_circuit(7, 60, rng, n_inputs=6), target).raw % 2
        for _ in range(60)
    )
    assert odd >= 10


def test_rms_error_definition():
    """rms^2 * cases equals the summed squared integer error."""
    out = OutputMap((1, 3))
    rng = np.random.default_rng(27)
    for _ in range(40):
        c = random_circuit(4, int(rng.integers(0, 10)), rng, n_inputs=3)
        cases = [(t, (7 * t + 2) % 4) for t in range(8)]
        rms = rms_error(c, cases, out)
        total = 0.0
        for t, answer in cases:
            state = t | (c.constant_fill << 3)
            for g in c.gates:
                state = g.apply_to_state(state)
            got = ((state >> 1) & 1) | (((state >> 3) & 1) << 1)
            total += (got - answer) ** 2
        assert rms == pytest.approx(math.sqrt(total / 8))


def test_rms_error_validation():
    out = OutputMap((0, 1))
    with pytest.raises(ValueError):
        rms_error(Circuit(3), [], out)
    with pytest.raises(ValueError):
        rms_error(Circuit(3), [(9, 0)], out)  # input outside case range
    with pytest.raises(ValueError):
        rms_error(Circuit(3), [(0, 4)], out)  # answer needs 3 bits
    assert rms_error(Circuit(3), [(0, 0)], OutputMap((0,))) == 0.0


def test_target_table_text_round_trip():
    target = six_multiplexor_target()
    again = TargetTable.from_text(target.to_text())
    assert again == target
    small = TargetTable.from_function(3, 2, lambda t: t % 4)
    assert TargetTable.from_text(small.to_text()) == small


def test_target_table_text_validation():
    with pytest.raises(ValueError):
        TargetTable.from_text("not a header\n")
    with pytest.raises(ValueError):
        TargetTable.from_text("2 1\n0\n1\n")  # 4 case lines needed
    with pytest.raises(ValueError):
        TargetTable.from_text("2 1\n0\n1\nx\n0\n")
    with pytest.raises(ValueError):
        TargetTable.from_text("2 2\n00\n01\n1\n11\n")  # short bit row


def test_fitness_value_properties():
    fv = FitnessValue(64, 64)
    assert fv.solved and fv.normalized == 1.0
    assert not FitnessValue(0, 64).solved

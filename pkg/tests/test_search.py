"""Mutation, neighborhoods, hill climbing, the GA, and effort measures."""

import math

import numpy as np
import pytest

from revcirc.core import Circuit, Gate, random_circuit
from revcirc.fitness import (
    OutputMap,
    hamming_fitness,
    hamming_fitness_scalar,
    six_multiplexor_target,
)
from revcirc.search import (
    GAConfig,
    RunRecord,
    coupon_collector_expected,
    evolve,
    hill_climb,
    koza_effort,
    mutate,
    neighborhood_size,
)

TARGET = six_multiplexor_target()


def gate_slots(g):
    return (g.target, g.control_a, g.control_b)


def test_mutation_changes_exactly_one_slot_and_stays_legal():
    rng = np.random.default_rng(41)
    for _ in range(2000):
        w = int(rng.integers(3, 13))
        c = random_circuit(w, int(rng.integers(1, 15)), rng)
        m = mutate(c, rng)
        assert m.wires == c.wires and len(m) == len(c)
        diffs = [i for i in range(len(c)) if c.gates[i] != m.gates[i]]
        assert len(diffs) == 1
        g = m.gates[diffs[0]]
        assert 0 <= g.target < w and g.target not in (g.control_a, g.control_b)
        assert g.control_a <= g.control_b
    with pytest.raises(ValueError):
        mutate(Circuit(6), rng)  # nothing to mutate


def test_mutation_never_returns_the_same_circuit():
    rng = np.random.default_rng(42)
    for _ in range(3000):
        c = random_circuit(int(rng.integers(3, 8)), int(rng.integers(1, 6)), rng)
        assert mutate(c, rng) != c


def ordered_triple_neighbourhood(circuit):
    """Brute force: all (gate index, ordered slot triple) pairs reachable by
    rewriting exactly one slot to a different legal wire."""
    seen = set()
    for i, g in enumerate(circuit.gates):
        t, a, b = g.target, g.control_a, g.control_b
        for nt in range(circuit.wires):
            if nt not in (t, a, b):
                seen.add((i, (nt, a, b)))
        for na in range(circuit.wires):
            if na not in (a, t):
                seen.add((i, (t, na, b)))
        for nb in range(circuit.wires):
            if nb not in (b, t):
                seen.add((i, (t, a, nb)))
    return len(seen)


def test_neighborhood_size_reference_values():
    # 20 gates on 12 wires: 29 rewrites per distinct-control gate, 30 per
    # shared-control gate.
    distinct = Circuit(12, [Gate(0, 1, 2)] * 20)
    shared = Circuit(12, [Gate(0, 1, 1)] * 20)
    assert neighborhood_size(distinct) == 580
    assert neighborhood_size(shared) == 600
    assert neighborhood_size(Circuit(6, [Gate(0, 1, 2)] * 5)) == 55


def test_neighborhood_size_matches_brute_force():
    rng = np.random.default_rng(43)
    for wires in (6, 12):
        for _ in range(100):
            c = random_circuit(wires, int(rng.integers(1, 8)), rng)
            assert neighborhood_size(c) == ordered_triple_neighbourhood(c)


def test_neighborhood_of_empty_circuit_is_empty():
    assert neighborhood_size(Circuit(6)) == 0


def test_hill_climb_is_deterministic_and_bounded():
    rng1 = np.random.default_rng(44)
    start1 = random_circuit(6, 5, rng1)
    rec1 = hill_climb(start1, 400, rng1, target=TARGET)
    rng2 = np.random.default_rng(44)
    start2 = random_circuit(6, 5, rng2)
    rec2 = hill_climb(start2, 400, rng2, target=TARGET)
    assert rec1.best_fitness_per_generation == rec2.best_fitness_per_generation
    assert rec1.evaluations <= 400
    best = rec1.best_fitness_per_generation
    assert all(b2 >= b1 for b1, b2 in zip(best, best[1:]))
    assert rec1.first_hit_evaluations[best[-1]] <= rec1.evaluations


def test_hill_climb_rejects_worse_mutants():
    rng = np.random.default_rng(45)
    for _ in range(10):
        start = random_circuit(6, 5, rng)
        rec = hill_climb(start, 300, rng, target=TARGET)
        traj = rec.best_fitness_per_generation
        assert traj[-1] == max(traj)


def test_neutral_drift_beats_strict_acceptance():
    """Strict better-only acceptance strands runs on the first plateau;
    accepting equal-fitness mutants keeps them moving.  The margin is large
    at 6 wires x 5 gates, so 25 paired runs are plenty."""
    neutral_total = strict_total = 0
    for r in range(25):
        rng = np.random.default_rng(np.random.SeedSequence([46, r]))
        start = random_circuit(6, 5, rng)
        rec = hill_climb(start, 1500, rng, target=TARGET, accept_equal=True)
        neutral_total += rec.best_fitness_per_generation[-1]
        rng = np.random.default_rng(np.random.SeedSequence([46, r]))
        start = random_circuit(6, 5, rng)
        rec = hill_climb(start, 1500, rng, target=TARGET, accept_equal=False)
        strict_total += rec.best_fitness_per_generation[-1]
    assert neutral_total > strict_total + 25  # > +1 fitness per run on average


def test_hill_climb_best_wire_scoring():
    rng = np.random.default_rng(47)
    start = random_circuit(6, 5, rng)
    rec = hill_climb(start, 500, rng, target=TARGET, scoring="best")
    assert 0 <= rec.best_fitness_per_generation[-1] <= 64


def test_hill_climb_validates_budget():
    rng = np.random.default_rng(48)
    start = random_circuit(6, 5, rng)
    with pytest.raises(ValueError):
        hill_climb(start, 0, rng, target=TARGET)


def test_hill_climb_rejects_input_width_mismatch():
    # A 12-wire start circuit defaults to 12 input wires; scoring it
    # against a 6-input table would compare incompatible case counts.
    rng = np.random.default_rng(49)
    start = random_circuit(12, 20, rng)
    with pytest.raises(ValueError, match="6 inputs"):
        hill_climb(start, 100, rng, target=TARGET)


def test_ga_is_deterministic():
    cfg = GAConfig(wires=6, length=5, target=TARGET, seed=77, population=40,
                   tournament=5, generations=12)
    a, b = evolve(cfg), evolve(cfg)
    assert a.best_fitness_per_generation == b.best_fitness_per_generation
    assert a.mean_fitness_per_generation == b.mean_fitness_per_generation
    assert a.evaluations == b.evaluations == 40 * len(a.best_fitness_per_generation)


def test_ga_records_are_consistent():
    cfg = GAConfig(wires=7, length=8, target=TARGET, seed=78, population=30,
                   tournament=4, generations=10)
    rec = evolve(cfg)
    assert len(rec.best_fitness_per_generation) <= 11
    for best, mean in zip(rec.best_fitness_per_generation,
                          rec.mean_fitness_per_generation):
        assert mean <= best <= 64
    assert not rec.solved or rec.solution is not None


def test_ga_solution_is_independently_verified():
    # Best-wire scoring on a wide bus solves quickly; re-check the returned
    # circuit case by case.
    cfg = GAConfig(wires=12, length=20, target=TARGET, seed=403, scoring="best")
    rec = evolve(cfg)
    assert rec.solved
    check = hamming_fitness_scalar(
        rec.solution, TARGET, OutputMap((rec.solution_output_wire,))
    )
    assert check.solved
    assert rec.solution.n_inputs == 6


def test_ga_config_validation():
    with pytest.raises(ValueError):
        GAConfig(wires=6, length=0, target=TARGET, seed=1)
    with pytest.raises(ValueError):
        GAConfig(wires=6, length=5, target=TARGET, seed=1, population=0)
    with pytest.raises(ValueError):
        GAConfig(wires=6, length=5, target=TARGET, seed=1, tournament=0)


def make_record(solve_gen, total_gens=50):
    best = [40] * (total_gens + 1)
    if solve_gen is not None:
        for g in range(solve_gen, total_gens + 1):
            best[g] = 64
        best = best[: solve_gen + 1]
    return RunRecord(best_fitness_per_generation=best,
                     solved=solve_gen is not None,
                     evaluations=0)


def test_koza_effort_textbook_example():
    # Half the runs solved by generation 9 with population 500:
    # R = ceil(ln(0.01)/ln(0.5)) = 7, so effort = 500 * 10 * 7 = 35000.
    runs = [make_record(9) for _ in range(5)] + [make_record(None) for _ in range(5)]
    assert koza_effort(runs, population=500) == 35_000


def test_koza_effort_all_solved_immediately():
    runs = [make_record(0) for _ in range(10)]
    assert koza_effort(runs, population=500) == 500


def test_koza_effort_requires_a_success():
    with pytest.raises(ValueError):
        koza_effort([make_record(None)], population=500)
    with pytest.raises(ValueError):
        koza_effort([], population=500)


def test_koza_effort_minimizes_over_generations():
    # One run solves at 1, the rest at 30: evaluating at i=1 gives
    # P=0.1 -> R=44 -> 500*2*44 = 44000; at i=30 P=1 -> 500*31 = 15500.
    runs = [make_record(1)] + [make_record(30) for _ in range(9)]
    assert koza_effort(runs, population=500) == 15_500


def test_coupon_collector_expected():
    assert coupon_collector_expected(1) == 1.0
    assert math.ceil(coupon_collector_expected(600)) == 4185
    with pytest.raises(ValueError):
        coupon_collector_expected(0)


def test_solve_generation_helper():
    rec = make_record(3)
    assert rec.solve_generation(64) == 3
    assert make_record(None).solve_generation(64) is None

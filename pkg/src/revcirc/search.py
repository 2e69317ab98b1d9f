"""Single-wire mutation, hill climbing, and the generational GA.

The mutation operator changes exactly one wire of one gate.  The hill
climber samples one mutant per step; by default it also accepts mutants of
equal fitness (neutral drift).  Measured on the six-multiplexor at 6 wires
x 5 gates, strict better-only acceptance strands almost every run at the
first strict local optimum (modally fitness 40, ~1% of runs reaching 56),
while neutral drift reproduces the characteristic plateau at 56; the
`accept_equal` flag selects between the two.

The GA is generational and non-elitist: each child is a once-mutated copy
of a tournament winner, with per-tournament uniform tie-breaking (breaking
ties with a single per-individual key instead measurably slows neutral
exploration of fitness plateaus).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .core import (
    Circuit,
    Gate,
    enumerate_gates,
    random_circuit,
    wire_patterns,
)
from .fitness import (
    DEFAULT_OUTPUT,
    OutputMap,
    TargetTable,
    hamming_fitness,
    six_multiplexor_target,
)

__all__ = [
    "MutationOp",
    "GAConfig",
    "RunRecord",
    "mutate",
    "neighborhood_size",
    "hill_climb",
    "evolve",
    "koza_effort",
    "coupon_collector_expected",
]

WireScoring = OutputMap | Literal["best"]


def _slot_alternatives(gate: Gate, slot: int, wires: int) -> list[int]:
    """Legal replacement wires for one slot of a gate.

    Slot 0 is the target (must avoid both controls and its current value);
    slots 1 and 2 are the controls (must avoid the target and their own
    current value; matching the other control is allowed).
    """
    t, a, b = gate.target, gate.control_a, gate.control_b
    if slot == 0:
        banned = {t, a, b}
    elif slot == 1:
        banned = {a, t}
    else:
        banned = {b, t}
    return [w for w in range(wires) if w not in banned]


def _apply_slot(gate: Gate, slot: int, wire: int) -> Gate:
    if slot == 0:
        return Gate(wire, gate.control_a, gate.control_b)
    if slot == 1:
        return Gate(gate.target, wire, gate.control_b)
    return Gate(gate.target, gate.control_a, wire)


@dataclass(frozen=True)
class MutationOp:
    """Stateless single-wire mutation: uniformly pick a gate, one of its
    three wire slots, and a legal different wire for that slot."""

    def __call__(self, circuit: Circuit, rng: np.random.Generator) -> Circuit:
        return mutate(circuit, rng)


def mutate(circuit: Circuit, rng: np.random.Generator) -> Circuit:
    """One uniform single-wire mutation; never returns the input circuit."""
    if len(circuit) < 1:
        raise ValueError("cannot mutate an empty circuit")
    gi = int(rng.integers(0, len(circuit)))
    gate = circuit.gates[gi]
    slots = [0, 1, 2]
    while slots:
        slot = slots[int(rng.integers(0, len(slots)))] if len(slots) < 3 else int(rng.integers(0, 3))
        alts = _slot_alternatives(gate, slot, circuit.wires)
        if alts:
            new_wire = alts[int(rng.integers(0, len(alts)))]
            return circuit.replace_gate(gi, _apply_slot(gate, slot, new_wire))
        slots.remove(slot)
    raise ValueError("gate has no legal single-wire mutants")


def neighborhood_size(circuit: Circuit) -> int:
    """Number of single-mutation neighbours, summed per gate and per slot.

    Per gate with distinct controls: (wires-3) target choices plus
    2*(wires-2) control choices; with equal controls the target gains one
    more choice.  Control slots are counted separately even though for an
    equal-controls gate the two slots generate the same set of circuits, so
    this matches neighbour accounting at the genome level (e.g. 580 vs 600
    for 20 gates on 12 wires).
    """
    w = circuit.wires
    total = 0
    for g in circuit.gates:
        t_alts = w - 3 if g.control_a != g.control_b else w - 2
        total += t_alts + 2 * (w - 2)
    return total


@dataclass
class RunRecord:
    """Trajectory and outcome of one search run."""

    best_fitness_per_generation: list[int]
    solved: bool
    evaluations: int
    solution: Circuit | None = None
    solution_output_wire: int | None = None
    mean_fitness_per_generation: list[float] | None = None
    first_hit_evaluations: dict[int, int] = field(default_factory=dict)

    def solve_generation(self, max_fitness: int) -> int | None:
        """Index of the first generation whose best fitness is perfect."""
        for i, b in enumerate(self.best_fitness_per_generation):
            if b == max_fitness:
                return i
        return None


class _FitnessEngine:
    """Shared scoring for hill climbing and the GA.

    Holds the target row(s) as machine words when the case count fits one
    (n <= 6), falling back to Python-int rows otherwise.  Scoring is either
    a fixed OutputMap or 'best' (the best single wire per circuit).
    """

    def __init__(
        self,
        wires: int,
        n_inputs: int,
        constant_fill: int,
        target: TargetTable,
        scoring: WireScoring,
    ):
        self.wires = wires
        self.n_inputs = n_inputs
        self.constant_fill = constant_fill
        self.target = target
        self.scoring = scoring
        self.cases = target.case_count
        self.max_fitness = target.max_fitness
        if n_inputs != target.n_inputs:
            raise ValueError(
                f"circuit feeds {n_inputs} input wires but the target table "
                f"has {target.n_inputs} inputs"
            )
        if scoring != "best" and len(scoring) != target.m_outputs:
            raise ValueError("output map arity does not match target")
        if scoring == "best" and target.m_outputs != 1:
            raise ValueError("'best' scoring applies to single-output targets")
        self._machine_word = self.cases <= 64
        pats = wire_patterns(wires, n_inputs, constant_fill)
        if self._machine_word:
            self._init_rows = np.array(pats, dtype=np.uint64)
            self._target_rows = np.array(
                [np.uint64(r) for r in target.rows], dtype=np.uint64
            )

    def score_population(self, genomes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Fitness of every genome; genomes is (pop, length, 3) slot arrays.

        Returns (fitness, best_wire) where best_wire is -1 under fixed
        scoring.
        """
        pop, length, _ = genomes.shape
        if self._machine_word:
            rows = np.broadcast_to(self._init_rows, (pop, self.wires)).copy()
            ar = np.arange(pop)
            for j in range(length):
                rows[ar, genomes[:, j, 0]] ^= (
                    rows[ar, genomes[:, j, 1]] & rows[ar, genomes[:, j, 2]]
                )
            if self.scoring == "best":
                fits_all = self.cases - np.bitwise_count(
                    rows ^ self._target_rows[0]
                ).astype(np.int64)
                return fits_all.max(axis=1), fits_all.argmax(axis=1)
            raw = np.zeros(pop, dtype=np.int64)
            for j, w in enumerate(self.scoring.wire_of_output):
                raw += self.cases - np.bitwise_count(
                    rows[:, w] ^ self._target_rows[j]
                ).astype(np.int64)
            return raw, np.full(pop, -1, dtype=np.int64)
        fits = np.empty(pop, dtype=np.int64)
        wires_out = np.empty(pop, dtype=np.int64)
        for i in range(pop):
            fits[i], wires_out[i] = self.score_genome(genomes[i])
        return fits, wires_out

    def score_genome(self, genome: np.ndarray) -> tuple[int, int]:
        rows = wire_patterns(self.wires, self.n_inputs, self.constant_fill)
        for t, a, b in genome:
            rows[t] ^= rows[a] & rows[b]
        if self.scoring == "best":
            fits = [
                self.cases - (rows[w] ^ self.target.rows[0]).bit_count()
                for w in range(self.wires)
            ]
            best = int(np.argmax(fits))
            return fits[best], best
        raw = sum(
            self.cases - (rows[w] ^ self.target.rows[j]).bit_count()
            for j, w in enumerate(self.scoring.wire_of_output)
        )
        return raw, -1

    def genome_to_circuit(self, genome: np.ndarray) -> Circuit:
        gates = [Gate(int(t), int(a), int(b)) for t, a, b in genome]
        return Circuit(
            self.wires, gates, self.n_inputs, self.target.m_outputs, self.constant_fill
        )

    @staticmethod
    def circuit_to_genome(circuit: Circuit) -> np.ndarray:
        return np.array(
            [[g.target, g.control_a, g.control_b] for g in circuit.gates],
            dtype=np.int64,
        )


def _mutate_genome_inplace(
    genome: np.ndarray, wires: int, rng: np.random.Generator
) -> None:
    """Vectorless twin of `mutate` acting on one (length, 3) slot array."""
    gi = int(rng.integers(0, genome.shape[0]))
    t, a, b = (int(x) for x in genome[gi])
    slots = [0, 1, 2]
    while slots:
        slot = slots[int(rng.integers(0, len(slots)))] if len(slots) < 3 else int(rng.integers(0, 3))
        if slot == 0:
            banned = {t, a, b}
        elif slot == 1:
            banned = {a, t}
        else:
            banned = {b, t}
        alts = [w for w in range(wires) if w not in banned]
        if alts:
            genome[gi, slot] = alts[int(rng.integers(0, len(alts)))]
            return
        slots.remove(slot)
    raise ValueError("gate has no legal single-wire mutants")


def hill_climb(
    start: Circuit,
    budget: int,
    rng: np.random.Generator,
    target: TargetTable | None = None,
    scoring: WireScoring = DEFAULT_OUTPUT,
    accept_equal: bool = True,
) -> RunRecord:
    """Mutate one wire of one gate per step, keeping the mutant when its
    fitness improves (or matches, when `accept_equal`).

    Stops at perfect fitness or after `budget` fitness evaluations
    (the initial evaluation counts).  The trajectory records the current
    fitness after every evaluation; `first_hit_evaluations` maps each
    fitness level to the evaluation that first reached it.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if target is None:
        target = six_multiplexor_target()
    engine = _FitnessEngine(
        start.wires, start.n_inputs, start.constant_fill, target, scoring
    )
    genome = engine.circuit_to_genome(start)
    if genome.shape[0] == 0:
        raise ValueError("hill climbing needs at least one gate")
    fit, wire = engine.score_genome(genome)
    evaluations = 1
    trajectory = [fit]
    first_hit = {fit: 1}
    while evaluations < budget and fit < engine.max_fitness:
        gi_backup = genome.copy()
        _mutate_genome_inplace(genome, start.wires, rng)
        cand_fit, cand_wire = engine.score_genome(genome)
        evaluations += 1
        if cand_fit > fit or (accept_equal and cand_fit == fit):
            fit, wire = cand_fit, cand_wire
            if fit not in first_hit:
                first_hit[fit] = evaluations
        else:
            genome = gi_backup
        trajectory.append(fit)
    solved = fit == engine.max_fitness
    return RunRecord(
        best_fitness_per_generation=trajectory,
        solved=solved,
        evaluations=evaluations,
        solution=engine.genome_to_circuit(genome) if solved else None,
        solution_output_wire=(wire if solved and wire >= 0 else None),
        first_hit_evaluations=first_hit,
    )


@dataclass(frozen=True)
class GAConfig:
    """Generational GA parameters: non-elitist, tournament selection with
    replacement, every child mutated exactly once."""

    wires: int
    length: int
    target: TargetTable
    seed: int
    population: int = 500
    tournament: int = 7
    generations: int = 500
    scoring: WireScoring = DEFAULT_OUTPUT
    n_inputs: int | None = None
    constant_fill: int = 1

    def __post_init__(self):
        if self.population < 1 or self.tournament < 1 or self.generations < 0:
            raise ValueError("population and tournament must be >= 1, generations >= 0")
        if self.length < 1:
            raise ValueError("genome length must be >= 1")


def evolve(config: GAConfig) -> RunRecord:
    """Run the GA: generation 0 is uniformly random circuits of fixed
    length; each next generation draws, for every slot, a tournament of
    `tournament` uniformly (with replacement) and mutates the winner once.
    Ties are broken uniformly per tournament.  Non-elitist; stops at the
    first generation containing a perfect circuit or after `generations`.
    """
    rng = np.random.default_rng(config.seed)
    n_inputs = config.target.n_inputs if config.n_inputs is None else config.n_inputs
    engine = _FitnessEngine(
        config.wires, n_inputs, config.constant_fill, config.target, config.scoring
    )
    gates = enumerate_gates(config.wires)
    gate_slots = np.array(
        [[g.target, g.control_a, g.control_b] for g in gates], dtype=np.int64
    )
    pop, length = config.population, config.length
    genomes = gate_slots[rng.integers(0, len(gates), size=(pop, length))]
    fits, wires_out = engine.score_population(genomes)
    best_per_gen = [int(fits.max())]
    mean_per_gen = [float(fits.mean())]
    evaluations = pop
    generation = 0
    while fits.max() < engine.max_fitness and generation < config.generations:
        entries = rng.integers(0, pop, size=(pop, config.tournament))
        keys = fits[entries] + rng.random((pop, config.tournament))
        winners = entries[np.arange(pop), np.argmax(keys, axis=1)]
        genomes = genomes[winners].copy()
        for i in range(pop):
            _mutate_genome_inplace(genomes[i], config.wires, rng)
        fits, wires_out = engine.score_population(genomes)
        evaluations += pop
        best_per_gen.append(int(fits.max()))
        mean_per_gen.append(float(fits.mean()))
        generation += 1
    solved = bool(fits.max() == engine.max_fitness)
    solution = solution_wire = None
    if solved:
        idx = int(np.argmax(fits))
        solution = engine.genome_to_circuit(genomes[idx])
        w = int(wires_out[idx])
        solution_wire = w if w >= 0 else None
    return RunRecord(
        best_fitness_per_generation=best_per_gen,
        solved=solved,
        evaluations=evaluations,
        solution=solution,
        solution_output_wire=solution_wire,
        mean_fitness_per_generation=mean_per_gen,
    )


def koza_effort(
    runs: Sequence[RunRecord], population: int, z: float = 0.99
) -> int:
    """Minimum individuals processed for probability `z` of one success.

    I(M, i, z) = M * (i+1) * R(i) minimized over generations i, where
    P(M, i) is the fraction of runs whose best fitness was perfect by
    generation i and R(i) = ceil(ln(1-z) / ln(1-P(M,i))) independent runs
    (1 when P = 1).
    """
    if not runs:
        raise ValueError("koza_effort needs at least one run")
    max_fit = max(max(r.best_fitness_per_generation) for r in runs)
    solve_gens = []
    any_solved = False
    for r in runs:
        g = r.solve_generation(max_fit) if r.solved else None
        solve_gens.append(g)
        any_solved = any_solved or (g is not None)
    if not any_solved:
        raise ValueError("koza_effort is undefined when no run solved")
    horizon = max(len(r.best_fitness_per_generation) for r in runs)
    best = None
    for i in range(horizon):
        p = sum(1 for g in solve_gens if g is not None and g <= i) / len(runs)
        if p == 0:
            continue
        r_needed = 1 if p >= 1 else math.ceil(math.log(1 - z) / math.log(1 - p))
        effort = population * (i + 1) * max(1, r_needed)
        if best is None or effort < best:
            best = effort
    assert best is not None
    return best


def coupon_collector_expected(k: int) -> float:
    """Expected uniform draws to see all k items at least once: k * H_k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return k * sum(1.0 / i for i in range(1, k + 1))

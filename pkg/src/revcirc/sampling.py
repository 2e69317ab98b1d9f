"""Large-scale random-circuit experiments.

The throughput core: sample millions of random circuits per length,
evaluate them bit-parallel (one 64-bit word covers all cases when n <= 6),
and accumulate fitness histograms.  A numba kernel supplies the fast path
(millions of circuits/second/core); a pure-numpy fallback computes
bit-identical results.  Sampling is chunked, and every chunk's generator is
seeded from (seed, length, chunk index), so histograms are reproducible
bit-for-bit regardless of worker count and runs can resume mid-stream.

Also here: exhaustive enumeration of all short circuits (minimality scans).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy import stats

from .core import gate_arrays, wire_patterns
from .fitness import DEFAULT_OUTPUT, OutputMap, TargetTable
from .theory import LimitModel, total_variation_distance

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

__all__ = [
    "ExperimentConfig",
    "FitnessHistogram",
    "ConvergenceSeries",
    "sample_distribution",
    "sample_fitness_histogram",
    "convergence_series",
    "solution_density",
    "poisson_interval",
    "exhaustive_min_scan",
]

CHUNK_SIZE = 1 << 15
ENUMERATION_GUARD = 10**8


@dataclass(frozen=True)
class ExperimentConfig:
    """One sampling experiment: histogram per length."""

    wires: int
    lengths: tuple[int, ...]
    samples_per_length: int
    target: TargetTable
    outputs: OutputMap = DEFAULT_OUTPUT
    seed: int = 0
    workers: int = 1
    constant_fill: int = 1
    backend: str = "auto"  # auto | numba | numpy

    def __post_init__(self):
        lengths = tuple(int(x) for x in self.lengths)
        object.__setattr__(self, "lengths", lengths)
        if not lengths:
            raise ValueError("lengths must be non-empty")
        if any(b <= a for a, b in zip(lengths, lengths[1:])):
            raise ValueError("lengths must be strictly increasing")
        if any(x < 0 for x in lengths):
            raise ValueError("lengths must be non-negative")
        if self.samples_per_length < 1:
            raise ValueError("samples_per_length must be >= 1")
        if self.target.n_inputs > self.wires:
            raise ValueError("target has more input bits than wires")
        if self.backend not in ("auto", "numba", "numpy"):
            raise ValueError(f"unknown backend {self.backend!r}")


@dataclass
class FitnessHistogram:
    """Counts of sampled circuits per raw fitness value at one length."""

    length: int
    counts: np.ndarray
    total: int

    def distribution(self) -> np.ndarray:
        return self.counts / self.total

    def mean(self) -> float:
        f = np.arange(len(self.counts))
        return float((f * self.counts).sum() / self.total)

    def sd(self) -> float:
        f = np.arange(len(self.counts))
        mu = self.mean()
        return float(math.sqrt(((f - mu) ** 2 * self.counts).sum() / self.total))

    def solutions(self) -> int:
        return int(self.counts[-1])


@dataclass
class ConvergenceSeries:
    """Per-length summary against a limit model."""

    rows: list[tuple[int, float, float, float, int, int]]
    # (length, mean, sd, tvd_to_limit, solution_count, total)

    def tvds(self) -> list[float]:
        return [r[3] for r in self.rows]


if _HAVE_NUMBA:
    _M1 = np.uint64(0x5555555555555555)
    _M2 = np.uint64(0x3333333333333333)
    _M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
    _H01 = np.uint64(0x0101010101010101)
    _U1, _U2, _U4 = np.uint64(1), np.uint64(2), np.uint64(4)
    _S56 = np.uint64(56)

    @njit(cache=True, inline="always")
    def _popcount64(x):
        x = x - ((x >> _U1) & _M1)
        x = (x & _M2) + ((x >> _U2) & _M2)
        x = (x + (x >> _U4)) & _M4
        return (x * _H01) >> _S56

    @njit(cache=True)
    def _sample_chunk_numba(
        gate_idx, tg, ca, cb, init_rows, out_wires, target_rows, cases, counts
    ):
        batch, length = gate_idx.shape
        n_wires = init_rows.shape[0]
        n_out = out_wires.shape[0]
        rows = np.empty(n_wires, np.uint64)
        for s in range(batch):
            for w in range(n_wires):
                rows[w] = init_rows[w]
            for j in range(length):
                g = gate_idx[s, j]
                rows[tg[g]] ^= rows[ca[g]] & rows[cb[g]]
            fit = 0
            for k in range(n_out):
                fit += cases - np.int64(
                    _popcount64(rows[out_wires[k]] ^ target_rows[k])
                )
            counts[fit] += 1

    @njit(cache=True)
    def _minscan_numba(tg, ca, cb, init_rows, target_row, max_len, prune, counts):
        n_wires = init_rows.shape[0]
        n_gates = tg.shape[0]
        rows = np.empty((max_len + 1, n_wires), np.uint64)
        for w in range(n_wires):
            rows[0, w] = init_rows[w]
        idx = np.zeros(max_len + 1, np.int64)
        depth = 1
        idx[1] = 0
        while depth >= 1:
            g = idx[depth]
            if g >= n_gates:
                depth -= 1
                if depth >= 1:
                    idx[depth] += 1
                continue
            if prune and depth >= 2 and idx[depth - 1] == g:
                idx[depth] += 1
                continue
            for w in range(n_wires):
                rows[depth, w] = rows[depth - 1, w]
            rows[depth, tg[g]] ^= rows[depth, ca[g]] & rows[depth, cb[g]]
            for w in range(n_wires):
                if rows[depth, w] == target_row:
                    counts[depth] += 1
            if depth < max_len:
                depth += 1
                idx[depth] = 0
            else:
                idx[depth] += 1


def _sample_chunk_numpy(
    gate_idx, tg, ca, cb, init_rows, out_wires, target_rows, cases, counts
):
    batch, length = gate_idx.shape
    rows = np.broadcast_to(init_rows, (batch, init_rows.shape[0])).copy()
    ar = np.arange(batch)
    targets = tg[gate_idx].astype(np.int64)
    controls_a = ca[gate_idx].astype(np.int64)
    controls_b = cb[gate_idx].astype(np.int64)
    for j in range(length):
        rows[ar, targets[:, j]] ^= (
            rows[ar, controls_a[:, j]] & rows[ar, controls_b[:, j]]
        )
    fit = np.zeros(batch, dtype=np.int64)
    for k, w in enumerate(out_wires):
        fit += cases - np.bitwise_count(rows[:, w] ^ target_rows[k]).astype(np.int64)
    np.add.at(counts, fit, 1)


def _resolve_backend(backend: str) -> str:
    if backend == "auto":
        return "numba" if _HAVE_NUMBA else "numpy"
    if backend == "numba" and not _HAVE_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    return backend


def sample_fitness_histogram(
    wires: int,
    length: int,
    samples: int,
    seed: int,
    target: TargetTable,
    outputs: OutputMap = DEFAULT_OUTPUT,
    constant_fill: int = 1,
    backend: str = "auto",
    chunk_size: int = CHUNK_SIZE,
    first_chunk: int = 0,
    stop_chunk: int | None = None,
    initial_counts: np.ndarray | None = None,
) -> FitnessHistogram:
    """Histogram of Hamming fitness over `samples` uniform random circuits.

    Chunk c draws its gates from a generator seeded by (seed, length, c),
    so any partition of chunks across workers — or a resumed run starting at
    `first_chunk` with `initial_counts` — produces identical totals.
    """
    if target.case_count > 64:
        raise ValueError("sampling engine packs cases into one word (n <= 6)")
    be = _resolve_backend(backend)
    tg, ca, cb = gate_arrays(wires)
    init_rows = np.array(
        wire_patterns(wires, target.n_inputs, constant_fill), dtype=np.uint64
    )
    out_wires = np.array(outputs.wire_of_output, dtype=np.int64)
    if (out_wires >= wires).any():
        raise ValueError("output wire outside the bus")
    target_rows = np.array([np.uint64(r) for r in target.rows], dtype=np.uint64)
    counts = np.zeros(target.max_fitness + 1, dtype=np.int64)
    if initial_counts is not None:
        counts += np.asarray(initial_counts, dtype=np.int64)
    cases = target.case_count
    kernel = _sample_chunk_numba if be == "numba" else _sample_chunk_numpy
    n_chunks = (samples + chunk_size - 1) // chunk_size
    last_chunk = n_chunks if stop_chunk is None else min(stop_chunk, n_chunks)
    added = 0
    for c in range(first_chunk, last_chunk):
        batch = min(chunk_size, samples - c * chunk_size)
        rng = np.random.default_rng(np.random.SeedSequence([seed, length, c]))
        gate_idx = rng.integers(0, len(tg), size=(batch, length), dtype=np.uint16)
        kernel(gate_idx, tg, ca, cb, init_rows, out_wires, target_rows, cases, counts)
        added += batch
    prior = 0 if initial_counts is None else int(np.asarray(initial_counts).sum())
    assert counts.sum() == prior + added
    return FitnessHistogram(length, counts, int(counts.sum()))


def _histogram_slice(args) -> np.ndarray:
    """Worker entry point: counts for one contiguous chunk range."""
    (wires, length, samples, seed, target, outputs, fill, backend, first, stop) = args
    hist = sample_fitness_histogram(
        wires, length, samples, seed, target, outputs, fill, backend,
        first_chunk=first, stop_chunk=stop,
    )
    return hist.counts


def sample_distribution(
    config: ExperimentConfig,
    checkpoint_path: str | Path | None = None,
    checkpoint_every: int = 10**6,
) -> list[FitnessHistogram]:
    """One histogram per configured length.

    With `checkpoint_path`, progress is streamed to disk roughly every
    `checkpoint_every` samples and an interrupted run resumes exactly where
    it stopped (chunk-seeded generators make the resumed histogram
    bit-identical to an uninterrupted one).

    With `workers > 1` (and no checkpoint), each length's chunks are split
    into contiguous ranges scored in parallel processes; because every chunk
    seeds its own generator, the merged histogram is identical to a serial
    run.
    """
    if config.workers > 1 and checkpoint_path is None:
        return _sample_distribution_parallel(config)
    done: dict[int, np.ndarray] = {}
    cursor_length_idx, cursor_chunk, partial = 0, 0, None
    if checkpoint_path is not None:
        checkpoint_path = Path(checkpoint_path)
        if checkpoint_path.exists():
            state = json.loads(checkpoint_path.read_text())
            if state["config_key"] == _config_key(config):
                for k, v in state["done"].items():
                    done[int(k)] = np.array(v, dtype=np.int64)
                cursor_length_idx = state["length_idx"]
                cursor_chunk = state["chunk"]
                if state["partial"] is not None:
                    partial = np.array(state["partial"], dtype=np.int64)

    results: list[FitnessHistogram] = []
    chunks_per_checkpoint = max(1, checkpoint_every // CHUNK_SIZE)
    for li, length in enumerate(config.lengths):
        if length in done:
            counts = done[length]
            results.append(FitnessHistogram(length, counts, int(counts.sum())))
            continue
        start_chunk = cursor_chunk if li == cursor_length_idx else 0
        start_counts = partial if li == cursor_length_idx else None
        if checkpoint_path is None:
            hist = sample_fitness_histogram(
                config.wires, length, config.samples_per_length, config.seed,
                config.target, config.outputs, config.constant_fill, config.backend,
            )
        else:
            counts = (
                np.zeros(config.target.max_fitness + 1, dtype=np.int64)
                if start_counts is None
                else start_counts.copy()
            )
            n_chunks = (config.samples_per_length + CHUNK_SIZE - 1) // CHUNK_SIZE
            c = start_chunk
            while c < n_chunks:
                stop = min(n_chunks, c + chunks_per_checkpoint)
                sampled_after = min(config.samples_per_length, stop * CHUNK_SIZE)
                hist = sample_fitness_histogram(
                    config.wires, length, sampled_after, config.seed,
                    config.target, config.outputs, config.constant_fill,
                    config.backend, first_chunk=c, initial_counts=counts,
                )
                counts = hist.counts
                c = stop
                _write_checkpoint(
                    checkpoint_path, config, done, li, c,
                    None if c >= n_chunks else counts,
                )
            hist = FitnessHistogram(length, counts, int(counts.sum()))
        done[length] = hist.counts
        if checkpoint_path is not None:
            _write_checkpoint(checkpoint_path, config, done, li + 1, 0, None)
        results.append(hist)
    return results


def _sample_distribution_parallel(config: ExperimentConfig) -> list[FitnessHistogram]:
    from concurrent.futures import ProcessPoolExecutor

    results = []
    with ProcessPoolExecutor(max_workers=config.workers) as pool:
        for length in config.lengths:
            n_chunks = (config.samples_per_length + CHUNK_SIZE - 1) // CHUNK_SIZE
            w = min(config.workers, n_chunks)
            bounds = [round(i * n_chunks / w) for i in range(w + 1)]
            jobs = [
                (
                    config.wires, length, config.samples_per_length, config.seed,
                    config.target, config.outputs, config.constant_fill,
                    config.backend, bounds[i], bounds[i + 1],
                )
                for i in range(w)
            ]
            counts = sum(pool.map(_histogram_slice, jobs))
            results.append(FitnessHistogram(length, counts, int(counts.sum())))
    return results


def _config_key(config: ExperimentConfig) -> str:
    return (
        f"w{config.wires}|L{','.join(map(str, config.lengths))}"
        f"|s{config.samples_per_length}|seed{config.seed}"
        f"|out{','.join(map(str, config.outputs.wire_of_output))}"
        f"|fill{config.constant_fill}"
    )


def _write_checkpoint(path, config, done, length_idx, chunk, partial):
    state = {
        "config_key": _config_key(config),
        "done": {str(k): v.tolist() for k, v in done.items()},
        "length_idx": length_idx,
        "chunk": chunk,
        "partial": None if partial is None else partial.tolist(),
    }
    tmp = Path(str(path) + ".tmp")
    tmp.write_text(json.dumps(state))
    tmp.replace(path)


def convergence_series(
    histograms: Sequence[FitnessHistogram], limit: LimitModel
) -> ConvergenceSeries:
    """Per-length mean, sd, TVD to the limit pmf, and solution count."""
    if limit.pmf is None:
        raise ValueError("limit model has no materialized pmf")
    rows = []
    for h in histograms:
        if len(h.counts) != len(limit.pmf):
            raise ValueError(
                f"histogram support ({len(h.counts)}) does not match limit pmf "
                f"({len(limit.pmf)})"
            )
        tvd = total_variation_distance(h.distribution(), limit.pmf)
        rows.append((h.length, h.mean(), h.sd(), tvd, h.solutions(), h.total))
    return ConvergenceSeries(rows)


def poisson_interval(count: int, confidence: float = 0.95) -> tuple[float, float]:
    """Exact (Garwood) confidence interval for a Poisson count."""
    alpha = 1 - confidence
    lo = 0.0 if count == 0 else stats.chi2.ppf(alpha / 2, 2 * count) / 2
    hi = stats.chi2.ppf(1 - alpha / 2, 2 * count + 2) / 2
    return lo, hi


def solution_density(
    config: ExperimentConfig,
) -> list[tuple[int, int, float, float, float]]:
    """Per-length perfect-fitness counts with exact Poisson 95% intervals
    on the rate.  Returns (length, count, rate, rate_lo, rate_hi) rows."""
    if config.target.m_outputs != 1:
        raise ValueError("solution density is defined for single-output targets")
    out = []
    for hist in sample_distribution(config):
        k = hist.solutions()
        lo, hi = poisson_interval(k)
        n = hist.total
        out.append((hist.length, k, k / n, lo / n, hi / n))
    return out


def _minscan_python(tg, ca, cb, init_rows, target_row, max_len, prune, counts):
    n_wires = len(init_rows)
    n_gates = len(tg)
    rows = [list(init_rows)] + [[0] * n_wires for _ in range(max_len)]
    idx = [0] * (max_len + 1)
    depth = 1
    while depth >= 1:
        g = idx[depth]
        if g >= n_gates:
            depth -= 1
            if depth >= 1:
                idx[depth] += 1
            continue
        if prune and depth >= 2 and idx[depth - 1] == g:
            idx[depth] += 1
            continue
        rows[depth][:] = rows[depth - 1]
        rows[depth][tg[g]] ^= rows[depth][ca[g]] & rows[depth][cb[g]]
        for w in range(n_wires):
            if rows[depth][w] == target_row:
                counts[depth] += 1
        if depth < max_len:
            depth += 1
            idx[depth] = 0
        else:
            idx[depth] += 1


def exhaustive_min_scan(
    wires: int,
    max_length: int,
    target: TargetTable,
    constant_fill: int = 1,
    prune: bool = True,
    backend: str = "auto",
) -> dict[int, int]:
    """Exact solution counts for every circuit of length 1..max_length.

    Every gate sequence is enumerated depth-first (sharing prefixes) and
    every wire is tried as the output, so the result is the number of
    (circuit, output wire) pairs reproducing the target exactly; a circuit
    can match on at most one wire, so this equals the solving-circuit count.

    With `prune`, sequences containing an adjacent identical gate pair are
    skipped: such a pair cancels (the gate is self-inverse), so the circuit
    computes the same function as one two gates shorter.  Pruned counts omit
    those reducible circuits; when no shorter solutions exist the counts are
    unchanged, which is the minimality-scan use case.
    """
    if target.m_outputs != 1:
        raise ValueError("minimality scan compares single-output targets")
    if max_length < 1:
        raise ValueError("max_length must be >= 1")
    if target.case_count > 64:
        raise ValueError("scan packs cases into one word (n <= 6)")
    tg, ca, cb = gate_arrays(wires)
    if len(tg) ** max_length > ENUMERATION_GUARD:
        raise ValueError(
            f"{len(tg)}^{max_length} sequences exceed the enumeration guard "
            f"({ENUMERATION_GUARD:.0e})"
        )
    init_rows = np.array(
        wire_patterns(wires, target.n_inputs, constant_fill), dtype=np.uint64
    )
    target_row = np.uint64(target.rows[0])
    counts = np.zeros(max_length + 1, dtype=np.int64)
    be = _resolve_backend(backend)
    if be == "numba":
        _minscan_numba(tg, ca, cb, init_rows, target_row, max_length, prune, counts)
    else:
        py_counts = [0] * (max_length + 1)
        _minscan_python(
            [int(x) for x in tg], [int(x) for x in ca], [int(x) for x in cb],
            [int(x) for x in init_rows], int(target_row), max_length, prune, py_counts,
        )
        counts = np.array(py_counts, dtype=np.int64)
    return {length: int(counts[length]) for length in range(1, max_length + 1)}

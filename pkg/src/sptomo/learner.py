"""Agnostic tomography of stabilizer product states.

The learner repeatedly collects a handful of Bell difference samples, looks
for size-k cliques of locally commuting samples, takes the local span of each
clique, and measures every stabilizer product group extending a span that is
large enough. The most frequent basis outcome over all measured groups wins.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .pauli import (
    LocalSpan,
    PauliOp,
    StabilizerProductGroup,
    StabilizerProductState,
    extensions,
    local_span,
)
from .sampler import COPIES_PER_DRAW, BellSampler
from .states import QuantumState, basis_probabilities

__all__ = [
    "DEFAULT_M_EST_CAP",
    "AlgorithmParams",
    "SampleGraph",
    "RunReport",
    "BasisMeasurer",
    "binary_entropy",
    "derive_params",
    "clique_iter",
    "candidate_groups",
    "mode_estimate",
    "run",
]

DEFAULT_M_EST_CAP = 10**7
OVERRIDABLE = ("m_outer", "k", "m_clique", "t", "m_est")

# guards ceil() against formulas that are integers up to rounding
_CEIL_SLACK = 1e-9

Measurer = Callable[[StabilizerProductGroup, int, np.random.Generator], np.ndarray]


def _ceil(value: float) -> int:
    return math.ceil(value - _CEIL_SLACK)


def binary_entropy(p: float) -> float:
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


@dataclass(frozen=True)
class AlgorithmParams:
    n: int
    epsilon: float
    tau: float
    p: float
    delta: float
    m_outer: int
    k: int
    m_clique: int
    t: float
    m_est: int
    overrides: Mapping[str, float] = field(default_factory=dict)
    m_est_capped: bool = False

    def to_dict(self) -> dict:
        out = asdict(self)
        out["overrides"] = dict(self.overrides)
        return out


def derive_params(
    n: int,
    epsilon: float,
    tau: float,
    p: float = 2 / 3,
    delta: float = 0.1,
    overrides: Mapping[str, float] | None = None,
    m_est_cap: int = DEFAULT_M_EST_CAP,
) -> AlgorithmParams:
    """Compute the sample and iteration counts of the learner.

    Derived integers are rounded up. Any of ``m_outer``, ``k``, ``m_clique``,
    ``t``, ``m_est`` may be overridden; the remaining ones are then computed
    from the overridden values. When the computed ``m_est`` exceeds
    ``m_est_cap`` it is clamped and a warning is issued.

    Raises:
        ValueError: for out-of-range inputs or unknown override keys.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0 < epsilon <= tau < 1:
        raise ValueError(f"need 0 < epsilon <= tau < 1, got epsilon={epsilon}, tau={tau}")
    if not 0.5 < p < 1:
        raise ValueError(f"need 1/2 < p < 1, got p={p}")
    if not 0 < delta < 1:
        raise ValueError(f"need 0 < delta < 1, got delta={delta}")
    overrides = dict(overrides or {})
    unknown = set(overrides) - set(OVERRIDABLE)
    if unknown:
        raise ValueError(f"unknown override(s): {sorted(unknown)}")
    for key, value in overrides.items():
        if value < 0 or (key != "t" and (value < 1 or value != int(value))):
            raise ValueError(f"invalid override {key}={value}")

    m_outer = int(overrides.get("m_outer", _ceil(math.log(delta / 2) / math.log(3 / 4))))
    k = int(overrides.get("k", _ceil(math.log(1 / (2 * n)) / math.log(p))))
    m_clique = int(overrides.get("m_clique", _ceil((k + 1) / tau**4)))
    if m_clique < k:
        raise ValueError(f"m_clique={m_clique} is smaller than k={k}")
    t = float(overrides.get("t", 4 * math.log2(1 / tau) / (1 - binary_entropy(p))))

    capped = False
    if "m_est" in overrides:
        m_est = int(overrides["m_est"])
    else:
        log_arg = (
            math.log(4 * m_outer) + _log_binom(m_clique, k) + t * math.log(3) - math.log(delta)
        )
        raw = 8 * log_arg / epsilon**2
        if raw > m_est_cap:
            warnings.warn(
                f"m_est={raw:.3g} exceeds the cap {m_est_cap}; clamping",
                RuntimeWarning,
                stacklevel=2,
            )
            m_est, capped = m_est_cap, True
        else:
            m_est = _ceil(raw)
    return AlgorithmParams(
        n=n,
        epsilon=epsilon,
        tau=tau,
        p=p,
        delta=delta,
        m_outer=m_outer,
        k=k,
        m_clique=m_clique,
        t=t,
        m_est=m_est,
        overrides=overrides,
        m_est_capped=capped,
    )


@dataclass(eq=False)
class SampleGraph:
    """Samples as vertices (duplicates kept), edges between local commuters.

    ``adjacency[i]`` is a bit mask of the neighbours of vertex ``i``.
    """

    vertices: list[PauliOp] = field(default_factory=list)
    adjacency: list[int] = field(default_factory=list)

    def add(self, op: PauliOp) -> int:
        new = len(self.vertices)
        mask = 0
        for j, other in enumerate(self.vertices):
            if not ((op.x & other.z) ^ (op.z & other.x)):
                mask |= 1 << j
                self.adjacency[j] |= 1 << new
        self.vertices.append(op)
        self.adjacency.append(mask)
        return new

    @classmethod
    def from_samples(cls, samples: Sequence[PauliOp]) -> "SampleGraph":
        graph = cls()
        for op in samples:
            graph.add(op)
        return graph

    def __len__(self) -> int:
        return len(self.vertices)


def clique_iter(graph: SampleGraph, k: int) -> Iterator[tuple[int, ...]]:
    """Every k-clique as an increasing tuple of vertex indices, in lexicographic order."""
    if k < 1:
        raise ValueError("k must be positive")
    size = len(graph)
    adjacency = graph.adjacency

    def extend(members: list[int], candidates: int):
        need = k - len(members)
        if need == 0:
            yield tuple(members)
            return
        while candidates and candidates.bit_count() >= need:
            v = (candidates & -candidates).bit_length() - 1
            candidates &= candidates - 1
            members.append(v)
            yield from extend(members, candidates & adjacency[v])
            members.pop()

    yield from extend([], (1 << size) - 1)


@dataclass
class _Tally:
    cliques: int = 0
    passing: int = 0


def candidate_groups(
    samples: Sequence[PauliOp],
    params: AlgorithmParams,
    span_cache: dict | None = None,
    tally: _Tally | None = None,
) -> list[StabilizerProductGroup]:
    """Distinct groups one outer iteration would measure, in discovery order."""
    n = params.n
    graph = SampleGraph.from_samples(samples)
    span_cache = {} if span_cache is None else span_cache
    seen: dict[StabilizerProductGroup, None] = {}
    passing_spans: set[LocalSpan] = set()
    for clique in clique_iter(graph, params.k):
        if tally is not None:
            tally.cliques += 1
        key = frozenset(graph.vertices[i] for i in clique)
        span = span_cache.get(key)
        if span is None:
            span = span_cache[key] = local_span(key, n)
        if span.assigned_count < n - params.t:
            continue
        if tally is not None:
            tally.passing += 1
        if span in passing_spans:
            continue
        passing_spans.add(span)
        for group in extensions(span):
            seen.setdefault(group)
    return list(seen)


def mode_estimate(labels) -> tuple[int, float]:
    """Most frequent label and its frequency; ties go to the smallest label."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size == 0:
        raise ValueError("cannot take the mode of no outcomes")
    values, counts = np.unique(labels, return_counts=True)
    best = int(np.argmax(counts))
    return int(values[best]), float(counts[best] / labels.size)


class BasisMeasurer:
    """S-basis measurements on a simulated state, caching Born probabilities."""

    def __init__(self, rho: QuantumState):
        self.rho = rho
        self._probs: dict[StabilizerProductGroup, np.ndarray] = {}

    @property
    def n(self) -> int:
        return self.rho.n

    def probabilities(self, group: StabilizerProductGroup) -> np.ndarray:
        probs = self._probs.get(group)
        if probs is None:
            probs = self._probs[group] = basis_probabilities(self.rho, group)
        return probs

    def __call__(
        self, group: StabilizerProductGroup, shots: int, rng: np.random.Generator
    ) -> np.ndarray:
        return rng.multinomial(shots, self.probabilities(group))


@dataclass
class RunReport:
    output_state: StabilizerProductState
    estimated_fidelity: float
    copies_consumed: int
    cliques_examined: int
    spans_passing_dim_check: int
    distinct_groups_measured: int
    bell_draws: int
    measurement_shots: int
    params: AlgorithmParams
    seed: int | None = None
    wall_time: float = 0.0
    fallback: bool = False
    iteration_candidates: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "output": {
                "axes": self.output_state.axes,
                "signs": self.output_state.sign_bits,
            },
            "estimated_fidelity": self.estimated_fidelity,
            "counters": {
                "copies_consumed": self.copies_consumed,
                "bell_draws": self.bell_draws,
                "measurement_shots": self.measurement_shots,
                "cliques_examined": self.cliques_examined,
                "spans_passing_dim_check": self.spans_passing_dim_check,
                "distinct_groups_measured": self.distinct_groups_measured,
                "iteration_candidates": list(self.iteration_candidates),
            },
            "fallback": self.fallback,
            "params": self.params.to_dict(),
            "seed": self.seed,
            "meta": {"wall_time": self.wall_time},
        }


def run(
    sampler: BellSampler,
    measurer: Measurer,
    params: AlgorithmParams,
    rng: np.random.Generator | None = None,
    seed: int | None = None,
) -> RunReport:
    """Run the full learner and return the best stabilizer product state found.

    ``sampler`` and ``measurer`` must describe the same state. Each outer
    iteration uses its own child generator spawned from ``seed`` (or from
    ``rng``), so iterations are reproducible in isolation. A group is measured
    at most once per run with ``m_est`` fresh shots.

    If no span ever passes the dimension check, the all-Z group is measured so
    that a state is still returned; ``fallback`` is then set on the report.
    """
    if sampler.n != params.n:
        raise ValueError(f"sampler has {sampler.n} qubits, params expect {params.n}")
    start = time.perf_counter()
    if rng is None:
        rng = np.random.default_rng(seed)
    streams = rng.spawn(params.m_outer)

    modes: dict[StabilizerProductGroup, tuple[int, int]] = {}
    span_cache: dict = {}
    tally = _Tally()
    draws = shots = 0
    per_iteration = []
    for stream in streams:
        samples = sampler.draw_many(stream, params.m_clique)
        draws += len(samples)
        groups = candidate_groups(samples, params, span_cache, tally)
        per_iteration.append(len(groups))
        for group in groups:
            if group in modes:
                continue
            counts = measurer(group, params.m_est, stream)
            shots += params.m_est
            label = int(np.argmax(counts))
            modes[group] = (label, int(counts[label]))

    fallback = not modes
    if fallback:
        group = StabilizerProductGroup("Z" * params.n)
        counts = measurer(group, params.m_est, rng)
        shots += params.m_est
        label = int(np.argmax(counts))
        modes[group] = (label, int(counts[label]))

    # highest count, then axes lexicographic, then label
    best_group, (best_label, best_count) = min(
        modes.items(), key=lambda item: (-item[1][1], item[0].axes, item[1][0])
    )
    return RunReport(
        output_state=StabilizerProductState(best_group, best_label),
        estimated_fidelity=best_count / params.m_est,
        copies_consumed=COPIES_PER_DRAW * draws + shots,
        cliques_examined=tally.cliques,
        spans_passing_dim_check=tally.passing,
        distinct_groups_measured=len(modes),
        bell_draws=draws,
        measurement_shots=shots,
        params=params,
        seed=seed,
        wall_time=time.perf_counter() - start,
        fallback=fallback,
        iteration_candidates=per_iteration,
    )

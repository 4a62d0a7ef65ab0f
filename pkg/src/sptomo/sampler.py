"""Bell difference samples drawn from the exact q distribution of a state."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import PauliOp
from .states import QuantumState, WeylDistribution, bell_diff_distribution

__all__ = ["COPIES_PER_DRAW", "BellSampler", "build_sampler", "draw", "draw_many"]

# one Bell difference sample uses four copies of the state
COPIES_PER_DRAW = 4


@dataclass(frozen=True, eq=False)
class BellSampler:
    """Inverse-CDF sampler over the 4^n unsigned Paulis."""

    n: int
    cdf: np.ndarray = field(repr=False)
    distribution: WeylDistribution = field(repr=False)

    @classmethod
    def from_distribution(cls, dist: WeylDistribution) -> "BellSampler":
        total = dist.table.sum()
        if abs(total - 1) > 1e-9:
            raise ValueError(f"q table sums to {total}, not 1")
        cdf = np.cumsum(dist.table)
        cdf /= cdf[-1]
        cdf.setflags(write=False)
        return cls(dist.n, cdf, dist)

    def draw(self, rng: np.random.Generator) -> PauliOp:
        return draw(self, rng)

    def draw_many(self, rng: np.random.Generator, size: int) -> list[PauliOp]:
        return draw_many(self, rng, size)


def build_sampler(rho: QuantumState, cap: int | None = None) -> BellSampler:
    return BellSampler.from_distribution(bell_diff_distribution(rho, cap))


def _indices(sampler: BellSampler, u: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(sampler.cdf, u, side="right")
    return np.minimum(idx, sampler.cdf.shape[0] - 1)


def draw(sampler: BellSampler, rng: np.random.Generator) -> PauliOp:
    """One Bell difference sample; consumes one uniform variate from ``rng``."""
    (index,) = _indices(sampler, rng.random(1))
    return PauliOp.from_index(sampler.n, int(index))


def draw_many(sampler: BellSampler, rng: np.random.Generator, size: int) -> list[PauliOp]:
    """``size`` samples; identical to ``size`` successive :func:`draw` calls."""
    idx = _indices(sampler, rng.random(size))
    return [PauliOp.from_index(sampler.n, int(i)) for i in idx]
